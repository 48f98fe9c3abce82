"""Homomorphisms between sums of Witt groups as formal words.

An entry word is a composition chain of atoms F, V and scalar
multiplications by fixed Witt vectors over the base; a matrix of formal
sums of words defines a homomorphism  (+)_i W_{n_i} -> (+)_j W_{n'_j}
applied entrywise.  Words are kept unreduced; V lengthens toward the
target and a final restriction (dropping deepest components) aligns the
length, which is what makes identities like FV = p come out right.
"""

from __future__ import annotations

from ..errors import ShapeMismatch
from .vector import WittVector


class Word:
    """One composition chain; atoms apply right-to-left."""

    __slots__ = ("atoms",)

    def __init__(self, atoms=()):
        self.atoms = tuple(atoms)

    @staticmethod
    def identity():
        return Word(())

    @staticmethod
    def F(k=1):
        return Word((("F",),) * k)

    @staticmethod
    def V(k=1):
        return Word((("V",),) * k)

    @staticmethod
    def scalar(c):
        return Word((("scal", c),))

    def compose(self, other):
        """self after other."""
        return Word(self.atoms + other.atoms)

    def apply(self, x):
        for atom in reversed(self.atoms):
            if atom[0] == "F":
                x = x.frobenius_F()
            elif atom[0] == "V":
                x = x.verschiebung_V()
            else:
                c = atom[1]
                if c.n < x.n:
                    raise ShapeMismatch("scalar too short for current length")
                x = c.truncate(x.n) * x
        return x

    def render(self):
        if not self.atoms:
            return "id"
        out = []
        for a in self.atoms:
            out.append(a[0] if a[0] != "scal" else f"[{a[1].render()}]")
        return "*".join(out)

    def __repr__(self):
        return self.render()


class HomWord:
    """Matrix of formal sums of words; entries[(j, i)] maps summand i to j."""

    def __init__(self, p, src_lengths, tgt_lengths, entries):
        self.p = p
        self.src = tuple(src_lengths)
        self.tgt = tuple(tgt_lengths)
        self.entries = {k: list(v) for k, v in entries.items()}

    def apply(self, xs):
        xs = tuple(xs)
        if len(xs) != len(self.src) or any(x.n != n for x, n in zip(xs, self.src)):
            raise ShapeMismatch("argument shape does not match source lengths")
        ring = xs[0].ring
        out = []
        for j, ntgt in enumerate(self.tgt):
            acc = WittVector.zeros(self.p, ntgt, ring)
            for i, x in enumerate(xs):
                for word in self.entries.get((j, i), ()):
                    y = word.apply(x)
                    if y.n < ntgt:
                        raise ShapeMismatch(
                            f"word {word!r} reaches length {y.n} < target {ntgt}; add V atoms"
                        )
                    acc = acc + y.truncate(ntgt)
            out.append(acc)
        return tuple(out)

    def compose(self, other):
        """self after other; shapes must chain."""
        if self.src != other.tgt:
            raise ShapeMismatch("composition shape mismatch")
        entries = {}
        for (j, k), words in self.entries.items():
            for (k2, i), words2 in other.entries.items():
                if k2 != k:
                    continue
                bucket = entries.setdefault((j, i), [])
                for w1 in words:
                    for w2 in words2:
                        bucket.append(w1.compose(w2))
        return HomWord(self.p, other.src, self.tgt, entries)

    @staticmethod
    def single(p, n_src, n_tgt, words):
        return HomWord(p, (n_src,), (n_tgt,), {(0, 0): list(words)})

    def render(self):
        rows = []
        for j in range(len(self.tgt)):
            cells = []
            for i in range(len(self.src)):
                ws = self.entries.get((j, i), [])
                cells.append(" + ".join(w.render() for w in ws) if ws else "0")
            rows.append("[" + ", ".join(cells) + "]")
        return "; ".join(rows)

    def __repr__(self):
        return f"HomWord({self.src} -> {self.tgt}: {self.render()})"


def apply_hom_word(h, xs):
    return h.apply(xs)


def looks_injective(h, ring, rng, trials=40, sampler=None):
    """Nonzero random inputs map to nonzero outputs; a point-count probe,
    not a proof (used to validate configured embedding families)."""
    for _ in range(trials):
        xs = []
        for n in h.src:
            if sampler is not None:
                xs.append(sampler(n))
            else:
                xs.append(
                    WittVector(h.p, n, ring, tuple(ring.random(rng) for _ in range(n)))
                )
        if all(x.is_zero() for x in xs):
            continue
        ys = h.apply(xs)
        if all(y.is_zero() for y in ys):
            return False
    return True
