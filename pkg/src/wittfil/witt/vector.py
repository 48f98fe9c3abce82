"""Truncated Witt vectors over any adapted base ring.

Components are stored in display order: comps[0] is the leftmost,
weight-1 (additive) coordinate.  Subscript conventions used by the
filtration modules label comps[i] with j = n-1-i, so the membership
condition for level m reads  p^j * v(comps[i]) >= -m.

Frobenius is the componentwise p-th power (char p only), Verschiebung
prepends a zero and lengthens the vector, and the ghost map is available
over p-torsion-free rings as the testing backend.
"""

from __future__ import annotations

from ..errors import ShapeMismatch
from .rings import ring_of, require_char_p, require_torsion_free
from .structure import eval_plan, structure


class WittVector:
    __slots__ = ("p", "n", "ring", "comps")

    def __init__(self, p, n, ring, comps):
        self.p = p
        self.n = n
        self.ring = ring_of(ring)
        comps = tuple(comps)
        assert len(comps) == n
        self.comps = comps

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zeros(p, n, ring):
        ring = ring_of(ring)
        return WittVector(p, n, ring, (ring.zero,) * n)

    @staticmethod
    def teichmuller(p, n, ring, a):
        ring = ring_of(ring)
        comps = [ring.zero] * n
        comps[0] = a
        return WittVector(p, n, ring, comps)

    @staticmethod
    def from_components(p, ring, comps):
        return WittVector(p, len(tuple(comps)), ring, comps)

    def replace(self, i, value):
        comps = list(self.comps)
        comps[i] = value
        return WittVector(self.p, self.n, self.ring, comps)

    # -- ring structure ------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, WittVector):
            raise TypeError("Witt arithmetic needs two Witt vectors")
        if (self.p, self.n) != (other.p, other.n) or self.ring is not other.ring:
            raise ShapeMismatch("mismatched (p, n, ring) in Witt arithmetic")

    def _eval(self, which, values):
        st = structure(self.p, self.n)
        char_p = self.ring.characteristic == self.p
        plans = st.plan(which, char_p)
        return WittVector(
            self.p,
            self.n,
            self.ring,
            tuple(eval_plan(plans[k], values, self.ring) for k in range(self.n)),
        )

    def __add__(self, other):
        self._check(other)
        return self._eval("add", list(self.comps) + list(other.comps))

    def __neg__(self):
        return self._eval("neg", list(self.comps))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        return self._eval("mul", list(self.comps) + list(other.comps))

    def times_int(self, k):
        if k < 0:
            return (-self).times_int(-k)
        acc = WittVector.zeros(self.p, self.n, self.ring)
        b = self
        while k:
            if k & 1:
                acc = acc + b
            b = b + b
            k >>= 1
        return acc

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        if (self.p, self.n) != (other.p, other.n):
            return False
        return all(self.ring.eq(a, b) for a, b in zip(self.comps, other.comps))

    def is_zero(self):
        return all(self.ring.is_zero(c) for c in self.comps)

    def __bool__(self):
        return not self.is_zero()

    # -- semilinear structure ---------------------------------------------------

    def frobenius_F(self):
        require_char_p(self.ring, self.p)
        return WittVector(self.p, self.n, self.ring, tuple(self.ring.frobenius(c) for c in self.comps))

    def verschiebung_V(self):
        return WittVector(self.p, self.n + 1, self.ring, (self.ring.zero,) + self.comps)

    def truncate(self, n2):
        """Drop the deepest components (restriction W_n -> W_n2)."""
        if n2 > self.n:
            raise ShapeMismatch("truncation cannot lengthen")
        return WittVector(self.p, n2, self.ring, self.comps[:n2])

    def ghost(self):
        require_torsion_free(self.ring)
        out = []
        for k in range(self.n):
            acc = self.ring.zero
            for i in range(k + 1):
                t = self.comps[i]
                for _ in range(0):
                    pass
                term = _ring_pow(self.ring, t, self.p ** (k - i))
                term = self.ring.mul(self.ring.from_int(self.p ** i), term)
                acc = self.ring.add(acc, term)
            out.append(acc)
        return tuple(out)

    # -- rendering ------------------------------------------------------------

    def render(self, render_comp=None):
        rc = render_comp or (lambda c: c.render() if hasattr(c, "render") else str(c))
        return "W(" + "; ".join(rc(c) for c in self.comps) + ")"

    def __repr__(self):
        return self.render()


def _ring_pow(ring, a, e):
    r = None
    b = a
    while e:
        if e & 1:
            r = b if r is None else ring.mul(r, b)
        e >>= 1
        if e:
            b = ring.mul(b, b)
    return ring.one if r is None else r


def witt_add(x, y):
    return x + y


def witt_neg(x):
    return -x


def witt_mul(x, y):
    return x * y


def frobenius_F(x):
    return x.frobenius_F()


def verschiebung_V(x):
    return x.verschiebung_V()


def teichmuller(p, n, ring, a):
    return WittVector.teichmuller(p, n, ring, a)


def ghost(x):
    return x.ghost()
