"""Small finite fields, exactly.

A field is either a prime field F_p or an extension of an already-built
finite field by a monic irreducible polynomial (coefficients ascending).
Extensions of extensions are allowed, which is how residue fields of
higher-degree places F_q[x]/(h) are realised without computing any
isomorphism down to F_p[x].

Elements are immutable and hashable.  All arithmetic is by the book; the
fields used in practice are tiny (q <= 64), so no tables are needed.
"""

from __future__ import annotations

from ..errors import DivisionByZero, NotAPthPower


class FFElem:
    """Element of a FiniteField.  rep is an int (prime field) or a tuple of
    base-field elements of length deg(modulus) (extension field)."""

    __slots__ = ("field", "rep")

    def __init__(self, field, rep):
        self.field = field
        self.rep = rep

    def __add__(self, other):
        other = self.field.coerce(other)
        return self.field._add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return self.field._neg(self)

    def __sub__(self, other):
        return self + (-self.field.coerce(other))

    def __rsub__(self, other):
        return self.field.coerce(other) - self

    def __mul__(self, other):
        other = self.field.coerce(other)
        return self.field._mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k):
        return self.field._pow(self, k)

    def __eq__(self, other):
        if not isinstance(other, FFElem):
            try:
                other = self.field.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.field is other.field and self.rep == other.rep

    def __hash__(self):
        return hash((id(self.field), self.rep))

    def __bool__(self):
        return not self.field.is_zero(self)

    def is_zero(self):
        return self.field.is_zero(self)

    def inv(self):
        return self.field.inv(self)

    def __truediv__(self, other):
        other = self.field.coerce(other)
        return self * other.inv()

    def frobenius(self):
        return self ** self.field.p

    def pth_root(self):
        # x -> x^(q/p) inverts Frobenius on a field of order q.
        return self ** (self.field.order // self.field.p)

    def is_pth_power(self):
        return True  # finite fields are perfect

    def __repr__(self):
        return self.field.render(self)


class FiniteField:
    """F_p or a (possibly iterated) extension by a monic irreducible polynomial."""

    def __init__(self, p, modulus=None, base=None, gen_name="g"):
        self.p = p
        self.base = base
        self.gen_name = gen_name
        if modulus is None:
            self.deg = 1
            self.order = p
            self.modulus = None
        else:
            assert base is not None
            self.modulus = tuple(modulus)  # ascending, leading coeff must be one
            assert self.modulus[-1] == base.one()
            self.deg = len(modulus) - 1
            self.order = base.order ** self.deg
        self._zero = FFElem(self, 0 if base is None else (base.zero(),) * self.deg)
        self._one = FFElem(self, 1 % p if base is None else self._ext_one())

    def _ext_one(self):
        rep = [self.base.zero()] * self.deg
        rep[0] = self.base.one()
        return tuple(rep)

    # -- construction ------------------------------------------------------

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def gen(self):
        """Class of x in an extension field; 1 for a prime field."""
        if self.base is None:
            return self.one()
        rep = [self.base.zero()] * self.deg
        if self.deg == 1:
            # F[x]/(x - c): the generator is the root c
            return FFElem(self, (-self.modulus[0],))
        rep[1] = self.base.one()
        return FFElem(self, tuple(rep))

    def coerce(self, x):
        if isinstance(x, FFElem):
            if x.field is self:
                return x
            if self.base is not None:
                b = self.base.coerce(x)
                rep = [self.base.zero()] * self.deg
                rep[0] = b
                return FFElem(self, tuple(rep))
            raise ValueError(f"cannot coerce {x!r} into {self}")
        if isinstance(x, int):
            if self.base is None:
                return FFElem(self, x % self.p)
            rep = [self.base.zero()] * self.deg
            rep[0] = self.base.coerce(x)
            return FFElem(self, tuple(rep))
        raise TypeError(f"cannot coerce {type(x).__name__} into finite field")

    def from_coeffs(self, coeffs):
        """Extension element from ascending base-field coefficients."""
        assert self.base is not None
        cs = [self.base.coerce(c) for c in coeffs]
        assert len(cs) <= self.deg
        cs += [self.base.zero()] * (self.deg - len(cs))
        return FFElem(self, tuple(cs))

    def elements(self):
        """All field elements (tiny fields only); deterministic order."""
        if self.base is None:
            for k in range(self.p):
                yield FFElem(self, k)
        else:
            import itertools

            for rep in itertools.product(list(self.base.elements()), repeat=self.deg):
                yield FFElem(self, tuple(rep))

    def random(self, rng):
        if self.base is None:
            return FFElem(self, rng.randrange(self.p))
        return FFElem(self, tuple(self.base.random(rng) for _ in range(self.deg)))

    # -- arithmetic --------------------------------------------------------

    def is_zero(self, x):
        if self.base is None:
            return x.rep == 0
        return all(c.is_zero() for c in x.rep)

    def _add(self, x, y):
        if self.base is None:
            return FFElem(self, (x.rep + y.rep) % self.p)
        return FFElem(self, tuple(a + b for a, b in zip(x.rep, y.rep)))

    def _neg(self, x):
        if self.base is None:
            return FFElem(self, (-x.rep) % self.p)
        return FFElem(self, tuple(-a for a in x.rep))

    def _mul(self, x, y):
        if self.base is None:
            return FFElem(self, (x.rep * y.rep) % self.p)
        # schoolbook product then reduction by the monic modulus
        zb = self.base.zero()
        prod = [zb] * (2 * self.deg - 1)
        for i, a in enumerate(x.rep):
            if a.is_zero():
                continue
            for j, b in enumerate(y.rep):
                if not b.is_zero():
                    prod[i + j] = prod[i + j] + a * b
        for k in range(len(prod) - 1, self.deg - 1, -1):
            c = prod[k]
            if c.is_zero():
                continue
            prod[k] = zb
            for i in range(self.deg):
                prod[k - self.deg + i] = prod[k - self.deg + i] - c * self.modulus[i]
        return FFElem(self, tuple(prod[: self.deg]))

    def _pow(self, x, k):
        if k < 0:
            return self._pow(self.inv(x), -k)
        r = self.one()
        b = x
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def inv(self, x):
        if self.is_zero(x):
            raise DivisionByZero("inverse of zero in finite field")
        return self._pow(x, self.order - 2)

    def render(self, x):
        if self.base is None:
            return str(x.rep)
        parts = []
        for i, c in enumerate(x.rep):
            if c.is_zero():
                continue
            if i == 0:
                parts.append(self.base.render(c))
            else:
                head = "" if c == self.base.one() else f"{self.base.render(c)}*"
                parts.append(f"{head}{self.gen_name}" + (f"^{i}" if i > 1 else ""))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"GF({self.order})"

    @property
    def char(self):
        return self.p


# Defining polynomials for the fields the suites use (ascending coefficients
# over F_p, monic).  Anything else is found by search.
_IRRED = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 0, 1),
}

_PRIME_CACHE = {}
_EXT_CACHE = {}


def prime_field(p):
    f = _PRIME_CACHE.get(p)
    if f is None:
        f = _PRIME_CACHE[p] = FiniteField(p)
    return f


def GF(p, e=1, gen_name="g"):
    """The field with p^e elements (shared instance per (p, e))."""
    if e == 1:
        return prime_field(p)
    key = (p, e, gen_name)
    f = _EXT_CACHE.get(key)
    if f is not None:
        return f
    base = prime_field(p)
    coeffs = _IRRED.get((p, e))
    if coeffs is None:
        coeffs = _search_irreducible(base, e)
    mod = tuple(base.coerce(c) for c in coeffs)
    f = _EXT_CACHE[key] = FiniteField(p, modulus=mod, base=base, gen_name=gen_name)
    return f


def extension_field(base, modulus_coeffs, gen_name="g"):
    """base[x]/(h) for a monic irreducible h given by ascending coefficients."""
    mod = tuple(base.coerce(c) for c in modulus_coeffs)
    return FiniteField(base.p, modulus=mod, base=base, gen_name=gen_name)


def _search_irreducible(base, e):
    """Smallest monic degree-e polynomial over base with no roots in any
    subextension of degree < e, found by the x^(q^k) == x test."""
    import itertools

    q = base.order
    els = list(base.elements())
    for tail in itertools.product(range(q), repeat=e):
        coeffs = [els[t] for t in tail] + [base.one()]
        if _is_irreducible(base, coeffs):
            return tuple(c.rep if base.base is None else c for c in coeffs)
    raise AssertionError("no irreducible polynomial found")


def _is_irreducible(base, coeffs):
    e = len(coeffs) - 1
    # x^(q^k) mod f, computed by square-and-multiply on exponents
    def polymul(a, b):
        zb = base.zero()
        out = [zb] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        # reduce mod monic coeffs
        for k in range(len(out) - 1, e - 1, -1):
            c = out[k]
            if c.is_zero():
                continue
            out[k] = zb
            for i in range(e):
                out[k - e + i] = out[k - e + i] - c * coeffs[i]
        return out[:e] + [zb] * (e - len(out[:e]))

    def polypow_x(exp):
        result = [base.one()] + [base.zero()] * (e - 1)
        sq = [base.zero(), base.one()] + [base.zero()] * max(0, e - 2)
        sq = sq[:e] if e > 1 else polymul([base.zero(), base.one()], [base.one()])
        if e == 1:
            return result
        while exp:
            if exp & 1:
                result = polymul(result, sq)
            sq = polymul(sq, sq)
            exp >>= 1
        return result

    q = base.order
    xq = polypow_x(q ** e)
    x = [base.zero(), base.one()] + [base.zero()] * (e - 2)
    if xq != x[:e]:
        return False
    # rule out factors of degree d | e, d < e
    for d in range(1, e):
        if e % d:
            continue
        xqd = polypow_x(q ** d)
        if xqd == x[:e]:
            return False
    return True
