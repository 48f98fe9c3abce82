"""Perfect closure of a rational function field.

An element is a formal p^r-th root of a rational function, stored as
(rat, r) with rat not itself a p-th power (eager normalisation makes the
representation canonical, since p-th roots in char p are unique).  Raising
r lazily on demand is what makes kappa' = union kappa(T)^(1/p^r) finitely
presented: no completion, no infinite basis.
"""

from __future__ import annotations

from ..errors import DivisionByZero


class PerfectionField:
    def __init__(self, base):
        self.base = base  # RationalField
        self.p = base.p
        self._zero = PerfElem(self, base.zero(), 0, normalize=False)
        self._one = PerfElem(self, base.one(), 0, normalize=False)

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def coerce(self, x):
        if isinstance(x, PerfElem) and x.pf is self:
            return x
        return PerfElem(self, self.base.coerce(x), 0)

    def var(self, name):
        return PerfElem(self, self.base.var(name), 0, normalize=False)

    def random(self, rng, **kw):
        r = rng.randrange(2)
        return PerfElem(self, self.base.random(rng, **kw), r)

    @property
    def char(self):
        return self.p

    def __repr__(self):
        return f"perf({self.base!r})"


class PerfElem:
    __slots__ = ("pf", "rat", "r")

    def __init__(self, pf, rat, r, normalize=True):
        self.pf = pf
        self.rat = rat
        self.r = r
        if normalize:
            while self.r > 0 and self.rat.is_pth_power():
                self.rat = self.rat.pth_root()
                self.r -= 1
            if self.rat.is_zero():
                self.r = 0

    def _align(self, other):
        r = max(self.r, other.r)
        a, b = self.rat, other.rat
        for _ in range(r - self.r):
            a = a.frobenius()
        for _ in range(r - other.r):
            b = b.frobenius()
        return a, b, r

    def __add__(self, other):
        other = self.pf.coerce(other)
        a, b, r = self._align(other)
        return PerfElem(self.pf, a + b, r)

    __radd__ = __add__

    def __neg__(self):
        return PerfElem(self.pf, -self.rat, self.r, normalize=False)

    def __sub__(self, other):
        return self + (-self.pf.coerce(other))

    def __rsub__(self, other):
        return self.pf.coerce(other) - self

    def __mul__(self, other):
        other = self.pf.coerce(other)
        a, b, r = self._align(other)
        return PerfElem(self.pf, a * b, r)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self.pf.coerce(other).inv()

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        out = self.pf.one()
        b = self
        while k:
            if k & 1:
                out = out * b
            b = b * b
            k >>= 1
        return out

    def inv(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return PerfElem(self.pf, self.rat.inv(), self.r, normalize=False)

    def __eq__(self, other):
        if not isinstance(other, PerfElem):
            try:
                other = self.pf.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.r == other.r and self.rat == other.rat

    def is_zero(self):
        return self.rat.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_pth_power(self):
        return True

    def pth_root(self):
        if self.is_zero():
            return self
        return PerfElem(self.pf, self.rat, self.r + 1)

    def frobenius(self):
        if self.r > 0:
            return PerfElem(self.pf, self.rat, self.r - 1, normalize=False)
        return PerfElem(self.pf, self.rat.frobenius(), 0, normalize=False)

    def render(self):
        body = self.rat.render()
        if self.r == 0:
            return body
        return f"({body})^(1/{self.pf.p ** self.r})"

    def __repr__(self):
        return self.render()
