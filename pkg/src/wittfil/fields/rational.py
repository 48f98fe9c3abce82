"""Rational function fields F_q(u_1, ..., u_k), exactly.

Fractions are reduced by gcd in the univariate case and by monomial
content otherwise; equality always goes through cross-multiplication, so
unreduced multivariate fractions stay correct.  The char-p structure a
discrete valuation field needs from its residue field lives here:
membership in kappa^p is decided by vanishing of all partial derivatives,
and p-th roots are extracted exactly via num*den^(p-1).
"""

from __future__ import annotations

from ..errors import DivisionByZero, NotAPthPower
from .polys import Poly


class RationalField:
    """F_q(vars): fraction field of a sparse polynomial ring."""

    def __init__(self, field, var_names):
        self.field = field  # FiniteField of constants
        self.vars = tuple(var_names)
        self.nvars = len(self.vars)
        self.p = field.p
        self._zero = RatFunc(self, Poly.zero(field, self.nvars), self._poly_one())
        self._one = RatFunc(self, self._poly_one(), self._poly_one())

    def _poly_one(self):
        return Poly.const(self.field, self.nvars, 1)

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def var(self, name):
        i = self.vars.index(name)
        return RatFunc(self, Poly.var(self.field, self.nvars, i), self._poly_one())

    def from_poly(self, poly):
        return RatFunc(self, poly, self._poly_one())

    def coerce(self, x):
        if isinstance(x, RatFunc):
            if x.rf is self:
                return x
            if x.rf.field is self.field and x.rf.vars == self.vars:
                return RatFunc(self, x.num, x.den, normalize=False)
            raise TypeError("rational function from an incompatible ring")
        if isinstance(x, Poly) and x.field is self.field and x.nvars == self.nvars:
            return self.from_poly(x)
        if isinstance(x, int):
            return self.from_poly(Poly.const(self.field, self.nvars, x))
        # constants from the coefficient field
        c = self.field.coerce(x)
        return self.from_poly(Poly.const(self.field, self.nvars, c))

    def random(self, rng, max_terms=2, max_deg=2, denominators=True):
        num = self._random_poly(rng, max_terms, max_deg)
        if denominators and rng.random() < 0.3:
            den = self._random_poly(rng, max_terms, max_deg)
            while den.is_zero():
                den = self._random_poly(rng, max_terms, max_deg)
        else:
            den = self._poly_one()
        return RatFunc(self, num, den)

    def _random_poly(self, rng, max_terms, max_deg):
        terms = {}
        for _ in range(rng.randrange(max_terms + 1)):
            k = tuple(rng.randrange(max_deg + 1) for _ in range(self.nvars))
            c = self.field.random(rng)
            if not c.is_zero():
                terms[k] = c
        return Poly(self.field, self.nvars, terms)

    @property
    def char(self):
        return self.p

    def __repr__(self):
        return f"GF({self.field.order})({', '.join(self.vars)})"


class RatFunc:
    __slots__ = ("rf", "num", "den")

    def __init__(self, rf, num, den, normalize=True):
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        self.rf = rf
        self.num = num
        self.den = den
        if normalize:
            self._normalize()

    def _normalize(self):
        if self.num.is_zero():
            self.den = self.rf._poly_one()
            return
        # strip common monomial content
        nv = self.rf.nvars
        if nv:
            mins = [None] * nv
            for k in list(self.num.terms) + list(self.den.terms):
                for i, e in enumerate(k):
                    if mins[i] is None or e < mins[i]:
                        mins[i] = e
            if any(m for m in mins):
                self.num = Poly(
                    self.num.field,
                    nv,
                    {tuple(e - m for e, m in zip(k, mins)): c for k, c in self.num.terms.items()},
                )
                self.den = Poly(
                    self.den.field,
                    nv,
                    {tuple(e - m for e, m in zip(k, mins)): c for k, c in self.den.terms.items()},
                )
        if nv == 1:
            g = self.num.gcd(self.den)
            if g.degree() > 0:
                self.num = self.num // g
                self.den = self.den // g
            lead = self.den.leading().inv()
            if lead != self.rf.field.one():
                self.num = self.num * lead
                self.den = self.den * lead
        else:
            # scale so the lexicographically largest denominator monomial is monic
            k = max(self.den.terms)
            c = self.den.terms[k]
            if c != self.rf.field.one():
                ci = c.inv()
                self.num = self.num * ci
                self.den = self.den * ci

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self.rf.coerce(other)
        if self.den == other.den:
            return RatFunc(self.rf, self.num + other.num, self.den)
        return RatFunc(
            self.rf, self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.rf, -self.num, self.den, normalize=False)

    def __sub__(self, other):
        return self + (-self.rf.coerce(other))

    def __rsub__(self, other):
        return self.rf.coerce(other) - self

    def __mul__(self, other):
        other = self.rf.coerce(other)
        return RatFunc(self.rf, self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self.rf.coerce(other).inv()

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        return RatFunc(self.rf, self.num ** k, self.den ** k, normalize=False)

    def inv(self):
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero rational function")
        return RatFunc(self.rf, self.den, self.num)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = self.rf.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("rational functions are not hashable (non-canonical reps)")

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    # -- char-p structure -----------------------------------------------------

    def partial(self, var_index):
        n = self.num.derivative(var_index) * self.den - self.num * self.den.derivative(var_index)
        return RatFunc(self.rf, n, self.den * self.den)

    def is_pth_power(self):
        if self.is_zero():
            return True
        return all(self.partial(i).is_zero() for i in range(self.rf.nvars))

    def pth_root(self):
        if self.is_zero():
            return self.rf.zero()
        p = self.rf.p
        # f = num/den = (num*den^(p-1)) / den^p; the numerator is a p-th
        # power exactly when f is (unique factorisation + perfect constants)
        g = self.num * self.den ** (p - 1)
        if not g.is_pth_power():
            raise NotAPthPower("rational function is not a p-th power")
        return RatFunc(self.rf, g.pth_root(), self.den)

    def frobenius(self):
        return RatFunc(self.rf, self.num.frobenius(), self.den.frobenius(), normalize=False)

    # -- misc -----------------------------------------------------------------

    def as_poly(self):
        """The numerator when the denominator is constant, else None."""
        if self.den.is_const():
            c = self.den.const_value()
            return self.num * c.inv()
        return None

    def subs(self, values, coerce):
        """Evaluate at ring elements (one per variable); division must work
        in the target (the denominator image must be invertible)."""
        nv = self.num.eval_multi(values, coerce)
        dv = self.den.eval_multi(values, coerce)
        return nv * dv.inv()

    def render(self):
        ns = self.num.render(self.rf.vars)
        if self.den.is_const() and self.den.const_value() == self.rf.field.one():
            return ns
        ds = self.den.render(self.rf.vars)
        return f"({ns})/({ds})"

    def __repr__(self):
        return self.render()
