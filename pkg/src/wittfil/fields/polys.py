"""Sparse polynomials over a finite field.

One class covers both the univariate helpers (gcd, divmod, factorisation
into irreducibles for place enumeration) and the multivariate coefficient
rings of rational function layers.  Exponent vectors are tuples; the zero
polynomial has an empty term dict.

Characteristic-p specifics live here too: Hasse derivatives (for shift
expansions c(u + T*t)), p-th power tests and exact p-th roots.
"""

from __future__ import annotations

import math

from ..errors import DivisionByZero, NotAPthPower


class Poly:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars, terms):
        self.field = field
        self.nvars = nvars
        self.terms = terms  # dict[tuple[int,...], FFElem], no zero values

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero(field, nvars):
        return Poly(field, nvars, {})

    @staticmethod
    def const(field, nvars, c):
        c = field.coerce(c)
        if c.is_zero():
            return Poly.zero(field, nvars)
        return Poly(field, nvars, {(0,) * nvars: c})

    @staticmethod
    def var(field, nvars, i, exp=1):
        e = [0] * nvars
        e[i] = exp
        return Poly(field, nvars, {tuple(e): field.one()})

    @staticmethod
    def univariate(field, coeffs):
        """From ascending coefficient list (ints or field elements)."""
        terms = {}
        for i, c in enumerate(coeffs):
            c = field.coerce(c)
            if not c.is_zero():
                terms[(i,)] = c
        return Poly(field, 1, terms)

    # -- predicates -----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return all(all(e == 0 for e in k) for k in self.terms)

    def const_value(self):
        return self.terms.get((0,) * self.nvars, self.field.zero())

    def degree(self, var=None):
        """Total degree, or degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(k) for k in self.terms)
        return max(k[var] for k in self.terms)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field is other.field and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.field), frozenset(self.terms.items())))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            s = terms.get(k)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(k, None)
            else:
                terms[k] = s
        return Poly(self.field, self.nvars, terms)

    def __neg__(self):
        return Poly(self.field, self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            out = {}
            for k1, c1 in self.terms.items():
                for k2, c2 in other.terms.items():
                    k = tuple(a + b for a, b in zip(k1, k2))
                    c = c1 * c2
                    s = out.get(k)
                    s = c if s is None else s + c
                    if s.is_zero():
                        out.pop(k, None)
                    else:
                        out[k] = s
            return Poly(self.field, self.nvars, out)
        c = self.field.coerce(other)
        if c.is_zero():
            return Poly.zero(self.field, self.nvars)
        return Poly(self.field, self.nvars, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, k):
        assert k >= 0
        r = Poly.const(self.field, self.nvars, 1)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def map_coeffs(self, fn):
        out = {}
        for k, c in self.terms.items():
            c2 = fn(c)
            if not c2.is_zero():
                out[k] = c2
        return Poly(self.field, self.nvars, out)

    # -- calculus -----------------------------------------------------------

    def derivative(self, var):
        out = {}
        for k, c in self.terms.items():
            e = k[var]
            if e == 0:
                continue
            c2 = c * e
            if c2.is_zero():
                continue
            k2 = list(k)
            k2[var] = e - 1
            out[tuple(k2)] = c2
        return Poly(self.field, self.nvars, out)

    def hasse_derivative(self, var, order):
        """Coefficient of eps^order in p(..., x_var + eps, ...); exact in char p."""
        out = {}
        p = self.field.p
        for k, c in self.terms.items():
            e = k[var]
            if e < order:
                continue
            binom = math.comb(e, order) % p
            if binom == 0:
                continue
            c2 = c * binom
            if c2.is_zero():
                continue
            k2 = list(k)
            k2[var] = e - order
            k2 = tuple(k2)
            s = out.get(k2)
            s = c2 if s is None else s + c2
            if s.is_zero():
                out.pop(k2, None)
            else:
                out[k2] = s
        return Poly(self.field, self.nvars, out)

    # -- char-p structure ---------------------------------------------------

    def is_pth_power(self):
        p = self.field.p
        return all(all(e % p == 0 for e in k) for k in self.terms)

    def pth_root(self):
        p = self.field.p
        out = {}
        for k, c in self.terms.items():
            if any(e % p for e in k):
                raise NotAPthPower(f"monomial exponent not divisible by {p}")
            out[tuple(e // p for e in k)] = c.pth_root()
        return Poly(self.field, self.nvars, out)

    def frobenius(self):
        p = self.field.p
        return Poly(
            self.field,
            self.nvars,
            {tuple(e * p for e in k): c ** p for k, c in self.terms.items()},
        )

    # -- univariate machinery -------------------------------------------------

    def _uni(self):
        assert self.nvars == 1, "univariate operation on multivariate polynomial"

    def leading(self):
        self._uni()
        d = self.degree()
        return self.terms[(d,)]

    def monic(self):
        self._uni()
        if self.is_zero():
            return self
        return self * self.leading().inv()

    def divmod(self, other):
        self._uni()
        other._uni()
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        q = Poly.zero(self.field, 1)
        r = self
        dlead = other.leading().inv()
        dd = other.degree()
        while not r.is_zero() and r.degree() >= dd:
            shift = r.degree() - dd
            c = r.leading() * dlead
            t = Poly(self.field, 1, {(shift,): c})
            q = q + t
            r = r - t * other
        return q, r

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def gcd(self, other):
        self._uni()
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def eval_uni(self, x, coerce=None):
        """Horner evaluation at x, which may live in any ring; coerce maps
        field coefficients into that ring (default: identity)."""
        self._uni()
        if coerce is None:
            coerce = lambda c: c
        d = self.degree()
        if d < 0:
            return coerce(self.field.zero())
        acc = None
        for e in range(d, -1, -1):
            c = self.terms.get((e,))
            if acc is None:
                acc = coerce(c if c is not None else self.field.zero())
            else:
                acc = acc * x
                if c is not None:
                    acc = acc + coerce(c)
        return acc

    def eval_multi(self, values, coerce=None):
        """Evaluate at a tuple of ring values, one per variable."""
        if coerce is None:
            coerce = lambda c: c
        acc = None
        powcache = [dict() for _ in range(self.nvars)]

        def vpow(i, e):
            d = powcache[i]
            r = d.get(e)
            if r is None:
                r = values[i] ** e if e else None
                d[e] = r
            return r

        for k, c in self.terms.items():
            term = coerce(c)
            for i, e in enumerate(k):
                if e:
                    term = term * vpow(i, e)
            acc = term if acc is None else acc + term
        if acc is None:
            return coerce(self.field.zero())
        return acc

    def shift_ord(self, other):
        """ord_other(self): multiplicity of the irreducible `other` in self."""
        self._uni()
        if self.is_zero():
            return None
        n = 0
        cur = self
        while True:
            q, r = cur.divmod(other)
            if not r.is_zero():
                return n
            n += 1
            cur = q

    # -- rendering ----------------------------------------------------------

    def render(self, var_names):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda t: (sum(t), t)):
            c = self.terms[k]
            body = "*".join(
                f"{var_names[i]}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(k)
                if e
            )
            cs = repr(c)
            need_paren = ("+" in cs) or ("*" in cs) or (" " in cs)
            if not body:
                parts.append(f"({cs})" if need_paren else cs)
            elif c == self.field.one():
                parts.append(body)
            else:
                parts.append((f"({cs})" if need_paren else cs) + "*" + body)
        return " + ".join(parts)

    def __repr__(self):
        names = [f"x{i}" for i in range(self.nvars)]
        return self.render(names)


# -- univariate factorisation (for place enumeration over F_q[x]) ----------


def squarefree_decomposition(f):
    """List of (g_i, multiplicity) with f = lc * prod g_i^m_i, g_i squarefree monic."""
    f._uni()
    p = f.field.p
    out = []
    f = f.monic()

    def sqfree_part(h):
        # Yun-style in char p: handle h' = 0 by p-th root recursion
        res = []
        if h.degree() <= 0:
            return res
        dh = h.derivative(0)
        if dh.is_zero():
            inner = sqfree_part(h.pth_root())
            return [(g, m * p) for (g, m) in inner]
        c = h.gcd(dh)
        w = (h // c).monic()
        m = 1
        while w.degree() > 0:
            y = w.gcd(c)
            z = (w // y).monic()
            if z.degree() > 0:
                res.append((z, m))
            w = y
            c = c // y
            m += 1
        if c.degree() > 0:
            res.extend((g, m2 * p) for (g, m2) in sqfree_part(c.pth_root()))
        return res

    for g, m in sqfree_part(f):
        out.append((g.monic(), m))
    return out


def _pow_mod(base, exp, mod):
    r = Poly.const(mod.field, 1, 1)
    b = base % mod
    while exp:
        if exp & 1:
            r = (r * b) % mod
        b = (b * b) % mod
        exp >>= 1
    return r


def distinct_degree(f):
    """Split a squarefree monic f into [(product of deg-d irreducibles, d)]."""
    f._uni()
    q = f.field.order
    out = []
    x = Poly.var(f.field, 1, 0)
    h = x
    rest = f
    d = 0
    while rest.degree() > 2 * d + 1:
        d += 1
        h = _pow_mod(h, q, rest)
        g = rest.gcd(h - x)
        if g.degree() > 0:
            out.append((g, d))
            rest = rest // g
            h = h % rest
    if rest.degree() > 0:
        out.append((rest, rest.degree()))
    return out


def equal_degree_split(f, d, rng):
    """Cantor-Zassenhaus splitting of a squarefree product of deg-d irreducibles."""
    q = f.field.order
    n = f.degree()
    if n == d:
        return [f]
    while True:
        a = Poly.univariate(f.field, [f.field.random(rng) for _ in range(n)])
        if a.degree() < 1:
            continue
        g = f.gcd(a)
        if 0 < g.degree() < n:
            return equal_degree_split(g, d, rng) + equal_degree_split((f // g).monic(), d, rng)
        if q % 2 == 1:
            b = _pow_mod(a, (q ** d - 1) // 2, f) - Poly.const(f.field, 1, 1)
        else:
            # char 2: trace map sum a^(2^i)
            b = Poly.zero(f.field, 1)
            t = a % f
            for _ in range(d * _log2(q)):
                b = (b + t) % f
                t = (t * t) % f
        g = f.gcd(b)
        if 0 < g.degree() < n:
            return equal_degree_split(g.monic(), d, rng) + equal_degree_split(
                (f // g).monic(), d, rng
            )


def _log2(q):
    k = 0
    while q > 1:
        q //= 2
        k += 1
    return k


def factor_univariate(f, seed=12345):
    """Full monic factorisation [(irreducible, multiplicity)], deterministic."""
    import random

    rng = random.Random(seed)
    out = {}
    for g, m in squarefree_decomposition(f):
        for h, d in distinct_degree(g):
            for irr in equal_degree_split(h.monic(), d, rng):
                key = frozenset(irr.monic().terms.items())
                if key in out:
                    out[key] = (out[key][0], out[key][1] + m)
                else:
                    out[key] = (irr.monic(), m)
    facs = sorted(out.values(), key=lambda t: (t[0].degree(), sorted(t[0].terms)))
    return facs
