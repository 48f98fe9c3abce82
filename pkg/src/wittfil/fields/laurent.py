"""Laurent series layers with precision windows.

An element is a sparse map exponent -> coefficient plus a window bound
`prec`: coefficients at exponents >= prec are unknown.  `prec is None`
means the element is exact (the written terms are the whole series).
Arithmetic never fabricates coefficients past the propagated window;
operations that would need one raise PrecisionExhausted instead.

The same class serves field towers (coefficients in a finite field,
rational functions, a perfection, or a lower Laurent layer) and the
Witt-coefficient rings used by local symbols (coefficients in a Galois
ring), so division insists only on invertible leading coefficients.
"""

from __future__ import annotations

from ..errors import DivisionByZero, NotAPthPower, PrecisionExhausted

DEFAULT_PREC = 32


def exact_is_zero(c):
    """True only when c is known to be zero on the nose (not just within a window)."""
    if isinstance(c, LaurentElem):
        return c.prec is None and not c.terms
    return c.is_zero()


def known_nonzero(c):
    """True when c certainly differs from zero (some known content)."""
    if isinstance(c, LaurentElem):
        return any(known_nonzero(v) for v in c.terms.values())
    return not c.is_zero()


class LaurentField:
    """coeff((var)): Laurent series over any coefficient layer."""

    def __init__(self, coeff, var, default_prec=DEFAULT_PREC):
        self.coeff = coeff  # field/ring object of the coefficient layer
        self.var = var
        self.default_prec = default_prec
        self.p = getattr(coeff, "p", None) or getattr(coeff, "char", None)
        self._zero = LaurentElem(self, {}, None)
        self._one = LaurentElem(self, {0: coeff.one()}, None)

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def uniformizer(self):
        return LaurentElem(self, {1: self.coeff.one()}, None)

    def monomial(self, e, c=None):
        c = self.coeff.one() if c is None else self.coeff.coerce(c)
        if exact_is_zero(c):
            return self._zero
        return LaurentElem(self, {e: c}, None)

    def from_terms(self, terms, prec=None):
        t = {}
        for e, c in terms.items():
            c = self.coeff.coerce(c)
            if not exact_is_zero(c) and (prec is None or e < prec):
                t[e] = c
        return LaurentElem(self, t, prec)

    def coerce(self, x):
        if isinstance(x, LaurentElem) and x.layer is self:
            return x
        c = self.coeff.coerce(x)
        if exact_is_zero(c):
            return self._zero
        return LaurentElem(self, {0: c}, None)

    def random(self, rng, max_terms=3, min_exp=-4, max_exp=4, exact=True, **kw):
        terms = {}
        for _ in range(rng.randrange(max_terms + 1)):
            e = rng.randrange(min_exp, max_exp + 1)
            c = self.coeff.random(rng, **kw) if _accepts_kw(self.coeff.random) else self.coeff.random(rng)
            if not exact_is_zero(c):
                terms[e] = c
        prec = None if exact else max_exp + 1
        return LaurentElem(self, terms, prec)

    @property
    def char(self):
        return self.p

    def __repr__(self):
        return f"{self.coeff!r}(({self.var}))"


def _accepts_kw(fn):
    import inspect

    try:
        sig = inspect.signature(fn)
    except (TypeError, ValueError):
        return False
    return len(sig.parameters) > 1


class LaurentElem:
    __slots__ = ("layer", "terms", "prec")

    def __init__(self, layer, terms, prec):
        self.layer = layer
        self.terms = terms  # dict[int, coeff], no exact zeros, keys < prec
        self.prec = prec  # None = exact

    # -- inspection --------------------------------------------------------

    def is_zero(self):
        """Zero as far as the window shows (exact elements: exactly zero)."""
        return not any(known_nonzero(c) for c in self.terms.values())

    def __bool__(self):
        return not self.is_zero()

    def is_exact(self):
        return self.prec is None

    def valuation(self):
        """Least exponent with a certainly-nonzero coefficient; None for the
        exact zero; PrecisionExhausted when the window cannot decide."""
        for e in sorted(self.terms):
            c = self.terms[e]
            if known_nonzero(c):
                return e
            if not exact_is_zero(c):
                raise PrecisionExhausted(
                    f"valuation blocked by a window-zero coefficient at {self.layer.var}^{e}"
                )
        if self.prec is None:
            return None
        raise PrecisionExhausted(
            f"no known nonzero coefficient below O({self.layer.var}^{self.prec})"
        )

    def val_lower_bound(self):
        ks = [e for e, c in self.terms.items() if not exact_is_zero(c)]
        if ks:
            return min(ks)
        return self.prec if self.prec is not None else None  # None = +infinity

    def coefficient(self, e):
        if self.prec is not None and e >= self.prec:
            raise PrecisionExhausted(
                f"coefficient at {self.layer.var}^{e} beyond window O({self.layer.var}^{self.prec})"
            )
        return self.terms.get(e, self.layer.coeff.zero())

    def known_items(self):
        return sorted(self.terms.items())

    # -- arithmetic -----------------------------------------------------------

    def _merge_prec(self, other):
        if self.prec is None:
            return other.prec
        if other.prec is None:
            return self.prec
        return min(self.prec, other.prec)

    def __add__(self, other):
        other = self.layer.coerce(other)
        prec = self._merge_prec(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if exact_is_zero(s):
                terms.pop(e, None)
            else:
                terms[e] = s
        if prec is not None:
            terms = {e: c for e, c in terms.items() if e < prec}
        return LaurentElem(self.layer, terms, prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentElem(self.layer, {e: -c for e, c in self.terms.items()}, self.prec)

    def __sub__(self, other):
        return self + (-self.layer.coerce(other))

    def __rsub__(self, other):
        return self.layer.coerce(other) - self

    def __mul__(self, other):
        other = self.layer.coerce(other)
        if (self.prec is None and not self.terms) or (other.prec is None and not other.terms):
            return self.layer.zero()
        prec = None
        for a, b in ((self, other), (other, self)):
            if a.prec is not None:
                vb = b.val_lower_bound()
                if vb is None:
                    continue
                cand = a.prec + vb
                prec = cand if prec is None else min(prec, cand)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if prec is not None and e >= prec:
                    continue
                c = c1 * c2
                s = out.get(e)
                s = c if s is None else s + c
                if exact_is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return LaurentElem(self.layer, out, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self.layer.coerce(other).inv()

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        r = self.layer.one()
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def shift(self, k):
        """Multiplication by var^k, exact."""
        return LaurentElem(
            self.layer,
            {e + k: c for e, c in self.terms.items()},
            None if self.prec is None else self.prec + k,
        )

    def scale(self, c):
        c = self.layer.coeff.coerce(c)
        if exact_is_zero(c):
            return self.layer.zero() if self.prec is None else LaurentElem(self.layer, {}, self.prec)
        out = {}
        for e, v in self.terms.items():
            s = v * c
            if not exact_is_zero(s):
                out[e] = s
        return LaurentElem(self.layer, out, self.prec)

    def inv(self, relprec=None):
        v = self.valuation()
        if v is None:
            raise DivisionByZero("inverse of zero Laurent series")
        lead = self.terms[v]
        lead_inv = lead.inv()
        if self.prec is None and len(self.terms) == 1:
            return LaurentElem(self.layer, {-v: lead_inv}, None)
        if relprec is None:
            relprec = (self.prec - v) if self.prec is not None else self.layer.default_prec
        if relprec <= 0:
            raise PrecisionExhausted("no usable relative precision for inversion")
        # u = 1 + h with h of positive order; invert by the convolution recurrence
        u = {}
        for e, c in self.terms.items():
            if e - v < relprec:
                u[e - v] = c * lead_inv
        binv = {0: self.layer.coeff.one()}
        usorted = sorted(u.items())
        for k in range(1, relprec):
            acc = None
            for j, cj in usorted:
                if j == 0 or j > k:
                    continue
                b = binv.get(k - j)
                if b is None:
                    continue
                t = cj * b
                acc = t if acc is None else acc + t
            if acc is not None and not exact_is_zero(acc):
                binv[k] = -acc
        out = {e - v: c * lead_inv for e, c in binv.items() if not exact_is_zero(c * lead_inv)}
        return LaurentElem(self.layer, out, -v + relprec)

    # -- char-p structure ---------------------------------------------------

    def frobenius(self):
        p = self.layer.p
        out = {e * p: _frob(c) for e, c in self.terms.items()}
        prec = None if self.prec is None else self.prec * p
        return LaurentElem(self.layer, out, prec)

    def is_pth_power(self):
        p = self.layer.p
        for e, c in self.terms.items():
            if not known_nonzero(c):
                continue
            if e % p:
                return False
            if not _is_pp(c):
                return False
        return True

    def pth_root(self):
        p = self.layer.p
        out = {}
        for e, c in self.terms.items():
            if exact_is_zero(c):
                continue
            if e % p:
                if known_nonzero(c):
                    raise NotAPthPower(f"exponent {e} not divisible by {p}")
                continue  # window-zero coefficient at a bad exponent: trust the window
            out[e // p] = _proot(c)
        prec = None if self.prec is None else -(-self.prec // p)
        return LaurentElem(self.layer, out, prec)

    # -- comparison -----------------------------------------------------------

    def eq(self, other):
        """Equality as far as the joint window shows; exact on exact payloads."""
        other = self.layer.coerce(other)
        w = self._merge_prec(other)
        keys = set(self.terms) | set(other.terms)
        for e in keys:
            if w is not None and e >= w:
                continue
            a = self.terms.get(e)
            b = other.terms.get(e)
            if a is None:
                a = self.layer.coeff.zero()
            if b is None:
                b = self.layer.coeff.zero()
            if isinstance(a, LaurentElem):
                if not a.eq(b):
                    return False
            elif not (a == b):
                return False
        return True

    def __eq__(self, other):
        if isinstance(other, LaurentElem) or isinstance(other, int):
            try:
                return self.eq(other)
            except (TypeError, ValueError):
                return NotImplemented
        try:
            return self.eq(self.layer.coerce(other))
        except (TypeError, ValueError):
            return NotImplemented

    def truncate(self, prec):
        t = {e: c for e, c in self.terms.items() if e < prec}
        newprec = prec if self.prec is None else min(prec, self.prec)
        return LaurentElem(self.layer, t, newprec)

    def with_prec_at_least(self, prec):
        """Fail loudly unless the window covers exponents < prec."""
        if self.prec is not None and self.prec < prec:
            raise PrecisionExhausted(
                f"window O({self.layer.var}^{self.prec}) below required {prec}"
            )
        return self

    # -- rendering -------------------------------------------------------------

    def render(self):
        var = self.layer.var
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            cs = c.render() if hasattr(c, "render") else repr(c)
            need_paren = ("+" in cs) or (" " in cs) or ("/" in cs and e != 0)
            if e == 0:
                parts.append(f"({cs})" if need_paren else cs)
                continue
            pw = var if e == 1 else f"{var}^{e}"
            if cs == "1":
                parts.append(pw)
            else:
                parts.append((f"({cs})" if need_paren else cs) + "*" + pw)
        body = " + ".join(parts) if parts else "0"
        if self.prec is not None:
            body += f" + O({var}^{self.prec})"
        return body

    def __repr__(self):
        return self.render()


def _frob(c):
    if hasattr(c, "frobenius"):
        return c.frobenius()
    return c ** c.field.p


def _is_pp(c):
    if hasattr(c, "is_pth_power"):
        return c.is_pth_power()
    return True


def _proot(c):
    return c.pth_root()
