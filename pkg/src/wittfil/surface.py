"""Completions of F_p(x, y) along the divisor {x = 0} of the plane.

Two flavours: the one-stage expansion lands in kappa_v((pi)) with
kappa_v = F_p(y) kept rational (what the modulus of a surface map needs),
and the two-stage expansion lands in the iterated Laurent field
F_p((y))((x)) (what higher local symbols pair against).  Both share the
digit algorithm: strip the x-order, then repeatedly evaluate at x = 0
and divide by x, tracking a common y-denominator.
"""

from __future__ import annotations

from .errors import DivisionByZero
from .fields.laurent import LaurentElem
from .fields.polys import Poly
from .fields.rational import RatFunc, RationalField
from .fields.tower import laurent_tower
from .modulus import Place, completion_at_place
from .witt.rings import ring_for
from .witt.vector import WittVector

X, Y = 0, 1  # variable indices in F_p(x, y)


def _x_order(poly):
    """(ord_x, poly / x^ord)."""
    if poly.is_zero():
        return None, poly
    m = min(k[X] for k in poly.terms)
    if m == 0:
        return 0, poly
    return m, Poly(
        poly.field, 2, {(k[X] - m, k[Y]): c for k, c in poly.terms.items()}
    )


def _at_x0(poly, yring):
    """poly(0, y) as a univariate polynomial in y."""
    terms = {}
    for k, c in poly.terms.items():
        if k[X] == 0:
            terms[(k[Y],)] = c
    return Poly(poly.field, 1, terms)


def _div_x(poly):
    return Poly(poly.field, 2, {(k[X] - 1, k[Y]): c for k, c in poly.terms.items()})


def x_adic_digits(f, prec):
    """[(exponent, digit in F_p(y))] for the x-adic expansion of f, plus the
    exponent where the window closes (None when the expansion terminated).

    Invariant: the remainder after k digits is P_k / (Q_k * de) with P_k
    bivariate, Q_k univariate in y, de the x-unit part of the denominator;
    one step evaluates at x = 0 and divides the corrected numerator by x."""
    K = f.rf
    yring = RationalField(K.field, ("y",))
    num, den = f.num, f.den
    if num.is_zero():
        return [], None
    a, nu = _x_order(num)
    b, de = _x_order(den)
    v = a - b
    de0 = _at_x0(de, yring)
    P = nu
    Q = Poly.const(K.field, 1, 1)
    digits = []
    limit = prec - min(v, 0)
    for k in range(limit):
        P0 = _at_x0(P, yring)
        if not P0.is_zero():
            digits.append((k + v, RatFunc(yring, P0, Q * de0)))
        P = _div_x(P * _embed_y(de0, K.field) - _embed_y(P0, K.field) * de)
        Q = Q * de0
        if P.is_zero():
            return digits, None
    return digits, v + limit


def _embed_y(upoly, field):
    """Univariate y-polynomial into the bivariate ring."""
    return Poly(field, 2, {(0, k[0]): c for k, c in upoly.terms.items()})


def local_tower_surface(p, default_prec=32):
    """kappa_v((pi)) with kappa_v = F_p(y), for the divisor {x = 0}."""
    return laurent_tower(p, rational_vars=("y",), laurent_vars=("pi",), default_prec=default_prec)


def complete_at_x(f, prec=32):
    """Expansion of f in kappa_v((pi)), coefficients rational in y."""
    K = f.rf
    tower = local_tower_surface(K.p, prec)
    digits, window = x_adic_digits(f, prec)
    terms = {e: c for e, c in digits}
    return LaurentElem(tower.top, terms, window)


def k2_tower(p, default_prec=32):
    """F_p((y))((x)) modelled as laurent vars (t1, t2) = (y, x)."""
    return laurent_tower(p, laurent_vars=("t1", "t2"), default_prec=default_prec)


def k2_embed(f, prec=32):
    """Two-stage expansion of f into F_p((t1))((t2)) (t1 = y, t2 = x)."""
    K = f.rf
    tower = k2_tower(K.p, prec)
    k1 = tower.residue()
    yplace = Place(Poly.univariate(K.field, [0, 1]))
    digits, window = x_adic_digits(f, prec)
    terms = {}
    for e, c in digits:
        ser = completion_at_place(_rename_pi(c), yplace, prec)
        terms[e] = _as_t1(ser, k1)
    return LaurentElem(tower.top, terms, window)


def _rename_pi(c):
    return c


def _as_t1(ser, k1):
    """Re-home a kappa-coefficient series onto the t1 layer."""
    return LaurentElem(k1.top, dict(ser.terms), ser.prec)


def complete_witt_at_x(wv, prec=32):
    tower = local_tower_surface(wv.p, prec)
    ring = ring_for(tower)
    return WittVector(wv.p, wv.n, ring, tuple(complete_at_x(c, prec) for c in wv.comps))


def k2_embed_witt(wv, prec=32):
    tower = k2_tower(wv.p, prec)
    ring = ring_for(tower)
    return WittVector(wv.p, wv.n, ring, tuple(k2_embed(c, prec) for c in wv.comps))
