"""Modulus of a rational map into a split commutative group over P^1, and
Swan/refined-Swan conductors of Artin-Schreier-Witt classes.

A group point carries torus coordinates in F_p(x)^x and Witt coordinates
over F_p(x); its local modulus at a place is 0 when everything is
integral there and otherwise 1 + the maximum saturated level of the Witt
coordinates after completion.  Candidate places come from factoring
numerators and denominators, plus infinity.

The Swan conductor reduces a representative by (F-1)-shifts instead of
pushing into higher Frobenius degrees; over a perfect residue field
every p-divisible boundary strips, so jumps are prime to p.
"""

from __future__ import annotations

from .errors import ShapeMismatch, UnsupportedResidueField
from .fields.laurent import LaurentElem, exact_is_zero
from .fields.polys import Poly, factor_univariate
from .fields.rational import RatFunc, RationalField
from .fields.tower import build_tower
from .filtration import (
    FilDecomposition,
    delta_reduced,
    filf_level,
    naive_level,
    ord_p,
    theta_bar,
)
from .witt.rings import ring_for
from .witt.vector import WittVector

INF = "inf"


class Place:
    """Monic irreducible polynomial of F_q[x], or the place at infinity."""

    def __init__(self, poly=None):
        self.poly = poly  # None = infinity

    @property
    def is_infinite(self):
        return self.poly is None

    @property
    def degree(self):
        return 1 if self.poly is None else self.poly.degree()

    def render(self, var="x"):
        if self.poly is None:
            return INF
        return self.poly.render((var,))

    def key(self, var="x"):
        return (self.degree, self.render(var))

    def __repr__(self):
        return f"Place({self.render()})"

    def __eq__(self, other):
        if not isinstance(other, Place):
            return NotImplemented
        return self.render() == other.render()

    def __hash__(self):
        return hash(self.render())


class SplitGroupDescriptor:
    """G = G_m^tm x (+)_i W_(n_i), with an optional post-composition word."""

    def __init__(self, torus_rank=0, witt_lengths=(), post_hom=None):
        self.torus_rank = torus_rank
        self.witt_lengths = tuple(witt_lengths)
        assert all(n >= 1 for n in self.witt_lengths)
        self.post_hom = post_hom

    def render(self):
        parts = [f"Gm^{self.torus_rank}"] if self.torus_rank else []
        parts += [f"W{n}" for n in self.witt_lengths]
        return " x ".join(parts) if parts else "0"

    def __repr__(self):
        return self.render()


class GroupPoint:
    def __init__(self, group, torus_coords=(), witt_coords=()):
        self.group = group
        self.torus = tuple(torus_coords)
        self.witt = tuple(witt_coords)
        if len(self.torus) != group.torus_rank:
            raise ShapeMismatch("torus coordinate count mismatch")
        if tuple(w.n for w in self.witt) != group.witt_lengths:
            raise ShapeMismatch("Witt coordinate shape mismatch")
        for f in self.torus:
            if f.is_zero():
                raise ShapeMismatch("torus coordinates must be nonzero")

    def effective_witt(self):
        """Witt coordinates after the optional post-composition."""
        if self.group.post_hom is None:
            return self.witt
        return self.group.post_hom.apply(self.witt)


# -- completion at places -----------------------------------------------------------


_LOCAL_TOWER_CACHE = {}


def local_tower(K, place, default_prec=32):
    """kappa_v((pi)) for a place of F_q(x); kappa_v is built with the place
    polynomial as its modulus so coefficient lifts are free."""
    q_field = K.field
    if q_field.base is not None:
        raise UnsupportedResidueField("global modulus needs a prime constant field")
    p = q_field.p
    d = place.degree
    if d == 1:
        desc = {"p": p, "layers": [{"kind": "galois", "e": 1}, {"kind": "laurent", "var": "pi"}]}
    else:
        mod = [0] * (d + 1)
        for (k,), c in place.poly.terms.items():
            mod[k] = c.rep
        desc = {
            "p": p,
            "layers": [
                {"kind": "galois", "e": d, "modulus": mod},
                {"kind": "laurent", "var": "pi"},
            ],
        }
    return build_tower(desc, default_prec)


def _ord_and_unit(poly, h):
    """(ord_h(poly), poly / h^ord)."""
    if poly.is_zero():
        return None, poly
    n = 0
    cur = poly
    while True:
        q, r = cur.divmod(h)
        if not r.is_zero():
            return n, cur
        n += 1
        cur = q


def completion_at_place(f, place, prec=32):
    """pi-adic expansion of f in kappa_v((pi)); exact when f is a Laurent
    polynomial in pi (e.g. monomial places dividing f exactly)."""
    K = f.rf
    tower = local_tower(K, place, prec)
    kappa = tower.layers[0]
    top = tower.top
    if f.is_zero():
        return top.zero()
    num, den = f.num, f.den
    if place.is_infinite:
        # x = 1/pi: reverse coefficients
        dn, dd = num.degree(), den.degree()
        rnum = _reverse(num)
        rden = _reverse(den)
        v = dd - dn
        unum = _poly_to_local_const(rnum, kappa, top, place)
        uden = _poly_to_local_const(rden, kappa, top, place)
        ser = unum * uden.inv(relprec=prec)
        return ser.shift(v)
    h = place.poly
    a, nu = _ord_and_unit(num, h)
    b, de = _ord_and_unit(den, h)
    v = a - b
    # digit expansion of nu/de in powers of h
    dinv = _eval_at_place(de, kappa, place).inv()
    terms = {}
    cur = nu
    for k in range(prec - min(v, 0)):
        c = _eval_at_place(cur, kappa, place) * dinv
        if not c.is_zero():
            terms[k + v] = c
        cur = cur - _lift_from_kappa(c, kappa, K, place) * de
        cur = cur // h
        if cur.is_zero():
            return LaurentElem(top, terms, None)
    return LaurentElem(top, terms, prec - min(v, 0) + v)


def _reverse(poly):
    d = poly.degree()
    return Poly(poly.field, 1, {(d - k,): c for (k,), c in poly.terms.items()})


def _poly_to_local_const(poly, kappa, top, place):
    terms = {}
    for (k,), c in poly.terms.items():
        terms[k] = kappa.coerce(c.rep)
    return LaurentElem(top, terms, None)


def _eval_at_place(poly, kappa, place):
    """Reduction of a polynomial mod the place into kappa_v."""
    if place.degree == 1:
        root = -place.poly.terms.get((0,), place.poly.field.zero())
        return kappa.coerce(poly.eval_uni(root).rep)
    rem = poly % place.poly
    coeffs = [0] * place.degree
    for (k,), c in rem.terms.items():
        coeffs[k] = c.rep
    return kappa.from_coeffs(coeffs)


def _lift_from_kappa(c, kappa, K, place):
    """Section of the reduction: kappa_v -> F_q[x] (coefficients are the rep)."""
    if place.degree == 1:
        return Poly.const(K.field, 1, c.rep if isinstance(c.rep, int) else c.rep)
    return Poly.univariate(K.field, [a.rep for a in c.rep])


def complete_witt(wv, place, prec=32):
    tower = local_tower(wv.comps[0].rf if isinstance(wv.comps[0], RatFunc) else wv.ring.obj, place, prec)
    ring = ring_for(tower)
    return WittVector(
        wv.p, wv.n, ring, tuple(completion_at_place(c, place, prec) for c in wv.comps)
    )


# -- the modulus -----------------------------------------------------------------------


def mod_v(point, place, prec=32):
    """0 when the point is integral at the place, else 1 + max saturated level."""
    integral = True
    for f in point.torus:
        loc = completion_at_place(f, place, prec)
        if loc.valuation() != 0:
            integral = False
            break
    witt_local = [complete_witt(w, place, prec) for w in point.effective_witt()]
    if integral:
        integral = all(naive_level(w) == 0 for w in witt_local)
    if integral:
        return 0
    best = 0
    for w in witt_local:
        s, _ = filf_level(w)
        best = max(best, s)
    return 1 + best


def local_mod_v(torus_coords, witt_coords):
    """mod_v for already-local coordinates: 0 when integral, else 1 + the
    maximum saturated level of the Witt coordinates."""
    integral = all(f.valuation() == 0 for f in torus_coords)
    if integral:
        integral = all(naive_level(w) == 0 for w in witt_coords)
    if integral:
        return 0
    best = 0
    for w in witt_coords:
        s, _ = filf_level(w)
        best = max(best, s)
    return 1 + best


def candidate_places(point):
    """Places where some coordinate might be non-integral: factors of
    denominators (and torus numerators), plus infinity."""
    polys = []
    for f in point.torus:
        polys.append(f.num)
        polys.append(f.den)
    for w in point.effective_witt():
        for c in w.comps:
            polys.append(c.den)
    places = {}
    for poly in polys:
        if poly.degree() < 1:
            continue
        for irr, _mult in factor_univariate(poly):
            pl = Place(irr)
            places[pl.render()] = pl
    places[INF] = Place(None)
    return sorted(places.values(), key=lambda pl: pl.key())


def modulus_divisor(point, prec=32):
    """Effective divisor sum mod_v(point) * v; support-complete by construction."""
    out = {}
    for pl in candidate_places(point):
        m = mod_v(point, pl, prec)
        if m:
            out[pl] = m
    return out


def divisor_degree(div):
    return sum(pl.degree * m for pl, m in div.items())


def check_embedding_independence(point, h1, h2, places=None, prec=32):
    """mod_v through two injective post-compositions, compared per place."""
    g = point.group
    mismatches = []
    rows = []
    pts = []
    for h in (h1, h2):
        g2 = SplitGroupDescriptor(g.torus_rank, tuple(h.tgt), None)
        pts.append(GroupPoint(g2, point.torus, h.apply(point.witt)))
    if places is None:
        places = sorted(
            {pl.render(): pl for pt in pts for pl in candidate_places(pt)}.values(),
            key=lambda pl: pl.key(),
        )
    for pl in places:
        m1 = mod_v(pts[0], pl, prec)
        m2 = mod_v(pts[1], pl, prec)
        rows.append({"place": pl.render(), "mod_h1": m1, "mod_h2": m2})
        if m1 != m2:
            mismatches.append(rows[-1])
    return {"rows": rows, "mismatches": mismatches, "independent": not mismatches}


# -- Swan and refined Swan conductors ---------------------------------------------------


def swan_conductor(f, return_representative=False):
    """Least m with f in fil_m + (F-1)W_n, by boundary stripping; the residue
    field must be perfect (all strips are then available)."""
    tower = f.ring.obj
    if not tower.residue().is_perfect():
        raise UnsupportedResidueField("Swan reduction needs a perfect residue field")
    p = f.p
    cur = f
    L = naive_level(cur)
    while L > 0:
        r = ord_p(p, L)
        # nonzero class at the kappa slot blocks reduction
        blocked = False
        if r < cur.n:
            idx = cur.n - 1 - r
            c = cur.comps[idx]
            v = c.valuation()
            if v is not None and (p ** r) * v == -L:
                blocked = True
        if blocked:
            break
        guard = 0
        while naive_level(cur) == L:
            guard += 1
            assert guard <= cur.n + 2, "Swan strip failed to terminate"
            for idx in range(cur.n):
                j = cur.n - 1 - idx
                pj = p ** j
                if L % pj:
                    continue
                c = cur.comps[idx]
                v = c.valuation()
                if v is None or pj * v != -L:
                    continue
                a = c.coefficient(v)
                root = a.pth_root()
                mono = tower.top.monomial(-L // (pj * p), root)
                y = WittVector.zeros(cur.p, cur.n, cur.ring).replace(idx, mono)
                cur = cur - y.frobenius_F() + y
                break
            else:
                raise AssertionError("no boundary found at the current level")
        newL = naive_level(cur)
        assert newL < L
        L = newL
    if return_representative:
        return L, cur
    return L


def refined_swan(f):
    """(swan level m, boundary form of the reduced representative); the form
    is {} when m = 0."""
    m, rep = swan_conductor(f, return_representative=True)
    if m == 0:
        return 0, {}
    return m, delta_reduced(rep, m)


def verify_prop48(f):
    """Collapse of theta-bar at the saturated level versus the refined Swan
    form of the reduced representative of the same class."""
    s, witness = filf_level(f)
    report = {"filf_level": s}
    if s == 0:
        report["match"] = True
        report["detail"] = "integral class"
        return report
    db = theta_bar(witness)
    collapsed = db.collapse()
    m, rsw = swan_conductor(f, return_representative=True)
    if m < s:
        rsw_form = {}
    else:
        rsw_form = delta_reduced(rsw, s)
    report["swan"] = m
    report["collapse"] = {_sym_str(k): _r(v) for k, v in collapsed.items()}
    report["rsw"] = {_sym_str(k): _r(v) for k, v in rsw_form.items()}
    keys = set(collapsed) | set(rsw_form)
    ok = True
    for k in keys:
        a = collapsed.get(k)
        b = rsw_form.get(k)
        if a is None:
            ok = ok and _is_zero(b)
        elif b is None:
            ok = ok and _is_zero(a)
        else:
            ok = ok and bool(a == b)
    report["match"] = ok
    return report


def _sym_str(sym):
    kind, name = sym
    return f"d{name}" if kind == "d" else f"dlog{name}"


def _r(v):
    return v.render() if hasattr(v, "render") else str(v)


def _is_zero(v):
    return v is None or exact_is_zero(v)
