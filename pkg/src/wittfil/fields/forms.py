"""Differential forms with log poles on Laurent towers.

The canonical degree-1 basis over K = kappa((t)) is {d(b) : b in the
declared p-base of kappa} + {dlog(t)}; d(f) for f in K is expanded into
this basis (so the residue map is just "read the dlog coordinate at
t^0").  Lower Laurent layers contribute through d(t_lower), converting
their own dlog coordinates by a factor t_lower^(-1).

The same container serves the Witt-coefficient rings of local symbols,
whose basis is all-dlog; wedge ordering is by layer index ascending and
the top variable peels first.
"""

from __future__ import annotations

from ..errors import PrecisionExhausted
from .laurent import LaurentElem, exact_is_zero


class LogForm:
    __slots__ = ("space", "degree", "basis", "coeffs")

    def __init__(self, space, degree, basis, coeffs):
        self.space = space  # field/ring object the coefficients live in
        self.degree = degree
        self.basis = tuple(basis)  # symbols ('d', name) / ('dlog', name), layer order
        self.coeffs = {k: v for k, v in coeffs.items() if not exact_is_zero(v)}

    @staticmethod
    def zero(space, degree, basis):
        return LogForm(space, degree, basis, {})

    def __add__(self, other):
        assert self.basis == other.basis and self.degree == other.degree
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k)
            s = v if s is None else s + v
            if exact_is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
        return LogForm(self.space, self.degree, self.basis, out)

    def __neg__(self):
        return LogForm(self.space, self.degree, self.basis, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return LogForm(self.space, self.degree, self.basis, {k: v * c for k, v in self.coeffs.items()})

    def wedge(self, other):
        assert self.basis == other.basis
        out = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                if set(k1) & set(k2):
                    continue
                merged = list(k1) + list(k2)
                sign = _sort_sign(merged)
                key = tuple(sorted(merged))
                v = v1 * v2
                if sign < 0:
                    v = -v
                s = out.get(key)
                s = v if s is None else s + v
                if exact_is_zero(s):
                    out.pop(key, None)
                else:
                    out[key] = s
        return LogForm(self.space, self.degree + other.degree, self.basis, out)

    def coefficient(self, key):
        z = self.space.zero()
        return self.coeffs.get(tuple(sorted(key)), z)

    def is_zero(self):
        return all(not _known_nonzero(v) for v in self.coeffs.values())

    def eq(self, other):
        return (self - other).is_zero()

    def render(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            v = self.coeffs[k]
            syms = " ^ ".join(_sym_str(self.basis[i]) for i in k)
            vs = v.render() if hasattr(v, "render") else repr(v)
            parts.append(f"({vs}) {syms}" if syms else vs)
        return " + ".join(parts)

    def __repr__(self):
        return self.render()


def _sym_str(sym):
    kind, name = sym
    return f"d({name})" if kind == "d" else f"dlog({name})"


def _sort_sign(idx):
    sign = 1
    a = list(idx)
    for i in range(len(a)):
        for j in range(len(a) - 1 - i):
            if a[j] > a[j + 1]:
                a[j], a[j + 1] = a[j + 1], a[j]
                sign = -sign
    return sign


def _known_nonzero(v):
    if isinstance(v, LaurentElem):
        from .laurent import known_nonzero

        return known_nonzero(v)
    return not v.is_zero()


# -- canonical bases ------------------------------------------------------------


def field_form_basis(tower):
    """{d(b) for residue p-base b} + {dlog(top var)} in layer order."""
    res_names = tower.residue().p_base_names()
    syms = [("d", n) for n in res_names]
    syms.append(("dlog", tower.descriptor.layers[-1][1]))
    return tuple(syms)


def d_field(tower, x):
    """d(x) in the canonical basis of the Laurent tower; exactness preserved."""
    basis = field_form_basis(tower)
    return LogForm(tower.top, 1, basis, _d_coords(tower, x, basis))


def _d_coords(tower, x, basis):
    """Coordinates of d(x) on `basis`, as elements of tower.top."""
    top_spec = tower.descriptor.layers[-1]
    coords = {}
    if top_spec[0] != "laurent":
        raise AssertionError("d_field needs a Laurent tower")
    dlog_idx = len(basis) - 1
    var_pos = {("d", name): i for i, (kind, name) in enumerate(basis[:-1]) for _ in [0]}
    res = tower.residue()
    # dlog(t) coordinate: sum e * c_e * t^e
    dlog_terms = {}
    for e, c in x.terms.items():
        s = _scale_int(c, e, tower.p)
        if s is not None:
            dlog_terms[e] = s
    coords[(dlog_idx,)] = LaurentElem(tower.top, dlog_terms, x.prec)
    # d(b) coordinates from the coefficients
    if res.descriptor.layers[-1][0] in ("rational", "laurent"):
        per_sym = {}
        for e, c in x.terms.items():
            dc = _residue_d(res, c)  # dict: ('d', name) -> kappa element
            for sym, val in dc.items():
                bucket = per_sym.setdefault(sym, {})
                bucket[e] = val
        for sym, terms in per_sym.items():
            i = var_pos[sym]
            cur = coords.get((i,))
            newf = LaurentElem(tower.top, terms, x.prec)
            coords[(i,)] = newf if cur is None else cur + newf
    return coords


def _scale_int(c, k, p):
    """k * c for an integer k in char p; None when it is exactly zero."""
    k %= p
    if k == 0:
        return None
    out = c
    for _ in range(k - 1):
        out = out + c
    return out


def _residue_d(res_tower, c):
    """d(c) for c in the residue tower, as {('d', name): element of that tower}.

    Lower Laurent layers convert their dlog(t_i) coordinate into d(t_i) by
    a factor t_i^(-1)."""
    spec = res_tower.descriptor.layers[-1]
    if spec[0] == "galois" or spec[0] == "perfection":
        return {}
    if spec[0] == "rational":
        rf = res_tower.top
        out = {}
        for i, name in enumerate(rf.vars):
            pd = c.partial(i)
            if not pd.is_zero():
                out[("d", name)] = pd
        return out
    # lower Laurent layer: recurse into its own coefficients
    sub = Tower_residue = res_tower.residue()
    tvar = spec[1]
    out = {}
    dlog_terms = {}
    for e, cc in c.terms.items():
        s = _scale_int(cc, e, res_tower.p)
        if s is not None:
            dlog_terms[e - 1] = s  # t^e dlog t = t^(e-1) dt
        dc = _residue_d(sub, cc)
        for sym, val in dc.items():
            bucket = out.setdefault(sym, {})
            bucket[e] = val
    coords = {}
    for sym, terms in out.items():
        coords[sym] = LaurentElem(res_tower.top, terms, c.prec)
    if dlog_terms or c.prec is not None:
        coords[("d", tvar)] = LaurentElem(
            res_tower.top, dlog_terms, None if c.prec is None else c.prec - 1
        )
    return coords


def dlog_field(tower, x, relprec=None):
    """dlog(x) = x^(-1) d(x) in the canonical basis."""
    xi = x.inv(relprec=relprec) if isinstance(x, LaurentElem) else x.inv()
    return d_field(tower, x).scale(xi)


def residue1(tower, form):
    """t^0 coefficient of the dlog(t) coordinate of a degree-1 form over
    kappa((t)); the d(b) coordinates carry no residue in this basis."""
    basis = form.basis
    dlog_idx = len(basis) - 1
    assert basis[dlog_idx][0] == "dlog"
    coeff = form.coeffs.get((dlog_idx,))
    if coeff is None:
        return tower.residue().top.zero()
    return coeff.coefficient(0)
