"""Pole-order filtrations on Witt vectors over a Laurent tower and their
Frobenius saturations.

Conventions: for x with display components comps[0..n-1], the label
j = n-1-idx gives the membership condition p^j v(comps[idx]) >= -m for
level m.  The saturated level is computed by a greedy reduction: at the
current level L, the boundary coefficient of each component either shows
a nonzero graded class (then L is the answer, by injectivity of the
theta-bar map) or is a p-th power and can be stripped into one Frobenius
degree higher.  The brute-force oracle re-decides membership from scratch
by linear algebra over F_p plus bounded enumeration, sharing nothing with
the greedy path.
"""

from __future__ import annotations

from .errors import (
    CapExceeded,
    InvalidDecomposition,
    PrecisionExhausted,
    SearchSpaceExceeded,
)
from .fields.forms import LogForm, d_field, field_form_basis
from .fields.laurent import exact_is_zero, known_nonzero
from .witt.vector import WittVector

F_DEGREE_CAP = 64


def ord_p(p, m):
    assert m >= 1
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return k


def _weight_exp(x, idx):
    """Paper subscript of comps[idx]: the power of p weighting its valuation."""
    return x.n - 1 - idx


def component_valuations(x):
    """Per-component valuations (None for exact zero)."""
    return [c.valuation() for c in x.comps]


def naive_level(x):
    """Minimal m with x in fil_m: max over components of -p^j v, floored at 0."""
    m = 0
    for idx, v in enumerate(component_valuations(x)):
        if v is None:
            continue
        m = max(m, -(x.p ** _weight_exp(x, idx)) * v)
    return m


def in_fil(x, m):
    return naive_level(x) <= m


def in_flat_fil(x, m):
    """Membership in the no-log refinement of fil_m (m >= 1)."""
    assert m >= 1
    if not in_fil(x, m):
        return False
    i0 = ord_p(x.p, m)
    if i0 >= x.n:
        return True
    idx = x.n - 1 - i0
    v = x.comps[idx].valuation()
    if v is None:
        return True
    return (x.p ** i0) * v > -m


def _boundary(x, idx, L):
    """Boundary coefficient of comps[idx] at level L, or None if the slot
    does not exist (p^j does not divide L)."""
    j = _weight_exp(x, idx)
    pj = x.p ** j
    if L % pj:
        return None
    e = -L // pj
    return x.comps[idx].coefficient(e)


class FilDecomposition:
    """x = sum_j F^j(parts[j]) with every part in fil_level."""

    def __init__(self, parts, level):
        self.parts = list(parts)
        self.level = level

    def reconstruct(self):
        acc = None
        cur = None
        for j, part in enumerate(self.parts):
            y = part
            for _ in range(j):
                y = y.frobenius_F()
            acc = y if acc is None else acc + y
        return acc

    def is_valid_for(self, x):
        if any(naive_level(part) > self.level for part in self.parts):
            return False
        return self.reconstruct() == x

    def render(self):
        return [p.render() for p in self.parts]


def _strip_part(part, L):
    """One level-L cleaning pass: returns (clean_part, carry) with the carry
    destined for the next Frobenius degree, or raises if a class is nonzero.

    Returns None in place of a nonzero-class marker: caller checks classes
    first via _nonzero_class_at."""
    p = part.p
    r = ord_p(p, L)
    carry = WittVector.zeros(part.p, part.n, part.ring)
    guard = 0
    while naive_level(part) == L:
        guard += 1
        if guard > part.n + 2:
            raise AssertionError("level-L strip failed to terminate; class check missed something")
        for idx in range(part.n):
            a = _boundary(part, idx, L)
            if a is None or exact_is_zero(a):
                continue
            j = _weight_exp(part, idx)
            vcur = part.comps[idx].valuation()
            if vcur is None or (p ** j) * vcur != -L:
                continue
            assert j < min(r, part.n), "stripping a component with a nonzero graded class"
            root = a.pth_root()
            e = -L // (p ** (j + 1))
            tower = part.ring.obj
            mono = tower.top.monomial(e, root)
            y = WittVector.zeros(part.p, part.n, part.ring).replace(idx, mono)
            part = part - y.frobenius_F()
            carry = carry + y
            break
        else:
            raise AssertionError("level did not drop but no boundary found")
    return part, carry


def _nonzero_class_at(part, L, n):
    """Whether the graded class of `part` at level L is nonzero.

    Components below ord_p(L) carry classes in kappa/kappa^p; the component
    at ord_p(L) (when < n) carries its coefficient in kappa, injectively."""
    p = part.p
    r = ord_p(p, L)
    for idx in range(n):
        a = _boundary(part, idx, L)
        if a is None or not known_nonzero(a):
            continue
        j = _weight_exp(part, idx)
        if j == r and r < n:
            return True
        if j < min(r, n):
            if not a.is_pth_power():
                return True
        # j > r cannot happen: p^j | L forces j <= r
    return False


def filf_level(x, cap=F_DEGREE_CAP, want_witness=True):
    """Minimal s with x in the Frobenius saturation of fil_s, plus a witness
    decomposition valid at level s."""
    parts = [x]
    L = max((naive_level(pt) for pt in parts), default=0)
    while L > 0:
        if any(naive_level(pt) == L and _nonzero_class_at(pt, L, x.n) for pt in parts):
            break
        newparts = list(parts)
        for j in range(len(newparts)):
            if naive_level(newparts[j]) < L:
                continue
            clean, carry = _strip_part(newparts[j], L)
            newparts[j] = clean
            if not carry.is_zero():
                if j + 1 >= len(newparts):
                    if len(newparts) >= cap:
                        raise CapExceeded(f"F-degree exceeded the cap {cap}")
                    newparts.append(carry)
                else:
                    newparts[j + 1] = newparts[j + 1] + carry
        parts = newparts
        newL = max((naive_level(pt) for pt in parts), default=0)
        assert newL < L, "strip did not lower the level"
        L = newL
    s = L
    if want_witness:
        witness = FilDecomposition(parts, s)
        return s, witness
    return s, None


def in_filf(x, m):
    return filf_level(x, want_witness=False)[0] <= m


# -- delta and theta-bar ----------------------------------------------------------


def delta_form(x):
    """The literal 1-form sum_j a_j^(p^j - 1) d(a_j) over the tower of x."""
    tower = x.ring.obj
    basis = field_form_basis(tower)
    acc = LogForm.zero(tower.top, 1, basis)
    for idx in range(x.n):
        j = _weight_exp(x, idx)
        a = x.comps[idx]
        if exact_is_zero(a):
            continue
        da = d_field(tower, a)
        if j > 0:
            da = da.scale(a ** (x.p ** j - 1))
        acc = acc + da
    return acc


def delta_reduced(x, m):
    """Boundary of delta(x) at level m: basis symbol -> kappa coefficient of
    t^(-m); defined for x in fil_m."""
    if not in_fil(x, m):
        raise InvalidDecomposition(f"element not in fil_{m}")
    tower = x.ring.obj
    form = delta_form(x)
    out = {}
    for (i,), series in form.coeffs.items():
        c = series.coefficient(-m)
        if not exact_is_zero(c):
            out[form.basis[i]] = c
    return out


class DBarElement:
    """kappa[F] (x) (log forms at the boundary window): F-degree -> reduced form."""

    def __init__(self, tower, m, terms):
        self.tower = tower
        self.m = m
        self.terms = {j: d for j, d in terms.items() if d}

    def is_zero(self):
        return all(
            not known_nonzero(c) for d in self.terms.values() for c in d.values()
        )

    def dlog_coord(self, j):
        tvar = self.tower.descriptor.layers[-1][1]
        d = self.terms.get(j, {})
        return d.get(("dlog", tvar))

    def dlog_is_zero(self):
        tvar = self.tower.descriptor.layers[-1][1]
        return all(
            not known_nonzero(c)
            for d in self.terms.values()
            for sym, c in d.items()
            if sym == ("dlog", tvar)
        )

    def collapse(self):
        """Sum the F-degrees coefficientwise (the kappa[F] -> kappa collapse)."""
        out = {}
        for d in self.terms.values():
            for sym, c in d.items():
                if sym in out:
                    out[sym] = out[sym] + c
                else:
                    out[sym] = c
        return {sym: c for sym, c in out.items() if not exact_is_zero(c)}

    def eq(self, other):
        assert self.m == other.m
        js = set(self.terms) | set(other.terms)
        for j in js:
            a = self.terms.get(j, {})
            b = other.terms.get(j, {})
            for sym in set(a) | set(b):
                ca, cb = a.get(sym), b.get(sym)
                if ca is None:
                    if known_nonzero(cb):
                        return False
                elif cb is None:
                    if known_nonzero(ca):
                        return False
                else:
                    if not _coeff_eq(ca, cb):
                        return False
        return True

    def render(self):
        parts = []
        for j in sorted(self.terms):
            body = " + ".join(
                f"({c.render() if hasattr(c, 'render') else c}) {('d(%s)' % s[1]) if s[0]=='d' else 'dlog(%s)' % s[1]}"
                for s, c in sorted(self.terms[j].items())
            )
            parts.append(f"F^{j} (x) [{body}]")
        return " + ".join(parts) if parts else "0"


def _coeff_eq(a, b):
    r = a == b
    return bool(r)


def theta_bar(decomp, x=None):
    """theta-bar of a level-m decomposition: sum_j F^j (x) delta_m(x_j)."""
    m = decomp.level
    if m < 1:
        raise InvalidDecomposition("theta-bar needs level m >= 1")
    for part in decomp.parts:
        if naive_level(part) > m:
            raise InvalidDecomposition("decomposition part above its declared level")
    if x is not None and not decomp.is_valid_for(x):
        raise InvalidDecomposition("decomposition does not reconstruct the element")
    tower = decomp.parts[0].ring.obj
    terms = {}
    for j, part in enumerate(decomp.parts):
        d = delta_reduced(part, m)
        if d:
            terms[j] = d
    return DBarElement(tower, m, terms)


def flat_filf_min(x):
    """Least m >= 1 with x in the no-log saturation; equals the saturated
    level s when the dlog coordinates of theta-bar vanish there, else s+1."""
    s, witness = filf_level(x)
    if s == 0:
        return 1
    if ord_p(x.p, s) >= x.n:
        return s
    db = theta_bar(witness)
    return s if db.dlog_is_zero() else s + 1


def in_flat_filf(x, m):
    assert m >= 1
    return flat_filf_min(x) <= m


# -- closed form (n = 1, perfect residue field) -----------------------------------


def closed_form_level_n1(x):
    """Prime-to-p part maximum over pole exponents; perfect kappa, n = 1 only."""
    assert x.n == 1
    p = x.p
    best = 0
    c = x.comps[0]
    for e, coeff in c.terms.items():
        if e >= 0 or not known_nonzero(coeff):
            continue
        l = -e
        while l % p == 0:
            l //= p
        best = max(best, l)
    return best


# -- Prop 4.1 verification ----------------------------------------------------------


def prop41_h(parts):
    """The kernel map: (x_j) -> (F(x_0), F(x_1) - x_0, ..., -x_last)."""
    out = []
    prev = None
    for j, xj in enumerate(parts):
        y = xj.frobenius_F()
        if prev is not None:
            y = y - prev
        out.append(y)
        prev = parts[j]
    if prev is not None:
        out.append(-prev)
    return out


def verify_prop41(xs, m):
    """Check that a tuple with sum_j F^j(x_j) = 0 and parts in fil_m lies in
    the image of h, by the back-substitution the exactness proof describes."""
    report = {"m": m, "in_fil_m": True, "sums_to_zero": None, "in_image": None, "y": None}
    for xj in xs:
        if naive_level(xj) > m:
            report["in_fil_m"] = False
            return report
    total = FilDecomposition(list(xs), m).reconstruct()
    report["sums_to_zero"] = total.is_zero()
    if not report["sums_to_zero"]:
        return report
    p = xs[0].p
    mp = m // p
    cur = list(xs)
    zeros = WittVector.zeros(xs[0].p, xs[0].n, xs[0].ring)
    ys = [zeros for _ in range(max(0, len(xs) - 1))]
    ok = True
    for i in range(len(cur) - 1, 0, -1):
        xi = cur[i]
        if naive_level(xi) > mp:
            ok = False
            break
        # fold in h(y) for y with y_{i-1} = xi: slot i gains -xi (clears),
        # slot i-1 gains F(xi)
        ys[i - 1] = ys[i - 1] + xi
        cur[i] = zeros
        cur[i - 1] = cur[i - 1] + xi.frobenius_F()
    if ok and not cur[0].is_zero():
        ok = False
    report["in_image"] = ok
    report["y"] = [y.render() for y in ys]
    return report


# -- brute-force oracle -------------------------------------------------------------


class _F2Solver:
    """Bitset row echelon over F_2 with combination tracking."""

    def __init__(self):
        self.pivots = {}  # pivot bit -> (vec, combo)

    def _reduce(self, v, combo=0):
        while v:
            top = v.bit_length() - 1
            row = self.pivots.get(top)
            if row is None:
                return v, combo
            v ^= row[0]
            combo ^= row[1]
        return 0, combo

    def add(self, v, combo):
        v2, c2 = self._reduce(v, combo)
        if v2:
            self.pivots[v2.bit_length() - 1] = (v2, c2)
            return True
        return False

    def membership(self, v):
        v2, _ = self._reduce(v)
        return v2 == 0

    def solve(self, v):
        """Combination hitting v, or None."""
        v2, c2 = self._reduce(v)
        return c2 if v2 == 0 else None


def _kappa_coords(kappa, c):
    """F_p coordinates of c in a prime field or an extension of a prime field."""
    if kappa.base is None:
        return (c.rep,)
    assert kappa.base.base is None, "oracle supports kappa of degree <= 1 over F_p"
    return tuple(a.rep for a in c.rep)


def _encode(kappa, poly, lo, hi, p):
    """Bit encoding of {exp: kappa-elem} over the window [lo, hi)."""
    d = kappa.deg if kappa.base is not None else 1
    v = 0
    for e, c in poly.items():
        if c.is_zero():
            continue
        assert lo <= e < hi, f"exponent {e} outside oracle window"
        for b, bit in enumerate(_kappa_coords(kappa, c)):
            if bit % p:
                v |= 1 << ((e - lo) * d + b)
    return v


def _encode_target(kappa, poly, lo, hi, p):
    """As _encode, but None when a nonzero term falls outside the window
    (the span cannot reach it, so membership is simply false)."""
    for e, c in poly.items():
        if not c.is_zero() and not (lo <= e < hi):
            return None
    return _encode(kappa, poly, lo, hi, p)


def _pole_dict(c):
    """Pole part of an exact Laurent element as {exp: coeff}."""
    return {e: v for e, v in c.terms.items() if e < 0 and not v.is_zero()}


def _witt2_rep(x):
    """Pole-only transversal representative of x mod W_2(O), p = 2."""
    A = x.comps[0]
    B = x.comps[1]
    Ap = _pole_dict(A)
    Aint = {e: v for e, v in A.terms.items() if e >= 0}
    corr = _poly_mul(Aint, Ap)
    Bfull = _poly_add(dict(B.terms), corr)
    return Ap, _pole_dict_from(Bfull)


def _pole_dict_from(d):
    return {e: v for e, v in d.items() if e < 0 and not v.is_zero()}


def _poly_add(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e)
        s = c if s is None else s + c
        if s.is_zero():
            out.pop(e, None)
        else:
            out[e] = s
    return out


def _poly_mul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            c = c1 * c2
            s = out.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
    return out


def _frob_poly(d, k, p):
    """Componentwise p^k-th power of a {exp: kappa} dict."""
    out = {}
    for e, c in d.items():
        out[e * (p ** k)] = c ** (p ** k)
    return out


ORACLE_MAX_POLE = 8
ORACLE_FDEG = 3
ORACLE_KERNEL_CAP = 24


class _OracleCache:
    def __init__(self):
        self.n1 = {}
        self.tops = {}
        self.bottoms = {}


_ORACLE = _OracleCache()


def _check_domain(x):
    p = x.p
    if p != 2 or x.n > 2:
        raise SearchSpaceExceeded("oracle domain: p = 2, n <= 2")
    kappa = x.ring.obj.layers[0]
    if len(x.ring.obj.layers) != 2:
        raise SearchSpaceExceeded("oracle domain: kappa((t)) towers only")
    if kappa.order not in (2, 4):
        raise SearchSpaceExceeded("oracle domain: kappa in {F_2, F_4}")
    for c in x.comps:
        if not c.is_exact():
            raise SearchSpaceExceeded("oracle needs exact payloads")
        for e, v in c.terms.items():
            if e < -ORACLE_MAX_POLE and not v.is_zero():
                raise SearchSpaceExceeded("oracle domain: pole exponents >= -8")
    return kappa


def _n1_solver(kappa, m, J, p):
    key = (id(kappa), m, J)
    s = _ORACLE.n1.get(key)
    if s is None:
        s = _F2Solver()
        lo = -max(1, m * (p ** J))
        basis = _fp_basis(kappa)
        for j in range(J + 1):
            for l in range(1, m + 1):
                for b in basis:
                    g = {-l * (p ** j): b ** (p ** j)}
                    s.add(_encode(kappa, g, lo, 0, p), 0)
        s.window_lo = lo
        _ORACLE.n1[key] = s
    return s


def _fp_basis(kappa):
    if kappa.base is None:
        return [kappa.one()]
    g = kappa.gen()
    return [kappa.one() if i == 0 else g ** i for i in range(kappa.deg)]


def brute_in_filf_n1(x, m, J=ORACLE_FDEG):
    kappa = _check_domain(x)
    p = x.p
    pole = _pole_dict(x.comps[0])
    if not pole:
        return True
    if m == 0:
        return False
    s = _n1_solver(kappa, m, J, p)
    v = _encode_target(kappa, pole, s.window_lo, 0, p)
    return v is not None and s.membership(v)


def _tops_system(kappa, m, J, p):
    """Solver for sum_j T_j^(p^j) with T_j supported on [-(m//p), -1];
    combo bits index (j, exponent slot, kappa basis coordinate)."""
    key = (id(kappa), m, J)
    sys = _ORACLE.tops.get(key)
    if sys is not None:
        return sys
    half = m // p
    lo = -max(1, half * (p ** J))
    basis = _fp_basis(kappa)
    d = len(basis)
    solver = _F2Solver()
    gens = []  # combo bit -> (j, exp, basis elem)
    bit = 0
    for j in range(J + 1):
        for l in range(1, half + 1):
            for b in basis:
                g = {-l * (p ** j): b ** (p ** j)}
                solver.add(_encode(kappa, g, lo, 0, p), 1 << bit)
                gens.append((j, -l, b))
                bit += 1
    # kernel basis: generator combinations that reduce to zero
    kernel = []
    probe = _F2Solver()
    for i, (j, e, b) in enumerate(gens):
        g = {e * (p ** j): b ** (p ** j)}
        v = _encode(kappa, g, lo, 0, p)
        r, c = probe._reduce(v, 1 << i)
        if r:
            probe.pivots[r.bit_length() - 1] = (r, c)
        else:
            kernel.append(c)
    sys = {"solver": solver, "gens": gens, "kernel": kernel, "lo": lo, "half": half}
    _ORACLE.tops[key] = sys
    return sys


def _bottom_solver(kappa, m, J, p):
    key = (id(kappa), m, J)
    s = _ORACLE.bottoms.get(key)
    if s is None:
        s = _F2Solver()
        lo = -max(1, m * (p ** J))
        for j in range(J + 1):
            for l in range(1, m + 1):
                for b in _fp_basis(kappa):
                    g = {-l * (p ** j): b ** (p ** j)}
                    s.add(_encode(kappa, g, lo, 0, p), 0)
        s.window_lo = lo
        _ORACLE.bottoms[key] = s
    return s


def _combo_to_tops(sys, combo, J):
    tops = [dict() for _ in range(J + 1)]
    i = 0
    c = combo
    while c:
        if c & 1:
            j, e, b = sys["gens"][i]
            cur = tops[j].get(e)
            cur = b if cur is None else cur + b
            if cur.is_zero():
                tops[j].pop(e, None)
            else:
                tops[j][e] = cur
        c >>= 1
        i += 1
    return tops


def brute_in_filf_n2(x, m, J=ORACLE_FDEG):
    kappa = _check_domain(x)
    p = x.p
    repA, repB = _witt2_rep(x)
    if not repA and not repB:
        return True
    if m == 0:
        return False
    tops_sys = _tops_system(kappa, m, J, p)
    lo = tops_sys["lo"]
    targetA = _encode_target(kappa, repA, lo, 0, p)
    if targetA is None:
        return False
    particular = tops_sys["solver"].solve(targetA)
    if particular is None:
        return False
    kernel = tops_sys["kernel"]
    if len(kernel) > ORACLE_KERNEL_CAP:
        raise SearchSpaceExceeded(f"kernel dimension {len(kernel)} above cap")
    bots = _bottom_solver(kappa, m, J, p)
    for mask in range(1 << len(kernel)):
        combo = particular
        mm = mask
        ki = 0
        while mm:
            if mm & 1:
                combo ^= kernel[ki]
            mm >>= 1
            ki += 1
        tops = _combo_to_tops(tops_sys, combo, J)
        # e2 of the Frobenius images
        imgs = [_frob_poly(tops[j], j, p) for j in range(J + 1)]
        e2 = {}
        for i in range(J + 1):
            if not imgs[i]:
                continue
            for j2 in range(i + 1, J + 1):
                if imgs[j2]:
                    e2 = _poly_add(e2, _poly_mul(imgs[i], imgs[j2]))
        target = _poly_add(repB, e2)  # char 2: plus equals minus
        enc = _encode_target(kappa, target, bots.window_lo, 0, p)
        if enc is not None and bots.membership(enc):
            return True
    return False


def brute_force_filf_level(x, max_level=None, J=ORACLE_FDEG):
    """Minimal m with x in the saturation, by bounded independent search."""
    _check_domain(x)
    bound = max_level if max_level is not None else naive_level(x)
    decide = brute_in_filf_n1 if x.n == 1 else brute_in_filf_n2
    for m in range(0, bound + 1):
        if decide(x, m, J=J):
            return m
    raise SearchSpaceExceeded(f"no decomposition found up to level {bound}")
