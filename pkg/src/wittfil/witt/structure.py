"""Universal Witt structure polynomials, solved once from ghost identities.

For each (p, n) we compute integer polynomials S_k, M_k, N_k in the
components of one or two vectors such that the ghost map turns them into
coordinatewise sum, product and negation.  The divisions by p^k are exact
integer polynomial divisions; nothing is ever reduced until a char-p copy
is requested.

Indexing is standard: components (x_0, ..., x_{n-1}) with ghost
w_k = sum_{i<=k} p^i x_i^(p^(k-i)); x_0 is the additive coordinate.
"""

from __future__ import annotations

import threading

from ..errors import CapExceeded

_LENGTH_CAP = 4


def set_length_cap(n):
    global _LENGTH_CAP
    _LENGTH_CAP = n


def length_cap():
    return _LENGTH_CAP


# -- integer polynomial dicts: {exponent tuple: int} ---------------------------


def _padd(a, b):
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _pneg(a):
    return {k: -c for k, c in a.items()}

def _pscale(a, c):
    if c == 0:
        return {}
    return {k: v * c for k, v in a.items()}


def _pmul(a, b):
    out = {}
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            k = tuple(x + y for x, y in zip(k1, k2))
            s = out.get(k, 0) + c1 * c2
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def _ppow(a, e):
    k0 = next(iter(a), None)
    nvars = len(k0) if k0 is not None else 0
    r = {(0,) * nvars: 1}
    b = a
    while e:
        if e & 1:
            r = _pmul(r, b)
        b = _pmul(b, b)
        e >>= 1
    return r


def _pdiv_exact(a, d):
    out = {}
    for k, c in a.items():
        q, r = divmod(c, d)
        if r:
            raise AssertionError("non-exact division in ghost solving")
        out[k] = q
    return out


def _var(nvars, i, exp=1):
    k = [0] * nvars
    k[i] = exp
    return {tuple(k): 1}


def _ghost(p, k, nvars, offset):
    """w_k in variables offset..offset+k (exponents p^(k-i), coefficients p^i)."""
    out = {}
    for i in range(k + 1):
        out = _padd(out, _pscale(_var(nvars, offset + i, p ** (k - i)), p ** i))
    return out


class WittStructure:
    """Cached structure polynomials for one (p, n)."""

    def __init__(self, p, n):
        self.p = p
        self.n = n
        nv2 = 2 * n
        self.add = []
        self.mul = []
        self.neg = []
        for k in range(n):
            wx = _ghost(p, k, nv2, 0)
            wy = _ghost(p, k, nv2, n)
            target_add = _padd(wx, wy)
            target_mul = _pmul(wx, wy)
            acc_a, acc_m = {}, {}
            for i in range(k):
                acc_a = _padd(acc_a, _pscale(_ppow(self.add[i], p ** (k - i)), p ** i))
                acc_m = _padd(acc_m, _pscale(_ppow(self.mul[i], p ** (k - i)), p ** i))
            self.add.append(_pdiv_exact(_padd(target_add, _pneg(acc_a)), p ** k))
            self.mul.append(_pdiv_exact(_padd(target_mul, _pneg(acc_m)), p ** k))
        for k in range(n):
            wx = _ghost(p, k, n, 0)
            acc = {}
            for i in range(k):
                acc = _padd(acc, _pscale(_ppow(self.neg[i], p ** (k - i)), p ** i))
            self.neg.append(_pdiv_exact(_padd(_pneg(wx), _pneg(acc)), p ** k))
        self.add_modp = [self._modp(f) for f in self.add]
        self.mul_modp = [self._modp(f) for f in self.mul]
        self.neg_modp = [self._modp(f) for f in self.neg]

    def _modp(self, f):
        """Evaluation plan [(coeff, ((var, exp), ...))] with coeff reduced mod p."""
        plan = []
        for k, c in sorted(f.items()):
            c %= self.p
            if c == 0:
                continue
            plan.append((c, tuple((i, e) for i, e in enumerate(k) if e)))
        return plan

    def plan(self, which, char_p):
        table = {
            ("add", True): self.add_modp,
            ("mul", True): self.mul_modp,
            ("neg", True): self.neg_modp,
        }
        if char_p:
            return table[(which, True)]
        full = {"add": self.add, "mul": self.mul, "neg": self.neg}[which]
        return [
            [(c, tuple((i, e) for i, e in enumerate(k) if e)) for k, c in sorted(f.items())]
            for f in full
        ]


_CACHE = {}
_LOCK = threading.Lock()


def structure(p, n):
    if n > _LENGTH_CAP:
        raise CapExceeded(
            f"Witt length {n} above the structure-polynomial cap {_LENGTH_CAP}; "
            "raise it with set_length_cap()"
        )
    key = (p, n)
    s = _CACHE.get(key)
    if s is None:
        with _LOCK:
            s = _CACHE.get(key)
            if s is None:
                s = WittStructure(p, n)
                _CACHE[key] = s
    return s


def eval_plan(plan_k, values, ring):
    """Evaluate one component polynomial at `values` (list of ring elements)."""
    powcache = {}

    def vpow(i, e):
        r = powcache.get((i, e))
        if r is None:
            v = values[i]
            r = None
            b = v
            ee = e
            while ee:
                if ee & 1:
                    r = b if r is None else ring.mul(r, b)
                ee >>= 1
                if ee:
                    b = ring.mul(b, b)
            powcache[(i, e)] = r
        return r

    acc = None
    for c, mono in plan_k:
        term = None
        skip = False
        for i, e in mono:
            if ring.is_zero(values[i]):
                skip = True
                break
        if skip:
            continue
        for i, e in mono:
            f = vpow(i, e)
            term = f if term is None else ring.mul(term, f)
        if term is None:
            term = ring.one
        if c != 1:
            term = ring.mul(ring.from_int(c), term)
        acc = term if acc is None else ring.add(acc, term)
    return ring.zero if acc is None else acc
