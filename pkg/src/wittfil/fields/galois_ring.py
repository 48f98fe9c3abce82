"""Galois rings: exact models of W_n(F_q).

GR(p, n, e) is Z/p^n[x]/(f~) where f~ is the Hensel lift of the F_q
defining polynomial as a factor of x^(q-1) - 1; the class of x is then
the Teichmuller lift of the residue generator.  Frobenius is the ring
automorphism sending x to x^p; it reduces to a -> a^p mod p and is
invertible (order e).

Conversion to and from Witt components uses Teichmuller digit expansions:
z = sum_k p^k [d_k]  <->  components x_k = d_k^(p^k).
"""

from __future__ import annotations

from ..errors import DivisionByZero, UnsupportedRing
from .finite import GF, FFElem
from .polys import Poly


class GRElem:
    __slots__ = ("ring", "rep")

    def __init__(self, ring, rep):
        self.ring = ring
        self.rep = rep  # tuple of ints mod p^n, length e, ascending powers of x

    def __add__(self, other):
        other = self.ring.coerce(other)
        m = self.ring.pn
        return GRElem(self.ring, tuple((a + b) % m for a, b in zip(self.rep, other.rep)))

    __radd__ = __add__

    def __neg__(self):
        m = self.ring.pn
        return GRElem(self.ring, tuple((-a) % m for a in self.rep))

    def __sub__(self, other):
        return self + (-self.ring.coerce(other))

    def __rsub__(self, other):
        return self.ring.coerce(other) - self

    def __mul__(self, other):
        other = self.ring.coerce(other)
        return self.ring._mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k):
        r = self.ring.one()
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __eq__(self, other):
        if not isinstance(other, GRElem):
            try:
                other = self.ring.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.ring is other.ring and self.rep == other.rep

    def __hash__(self):
        return hash((id(self.ring), self.rep))

    def is_zero(self):
        return all(a == 0 for a in self.rep)

    def __bool__(self):
        return not self.is_zero()

    def is_unit(self):
        return not self.reduce().is_zero()

    def reduce(self):
        """Reduction mod p into F_q."""
        p = self.ring.p
        return self.ring.fq.from_coeffs([a % p for a in self.rep]) if self.ring.e > 1 else self.ring.fq.coerce(self.rep[0])

    def inv(self):
        return self.ring.inv(self)

    def divp(self, k=1):
        """Exact division by p^k."""
        d = self.ring.p ** k
        if any(a % d for a in self.rep):
            raise UnsupportedRing("element not divisible by p^k")
        return GRElem(self.ring, tuple(a // d for a in self.rep))

    def frobenius(self):
        return self.ring.frobenius(self)

    def inverse_frobenius(self):
        z = self
        for _ in range(self.ring.e - 1):
            z = self.ring.frobenius(z)
        return z

    def render(self):
        if self.ring.e == 1:
            return str(self.rep[0])
        parts = []
        for i, a in enumerate(self.rep):
            if a == 0:
                continue
            if i == 0:
                parts.append(str(a))
            else:
                head = "" if a == 1 else f"{a}*"
                parts.append(f"{head}g" + (f"^{i}" if i > 1 else ""))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return self.render()


class GaloisRing:
    def __init__(self, p, n, e=1):
        self.p = p
        self.n = n
        self.e = e
        self.pn = p ** n
        self.fq = GF(p, e)
        self.q = p ** e
        if e == 1:
            self.modulus = None
        else:
            self.modulus = _lift_modulus(p, n, e)  # ints mod p^n, ascending, monic
        self._zero = GRElem(self, (0,) * e)
        one = [0] * e
        one[0] = 1 % self.pn
        self._one = GRElem(self, tuple(one))
        self._frob_x_powers = None

    # -- basics ------------------------------------------------------------

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def from_int(self, k):
        rep = [0] * self.e
        rep[0] = k % self.pn
        return GRElem(self, tuple(rep))

    def coerce(self, x):
        if isinstance(x, GRElem) and x.ring is self:
            return x
        if isinstance(x, int):
            return self.from_int(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into Galois ring")

    def gen(self):
        if self.e == 1:
            return self.one()
        rep = [0] * self.e
        rep[1] = 1
        return GRElem(self, tuple(rep))

    def random(self, rng):
        return GRElem(self, tuple(rng.randrange(self.pn) for _ in range(self.e)))

    def elements(self):
        import itertools

        for rep in itertools.product(range(self.pn), repeat=self.e):
            yield GRElem(self, rep)

    @property
    def char(self):
        return self.pn

    def __repr__(self):
        return f"W_{self.n}(GF({self.q}))"

    # -- arithmetic -----------------------------------------------------------

    def _mul(self, x, y):
        m = self.pn
        e = self.e
        if e == 1:
            return GRElem(self, ((x.rep[0] * y.rep[0]) % m,))
        prod = [0] * (2 * e - 1)
        for i, a in enumerate(x.rep):
            if a == 0:
                continue
            for j, b in enumerate(y.rep):
                if b:
                    prod[i + j] = (prod[i + j] + a * b) % m
        for k in range(len(prod) - 1, e - 1, -1):
            c = prod[k]
            if c == 0:
                continue
            prod[k] = 0
            for i in range(e):
                prod[k - e + i] = (prod[k - e + i] - c * self.modulus[i]) % m
        return GRElem(self, tuple(prod[:e]))

    def inv(self, x):
        if not x.is_unit():
            raise DivisionByZero("non-unit in Galois ring")
        # Newton lift of the residue inverse
        w0 = x.reduce().inv()
        w = self.teichmuller(w0) if False else self._lift_ff(w0)
        two = self.from_int(2)
        k = 1
        while k < self.n:
            w = w * (two - x * w)
            k *= 2
        return w * (two - x * w) if (w * x) != self.one() else w

    def _lift_ff(self, a):
        """Naive coefficientwise lift F_q -> GR."""
        if self.e == 1:
            return self.from_int(a.rep)
        return GRElem(self, tuple(c.rep for c in a.rep))

    # -- Teichmuller and Frobenius ---------------------------------------------

    def teichmuller(self, a):
        """Multiplicative lift of a in F_q."""
        if not isinstance(a, FFElem):
            a = self.fq.coerce(a)
        if a.is_zero():
            return self.zero()
        z = self._lift_ff(a)
        for _ in range(self.n):
            z = z ** self.q
        return z

    def frobenius(self, z):
        if self.e == 1:
            return z
        if self._frob_x_powers is None:
            xp = self.gen() ** self.p
            pows = [self.one()]
            for _ in range(1, self.e):
                pows.append(pows[-1] * xp)
            self._frob_x_powers = pows
        acc = self.zero()
        for i, a in enumerate(z.rep):
            if a:
                acc = acc + self._frob_x_powers[i] * self.from_int(a)
        return acc

    # -- Witt component conversion ----------------------------------------------

    def teich_digits(self, z):
        """d_0, ..., d_(n-1) in F_q with z = sum p^k [d_k]."""
        digits = []
        cur = z
        for _ in range(self.n):
            d = cur.reduce()
            digits.append(d)
            cur = (cur - self.teichmuller(d)).divp()
        return digits

    def to_witt_components(self, z):
        """Standard-order Witt components (x_0, ..., x_(n-1)) over F_q."""
        comps = []
        for k, d in enumerate(self.teich_digits(z)):
            x = d
            for _ in range(k):
                x = x ** self.p
            comps.append(x)
        return tuple(comps)

    def from_witt_components(self, comps):
        z = self.zero()
        pk = 1
        for k, x in enumerate(comps):
            r = x
            for _ in range(k):
                r = r.pth_root()
            z = z + self.from_int(pk) * self.teichmuller(r)
            pk *= self.p
        return z


def _lift_modulus(p, n, e):
    """Hensel lift of the F_q defining polynomial to a factor of x^(q-1)-1
    over Z/p^n; returned as a tuple of ints (ascending, monic)."""
    fq = GF(p, e)
    fp = GF(p)
    q = p ** e
    # base factorisation over F_p: f * g = x^(q-1) - 1
    fbar = Poly.univariate(fp, [c.rep for c in fq.modulus])
    big = Poly.univariate(fp, [-1] + [0] * (q - 2) + [1])
    gbar, rem = big.divmod(fbar)
    assert rem.is_zero(), "defining polynomial must divide x^(q-1)-1"
    a, b = _bezout(fbar, gbar)

    def to_ints(poly, length):
        out = [0] * length
        for (k,), c in poly.terms.items():
            out[k] = c.rep
        return out

    pk = p
    f_int = to_ints(fbar, e + 1)
    g_int = to_ints(gbar, q - e)
    big_int = [-1] + [0] * (q - 2) + [1]
    while pk < p ** n:
        # delta = (big - f*g) / pk mod p
        prod = [0] * (q)
        for i, fi in enumerate(f_int):
            if fi:
                for j, gj in enumerate(g_int):
                    if gj:
                        prod[i + j] += fi * gj
        delta_coeffs = [((bi - pi) // pk) % p for bi, pi in zip(big_int, prod)]
        delta = Poly.univariate(fp, delta_coeffs)
        u = (b * delta) % fbar
        qq = (b * delta) // fbar
        v = a * delta + qq * gbar
        for (k,), c in u.terms.items():
            f_int[k] = (f_int[k] + pk * c.rep) % (p ** n)
        for (k,), c in v.terms.items():
            g_int[k] = (g_int[k] + pk * c.rep) % (p ** n)
        pk *= p
    return tuple(x % (p ** n) for x in f_int)


def _bezout(f, g):
    """a, b with a*f + b*g = 1 over F_p[x] (f, g coprime)."""
    field = f.field
    r0, r1 = f, g
    a0, a1 = Poly.const(field, 1, 1), Poly.zero(field, 1)
    b0, b1 = Poly.zero(field, 1), Poly.const(field, 1, 1)
    while not r1.is_zero():
        qq, rr = r0.divmod(r1)
        r0, r1 = r1, rr
        a0, a1 = a1, a0 - qq * a1
        b0, b1 = b1, b0 - qq * b1
    lead = r0.leading().inv()
    return a0 * lead, b0 * lead


_GR_CACHE = {}


def galois_ring(p, n, e=1):
    key = (p, n, e)
    r = _GR_CACHE.get(key)
    if r is None:
        r = _GR_CACHE[key] = GaloisRing(p, n, e)
    return r
