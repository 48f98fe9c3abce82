"""Base-ring adapters for Witt vectors.

A small uniform protocol (zero/one/from_int/add/mul/neg/eq/is_zero plus
characteristic and, in char p, frobenius and p-th roots) lets the same
structure-polynomial evaluation run over Z, Z/m, finite fields, rational
function layers, Laurent towers and Galois rings.
"""

from __future__ import annotations

from ..errors import UnsupportedRing


class IntRing:
    """Z: the p-torsion-free testing backend for ghost checks."""

    characteristic = 0
    zero = 0
    one = 1

    @staticmethod
    def from_int(k):
        return k

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def eq(a, b):
        return a == b

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def random(rng):
        return rng.randrange(-4, 5)

    def __repr__(self):
        return "Z"


class IntModRing:
    def __init__(self, m):
        self.m = m
        self.characteristic = m
        self.zero = 0
        self.one = 1 % m

    def from_int(self, k):
        return k % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def neg(self, a):
        return (-a) % self.m

    @staticmethod
    def eq(a, b):
        return a == b

    @staticmethod
    def is_zero(a):
        return a == 0

    def random(self, rng):
        return rng.randrange(self.m)

    def __repr__(self):
        return f"Z/{self.m}"


class ElemRing:
    """Adapter over any of our field/tower/ring objects whose elements
    carry operator arithmetic."""

    def __init__(self, obj, characteristic=None, random_kw=None):
        self.obj = obj
        self.zero = obj.zero()
        self.one = obj.one()
        ch = characteristic
        if ch is None:
            ch = getattr(obj, "char", None)
            if ch is None:
                ch = getattr(obj, "p", None)
        self.characteristic = ch
        self.random_kw = random_kw or {}

    def from_int(self, k):
        if self.characteristic:
            k %= self.characteristic
        if k == 0:
            return self.zero
        acc = self.one
        for _ in range(k - 1):
            acc = acc + self.one
        return acc

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def eq(a, b):
        r = a == b
        return bool(r)

    @staticmethod
    def is_zero(a):
        from ..fields.laurent import exact_is_zero

        return exact_is_zero(a)

    def coerce(self, x):
        return self.obj.coerce(x)

    def frobenius(self, a):
        if hasattr(a, "frobenius"):
            return a.frobenius()
        return a ** self.characteristic

    def pth_root(self, a):
        return a.pth_root()

    def is_pth_power(self, a):
        if hasattr(a, "is_pth_power"):
            return a.is_pth_power()
        return True

    def random(self, rng):
        return self.obj.random(rng, **self.random_kw)

    def __repr__(self):
        return repr(self.obj)


def ring_of(obj, **kw):
    if isinstance(obj, (IntRing, IntModRing, ElemRing)):
        return obj
    return ElemRing(obj, **kw)


_RING_CACHE = {}


def ring_for(obj, **kw):
    """Shared ElemRing per underlying field/tower object, so vectors built
    in different places interoperate."""
    if isinstance(obj, (IntRing, IntModRing, ElemRing)):
        return obj
    key = id(obj)
    r = _RING_CACHE.get(key)
    if r is None:
        r = _RING_CACHE[key] = ElemRing(obj, **kw)
    return r


def require_char_p(ring, p):
    if ring.characteristic != p:
        from ..errors import CharacteristicMismatch

        raise CharacteristicMismatch(
            f"need characteristic {p}, base ring has {ring.characteristic}"
        )


def require_torsion_free(ring):
    if ring.characteristic != 0:
        raise UnsupportedRing("ghost map needs a p-torsion-free coefficient ring")
