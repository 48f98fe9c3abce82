"""Computable field towers.

A descriptor stacks layers: a finite field at the bottom, then optionally
a rational function layer, optionally its perfection, then any number of
Laurent series layers.  Towers are cached per descriptor so that elements
built from equal descriptors interoperate.

The declared p-base of the top field is the set of non-perfected rational
variables plus every Laurent variable; perfect layers have an empty
p-base.  The residue view of a Laurent tower (same layers minus the top)
is what filtrations and differential forms consume.
"""

from __future__ import annotations

from ..errors import UnsupportedResidueField
from .finite import GF
from .laurent import LaurentField, LaurentElem, DEFAULT_PREC
from .perfection import PerfectionField
from .rational import RationalField


def _freeze_layer(spec):
    kind = spec["kind"]
    if kind == "galois":
        mod = spec.get("modulus")
        if mod is not None:
            return ("galois", spec.get("e", len(mod) - 1), tuple(mod))
        return ("galois", spec.get("e", 1))
    if kind == "rational":
        return ("rational", tuple(spec["vars"]))
    if kind == "perfection":
        return ("perfection",)
    if kind == "laurent":
        return ("laurent", spec["var"])
    raise ValueError(f"unknown layer kind {kind!r}")


class FieldDescriptor:
    def __init__(self, p, layers):
        self.p = p
        self.layers = tuple(_freeze_layer(s) if isinstance(s, dict) else tuple(s) for s in layers)
        self._validate()

    def _validate(self):
        ls = self.layers
        if not ls or ls[0][0] != "galois":
            raise ValueError("bottom layer must be a finite field")
        for i, l in enumerate(ls[1:], start=1):
            if l[0] == "galois":
                raise ValueError("finite field layer only at the bottom")
            if l[0] == "rational" and ls[i - 1][0] != "galois":
                raise ValueError("rational layer must sit on the finite field")
            if l[0] == "perfection" and ls[i - 1][0] != "rational":
                raise ValueError("perfection layer must sit on a rational layer")
        names = self.var_names()
        if len(names) != len(set(names)):
            raise ValueError("duplicate variable names in descriptor")

    def var_names(self):
        out = []
        for l in self.layers:
            if l[0] == "rational":
                out.extend(l[1])
            elif l[0] == "laurent":
                out.append(l[1])
        return out

    def key(self):
        return (self.p, self.layers)

    def to_json(self):
        out = []
        for l in self.layers:
            if l[0] == "galois":
                if len(l) > 2:
                    out.append({"kind": "galois", "e": l[1], "modulus": list(l[2])})
                else:
                    out.append({"kind": "galois", "e": l[1]})
            elif l[0] == "rational":
                out.append({"kind": "rational", "vars": list(l[1])})
            elif l[0] == "perfection":
                out.append({"kind": "perfection"})
            else:
                out.append({"kind": "laurent", "var": l[1]})
        return {"p": self.p, "layers": out}

    def __repr__(self):
        parts = []
        for l in self.layers:
            if l[0] == "galois":
                parts.append(f"F{self.p ** l[1]}")
            elif l[0] == "rational":
                parts.append("(" + ",".join(l[1]) + ")")
            elif l[0] == "perfection":
                parts = ["perf(" + "".join(parts) + ")"]
            else:
                parts.append(f"(({l[1]}))")
        return "".join(parts)


_TOWER_CACHE = {}


def build_tower(descriptor, default_prec=DEFAULT_PREC):
    if isinstance(descriptor, dict):
        descriptor = FieldDescriptor(descriptor["p"], descriptor["layers"])
    key = (descriptor.key(), default_prec)
    t = _TOWER_CACHE.get(key)
    if t is None:
        t = Tower(descriptor, default_prec)
        _TOWER_CACHE[key] = t
    return t


class Tower:
    def __init__(self, descriptor, default_prec=DEFAULT_PREC, _layers=None):
        self.descriptor = descriptor
        self.p = descriptor.p
        self.default_prec = default_prec
        if _layers is not None:
            self.layers = _layers
        else:
            self.layers = []
            for spec in descriptor.layers:
                if spec[0] == "galois":
                    if len(spec) > 2:
                        from .finite import extension_field, prime_field

                        if spec[1] == 1:
                            self.layers.append(prime_field(self.p))
                        else:
                            self.layers.append(
                                extension_field(prime_field(self.p), spec[2])
                            )
                    else:
                        self.layers.append(GF(self.p, spec[1]))
                elif spec[0] == "rational":
                    self.layers.append(RationalField(self.layers[-1], spec[1]))
                elif spec[0] == "perfection":
                    self.layers.append(PerfectionField(self.layers[-1]))
                else:
                    self.layers.append(
                        LaurentField(self.layers[-1], spec[1], default_prec)
                    )
        self.top = self.layers[-1]

    # -- structure ----------------------------------------------------------

    def is_laurent(self):
        return self.descriptor.layers[-1][0] == "laurent"

    def residue(self):
        """The coefficient tower of the top Laurent layer."""
        if not self.is_laurent():
            raise UnsupportedResidueField("top layer is not a Laurent layer")
        sub = FieldDescriptor(self.p, self.descriptor.layers[:-1])
        return Tower(sub, self.default_prec, _layers=self.layers[:-1])

    def depth_laurent(self):
        return sum(1 for l in self.descriptor.layers if l[0] == "laurent")

    def is_perfect(self):
        """Perfect fields: finite fields, perfection tops, towers of those."""
        return len(self.p_base_names()) == 0

    def p_base_names(self):
        names = []
        perfected = any(l[0] == "perfection" for l in self.descriptor.layers)
        for l in self.descriptor.layers:
            if l[0] == "rational" and not perfected:
                names.extend(l[1])
            elif l[0] == "laurent":
                names.append(l[1])
        return names

    def p_base(self):
        """Declared p-base as elements of the top field (empty if perfect)."""
        return [self.var(n) for n in self.p_base_names()]

    # -- elements -----------------------------------------------------------

    def zero(self):
        return self.top.zero()

    def one(self):
        return self.top.one()

    def coerce(self, x):
        """Coerce ints and lower-layer elements into the top field."""
        for i in range(len(self.layers) - 1, -1, -1):
            layer = self.layers[i]
            if self._belongs(layer, x):
                for up in self.layers[i + 1:]:
                    x = up.coerce(x)
                return x
        return self.top.coerce(x)  # ints and friends

    @staticmethod
    def _belongs(layer, x):
        from .finite import FFElem
        from .rational import RatFunc
        from .perfection import PerfElem

        if isinstance(x, FFElem):
            return x.field is layer
        if isinstance(x, RatFunc):
            return x.rf is layer
        if isinstance(x, PerfElem):
            return x.pf is layer
        if isinstance(x, LaurentElem):
            return x.layer is layer
        return False

    def var(self, name):
        """The variable `name` as an element of the top field."""
        for i, spec in enumerate(self.descriptor.layers):
            if spec[0] == "rational" and name in spec[1]:
                x = self.layers[i].var(name)
                for up in self.layers[i + 1:]:
                    x = up.coerce(x)
                return x
            if spec[0] == "laurent" and spec[1] == name:
                x = self.layers[i].uniformizer()
                for up in self.layers[i + 1:]:
                    x = up.coerce(x)
                return x
        if name == "g" and self.descriptor.layers[0] == ("galois", self.layers[0].deg):
            return self.coerce(self.layers[0].gen())
        if name == "g" and self.layers[0].deg > 1:
            return self.coerce(self.layers[0].gen())
        raise KeyError(f"unknown variable {name!r}")

    def uniformizer(self):
        if not self.is_laurent():
            raise UnsupportedResidueField("no uniformizer: not a Laurent tower")
        return self.top.uniformizer()

    def random(self, rng, **kw):
        return self.top.random(rng, **kw)

    def __repr__(self):
        return repr(self.descriptor)


# -- convenience constructors -------------------------------------------------


def laurent_tower(p, e=1, rational_vars=(), perfect=False, laurent_vars=("t",), default_prec=DEFAULT_PREC):
    layers = [{"kind": "galois", "e": e}]
    if rational_vars:
        layers.append({"kind": "rational", "vars": list(rational_vars)})
        if perfect:
            layers.append({"kind": "perfection"})
    for v in laurent_vars:
        layers.append({"kind": "laurent", "var": v})
    return build_tower({"p": p, "layers": layers}, default_prec)


def field_arith(x, y, op):
    """Spec surface for the four field operations; operators do the work."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    if op == "inv":
        return x.inv()
    raise ValueError(f"unknown op {op!r}")


def frobenius(x):
    return x.frobenius()


def pth_root(x):
    return x.pth_root()
