"""Expression grammar for field elements, Witt literals and Milnor symbols,
plus the field/group shorthand used on the command line.

    elem  := term (('+'|'-') term)*  [ '+' 'O' '(' var '^' int ')' ]
    term  := factor (('*'|'/')? factor)*
    factor:= int | '(' elem ')' | var ('^' int)?
    witt  := 'W' '(' elem ((';'|',') elem)* ')'
    milnor:= '{' elem (';' elem)* '}'

Field shorthand: F2, F4, F2(u), F2(u,v), perf(F2(u,T)), each optionally
followed by ((t)) layers, e.g. "F2(u)((t))" or "F2((t1))((t2))".
Group shorthand: products like "Gm^1 x W2 x Ga" (Ga = W1).
"""

from __future__ import annotations

import re

from .errors import ParseError
from .fields.laurent import LaurentElem
from .fields.tower import build_tower
from .modulus import SplitGroupDescriptor
from .witt.rings import ring_for
from .witt.vector import WittVector

_TOKEN = re.compile(
    r"\s*(?:(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(){};,]))"
)


def tokenize(src):
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            if src[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {src[pos]!r}", pos=pos)
        if m.group("int") is not None:
            out.append(("int", int(m.group("int")), m.start()))
        elif m.group("name") is not None:
            out.append(("name", m.group("name"), m.start()))
        else:
            out.append(("op", m.group("op"), m.start()))
        pos = m.end()
    out.append(("end", None, len(src)))
    return out


class _P:
    def __init__(self, tokens, tower):
        self.toks = tokens
        self.i = 0
        self.tower = tower

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind, value=None):
        t = self.next()
        if t[0] != kind or (value is not None and t[1] != value):
            raise ParseError(
                f"expected {value or kind}, found {t[1]!r}", pos=t[2], expected=value or kind
            )
        return t

    # -- grammar ---------------------------------------------------------

    def elem(self):
        acc = self.term()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.next()
                # window suffix: + O(var^N)
                nxt = self.peek()
                if t[1] == "+" and nxt[0] == "name" and nxt[1] == "O":
                    self.next()
                    self.expect("op", "(")
                    var = self.expect("name")[1]
                    self.expect("op", "^")
                    n = self.expect("int")[1]
                    self.expect("op", ")")
                    acc = self._window(acc, var, n)
                    continue
                rhs = self.term()
                acc = acc + rhs if t[1] == "+" else acc - rhs
            else:
                return acc

    def term(self):
        acc = self.factor()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "*/":
                self.next()
                rhs = self.factor()
                acc = acc * rhs if t[1] == "*" else acc / rhs
            elif t[0] in ("int", "name") or (t[0] == "op" and t[1] == "("):
                rhs = self.factor()
                acc = acc * rhs
            else:
                return acc

    def factor(self):
        t = self.peek()
        if t[0] == "int":
            self.next()
            if t[1] < 0:
                return -self.tower.coerce(-t[1])
            return self.tower.coerce(t[1])
        if t[0] == "op" and t[1] == "(":
            self.next()
            inner = self.elem()
            self.expect("op", ")")
            return self._maybe_pow(inner)
        if t[0] == "name":
            self.next()
            try:
                base = self.tower.var(t[1])
            except KeyError:
                raise ParseError(f"unknown variable {t[1]!r}", pos=t[2])
            return self._maybe_pow(base)
        raise ParseError(f"unexpected token {t[1]!r}", pos=t[2])

    def _maybe_pow(self, base):
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.next()
            e = self.expect("int")[1]
            return base.inv() ** (-e) if e < 0 else base ** e
        return base

    def _window(self, acc, var, n):
        top_var = self.tower.descriptor.layers[-1][1]
        if var != top_var:
            raise ParseError(f"window variable {var!r} is not the top variable {top_var!r}")
        if isinstance(acc, LaurentElem):
            return acc.truncate(n)
        return self.tower.coerce(acc).truncate(n)


def parse_element(src, tower):
    """An element of the tower's top field."""
    p = _P(tokenize(src), tower)
    v = p.elem()
    p.expect("end")
    return tower.coerce(v)


def parse_witt(src, tower, p, n=None):
    """W(f_{n-1}; ...; f_0) (';' or ',' separators) or a bare element (n=1)."""
    toks = tokenize(src)
    if toks[0][0] == "name" and toks[0][1] == "W" and toks[1][:2] == ("op", "("):
        pr = _P(toks, tower)
        pr.expect("name", "W")
        pr.expect("op", "(")
        comps = [pr.elem()]
        while pr.peek()[:2] in (("op", ";"), ("op", ",")):
            pr.next()
            comps.append(pr.elem())
        pr.expect("op", ")")
        pr.expect("end")
    else:
        comps = [parse_element(src, tower)]
    if n is not None and len(comps) != n:
        raise ParseError(f"expected {n} Witt components, found {len(comps)}")
    ring = ring_for(tower)
    return WittVector(p, len(comps), ring, tuple(tower.coerce(c) for c in comps))


def parse_milnor(src, tower):
    """{x; y1; ...} as a tuple of nonzero elements."""
    pr = _P(tokenize(src), tower)
    pr.expect("op", "{")
    entries = [pr.elem()]
    while pr.peek()[:2] == ("op", ";"):
        pr.next()
        entries.append(pr.elem())
    pr.expect("op", "}")
    pr.expect("end")
    return tuple(tower.coerce(e) for e in entries)


def render_element(x):
    return x.render() if hasattr(x, "render") else str(x)


def render_witt(x):
    return x.render()


def render_milnor(entries):
    return "{" + "; ".join(render_element(e) for e in entries) + "}"


# -- field and group shorthand -------------------------------------------------------


_FIELD_RE = re.compile(r"^(perf\()?F(\d+)(.*)$")


def parse_field_shorthand(src, default_prec=32):
    """F2, F4(u), perf(F2(u,T)), F2(u)((t)), F2((t1))((t2)), ..."""
    s = src.strip().replace(" ", "")
    m = _FIELD_RE.match(s)
    if not m:
        raise ParseError(f"cannot parse field {src!r}")
    perf = bool(m.group(1))
    q = int(m.group(2))
    rest = m.group(3)
    p, e = _prime_power(q)
    layers = [{"kind": "galois", "e": e}]
    if perf:
        if not rest.startswith("("):
            raise ParseError("perf(...) needs a rational layer")
    if rest.startswith("(") and not rest.startswith("(("):
        close = rest.index(")")
        vars_ = rest[1:close].split(",")
        layers.append({"kind": "rational", "vars": [v for v in vars_ if v]})
        rest = rest[close + 1:]
        if perf:
            if not rest.startswith(")"):
                raise ParseError("unclosed perf(...)")
            rest = rest[1:]
            layers.append({"kind": "perfection"})
    while rest:
        if not rest.startswith("(("):
            raise ParseError(f"cannot parse field tail {rest!r} in {src!r}")
        close = rest.index("))")
        layers.append({"kind": "laurent", "var": rest[2:close]})
        rest = rest[close + 2:]
    return build_tower({"p": p, "layers": layers}, default_prec)


def _prime_power(q):
    for p in (2, 3, 5, 7, 11, 13):
        e = 0
        qq = q
        while qq % p == 0:
            qq //= p
            e += 1
        if qq == 1 and e >= 1:
            return p, e
    raise ParseError(f"{q} is not a small prime power")


def parse_group_shorthand(src):
    """Gm^t x W2 x Ga -> SplitGroupDescriptor."""
    torus = 0
    lengths = []
    for part in re.split(r"\s*x\s*|\s+X\s+", src.strip()):
        part = part.strip()
        if not part:
            continue
        if part.startswith("Gm"):
            torus += int(part[3:]) if part.startswith("Gm^") else 1
        elif part == "Ga":
            lengths.append(1)
        elif part.startswith("W"):
            lengths.append(int(part[1:]))
        else:
            raise ParseError(f"cannot parse group factor {part!r}")
    return SplitGroupDescriptor(torus, tuple(lengths))
