"""Command-line front end.

Commands: witt, level, flat, symbol, modulus, swan, extend, verify.
JSON output is the machine interface (sorted keys, deterministic); text
mode mirrors it field for field.  Exit codes: 0 success, 2 parse error,
3 precision exhausted, 4 verification failure, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ParseError, PrecisionExhausted, VerificationFailure, WittfilError
from .extensions import (
    DVEmbedding,
    compare_levels,
    make_perfect_residue_extension,
    make_tame_extension,
    make_wild_extension,
)
from .filtration import filf_level, flat_filf_min, naive_level
from .modulus import GroupPoint, divisor_degree, modulus_divisor, refined_swan, swan_conductor
from .parser import (
    parse_element,
    parse_field_shorthand,
    parse_group_shorthand,
    parse_milnor,
    parse_witt,
    render_element,
    render_witt,
)
from .symbols import higher_local_symbol, local_symbol_gm, local_symbol_wn
from .verify import run_suite
from .witt.rings import ring_for
from .witt.structure import set_length_cap
from .witt.vector import WittVector


def _field(args, default="F2((t))"):
    K = parse_field_shorthand(args.field or default, default_prec=args.prec)
    if args.p and K.p != args.p:
        raise ParseError(f"-p {args.p} conflicts with field {args.field}")
    return K


def _emit(args, payload, code=0):
    if args.json:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        for k in sorted(payload):
            print(f"{k}: {payload[k]}")
    return code


def cmd_witt(args):
    K = _field(args)
    xs = [parse_witt(src, K, K.p, args.n) for src in args.exprs]
    op = args.op
    if op == "add":
        out = xs[0]
        for x in xs[1:]:
            out = out + x
    elif op == "mul":
        out = xs[0]
        for x in xs[1:]:
            out = out * x
    elif op == "neg":
        (x,) = xs
        out = -x
    elif op == "F":
        (x,) = xs
        out = x.frobenius_F()
    elif op == "V":
        (x,) = xs
        out = x.verschiebung_V()
    else:
        raise ParseError(f"unknown witt op {op!r}")
    return _emit(args, {"components": [render_element(c) for c in out.comps], "n": out.n})


def cmd_level(args):
    K = _field(args)
    x = parse_witt(args.expr, K, K.p, args.n)
    s, witness = filf_level(x)
    payload = {
        "naive": naive_level(x),
        "filF": s,
        "flat_min": flat_filf_min(x),
        "witness": witness.render(),
    }
    return _emit(args, payload)


def cmd_flat(args):
    K = _field(args)
    x = parse_witt(args.expr, K, K.p, args.n)
    return _emit(args, {"flat_min": flat_filf_min(x)})


def cmd_symbol(args):
    K = _field(args)
    f = parse_witt(args.f, K, K.p, args.n)
    if args.g.strip().startswith("{"):
        g = parse_milnor(args.g, K)
        val = higher_local_symbol(f, g)
    else:
        g = parse_element(args.g, K)
        val = local_symbol_wn(f, g)
    return _emit(
        args,
        {
            "f": render_witt(f),
            "g": args.g.strip(),
            "value": [render_element(c) for c in val.comps],
            "group": f"W{f.n}",
        },
    )


def cmd_modulus(args):
    K = parse_field_shorthand(args.field or "F2(x)", default_prec=args.prec)
    group = parse_group_shorthand(args.group or "Ga")
    coords = [c.strip() for c in args.phi.split(";")]
    if len(coords) != group.torus_rank + len(group.witt_lengths):
        raise ParseError("coordinate count does not match the group shape")
    torus = [parse_element(c, K) for c in coords[: group.torus_rank]]
    witt = [
        parse_witt(c, K, K.p, n)
        for c, n in zip(coords[group.torus_rank:], group.witt_lengths)
    ]
    pt = GroupPoint(group, torus, witt)
    div = modulus_divisor(pt, prec=args.prec)
    payload = {
        "divisor": [
            {"place": pl.render(), "mult": m}
            for pl, m in sorted(div.items(), key=lambda kv: kv[0].key())
        ],
        "degree": divisor_degree(div),
    }
    return _emit(args, payload)


def cmd_swan(args):
    K = _field(args)
    x = parse_witt(args.expr, K, K.p, args.n)
    m, form = refined_swan(x)
    rsw = {}
    tvar = K.descriptor.layers[-1][1]
    for (kind, name), c in form.items():
        key = f"d{name}" if kind == "d" else f"dlog{name}"
        rsw[key] = f"{tvar}^-{m} * {render_element(c)}"
    return _emit(args, {"swan": m, "rsw": rsw})


def cmd_extend(args):
    K = _field(args, default="F2(u)((pi))")
    x = parse_witt(args.phi, K, K.p, args.n)
    if args.config:
        cfg = json.loads(args.config)
        kind = cfg.get("residue", "identity")
        e = cfg.get("e", 1)
        if kind == "perfect-closure":
            emb = make_perfect_residue_extension(K, e)
        elif e % K.p == 0:
            emb = make_wild_extension(K, e)
        else:
            emb = make_tame_extension(K, e)
    else:
        kind = args.kind
        if kind == "tame":
            emb = make_tame_extension(K, args.e)
        elif kind == "wild":
            emb = make_wild_extension(K, args.e)
        else:
            emb = make_perfect_residue_extension(K, args.e)
    rec = compare_levels(emb, x, prec=args.prec)
    rec["embedding"] = emb.describe()
    return _emit(args, rec)


def cmd_verify(args):
    rep = run_suite(args.suite, seed=args.seed, trials=args.trials)
    payload = {"suite": args.suite, "passed": rep["passed"], "instances": rep["instances"]}
    if rep["failures"]:
        payload["failures"] = rep["failures"][:10]
    code = 0 if rep["passed"] else 4
    return _emit(args, payload, code)


def _add_common(ap, suppress=False):
    d = argparse.SUPPRESS if suppress else None
    kw = {"default": d} if suppress else {}
    ap.add_argument("--field", help="field shorthand, e.g. F2((t)), F2(u)((t)), F2(x)", **kw)
    ap.add_argument("-p", type=int, help="characteristic (checked against --field)", **(kw or {"default": None}))
    ap.add_argument("-n", type=int, help="Witt length", **(kw or {"default": None}))
    ap.add_argument("--prec", type=int, help="Laurent window size", **(kw or {"default": 32}))
    ap.add_argument("--seed", type=int, **(kw or {"default": 1}))
    ap.add_argument("--trials", type=int, **(kw or {"default": None}))
    if suppress:
        ap.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        ap.add_argument("--cap-n", type=int, default=argparse.SUPPRESS)
    else:
        ap.add_argument("--json", action="store_true", help="emit machine-readable JSON")
        ap.add_argument("--cap-n", type=int, default=None, help="structure polynomial length cap")


def build_parser():
    ap = argparse.ArgumentParser(prog="wittfil", description=__doc__)
    _add_common(ap)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_sub(name, **kw):
        sp = sub.add_parser(name, **kw)
        _add_common(sp, suppress=True)
        return sp

    w = add_sub("witt", help="Witt vector arithmetic")
    w.add_argument("--op", required=True, choices=["add", "mul", "neg", "F", "V"])
    w.add_argument("exprs", nargs="+")
    w.set_defaults(fn=cmd_witt)

    l = add_sub("level", help="naive/saturated/flat levels")
    l.add_argument("expr")
    l.set_defaults(fn=cmd_level)

    fl = add_sub("flat", help="least flat level")
    fl.add_argument("expr")
    fl.set_defaults(fn=cmd_flat)

    s = add_sub("symbol", help="local symbol (f, g)")
    s.add_argument("f")
    s.add_argument("g")
    s.set_defaults(fn=cmd_symbol)

    m = add_sub("modulus", help="modulus divisor of a map into a split group")
    m.add_argument("--group", required=True)
    m.add_argument("--phi", required=True, help="coordinates separated by ';'")
    m.set_defaults(fn=cmd_modulus)

    sw = add_sub("swan", help="Swan conductor and refined Swan form")
    sw.add_argument("expr")
    sw.set_defaults(fn=cmd_swan)

    ex = add_sub("extend", help="compare levels through a field extension")
    ex.add_argument("--kind", choices=["tame", "wild", "perfect"], default="perfect")
    ex.add_argument("--e", type=int, default=1)
    ex.add_argument("--config", help="embedding config JSON")
    ex.add_argument("phi")
    ex.set_defaults(fn=cmd_extend)

    v = add_sub("verify", help="run a verification suite")
    v.add_argument("suite")
    v.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.cap_n:
        set_length_cap(args.cap_n)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return 3
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 4
    except WittfilError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
