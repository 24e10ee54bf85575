"""Command line front end.

Exit codes: 0 ok (typed domain errors are embedded in the output), 1 corpus
expectation failure, 2 input error, 3 internal certificate failure.
"""

import argparse
import json
import os
import sys
from typing import List, Optional

from .errors import CertificateFailure, LogvfError
from .poly import Polynomial, poly_parse
from .vfield import vf_to_str
from .derlog import (derlog_generators, euler_check, minimalize,
                     saito_free_check, strong_euler_check)
from .liealg import center_dimension, is_solvable, truncated_lie_algebra
from .normalform import (default_truncation, factor_structure,
                         formal_structure)
from .cech import lct_obstruction_witness
from . import report as rp


def _add_input_args(sub):
    sub.add_argument("--vars", required=True,
                     help="comma-separated variable names, e.g. x,y,z")
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--poly", help="polynomial expression")
    group.add_argument("--file", help="path of a file holding the expression")
    sub.add_argument("--json", action="store_true", help="emit JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logvf",
        description="logarithmic vector fields of a hypersurface germ")
    subs = parser.add_subparsers(dest="command", required=True)

    an = subs.add_parser("analyze", help="full pipeline report")
    _add_input_args(an)
    an.add_argument("--trunc", type=int, help="formal truncation order")
    an.add_argument("--witness-bound", type=int, default=3,
                    help="exponent box bound for the obstruction search")
    an.add_argument("--factors", help="semicolon-separated known factors")

    co = subs.add_parser("corpus", help="run the example corpus")
    co.add_argument("--dir", default="corpus", help="directory of .div files")
    co.add_argument("--json", action="store_true", help="emit JSON")

    dl = subs.add_parser("derlog", help="minimal logarithmic generators")
    _add_input_args(dl)

    fr = subs.add_parser("free", help="Saito determinant test")
    _add_input_args(fr)

    eu = subs.add_parser("euler", help="Euler homogeneity witnesses")
    _add_input_args(eu)

    li = subs.add_parser("lie", help="truncated Lie algebra and solvability")
    _add_input_args(li)
    li.add_argument("--trunc", type=int, default=1,
                    help="truncation depth d of D_d")

    no = subs.add_parser("normalize", help="formal structure of the germ")
    _add_input_args(no)
    no.add_argument("--trunc", type=int, help="formal truncation order")
    no.add_argument("--factors", help="semicolon-separated known factors")

    ce = subs.add_parser("cech", help="obstruction witness search")
    _add_input_args(ce)
    ce.add_argument("--witness-bound", type=int, default=3,
                    help="exponent box bound")
    return parser


def _read_poly(args) -> Polynomial:
    varnames = tuple(v.strip() for v in args.vars.split(","))
    if any(not v for v in varnames) or len(set(varnames)) != len(varnames):
        raise LogvfError(f"bad variable list {args.vars!r}")
    if args.poly is not None:
        text = args.poly
    else:
        with open(args.file, "r", encoding="utf-8") as fh:
            text = fh.read()
    return poly_parse(text, varnames)


def _emit(payload: dict, as_json: bool, text: Optional[str] = None) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print(text if text is not None else
              json.dumps(payload, indent=2, sort_keys=False))


def _cmd_analyze(args) -> int:
    f = _read_poly(args)
    factors = None
    if args.factors:
        factors = [poly_parse(t, f.vars) for t in args.factors.split(";")]
    result = rp.analyze(f, trunc=args.trunc,
                        witness_bound=args.witness_bound, factors=factors)
    _emit(result, args.json, rp.render_text(result))
    return 0


def _cmd_corpus(args) -> int:
    directory = args.dir
    if not os.path.isdir(directory):
        print(f"no corpus directory {directory!r}", file=sys.stderr)
        return 2
    names = sorted(n for n in os.listdir(directory) if n.endswith(".div"))
    if not names:
        print(f"no .div files in {directory!r}", file=sys.stderr)
        return 2
    failures = 0
    summary = []
    for name in names:
        with open(os.path.join(directory, name), "r", encoding="utf-8") as fh:
            _, f, expect = rp.parse_div(fh.read())
        result = rp.analyze(f)
        rows = rp.check_expectations(result, expect)
        ok = all(r[3] for r in rows)
        failures += 0 if ok else 1
        summary.append({"file": name, "f": str(f), "pass": ok,
                        "checks": [{"key": k, "expected": w, "got": g,
                                    "ok": o} for k, w, g, o in rows]})
        if not args.json:
            mark = "pass" if ok else "FAIL"
            print(f"{name:24s} {mark}")
            for key, want, got, good in rows:
                flag = "ok" if good else "MISMATCH"
                print(f"    {key} = {got} (expected {want}) {flag}")
    if args.json:
        print(json.dumps({"schema": rp.SCHEMA, "corpus": summary,
                          "failures": failures}, indent=2))
    return 1 if failures else 0


def _cmd_derlog(args) -> int:
    f = _read_poly(args)
    module = minimalize(derlog_generators(f))
    payload = {
        "schema": rp.SCHEMA,
        "f": str(f),
        "generators": [vf_to_str(g) for g in module.fields],
        "cofactors": [str(c) for c in module.cofactors],
    }
    lines = [f"f = {f}"]
    for g, c in zip(module.fields, module.cofactors):
        lines.append(f"  {vf_to_str(g)}   cofactor {c}")
    _emit(payload, args.json, "\n".join(lines))
    return 0


def _cmd_free(args) -> int:
    f = _read_poly(args)
    module = minimalize(derlog_generators(f))
    try:
        check = saito_free_check(list(module.fields), f)
        payload = {
            "schema": rp.SCHEMA, "f": str(f), "free": check.free,
            "determinant": str(check.determinant),
            "unit_value": (rp.frac_str(check.unit_value_at_0)
                           if check.unit_value_at_0 is not None else None),
        }
        text = (f"free: {check.free}\ndeterminant = {check.determinant}\n"
                f"unit value at 0: {payload['unit_value']}")
    except LogvfError as err:
        if isinstance(err, CertificateFailure):
            raise
        payload = {"schema": rp.SCHEMA, "f": str(f), "free": False,
                   "error": type(err).__name__, "detail": str(err)}
        text = f"free: False ({type(err).__name__}: {err})"
    _emit(payload, args.json, text)
    return 0


def _cmd_euler(args) -> int:
    f = _read_poly(args)
    plain = euler_check(f)
    strong = strong_euler_check(f)

    def block(check):
        return {"homogeneous": check.homogeneous,
                "field": vf_to_str(check.field) if check.field else None,
                "exact": check.exact}

    payload = {"schema": rp.SCHEMA, "f": str(f), "euler": block(plain),
               "strong_euler": block(strong)}
    text = (f"euler: {plain.homogeneous}"
            f" (field {payload['euler']['field']})\n"
            f"strong euler: {strong.homogeneous}"
            f" (field {payload['strong_euler']['field']})")
    _emit(payload, args.json, text)
    return 0


def _cmd_lie(args) -> int:
    f = _read_poly(args)
    module = minimalize(derlog_generators(f))
    try:
        pres = truncated_lie_algebra(module, args.trunc)
        solvable, series = is_solvable(pres)
        payload = {
            "schema": rp.SCHEMA, "f": str(f), "trunc": args.trunc,
            "dimension": pres.dimension, "solvable": solvable,
            "derived_series": series,
            "center_dimension": center_dimension(pres),
            "linear_part_faithful": pres.linear_part_faithful,
        }
        text = (f"D_{args.trunc} dimension {pres.dimension}, "
                f"solvable: {solvable}, derived series {series}, "
                f"center dimension {payload['center_dimension']}")
    except LogvfError as err:
        if isinstance(err, CertificateFailure):
            raise
        payload = {"schema": rp.SCHEMA, "f": str(f),
                   "error": type(err).__name__, "detail": str(err)}
        text = f"lie: {type(err).__name__}: {err}"
    _emit(payload, args.json, text)
    return 0


def _cmd_normalize(args) -> int:
    f = _read_poly(args)
    trunc = args.trunc if args.trunc is not None else default_truncation(f)
    try:
        fs = formal_structure(f, trunc)
        payload = {"schema": rp.SCHEMA, "f": str(f)}
        payload.update(rp.formal_summary(fs, f))
        lines = [f"f = {f}  (truncation {trunc})",
                 f"s = {fs.s}, r = {fs.r}, stabilized: {fs.stabilized}"]
        for i, row in enumerate(fs.weights):
            lines.append(f"  weights[{i}] = ({', '.join(map(str, row))})"
                         f"  degree {fs.degrees[i]}")
        for i, row in enumerate(fs.eigentable):
            lines.append(f"  eigentable[{i}] = ({', '.join(map(str, row))})")
        lines.append(f"  unit = {payload['unit']}")
        lines.append(f"  change = ({', '.join(payload['change'])})")
        if payload.get("cor16") is not None:
            lines.append(f"  corollary check: {payload['cor16']}")
        if args.factors:
            factors = [poly_parse(t, f.vars) for t in args.factors.split(";")]
            fc = factor_structure(fs, f, factors)
            payload["factors"] = rp.factor_summary(fc)
            lines.append(f"  factor multiplicities: "
                         f"{payload['factors']['multiplicities']}")
        text = "\n".join(lines)
    except LogvfError as err:
        if isinstance(err, CertificateFailure):
            raise
        payload = {"schema": rp.SCHEMA, "f": str(f),
                   "error": type(err).__name__, "detail": str(err)}
        text = f"normalize: {type(err).__name__}: {err}"
    _emit(payload, args.json, text)
    return 0


def _cmd_cech(args) -> int:
    f = _read_poly(args)
    module = minimalize(derlog_generators(f))
    try:
        witness = lct_obstruction_witness(f, list(module.fields),
                                          args.witness_bound)
        payload = {
            "schema": rp.SCHEMA, "f": str(f), "bound": args.witness_bound,
            "witness": witness.to_json() if witness is not None else None,
        }
        if witness is None:
            text = (f"no kernel witness within bound {args.witness_bound} "
                    "(proves nothing about the comparison theorem)")
        else:
            text = f"witness: {witness} (necessary condition fails)"
    except LogvfError as err:
        if isinstance(err, CertificateFailure):
            raise
        payload = {"schema": rp.SCHEMA, "f": str(f),
                   "error": type(err).__name__, "detail": str(err)}
        text = f"cech: {type(err).__name__}: {err}"
    _emit(payload, args.json, text)
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "corpus": _cmd_corpus,
    "derlog": _cmd_derlog,
    "free": _cmd_free,
    "euler": _cmd_euler,
    "lie": _cmd_lie,
    "normalize": _cmd_normalize,
    "cech": _cmd_cech,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return _COMMANDS[args.command](args)
    except CertificateFailure as err:
        print(f"certificate failure: {err}", file=sys.stderr)
        return 3
    except (LogvfError, OSError) as err:
        print(f"input error: {type(err).__name__}: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
