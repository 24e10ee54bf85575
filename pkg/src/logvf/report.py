"""Analysis pipeline and JSON-ready reports.

A report is a plain dict of JSON-native values: rationals are strings like
"3/4", fields and polynomials are their canonical text forms.  Stages that
fail with a typed domain error embed {"error": name, "detail": ...} and the
pipeline continues; certificate failures always propagate.
"""

import time
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (CertificateFailure, LogvfError, NotFree, ProductInput,
                     WrongCount)
from .poly import Polynomial, as_poly, poly_parse
from .vfield import vf_to_str
from .derlog import (derlog_generators, euler_check, is_product,
                     koszul_free_check, minimalize, saito_free_check,
                     squarefree_check, strong_euler_check)
from .liealg import center_dimension, is_solvable, truncated_lie_algebra
from .normalform import (constant_field_split, default_truncation,
                         factor_structure, formal_structure, verify_cor16)
from .cech import lct_obstruction_witness

SCHEMA = 1


def frac_str(q) -> str:
    return str(Fraction(q))


def _run_stage(report: dict, timings: dict, name: str, fn):
    """Run one stage, embedding typed domain errors, re-raising certificate
    failures."""
    t0 = time.perf_counter()
    try:
        value = fn()
    except CertificateFailure:
        raise
    except LogvfError as err:
        value = {"error": type(err).__name__, "detail": str(err)}
        report[name] = value
        timings[name] = round(time.perf_counter() - t0, 6)
        return None
    report[name] = value
    timings[name] = round(time.perf_counter() - t0, 6)
    return value


def formal_summary(fs, f: Polynomial) -> dict:
    out = {
        "s": fs.s,
        "r": fs.r,
        "weights": [[frac_str(w) for w in row] for row in fs.weights],
        "degrees": [frac_str(d) for d in fs.degrees],
        "eigentable": [[frac_str(v) for v in row] for row in fs.eigentable],
        "unit": str(as_poly(fs.unit)),
        "change": [str(p) for p in fs.change.images],
        "trunc": fs.trunc,
        "stabilized": fs.stabilized,
        "euler_index": fs.euler_index,
    }
    try:
        out["cor16"] = verify_cor16(fs, f)
    except NotFree:
        out["cor16"] = None
    return out


def factor_summary(fc) -> dict:
    return {
        "multiplicities": list(fc.multiplicities),
        "residual": str(as_poly(fc.residual)),
        "lambdas": [[frac_str(v) for v in row] for row in fc.lambdas],
        "units": [[str(as_poly(u)) for u in row] for row in fc.units],
    }


def _euler_summary(check) -> dict:
    return {
        "homogeneous": check.homogeneous,
        "field": vf_to_str(check.field) if check.field is not None else None,
        "exact": check.exact,
    }


def analyze(f: Polynomial, trunc: Optional[int] = None,
            witness_bound: int = 3,
            factors: Optional[Sequence[Polynomial]] = None) -> dict:
    """Full pipeline report for one polynomial."""
    d = trunc if trunc is not None else default_truncation(f)
    report: dict = {"schema": SCHEMA, "vars": list(f.vars), "f": str(f),
                    "trunc": d}
    timings: dict = {}

    _run_stage(report, timings, "squarefree",
               lambda: squarefree_check(f)[0])

    def derlog_block():
        module = minimalize(derlog_generators(f))
        return module, {
            "generators": [vf_to_str(g) for g in module.fields],
            "cofactors": [str(c) for c in module.cofactors],
        }

    t0 = time.perf_counter()
    module = None
    try:
        module, block = derlog_block()
        report["derlog"] = block
    except CertificateFailure:
        raise
    except LogvfError as err:
        report["derlog"] = {"error": type(err).__name__, "detail": str(err)}
    timings["derlog"] = round(time.perf_counter() - t0, 6)
    if module is None:
        report["timings"] = timings
        return report

    def product_block():
        prod, wit = is_product(module)
        return {"is_product": prod,
                "witness": vf_to_str(wit) if wit is not None else None}

    prod_info = _run_stage(report, timings, "product", product_block)
    is_prod = bool(prod_info and prod_info.get("is_product"))

    # peel exact smooth factors so the Lie and formal stages get a
    # polynomial they accept; without an exact split they see the product
    target_f, target_module = f, module
    dropped: List[str] = []
    prod_now = is_prod
    while prod_now:
        split = constant_field_split(target_f, target_module.fields)
        if split is None:
            break
        reduced, idx, _change = split
        dropped.append(target_f.vars[idx])
        target_f = reduced
        target_module = minimalize(derlog_generators(target_f))
        prod_now = is_product(target_module)[0]
    report["split"] = {"performed": bool(dropped), "dropped": dropped,
                       "reduced": str(target_f) if dropped else None}

    def free_block():
        try:
            check = saito_free_check(list(module.fields), f)
        except WrongCount:
            return {"free": False, "determinant": None, "unit_value": None,
                    "reason": f"{len(module.fields)} minimal generators"}
        return {
            "free": check.free,
            "determinant": str(check.determinant),
            "unit_value": (frac_str(check.unit_value_at_0)
                           if check.unit_value_at_0 is not None else None),
        }

    free_info = _run_stage(report, timings, "free", free_block)
    is_free = bool(free_info and free_info.get("free"))

    _run_stage(report, timings, "euler", lambda: _euler_summary(euler_check(f)))
    _run_stage(report, timings, "strong_euler",
               lambda: _euler_summary(strong_euler_check(f)))

    if is_free:
        _run_stage(report, timings, "koszul",
                   lambda: koszul_free_check(list(module.fields), f))
    else:
        report["koszul"] = None

    def lie_block():
        pres = truncated_lie_algebra(target_module, 1)
        solvable, series = is_solvable(pres)
        return {
            "dimension": pres.dimension,
            "solvable": solvable,
            "derived_series": series,
            "center_dimension": center_dimension(pres),
            "linear_part_faithful": pres.linear_part_faithful,
        }

    _run_stage(report, timings, "lie", lie_block)

    formal_holder = {}

    def formal_block():
        fs = formal_structure(target_f, trunc if trunc is not None
                              else default_truncation(target_f))
        formal_holder["fs"] = fs
        return formal_summary(fs, target_f)

    _run_stage(report, timings, "formal", formal_block)

    if factors:
        def factors_block():
            if dropped:
                raise ProductInput("factor analysis needs a non-product f")
            fs = formal_holder.get("fs")
            if fs is None:
                raise ProductInput("no formal structure to scale factors by")
            return factor_summary(factor_structure(fs, f, list(factors)))

        _run_stage(report, timings, "factors", factors_block)

    def cech_block():
        witness = lct_obstruction_witness(f, list(module.fields),
                                          witness_bound)
        return {
            "witness": witness.to_json() if witness is not None else None,
            "bound": witness_bound,
            "note": ("a witness refutes the comparison-theorem necessary "
                     "condition; none found only covers the searched box"),
        }

    _run_stage(report, timings, "cech", cech_block)

    report["timings"] = timings
    return report


# -- corpus files -----------------------------------------------------------


def parse_div(text: str) -> Tuple[Tuple[str, ...], Polynomial, Dict[str, str]]:
    """A .div file: line 1 variables, line 2 polynomial, optional line 3
    space-separated key=value expectations."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise LogvfError("a .div file needs a variable line and a polynomial")
    varnames = tuple(v.strip() for v in lines[0].split(","))
    if any(not v for v in varnames):
        raise LogvfError(f"bad variable line: {lines[0]!r}")
    f = poly_parse(lines[1], varnames)
    expect: Dict[str, str] = {}
    if len(lines) > 2:
        for item in lines[2].split():
            if "=" not in item:
                raise LogvfError(f"bad expectation {item!r}")
            key, _, value = item.partition("=")
            expect[key] = value
    return varnames, f, expect


def _report_get(report: dict, path: Sequence[str]):
    node = report
    for key in path:
        if not isinstance(node, dict) or key not in node:
            return None
        node = node[key]
    if isinstance(node, dict) and "error" in node:
        return None
    return node


def _norm_field(text: str) -> str:
    return text.replace("_", "").replace(" ", "")

_EXPECT_PATHS = {
    "squarefree": ("squarefree",),
    "product": ("product", "is_product"),
    "free": ("free", "free"),
    "koszul": ("koszul",),
    "euler": ("euler", "homogeneous"),
    "strong_euler": ("strong_euler", "homogeneous"),
    "solvable": ("lie", "solvable"),
    "stabilized": ("formal", "stabilized"),
    "s": ("formal", "s"),
    "r": ("formal", "r"),
    "dim": ("lie", "dimension"),
    "gens": None,  # handled specially
    "euler_field": None,
    "det_unit": ("free", "unit_value"),
}


def check_expectations(report: dict, expect: Dict[str, str]
                       ) -> List[Tuple[str, str, str, bool]]:
    """Compare a report against .div expectations; one row per key."""
    rows = []
    for key, want in sorted(expect.items()):
        if key == "gens":
            gens = _report_get(report, ("derlog", "generators"))
            got = str(len(gens)) if isinstance(gens, list) else "?"
        elif key == "euler_field":
            field = (_report_get(report, ("strong_euler", "field"))
                     or _report_get(report, ("euler", "field")))
            got = _norm_field(field) if field else "none"
            want = _norm_field(want)
        elif key in _EXPECT_PATHS and _EXPECT_PATHS[key] is not None:
            value = _report_get(report, _EXPECT_PATHS[key])
            if isinstance(value, bool):
                got = "true" if value else "false"
            elif value is None:
                got = "none"
            else:
                got = str(value)
        else:
            rows.append((key, want, "unknown key", False))
            continue
        rows.append((key, want, got, got == want))
    return rows


# -- plain-text rendering -----------------------------------------------------


def _fmt_block(name: str, block) -> List[str]:
    if block is None:
        return [f"{name}: skipped"]
    if isinstance(block, dict) and "error" in block:
        return [f"{name}: {block['error']} ({block['detail']})"]
    if isinstance(block, bool):
        return [f"{name}: {'yes' if block else 'no'}"]
    if not isinstance(block, dict):
        return [f"{name}: {block}"]
    lines = [f"{name}:"]
    for key, value in block.items():
        if isinstance(value, list) and value and isinstance(value[0], str):
            value = ", ".join(value)
        lines.append(f"  {key}: {value}")
    return lines


def render_text(report: dict) -> str:
    lines = [f"f = {report['f']}  over ({', '.join(report['vars'])})",
             f"truncation: {report['trunc']}"]
    for name in ("squarefree", "derlog", "product", "split", "free", "euler",
                 "strong_euler", "koszul", "lie", "formal", "factors",
                 "cech"):
        if name in report:
            lines.extend(_fmt_block(name, report[name]))
    timings = report.get("timings", {})
    total = sum(timings.values())
    lines.append(f"total time: {total:.3f}s")
    return "\n".join(lines)
