"""Command-line front end: ``vxcalc <command> [options]``.

Every command prints a report (JSON by default) and exits with status 0 iff
all of its checks pass.  Usage errors (bad files, bad expressions, cutoffs
out of range) exit with status 2.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import charts as charts_mod
from .algebroid import AlgebroidError, central_lift_report, check_algebroid_axioms, extract_truncation
from .charts import ChartError, build_p1_cdo, build_p1_tcdo, builtin_document, chart_report, load_document
from .dsl import DslEvalError, DslSyntaxError, parse_expr, parse_state, state_to_text, to_text
from .fock import FockSpace
from .modules import (CentralCharacter, ModuleError, Presentation, PresentationError, RewriteError,
                      character_from_json, filtration_level, make_module, presentation_from_json,
                      rewrite_to_sing, roundtrip_check, sing)
from .report import Check, Report, emit_report
from .suites import (DEFAULT_SEED, borcherds_suite, filtration_suite, module_borcherds_suite,
                     rewrite_suite)

COMMANDS = ("eval", "borcherds", "axioms", "glue", "sing", "rewrite", "roundtrip", "commutators")


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"cutoff must be positive, got {value}")
    return value


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _document(args) -> tuple[dict, charts_mod.ChartDocument]:
    if args.chart and args.builtin:
        raise UsageError("give either --chart or --builtin, not both")
    if args.chart:
        raw = _read_json(args.chart)
    else:
        raw = builtin_document(args.builtin or "cn", args.N)
    try:
        return raw, load_document(raw)
    except (ChartError, KeyError, ValueError) as exc:
        raise UsageError(f"bad chart document: {exc}") from None


def _character(args, raw: dict) -> CentralCharacter:
    if getattr(args, "character", None):
        return character_from_json(_read_json(args.character))
    if "character" in raw:
        return character_from_json(raw["character"])
    return CentralCharacter.zero()


def _module(args):
    raw, doc = _document(args)
    chart = doc.first_chart()
    try:
        return make_module(chart, _character(args, raw))
    except ModuleError as exc:
        raise UsageError(str(exc)) from None


# -- commands -----------------------------------------------------------------


def cmd_eval(args) -> Report:
    raw, doc = _document(args)
    chart = doc.first_chart()
    report = Report("eval", {"chart": chart.name, "expr": args.expr})
    try:
        ast = parse_expr(args.expr)
        space = _module(args) if args.module else FockSpace(chart.table)
        state = parse_state(args.expr, space)
    except DslSyntaxError as exc:
        raise UsageError(str(exc)) from None
    except DslEvalError as exc:
        raise UsageError(f"cannot evaluate: {exc}") from None
    printed = to_text(ast)
    report.add(Check("print-parse", parse_expr(printed) == ast, printed))
    report.data["state"] = state_to_text(state)
    report.data["weights"] = sorted(state.weights())
    return report


def cmd_borcherds(args) -> Report:
    if args.module:
        return module_borcherds_suite(_module(args), args.samples, args.seed, args.weight, args.window,
                                      args.degree)
    _, doc = _document(args)
    reports = [borcherds_suite(c, args.samples, args.seed, args.weight, args.window, args.degree)
               for c in doc.charts.values()]
    return _merge("borcherds", reports, {"samples": args.samples, "seed": args.seed,
                                         "weight": args.weight, "window": args.window})


def cmd_axioms(args) -> Report:
    _, doc = _document(args)
    reports = []
    for chart in doc.charts.values():
        T = extract_truncation(chart)
        reports.append(check_algebroid_axioms(T, args.degree))
        try:
            reports.append(central_lift_report(T))
        except AlgebroidError as exc:
            r = Report("central-lift", {"chart": chart.name})
            r.add(Check("central-lift", False, witness=str(exc)))
            reports.append(r)
    return _merge("axioms", reports, {"degree": args.degree})


def cmd_glue(args) -> Report:
    if args.chart:
        _, doc = _document(args)
        if len(doc.transitions) != 2:
            raise UsageError("glue needs a document with exactly two transitions (forward and back)")
        fwd, bwd = doc.transitions
        gluing = charts_mod.Gluing(tuple(doc.charts.values())[:2], fwd, bwd)
    elif args.builtin == "p1-cdo":
        gluing = build_p1_cdo("auto" if args.variant == "default" else args.variant)
    elif args.builtin == "p1-tcdo":
        if args.variant in ("omit", "flip"):
            gluing = build_p1_tcdo(twist=args.variant)
        elif args.variant == "default":
            gluing = build_p1_tcdo()
        else:
            gluing = build_p1_tcdo(correction=args.variant)
    else:
        raise UsageError("glue needs --chart FILE or --builtin p1-cdo|p1-tcdo")
    report = gluing.verify(args.weight, args.window)
    report.params["variant"] = args.variant
    return report


def cmd_sing(args) -> Report:
    M = _module(args)
    report = Report("sing", {"chart": M.chart.name, "weight": args.weight, "degree": args.degree,
                             "character": M.cc.as_dict()})
    S = sing(M, args.weight, args.degree)
    top = M.basis(0, args.degree)
    report.add(Check("weight-zero-slice", len(S[0]) == len(top),
                     f"{len(S[0])} singular vectors, {len(top)} weight-zero basis states"))
    for w in range(1, args.weight + 1):
        report.add(Check(f"weight-{w}-empty", not S[w], f"{len(S[w])} singular vectors",
                         None if not S[w] else str(S[w][0])))
    report.data["sing"] = {str(w): [state_to_text(s) for s in v] for w, v in S.items()}
    report.data["module"] = M.describe()
    return report


def cmd_rewrite(args) -> Report:
    M = _module(args)
    if args.expr:
        report = Report("rewrite", {"chart": M.chart.name, "expr": args.expr})
        try:
            m = parse_state(args.expr, M)
        except (DslSyntaxError, DslEvalError) as exc:
            raise UsageError(str(exc)) from None
        try:
            expr = rewrite_to_sing(M, m)
        except RewriteError as exc:
            report.add(Check("rewrite", False, witness=str(exc)))
            return report
        report.add(Check("re-evaluates", expr.evaluate(M) == m, f"{len(expr)} terms"))
        report.data["expression"] = expr.as_tree()
        report.data["filtration_level"] = filtration_level(M, m)
        return report
    r1 = rewrite_suite(M, args.samples, args.seed, args.weight, args.degree)
    r2 = filtration_suite(M, args.samples, 2 * args.samples, args.seed, args.weight, args.degree)
    return _merge("rewrite", [r1, r2], {"samples": args.samples, "seed": args.seed,
                                        "weight": args.weight, "degree": args.degree})


def cmd_roundtrip(args) -> Report:
    raw, doc = _document(args)
    chart = doc.first_chart()
    if args.presentation:
        pres_doc = _read_json(args.presentation)
        pres_doc = pres_doc.get("presentation", pres_doc)
    else:
        pres_doc = raw.get("presentation", {"N": chart.n, "rank": 1})
    try:
        pres = presentation_from_json(pres_doc)
        cc = _character(args, raw)
        return roundtrip_check(pres, cc, args.weight, args.degree, chart=chart)
    except (PresentationError, ModuleError) as exc:
        raise UsageError(str(exc)) from None


def cmd_commutators(args) -> Report:
    _, doc = _document(args)
    return _merge("commutators", [chart_report(c) for c in doc.charts.values()], {})


def _merge(command: str, reports: list[Report], params: dict) -> Report:
    if len(reports) == 1 and not params:
        return reports[0]
    out = Report(command, dict(params))
    for r in reports:
        label = r.params.get("chart", r.command)
        prefix = f"{r.command}[{label}]" if r.command != command or len(reports) > 1 else ""
        for c in r.checks:
            name = f"{prefix}:{c.name}" if prefix else c.name
            out.add(Check(name, c.ok, c.detail, c.witness))
        if r.data:
            out.data[prefix or command] = r.data
    return out


HANDLERS = {
    "eval": cmd_eval, "borcherds": cmd_borcherds, "axioms": cmd_axioms, "glue": cmd_glue,
    "sing": cmd_sing, "rewrite": cmd_rewrite, "roundtrip": cmd_roundtrip, "commutators": cmd_commutators,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--chart", metavar="FILE", help="chart document (JSON)")
    common.add_argument("--builtin", choices=("cn", "p1-cdo", "p1-tcdo"))
    common.add_argument("-N", type=_positive, default=1, help="dimension for --builtin cn")
    common.add_argument("--character", metavar="FILE", help="central character (JSON)")
    common.add_argument("--timing", action="store_true", help="include wall-clock time in the report")

    def seeded(p):
        p.add_argument("--samples", type=_positive, default=100)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    parser = argparse.ArgumentParser(prog="vxcalc", description="Exact vertex-algebra verification tools.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("eval", parents=[common], help="evaluate a state expression")
    p.add_argument("expr")
    p.add_argument("--module", action="store_true", help="evaluate in the module with --character")

    p = sub.add_parser("borcherds", parents=[common], help="random Borcherds identity suite")
    seeded(p)
    p.add_argument("--weight", type=_positive, default=3)
    p.add_argument("--window", type=_positive, default=3)
    p.add_argument("--degree", type=_positive, default=2)
    p.add_argument("--module", action="store_true", help="module form of the identity")

    p = sub.add_parser("axioms", parents=[common], help="vertex algebroid axioms and central lifts")
    p.add_argument("--degree", type=_positive, default=3)

    p = sub.add_parser("glue", parents=[common], help="verify transition maps")
    p.add_argument("--weight", type=_positive, default=2)
    p.add_argument("--window", type=_positive, default=2)
    p.add_argument("--variant", default="default",
                   choices=("default", "d(x)", "d(y)", "sign", "omit", "flip"),
                   help="built-in map variant (negative controls: sign, omit, flip)")

    p = sub.add_parser("sing", parents=[common], help="singular vectors up to cutoffs")
    p.add_argument("--weight", type=_positive, default=3)
    p.add_argument("--degree", type=_positive, default=3)

    p = sub.add_parser("rewrite", parents=[common], help="rewrite states over singular vectors")
    p.add_argument("expr", nargs="?")
    seeded(p)
    p.set_defaults(samples=50)
    p.add_argument("--weight", type=_positive, default=3)
    p.add_argument("--degree", type=_positive, default=2)

    p = sub.add_parser("roundtrip", parents=[common], help="Sing of the induced module recovers the fibre")
    p.add_argument("--presentation", metavar="FILE")
    p.add_argument("--weight", type=_positive, default=3)
    p.add_argument("--degree", type=_positive, default=3)

    sub.add_parser("commutators", parents=[common], help="frame-lift commutator data per chart")
    return parser


def run_command(name: str, argv: list[str]) -> Report:
    """Parse ``argv`` for command ``name`` and run it."""
    if name not in HANDLERS:
        raise UsageError(f"unknown command {name!r}; expected one of {', '.join(COMMANDS)}")
    args = build_parser().parse_args([name, *argv])
    return _run(args)


def _run(args) -> Report:
    start = time.perf_counter()
    report = HANDLERS[args.command](args)
    if args.timing:
        report.timing = time.perf_counter() - start
    return report


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = _run(args)
    except UsageError as exc:
        print(f"vxcalc {args.command}: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(emit_report(report, args.format))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
