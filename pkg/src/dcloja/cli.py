"""Command line: ``dcloja <group> <verb> [options]``.

Exit codes: 0 verified or certified-heuristic, 1 falsified or diverging,
2 inconclusive, 64 usage error, 65 input or configuration error.  Error
details go to stderr, never into a report file.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction
from typing import Callable, Sequence

from . import __version__
from .assoc import (
    DEFAULT_ETA_LADDER,
    DEFAULT_RHO_LADDER,
    eta_bracket,
    find_rho,
    geometric_grid,
    hm_eval,
)
from .errors import (
    BracketNotFound,
    DCError,
    GridTooNarrow,
    InputError,
    NoFitInLadder,
    StepFailed,
)
from .flatness import FlatModel, check_flat_bound, check_quotient_bound
from .geometry import Axis, Box, parse_grid_specs, zero_set_from_json
from .lojasiewicz import (
    DEFAULT_SIGMA_LADDER,
    axis_probe,
    certify_product_example,
    classical_loja_fit,
    fit_envelope,
    growth_profile,
    make_test_function,
    point_zero_set,
    profile_refinements,
    psi_polynomial,
)
from .report import (
    Ex42Report,
    HmPoint,
    HmTable,
    SeriesValue,
    build_report,
    write_csv,
    write_report,
)
from .series import Polynomial, derivative_at, reciprocal_derivatives
from .weights import Explicit, Gevrey, as_fraction, check_regularity, make_weight_sequence

EXIT_OK, EXIT_FALSIFIED, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 64, 65

VERDICT_EXIT = {
    "verified": EXIT_OK,
    "holds": EXIT_OK,
    "bounded": EXIT_OK,
    "certified-heuristic": EXIT_OK,
    "fails": EXIT_FALSIFIED,
    "falsified": EXIT_FALSIFIED,
    "diverging": EXIT_FALSIFIED,
    "inconclusive": EXIT_INCONCLUSIVE,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# option parsing helpers


def _floats(text: str) -> list[float]:
    try:
        vals = [float(Fraction(v)) for v in text.split(",") if v.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad number list {text!r}") from exc
    if not vals:
        raise InputError("empty list")
    return vals


def _ladder(text: str | None, default: Sequence[float]) -> list[float]:
    vals = list(default) if text is None else _floats(text)
    if any(not (v > 0 and math.isfinite(v)) for v in vals):
        raise InputError("ladder entries must be positive and finite")
    return sorted(vals)


def _sequence(args):
    if args.explicit is not None:
        values = [as_fraction(v) for v in args.explicit.split(",") if v.strip()]
        return make_weight_sequence(Explicit(tuple(values)))
    a, _, b = (args.gevrey or "1,0").partition(",")
    try:
        alpha, beta = float(Fraction(a)), float(Fraction(b or "0"))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad --gevrey value {args.gevrey!r}") from exc
    return make_weight_sequence(Gevrey(alpha, beta))


def _tgrid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError("--tgrid expects lo:hi:n")
    lo, hi = float(Fraction(parts[0])), float(Fraction(parts[1]))
    return geometric_grid(lo, hi, int(parts[2]))


def _grid(specs: list[str] | None, default: Box) -> Box:
    return default if not specs else parse_grid_specs(specs)


def _test_function(args):
    if not args.poly:
        raise InputError("--poly is required")
    phi = Polynomial.parse(args.poly, len(args.grid) if args.grid else None)
    if not args.zero_set:
        raise InputError("--zero-set is required")
    try:
        Z = zero_set_from_json(json.loads(args.zero_set))
    except json.JSONDecodeError as exc:
        raise InputError(f"--zero-set is not JSON: {exc}") from exc
    return make_test_function(phi, Z)


def _config(args) -> dict:
    skip = {"out", "csv", "func", "group", "verb"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


# ---------------------------------------------------------------------------
# verbs; each returns (payload, verdict, csv_header, csv_rows)


def cmd_weights_check(args):
    M = _sequence(args)
    r = check_regularity(M, args.jmax or 64)
    basic = r.normalized and r.increasing and r.log_convex and r.moderate_growth_A is not None
    verdict = "verified" if r.strongly_regular else ("inconclusive" if basic else "falsified")
    rows = [(j, v) for j, v in enumerate(r.qa_partial_sums)]
    return r, verdict, ["j", "qa_partial_sum"], rows


def cmd_hm_eval(args):
    M = _sequence(args)
    if args.t is None:
        raise InputError("--t is required")
    t = float(Fraction(args.t))
    lv, j = hm_eval(M, t)
    return HmPoint(t, math.exp(lv), lv, j), "verified", None, None


def cmd_hm_table(args):
    M = _sequence(args)
    ts = _tgrid(args.tgrid or "1e-4:10:50")
    rows = []
    for t in ts:
        lv, j = hm_eval(M, t)
        rows.append(HmPoint(t, math.exp(lv), lv, j))
    return HmTable(rows), "verified", ["t", "h", "log_h", "minimizer"], [
        (r.t, r.value, r.log_value, r.minimizer) for r in rows
    ]


def cmd_rho_find(args):
    M = _sequence(args)
    ts = _tgrid(args.tgrid or "1e-6:1:1000")
    w = find_rho(M, ts, _ladder(args.rho_ladder, DEFAULT_RHO_LADDER))
    return w, w.verdict, ["rho", "max_defect", "t"], w.defect_table


def cmd_eta_bracket(args):
    M = _sequence(args)
    if not M.is_gevrey:
        raise InputError("eta bracket needs a --gevrey sequence")
    ts = _tgrid(args.tgrid or ("1e-6:0.5:200" if M.kind.beta == 0 else "1e-6:0.1:200"))
    b = eta_bracket(M.kind.alpha, M.kind.beta, ts, _ladder(args.ladder, DEFAULT_ETA_LADDER))
    return b, "verified", None, None


def cmd_series_diff(args):
    if not args.poly or args.point is None or args.J is None:
        raise InputError("--poly, --point and --J are required")
    x = [as_fraction(v) for v in args.point.split(",")]
    phi = Polynomial.parse(args.poly, len(x))
    J = [int(v) for v in args.J.split(",")]
    if len(J) != phi.n:
        raise InputError(f"--J needs {phi.n} entries")
    d = sum(J)
    val = derivative_at(reciprocal_derivatives(phi, x, d), J)
    print(f"{val.numerator}/{val.denominator}")
    return SeriesValue(x, J, val, d), "verified", None, None


def cmd_loja_profile(args):
    F = _test_function(args)
    M = _sequence(args)
    grid = _grid(args.grid, _default_box(F.phi.n))
    p = growth_profile(F, M, args.lam, grid, args.jmax or 12)
    rows = [
        (j, s, None if w is None else list(w.x), None if w is None else list(w.J))
        for j, (s, w) in enumerate(zip(p.s, p.witnesses))
    ]
    return p, "verified", ["j", "log_S", "x", "J"], rows


def cmd_loja_fit(args):
    F = _test_function(args)
    M = _sequence(args)
    grid = _grid(args.grid, _default_box(F.phi.n))
    profiles = profile_refinements(F, M, args.lam, grid, args.jmax or 12, (args.refine or 2) + 1)
    fit = fit_envelope(profiles, _ladder(args.sigma_ladder, DEFAULT_SIGMA_LADDER))
    rows = [
        (level, sg, c) for level, hist in enumerate(fit.log_C_history)
        for sg, c in zip(fit.sigma_ladder, hist)
    ]
    return fit, fit.verdict, ["level", "sigma", "log_C"], rows


def _probe(args):
    M = _sequence(args)
    tl = [as_fraction(v) for v in (args.tladder or "1/5,1/10,1/20,1/40").split(",")]
    return axis_probe(
        args.k or 2, M, args.lam, _ladder(args.sigma_ladder, DEFAULT_SIGMA_LADDER), tl
    )


def _probe_rows(p):
    return [(r.t, r.sigma, r.best_m, r.log_C_required, r.m_scanned) for r in p.rows]


def cmd_loja_probe(args):
    p = _probe(args)
    return p, p.verdict, ["t", "sigma", "best_m", "log_C_required", "m_scanned"], _probe_rows(p)


def cmd_loja_classical(args):
    F = _test_function(args)
    grid = _grid(args.grid, _default_box(F.phi.n))
    fit = classical_loja_fit(F, grid)
    return fit, "verified", ["log_dist", "log_abs_phi"], fit.hull


def _flat_grid(args) -> list[Fraction]:
    box = _grid(args.grid, Box((Axis(Fraction(1, 1000), Fraction(1), 200, True),)))
    for _ in range(args.refine or 0):
        box = box.refine()
    return [x[0] for x in box.points()]


def _flat_rows(fit):
    return [(b.x, b.order, b.lhs, b.rhs) for b in fit.bindings]


def cmd_flat_bound(args):
    M = _sequence(args)
    fit = check_flat_bound(FlatModel(args.alpha or 1), M, _flat_grid(args), args.imax or 30)
    return fit, "verified", ["x", "i", "lhs", "rhs"], _flat_rows(fit)


def cmd_flat_quotient(args):
    M = _sequence(args)
    fit = check_quotient_bound(FlatModel(args.alpha or 1), M, _flat_grid(args), args.pmax or 20)
    return fit, "verified", ["x", "p", "lhs", "rhs"], _flat_rows(fit)


def cmd_reproduce_ex43(args):
    M = _sequence(args)
    env_grid = _grid(args.grid, None) if args.grid else None
    r = certify_product_example(
        args.k or 2,
        M,
        args.lam,
        envelope_grid=env_grid,
        j_max=args.jmax or 16,
        levels=(args.refine or 2) + 1,
        sigma_ladder=_ladder(args.sigma_ladder, DEFAULT_SIGMA_LADDER),
    )
    rows = [
        (level, sg, c) for level, hist in enumerate(r.envelope.log_C_history)
        for sg, c in zip(r.envelope.sigma_ladder, hist)
    ]
    return r, r.verdict, ["level", "sigma", "log_C"], rows


def cmd_reproduce_ex42(args):
    p = _probe(args)
    k = args.k or 2
    F = make_test_function(psi_polynomial(k), point_zero_set())
    grid = _grid(args.grid, _default_box(2, 21))
    c = classical_loja_fit(F, grid)
    contrast = (
        f"classical fit holds with nu = {c.nu:.6g}, C = {c.C:.6g}; axis probe verdict {p.verdict}"
    )
    return Ex42Report(p, c, contrast), p.verdict, [
        "t", "sigma", "best_m", "log_C_required", "m_scanned"
    ], _probe_rows(p)


def _default_box(n: int, count: int = 11) -> Box:
    return Box(tuple(Axis(Fraction(-1, 2), Fraction(1, 2), count) for _ in range(n)))


# ---------------------------------------------------------------------------


VERBS: dict[tuple[str, str], Callable] = {
    ("weights", "check"): cmd_weights_check,
    ("hm", "eval"): cmd_hm_eval,
    ("hm", "table"): cmd_hm_table,
    ("rho", "find"): cmd_rho_find,
    ("eta", "bracket"): cmd_eta_bracket,
    ("series", "diff"): cmd_series_diff,
    ("loja", "profile"): cmd_loja_profile,
    ("loja", "fit"): cmd_loja_fit,
    ("loja", "probe"): cmd_loja_probe,
    ("loja", "classical"): cmd_loja_classical,
    ("flat", "bound"): cmd_flat_bound,
    ("flat", "quotient"): cmd_flat_quotient,
    ("reproduce", "ex43"): cmd_reproduce_ex43,
    ("reproduce", "ex42"): cmd_reproduce_ex42,
}


def _add_common(p: argparse.ArgumentParser):
    seq = p.add_mutually_exclusive_group()
    seq.add_argument("--gevrey", metavar="A,B", help="Gevrey sequence j!^A ln(j+e)^(B j)")
    seq.add_argument("--explicit", metavar="V0,V1,...", help="explicit weights, rationals allowed")
    p.add_argument("--k", type=int, help="exponent parameter of x1^2 + x2^(2k)")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0, help="lambda (default 1)")
    p.add_argument("--sigma-ladder", help="comma separated sigma values")
    p.add_argument("--rho-ladder", help="comma separated rho values")
    p.add_argument("--ladder", help="comma separated constants for eta bracketing")
    p.add_argument("--grid", action="append", metavar="x1:lo:hi:n[,geom]", help="one per axis")
    p.add_argument("--jmax", type=int)
    p.add_argument("--imax", type=int)
    p.add_argument("--pmax", type=int)
    p.add_argument("--alpha", type=int, help="integer exponent of the flat model")
    p.add_argument("--t", help="a single t value")
    p.add_argument("--tgrid", metavar="lo:hi:n", help="geometric t grid")
    p.add_argument("--tladder", help="comma separated decreasing t values")
    p.add_argument("--refine", type=int, help="number of nested refinements")
    p.add_argument("--poly", help="polynomial in x1, x2, ...")
    p.add_argument("--zero-set", help='zero set JSON, e.g. {"hyperplane": 1}')
    p.add_argument("--point", help="comma separated rational coordinates")
    p.add_argument("--J", help="comma separated multi-index")
    p.add_argument("--out", help="report file (default stdout)")
    p.add_argument("--csv", help="CSV side table")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dcloja", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)
    by_group: dict[str, list[str]] = {}
    for g, v in VERBS:
        by_group.setdefault(g, []).append(v)
    for g, verbs in by_group.items():
        gp = groups.add_parser(g)
        sub = gp.add_subparsers(dest="verb", required=True, parser_class=_Parser)
        for v in verbs:
            vp = sub.add_parser(v)
            _add_common(vp)
    return parser


def _validate(args):
    for name in ("jmax", "imax", "pmax", "k", "alpha"):
        v = getattr(args, name)
        if v is not None and v < 1:
            raise InputError(f"--{name} must be >= 1")
    if args.refine is not None and args.refine < 0:
        raise InputError("--refine must be >= 0")
    if not (args.lam > 0 and math.isfinite(args.lam)):
        raise InputError("--lambda must be positive")


def run_command(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    func = VERBS[(args.group, args.verb)]
    start = time.perf_counter()
    try:
        _validate(args)
        payload, verdict, header, rows = func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NoFitInLadder, StepFailed) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED
    except (BracketNotFound, GridTooNarrow) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (DCError, ZeroDivisionError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = build_report(
        f"{args.group} {args.verb}", _config(args), payload, verdict, time.perf_counter() - start
    )
    if args.out or args.group != "series":
        write_report(report, args.out)
    if args.csv and header is not None:
        write_csv(args.csv, header, rows)
    return VERDICT_EXIT.get(verdict, EXIT_INCONCLUSIVE)


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
