"""Command line interface.

    balancing [--config FILE] [--precision N] [--max-bound N]
              [--format text|structured] [--threads N] [--timing]
              {verify,bounds,reduce,solve,oracle} ...

Exit status: 0 success, 1 failed invariant, 2 configuration error,
3 precision or convergence failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import Optional

import mpmath

from . import __version__
from .arithmetic import GUARD_DIGITS
from .bounds import derive_upper_constants, round_bound
from .config import ConfigError, RunConfig
from .curve import Curve, CurvePoint, naive_height
from .diophantine import (
    INTEGRAL_PAIRS,
    DegenerateMapError,
    balance_sides,
    brute_force_oracle,
    check_hockey_stick,
    check_cubic,
    enumerate_solutions,
    point_to_uv,
    to_uv,
    uv_to_point,
)
from .elliptic_log import ConvergenceError, real_period, real_period_quadrature, zagier_phi
from .estimator import IntegralPointSolver
from .reduction import PrecisionError

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_PRECISION = 0, 1, 2, 3

# published reference values, reported next to the computed ones
REFERENCE = {
    "omega": "5.832948",
    "u0": "5.289657",
    "u1": "4.158074",
    "u2": "2.851605",
    "u3": "0.627538",
    "c1": "0.125612",
    "A": "11.1789",
    "B": "0.251224",
    "M0": "1.4e86",
    "reduced_bound": "11",
}


def _num(x, digits: int = 20) -> str:
    if isinstance(x, int):
        return str(x)
    return mpmath.nstr(x, digits, min_fixed=-5, max_fixed=30)


def _row(name, computed, digits=20):
    ref = REFERENCE.get(name)
    row = {"name": name, "computed": _num(computed, digits)}
    if ref is not None:
        with mpmath.workdps(60):
            diff = abs(mpmath.mpf(computed) - mpmath.mpf(ref))
        row["published"] = ref
        row["difference"] = mpmath.nstr(diff, 3)
    return row


# verify -----------------------------------------------------------------


def _check(name, ok, residual=None, detail=None):
    out = {"group": name, "passed": bool(ok)}
    if residual is not None:
        out["residual"] = mpmath.nstr(residual, 3) if not isinstance(residual, str) else residual
    if detail:
        out["detail"] = detail
    return out


def run_verify(cfg: RunConfig) -> tuple[dict, bool]:
    checks = []
    E = Curve(*cfg.curve)
    basis = tuple(CurvePoint.of(x, y) for x, y in cfg.generators)
    off = [str(P) for P in basis if not E.contains(P)]
    checks.append(_check("generators on curve", not off, detail=", ".join(off) or None))

    solver = IntegralPointSolver.from_config(cfg)
    p = cfg.precision
    Q0 = solver._base_point(p)
    with mpmath.workdps(p + GUARD_DIGITS):
        res = abs(Q0.y ** 2 - E.rhs(Q0.x))
        checks.append(_check("base point on curve", res < mpmath.mpf(10) ** (-p + GUARD_DIGITS), res))

    omega = real_period(E, p)
    quad = real_period_quadrature(E, 20)
    checks.append(_check("period: AGM vs quadrature", abs(omega - quad) < mpmath.mpf("1e-8"),
                         abs(omega - quad)))

    bad_equiv = []
    for x in range(6, 61):
        for y in range(x + 1, 61):
            lhs, rhs = balance_sides(x, y)
            a, b, c = lhs == rhs, check_hockey_stick(x, y), check_cubic(to_uv(x, y))
            if not a == b == c:
                bad_equiv.append((x, y))
    checks.append(_check("transform equivalence 6 < x < y <= 60", not bad_equiv,
                         detail=str(bad_equiv[:5]) if bad_equiv else None))

    bad_round = []
    for pair in sorted(INTEGRAL_PAIRS):
        try:
            P = uv_to_point(pair)
        except DegenerateMapError:
            continue
        if not (E.contains(P) and any(tuple(map(int, q)) == pair for q in point_to_uv(P))):
            bad_round.append(pair)
    checks.append(_check("known pairs round trip through the curve", not bad_round,
                         detail=str(bad_round) if bad_round else None))

    if off:
        checks.append(_check("generator-dependent checks", False, detail="skipped: invalid generators"))
    else:
        with mpmath.workdps(p + GUARD_DIGITS):
            phis = [zagier_phi(E, P, p) for P in basis]
            worst = mpmath.mpf(0)
            for i in range(len(basis)):
                for j in range(i, len(basis)):
                    s = zagier_phi(E, E.add(basis[i], basis[j]), p)
                    d = (phis[i] + phis[j] - s) % 1
                    worst = max(worst, min(d, 1 - d))
        checks.append(_check("elliptic log additivity", worst < mpmath.mpf(10) ** (-p // 2), worst))

        solver.fit_heights()
        checks.append(_check("pairing matrix positive definite", solver.c1_ > 0, solver.c1_))
        with mpmath.workdps(p + GUARD_DIGITS):
            worst = mpmath.mpf(0)
            for P in basis:
                h1 = solver.curve_.canonical_height(P, p)
                h2 = solver.curve_.canonical_height(E.double(P), p)
                worst = max(worst, abs(h2 - 4 * h1))
        checks.append(_check("canonical height quadraticity", worst < mpmath.mpf(10) ** (-p // 2), worst))

        gap = max(E.canonical_height(P, 30) - naive_height(P, 30) for P in basis)
        checks.append(_check("height difference below constant",
                             gap < mpmath.mpf(cfg.silverman), gap))

    ok = all(c["passed"] for c in checks)
    return {"command": "verify", "passed": ok, "checks": checks}, ok


# bounds / reduce / solve -------------------------------------------------


def _bounds_rows(solver: IntegralPointSolver) -> list[dict]:
    rows = [_row("omega", solver.omega_), _row("u0", solver.u0_)]
    rows += [_row(f"u{i + 1}", u) for i, u in enumerate(solver.elliptic_logs_)]
    rows.append(_row("c1", solver.c1_))
    A_pub, B_pub = derive_upper_constants(solver.c1_, solver.constants_.silverman,
                                          solver.constants_.height_log_coeff, "published")
    rows.append(_row("A", A_pub))
    rows.append(_row("B", B_pub))
    if solver.constants_.slope_convention != "published":
        rows.append({"name": f"B ({solver.constants_.slope_convention}, used)",
                     "computed": _num(solver.constants_.B)})
    M0 = solver.initial_bound_
    row = _row("M0", M0)
    row["computed"] = round_bound(M0)
    row["exact"] = str(M0)
    rows.append(row)
    return rows


def run_bounds(cfg: RunConfig) -> tuple[dict, bool]:
    solver = IntegralPointSolver.from_config(cfg)
    solver.fit_logs()
    solver.fit_heights()
    solver.fit_bounds()
    return {"command": "bounds", "slope_convention": cfg.slope_convention,
            "rows": _bounds_rows(solver), "timing": solver.timings_}, True


def _steps(solver) -> list[dict]:
    return [{"M_in": str(s.M_in), "M_out": s.M_out, "log10_C": len(str(s.C)) - 1,
             "retries": s.retries} for s in solver.reduction_steps_]


def run_reduce(cfg: RunConfig) -> tuple[dict, bool]:
    solver = IntegralPointSolver.from_config(cfg)
    solver.fit_heights()
    solver.fit_bounds()
    solver.fit_reduction()
    report = {"command": "reduce", "slope_convention": cfg.slope_convention,
              "initial_bound": str(solver.initial_bound_), "steps": _steps(solver),
              "reduced_bound": _row("reduced_bound", solver.reduced_bound_),
              "timing": solver.timings_}
    return report, True


def run_solve(cfg: RunConfig) -> tuple[dict, bool]:
    solver = IntegralPointSolver.from_config(cfg).fit()
    report = {
        "command": "solve",
        "slope_convention": cfg.slope_convention,
        "bounds": _bounds_rows(solver),
        "steps": _steps(solver),
        "reduced_bound": solver.reduced_bound_,
        "search_bound": solver.search_bound_,
        "complete": solver.complete_,
        "uv_solutions": [list(p) for p in sorted(solver.solutions_)],
        "xy_solutions": [list(p) for p in sorted(solver.xy_solutions_)],
        "timing": solver.timings_,
    }
    if not solver.complete_:
        report["warning"] = (f"search bound {solver.search_bound_} is below the reduced bound "
                             f"{solver.reduced_bound_}; completeness is not established")
    return report, True


def run_oracle(cfg: RunConfig, v_min: int, v_max: int, compare_bound: Optional[int]) -> tuple[dict, bool]:
    t = time.perf_counter()
    found = brute_force_oracle(v_min, v_max)
    timing = {"oracle": time.perf_counter() - t}
    report = {"command": "oracle", "v_min": v_min, "v_max": v_max,
              "pairs": [list(p) for p in sorted(found)], "count": len(found)}
    if compare_bound is None:
        solver = IntegralPointSolver.from_config(cfg)
        solver.fit_heights()
        solver.fit_bounds()
        solver.fit_reduction()
        compare_bound = solver.reduced_bound_
    t = time.perf_counter()
    E = Curve(*cfg.curve)
    basis = tuple(CurvePoint.of(x, y) for x, y in cfg.generators)
    enum = {p for p in enumerate_solutions(E, basis, compare_bound, cfg.threads) if v_min <= p.v <= v_max}
    timing["enumeration"] = time.perf_counter() - t
    agrees = enum == found
    report["enumeration_bound"] = compare_bound
    report["agrees_with_enumeration"] = agrees
    if not agrees:
        report["only_oracle"] = [list(p) for p in sorted(found - enum)]
        report["only_enumeration"] = [list(p) for p in sorted(enum - found)]
    report["timing"] = timing
    return report, agrees


# rendering ----------------------------------------------------------------


def _render_text(report: dict) -> str:
    lines = []
    cmd = report["command"]
    if cmd == "verify":
        for c in report["checks"]:
            extra = f"  residual={c['residual']}" if "residual" in c else ""
            extra += f"  ({c['detail']})" if "detail" in c else ""
            lines.append(f"[{'PASS' if c['passed'] else 'FAIL'}] {c['group']}{extra}")
        lines.append("all invariants hold" if report["passed"] else "invariant failures")
    for key in ("bounds", "rows"):
        if key in report:
            lines.append(f"{'quantity':<26}{'computed':<28}{'published':<12}difference")
            for r in report[key]:
                lines.append(f"{r['name']:<26}{r['computed']:<28}{r.get('published', ''):<12}"
                             f"{r.get('difference', '')}")
    if "initial_bound" in report:
        lines.append(f"initial bound M0 = {report['initial_bound']}")
    if "steps" in report:
        for s in report["steps"]:
            lines.append(f"reduction: M {s['M_in']} -> {s['M_out']}  (C = 10^{s['log10_C']}, "
                         f"retries {s['retries']})")
    if cmd == "reduce":
        lines.append(f"reduced bound: {report['reduced_bound']['computed']}")
    if cmd == "solve":
        lines.append(f"search bound: {report['search_bound']} (reduced bound {report['reduced_bound']})")
        if "warning" in report:
            lines.append("WARNING: " + report["warning"])
        lines.append(f"integral (u, v) solutions ({len(report['uv_solutions'])}):")
        lines += [f"  ({u}, {v})" for u, v in report["uv_solutions"]]
        lines.append("solutions (x, y): " + ", ".join(f"({x}, {y})" for x, y in report["xy_solutions"]))
    if cmd == "oracle":
        lines.append(f"brute force over {report['v_min']} <= v <= {report['v_max']}: {report['count']} pairs")
        lines += [f"  ({u}, {v})" for u, v in report["pairs"]]
        verdict = "agrees with enumeration" if report["agrees_with_enumeration"] else "DISAGREES with enumeration"
        lines.append(f"{verdict} (bound {report['enumeration_bound']})")
    if "timing" in report:
        lines.append("timing: " + ", ".join(f"{k} {v:.2f}s" for k, v in report["timing"].items()))
    return "\n".join(lines)


def render(report: dict, fmt: str, timing: bool = False) -> str:
    if fmt == "structured":
        report = dict(report)
        if not timing:
            report.pop("timing", None)
        return json.dumps(report, indent=2, default=str)
    return _render_text(report)


# entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="balancing", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="INI run configuration")
    parser.add_argument("--precision", type=int, help="decimal digits for logs and heights")
    parser.add_argument("--max-bound", type=int, help="override the enumeration bound")
    parser.add_argument("--format", choices=("text", "structured"), help="output format")
    parser.add_argument("--threads", type=int, help="worker processes for enumeration")
    parser.add_argument("--timing", action="store_true", help="include timings in structured output")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", help="run the invariant suites")
    sub.add_parser("bounds", help="period, logarithms, c1, A, B and M0")
    sub.add_parser("reduce", help="lattice reduction of the initial bound")
    sub.add_parser("solve", help="full pipeline")
    p_or = sub.add_parser("oracle", help="brute-force search independent of the curve")
    p_or.add_argument("--v-min", type=int)
    p_or.add_argument("--v-max", type=int)
    return parser


def load_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    if args.precision is not None:
        cfg.precision = args.precision
    if args.max_bound is not None:
        cfg.max_bound = args.max_bound
    if args.format is not None:
        cfg.output_format = args.format
    if args.threads is not None:
        cfg.threads = args.threads
    if getattr(args, "v_min", None) is not None:
        cfg.oracle_v_min = args.v_min
    if getattr(args, "v_max", None) is not None:
        cfg.oracle_v_max = args.v_max
    return cfg.validate()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args)
        if args.command == "verify":
            report, ok = run_verify(cfg)
        elif args.command == "bounds":
            report, ok = run_bounds(cfg)
        elif args.command == "reduce":
            report, ok = run_reduce(cfg)
        elif args.command == "solve":
            report, ok = run_solve(cfg)
        else:
            report, ok = run_oracle(cfg, cfg.oracle_v_min, cfg.oracle_v_max, cfg.max_bound)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PrecisionError, ConvergenceError) as exc:
        print(f"precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(render(report, cfg.output_format, args.timing))
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
