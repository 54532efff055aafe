"""Command-line front end.

Exit codes: 0 success, 1 malformed arguments, 2 validation error,
3 numerical failure, 4 a convergence or residual check failed.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys

from .core import (
    ContractError,
    FluxParams,
    NumericalError,
    State,
    System,
    ValidationError,
    check_solution,
    lax_satisfied,
    rh_residual,
    validate,
)
from .isentropic import sample_profile, solve_isentropic, vacuum_threshold
from .limitlab import (
    ERROR_COLUMNS,
    PATHS,
    SweepRecord,
    check_two_shock_convergence,
    path_schedule,
    sweep_two_rarefaction,
    sweep_two_shock,
    two_shock_errors,
    two_shock_limits,
    weak_limit_weights,
)
from .perturbed import eps1_limit_table, solve_perturbed_transport
from .serialize import SOLUTION_CSV_HEADER, solution_csv_rows, solution_to_dict, to_csv, to_json
from .testfunctions import get_suite
from .transport import (
    DeltaShockData,
    grh_residual,
    solve_zero_pressure,
    weak_form_residual,
    zero_pressure_delta,
)

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_CHECK = 0, 1, 2, 3, 4
RESIDUAL_TOL = 1e-8


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _pair(text) -> tuple[float, float]:
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected RHO,U but got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two numbers in {text!r}") from None


def _floats(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _add_data(p, system=True):
    if system:
        p.add_argument("--system", choices=[s.value for s in System])
    p.add_argument("--left", type=_pair, metavar="RHO,U")
    p.add_argument("--right", type=_pair, metavar="RHO,U")
    p.add_argument("--eps1", type=float, default=0.0)
    p.add_argument("--eps2", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=2.0)
    p.add_argument("--format", choices=("json", "csv"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fluxriemann", description=__doc__.splitlines()[0])
    parser.add_argument("--seed-config", metavar="FILE",
                        help="JSON object whose keys mirror the command's flags")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("solve", help="solve a Riemann problem")
    _add_data(p)

    p = sub.add_parser("sample", help="sample the self-similar profile at time t")
    _add_data(p)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--x-min", type=float, default=-1.0)
    p.add_argument("--x-max", type=float, default=1.0)
    p.add_argument("--n", type=int, default=101)
    p.add_argument("--xi", type=_floats, default=None, help="explicit xi values (overrides the grid)")

    p = sub.add_parser("sweep", help="vanishing-perturbation sweep")
    _add_data(p)
    p.add_argument("--schedule", type=_floats, default=None)
    p.add_argument("--path", choices=PATHS, default="eq")
    p.add_argument("--tests", default=None, help="pair two-shock solutions with a test suite")

    p = sub.add_parser("threshold", help="vacuum threshold eps0 for diverging data")
    _add_data(p, system=False)

    p = sub.add_parser("residual", help="weak-form and generalized RH residuals")
    _add_data(p)
    p.add_argument("--tests", default="default")
    return parser


def _load_config(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise UsageError("seed config must be a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


_NUMERIC = re.compile(r"^-[\d.]")


def _glue_negative_values(argv):
    """Turn ``--xi -0.5,1`` into ``--xi=-0.5,1`` so argparse does not read an option."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NUMERIC.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def parse_args(argv):
    argv = _glue_negative_values(argv)
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--seed-config")
    known, _ = pre.parse_known_args(argv)
    if known.seed_config:
        try:
            cfg = _load_config(known.seed_config)
        except (OSError, ValueError, UsageError) as exc:
            parser.error(f"cannot read seed config: {exc}")
        args = parser.parse_args(argv)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        dests = {a.dest: a for a in sub._actions}
        for key, value in cfg.items():
            if key not in dests or key == "help":
                parser.error(f"unknown key {key!r} in seed config for {args.command}")
            flag = "--" + key.replace("_", "-")
            if flag in argv or any(a.startswith(flag + "=") for a in argv):
                continue
            action = dests[key]
            try:
                value = action.type(value) if action.type and value is not None else value
            except (argparse.ArgumentTypeError, TypeError, ValueError) as exc:
                parser.error(f"bad value for {key!r} in seed config: {exc}")
            if action.choices is not None and value not in action.choices:
                parser.error(f"bad value for {key!r} in seed config: {value!r}")
            setattr(args, key, value)
        return args
    return parser.parse_args(argv)


def _data(args, need_system=True):
    if args.left is None or args.right is None:
        raise UsageError("--left and --right are required")
    if need_system and args.system is None:
        raise UsageError("--system is required")
    return State(*args.left), State(*args.right)


def _solve(args):
    left, right = _data(args)
    system = System(args.system)
    if system is System.ZERO_PRESSURE:
        validate(left, right, FluxParams(args.eps1, args.eps2, args.gamma), system)
        return solve_zero_pressure(left, right)
    if system is System.PERTURBED_TRANSPORT:
        validate(left, right, FluxParams(args.eps1, args.eps2, args.gamma), system)
        return solve_perturbed_transport(left, right, args.eps1)
    params = FluxParams(args.eps1, args.eps2, args.gamma)
    validate(left, right, params, system)
    return solve_isentropic(left, right, params)


def cmd_solve(args, out) -> int:
    sol = _solve(args)
    check_solution(sol)
    if (args.format or "json") == "json":
        out.write(to_json(solution_to_dict(sol)))
    else:
        out.write(to_csv(SOLUTION_CSV_HEADER, solution_csv_rows(sol)))
    return EXIT_OK


def cmd_sample(args, out) -> int:
    sol = _solve(args)
    if args.t <= 0:
        raise ValidationError("--t must be positive")
    if args.xi is not None:
        xis = list(args.xi)
    else:
        if args.n < 1:
            raise ValidationError("--n must be >= 1")
        if args.n == 1:
            xs = [args.x_min]
        else:
            h = (args.x_max - args.x_min) / (args.n - 1)
            xs = [args.x_min + k * h for k in range(args.n)]
        xis = [x / args.t for x in xs]
    lo, hi = min(xis), max(xis)
    deltas = [w for w in sol.waves if w.kind == "delta_shock" and lo <= w.sigma <= hi]
    points = sorted(set(xis) | {d.sigma for d in deltas})
    rows = []
    for xi in points:
        s = sample_profile(sol, xi)
        if s.singular:
            d = s.delta
            rows.append((xi, d.weight(args.t), d.sigma, "delta"))
        else:
            rows.append((xi, s.state.rho, s.state.u, s.flag))
    if args.format == "json":
        out.write(to_json([dict(zip(("xi", "rho", "u", "flag"), r)) for r in rows]))
    else:
        out.write(to_csv(("xi", "rho", "u", "flag"), rows))
    return EXIT_OK


def _schedule(args):
    if args.schedule is None:
        raise UsageError("--schedule is required")
    return args.schedule


def cmd_sweep(args, out, err) -> int:
    left, right = _data(args)
    system = System(args.system)
    fmt = args.format or "csv"
    problems: list[str] = []
    if system is System.PERTURBED_TRANSPORT:
        rows = eps1_limit_table(left, right, _schedule(args))
        header = ("eps1", "sigma", "w_rate")
        table = [(r.eps1, r.sigma, r.w_rate) for r in rows]
        if len(rows) > 1 and left.u > right.u:
            ref = zero_pressure_delta(left, right)
            ds = [abs(r.sigma - ref.sigma) for r in rows]
            dw = [abs(r.w_rate - ref.w_rate) for r in rows]
            for k in range(1, len(rows)):
                if not (ds[k] < ds[k - 1] and dw[k] < dw[k - 1]):
                    problems.append(f"discrepancy not decreasing at entry {k}")
    elif system is System.ISENTROPIC:
        pairs = path_schedule(_schedule(args), args.path)
        if left.u > right.u:
            lim = two_shock_limits(left, right, args.gamma)
            if args.tests:
                report = weak_limit_weights(left, right, args.gamma, pairs, get_suite(args.tests))
                header = ("eps1", "eps2", "test", "i_rho", "target_rho", "i_mom", "target_mom",
                          "w1_rate_est", "w2_rate_est")
                table = [(r.eps1, r.eps2, r.test, r.i_rho, r.target_rho, r.i_mom, r.target_mom,
                          r.w1_rate_est, r.w2_rate_est) for r in report.rows]
                problems = report.problems()
            else:
                records = sweep_two_shock(left, right, args.gamma, pairs)
                errs = two_shock_errors(records, lim)
                header = SweepRecord.FIELDS + tuple(f"err_{c}" for c in ERROR_COLUMNS)
                table = [r.row() + tuple(errs[c][k] for c in ERROR_COLUMNS)
                         for k, r in enumerate(records)]
                problems = check_two_shock_convergence(records, lim)
        elif left.u < right.u:
            report = sweep_two_rarefaction(left, right, args.gamma, pairs)
            header = ("eps1", "eps2", "u1", "u2", "rho_mid")
            table = [(r.eps1, r.eps2, r.u1, r.u2, r.rho_mid) for r in report.records]
            problems = report.problems()
        else:
            raise ValidationError("sweep needs u_- != u_+")
    else:
        raise ValidationError("sweep supports --system pt or ise")
    if fmt == "json":
        out.write(to_json([dict(zip(header, row)) for row in table]))
    else:
        out.write(to_csv(header, table))
    for p in problems:
        err.write(f"check failed: {p}\n")
    return EXIT_CHECK if problems else EXIT_OK


def cmd_threshold(args, out) -> int:
    left, right = _data(args, need_system=False)
    if not args.gamma > 1:
        raise ValidationError("gamma must be > 1")
    try:
        eps0 = vacuum_threshold(left, right, args.gamma)
    except ContractError as exc:
        raise ValidationError(str(exc)) from exc
    if args.format == "json":
        finite = math.isfinite(eps0)
        out.write(to_json({"eps0": eps0 if finite else None,
                           "always_constant_density_fan": not finite}))
    else:
        out.write(to_csv(("eps0",), [(eps0,)]))
    return EXIT_OK


def cmd_residual(args, out) -> int:
    sol = _solve(args)
    rows = []
    if sol.system is System.ISENTROPIC:
        for i, w in enumerate(sol.waves):
            if w.kind == "shock":
                r1, r2 = rh_residual(w.speed, w.left, w.right, sol.params)
                rows += [(f"shock{i}", "rh_mass", r1), (f"shock{i}", "rh_momentum", r2),
                         (f"shock{i}", "lax_violation", 0.0 if lax_satisfied(w, sol.params) else 1.0)]
    else:
        for w in sol.waves:
            if w.kind == "delta_shock":
                d = DeltaShockData(w.sigma, w.w_rate, sol.left, sol.right)
                r = grh_residual(d, sol.left, sol.right, sol.params.eps1)
                rows += [("grh", f"r{k + 1}", v) for k, v in enumerate(r)]
        for test in get_suite(args.tests):
            rm, rp = weak_form_residual(sol, test)
            rows += [(test.name, "mass", rm), (test.name, "momentum", rp)]
    if args.format == "json":
        out.write(to_json([dict(zip(("check", "component", "value"), r)) for r in rows]))
    else:
        out.write(to_csv(("check", "component", "value"), rows))
    bad = [r for r in rows if not abs(r[2]) < RESIDUAL_TOL]
    return EXIT_CHECK if bad else EXIT_OK


def main(argv=None, out=None, err=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "solve":
            return cmd_solve(args, out)
        if args.command == "sample":
            return cmd_sample(args, out)
        if args.command == "sweep":
            return cmd_sweep(args, out, err)
        if args.command == "threshold":
            return cmd_threshold(args, out)
        return cmd_residual(args, out)
    except UsageError as exc:
        err.write(f"fluxriemann: error: {exc}\n")
        return EXIT_USAGE
    except (ValidationError, ContractError) as exc:
        err.write(f"fluxriemann: invalid input: {exc}\n")
        return EXIT_VALIDATION
    except NumericalError as exc:
        err.write(f"fluxriemann: numerical failure: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
