"""``maxgame`` command line: solve, sweep, curve, verify, refute, simulate.

Payloads go to stdout (or ``--out``); log lines go to stderr.
Exit codes: 0 ok, 1 negative verification/refutation, 2 usage, 3 numeric or I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from maxgame.montecarlo import run_tournament
from maxgame.oracle import (
    DEFAULT_GRID,
    DEFAULT_SLACK,
    MIN_GRID,
    grid_error_bound,
    refute_profile,
    shifted_candidate,
    verify_equilibrium,
)
from maxgame.payoff import indifference_line, win_curve_vs_equilibrium
from maxgame.solver import solve, sweep, sweep_csv
from maxgame.types import (
    ConvergenceFailure,
    DiscreteDistribution,
    DistributionError,
    DomainError,
    MaxGameError,
    NoDeviationFound,
    validate_config,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

log = logging.getLogger("maxgame")


class UsageError(Exception):
    pass


class OutputError(Exception):
    pass


def _g17(x: float) -> str:
    return format(x, ".17g")


def _config(args):
    try:
        return validate_config(args.n, args.mu)
    except MaxGameError as exc:
        raise UsageError(str(exc)) from exc


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise OutputError(f"cannot write {out}: {exc}") from exc
    log.info("wrote %s", out)


def cmd_solve(args) -> int:
    eq = solve(_config(args))
    if args.json:
        _emit(json.dumps(eq.to_dict()) + "\n", args.out)
    else:
        lines = [
            f"n       {eq.n}",
            f"mu      {_g17(eq.mu)}",
            f"regime  {eq.regime}",
            f"a       {_g17(eq.a)}",
            f"s       {_g17(eq.s)}",
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if not (2 <= args.n_min <= args.n_max):
        raise UsageError(f"need 2 <= --n-min <= --n-max, got {args.n_min}..{args.n_max}")
    if not (0.0 < args.mu < 1.0):
        raise UsageError("--mu must lie in (0, 1)")
    _emit(sweep_csv(sweep(args.mu, args.n_min, args.n_max)), args.out)
    return EXIT_OK


def cmd_curve(args) -> int:
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    cfg = _config(args)
    curve = win_curve_vs_equilibrium(solve(cfg))
    xs, ws = curve.sample(args.grid)
    line = indifference_line(xs, cfg.n, cfg.mu)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "w", "line"])
    for row in zip(xs, ws, line):
        writer.writerow([_g17(float(v)) for v in row])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.grid < MIN_GRID:
        raise UsageError(f"--grid must be at least {MIN_GRID}")
    cfg = _config(args)
    ok, report = verify_equilibrium(cfg, args.grid, args.slack)
    payload = {
        "verified": ok,
        "slack": args.slack,
        "grid_error_bound": grid_error_bound(solve(cfg), args.grid),
        "report": report.to_dict(),
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    log.info("margin %.3e (slack %g): %s", report.margin, args.slack, "ok" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_NEGATIVE


def _parse_shifted(text: str):
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--shifted expects t or t,a,s; got {text!r}") from exc
    if len(parts) == 1:
        return parts[0], None, None
    if len(parts) == 3:
        return tuple(parts)
    raise UsageError(f"--shifted expects t or t,a,s; got {text!r}")


def cmd_refute(args) -> int:
    if args.grid < MIN_GRID:
        raise UsageError(f"--grid must be at least {MIN_GRID}")
    cfg = _config(args)
    try:
        if args.profile is not None:
            try:
                text = Path(args.profile).read_text()
            except OSError as exc:
                raise UsageError(f"cannot read {args.profile}: {exc}") from exc
            profile = DiscreteDistribution.from_json(text, mean=cfg.mu)
        else:
            t, a, s = _parse_shifted(args.shifted)
            profile = shifted_candidate(cfg, t, a, s)
    except (DistributionError, DomainError) as exc:
        raise UsageError(str(exc)) from exc
    try:
        report = refute_profile(profile, cfg, args.grid, args.slack)
    except NoDeviationFound as exc:
        log.info("%s", exc)
        _emit(json.dumps(exc.report.to_dict(), indent=2) + "\n", args.out)
        return EXIT_NEGATIVE
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    log.info("profitable deviation, margin %.6g", report.margin)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.seed is None:
        raise UsageError("simulate requires --seed")
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    cfg = _config(args)
    eq = solve(cfg)
    strategies = [eq] * cfg.n
    if args.deviation is not None:
        try:
            strategies[0] = DiscreteDistribution.from_json(
                Path(args.deviation).read_text(), mean=cfg.mu
            )
        except (OSError, DistributionError) as exc:
            raise UsageError(f"bad --deviation file: {exc}") from exc
    report = run_tournament(strategies, args.trials, args.seed)
    _emit(report.to_csv() if args.csv else report.to_json() + "\n", args.out)
    return EXIT_OK


def _game_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True, help="number of players")
    p.add_argument("--mu", type=float, required=True, help="required mean, in (0, 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maxgame", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="symmetric equilibrium for one (n, mu)")
    _game_flags(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="equilibria over a range of n (CSV)")
    p.add_argument("--mu", type=float, default=0.5)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=25)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("curve", help="win curve against the equilibrium (CSV x,w,line)")
    _game_flags(p)
    p.add_argument("--grid", type=int, default=1001)
    p.add_argument("--out")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("verify", help="grid best response against the equilibrium")
    _game_flags(p)
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p.add_argument("--slack", type=float, default=DEFAULT_SLACK)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("refute", help="find a profitable deviation from a candidate profile")
    _game_flags(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--profile", help='JSON file {"points": [[x, p], ...]}')
    src.add_argument("--shifted", help="shifted-support candidate: t or t,a,s")
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p.add_argument("--slack", type=float, default=DEFAULT_SLACK)
    p.add_argument("--out")
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("simulate", help="seeded Monte Carlo tournament")
    _game_flags(p)
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--deviation", help="player 0 plays this JSON distribution instead")
    p.add_argument("--csv", action="store_true", help="row-per-player CSV instead of JSON")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"maxgame {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceFailure, ArithmeticError, MaxGameError, OutputError) as exc:
        print(f"maxgame {args.command}: failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
