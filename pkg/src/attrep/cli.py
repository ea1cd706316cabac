"""Command-line front end: run scenarios, check configs, sweep seeds."""

from __future__ import annotations

import argparse
import sys
import time

from .runner import ConservationError, RunSummary, preflight, run
from .scenario import ConfigError, builtin_names, load_scenario, with_overrides

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="attrep",
        description="Pairwise attraction-repulsion opinion dynamics on multilayer networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--scenario",
            required=True,
            help=f"builtin name {builtin_names()} or path to a YAML scenario file",
        )

    p_run = sub.add_parser("run", help="execute one seeded run")
    add_common(p_run)
    p_run.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p_run.add_argument("--horizon", type=int, default=None, help="override the horizon T")
    p_run.add_argument("--out", default=None, help="directory for trajectories.csv and summary.csv")
    p_run.add_argument("--record-every", type=int, default=None, help="record cadence in steps")
    p_run.add_argument("--dump-graphs", action="store_true", help="also write per-step layer graphs")
    p_run.add_argument("--dump-matchings", action="store_true", help="also write per-step active pairs")

    p_check = sub.add_parser("check", help="validate a scenario and print its preflight report")
    add_common(p_check)
    p_check.add_argument("--samples", type=int, default=200_000, help="Monte Carlo sample count")

    p_sweep = sub.add_parser("sweep", help="run a scenario over a range of seeds")
    add_common(p_sweep)
    p_sweep.add_argument("--seeds", required=True, help="inclusive seed range, e.g. 0..9")
    p_sweep.add_argument("--horizon", type=int, default=None, help="override the horizon T")
    p_sweep.add_argument("--out", default=None, help="parent directory; each seed gets a subdirectory")
    p_sweep.add_argument("--record-every", type=int, default=None, help="record cadence in steps")

    return parser


def _summary_lines(summary: RunSummary, tol: float) -> list[str]:
    lines = [
        f"scenario {summary.name}  seed {summary.seed}  horizon {summary.horizon}",
        f"final consensus error: {summary.final_consensus_error:.6e}",
    ]
    if summary.steps_to_tol is None:
        lines.append(f"steps to tolerance:    not reached (tol {tol:g})")
    else:
        lines.append(f"steps to tolerance:    {summary.steps_to_tol} (tol {tol:g})")
    lines.append(f"conserved-sum drift:   {summary.conserved_sum_drift:.3e} (relative)")
    if summary.thm1_valid is not None:
        lines.append(f"thm1-valid: {'yes' if summary.thm1_valid else 'no'}")
    return lines


def _parse_seed_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ConfigError(f"seeds: expected a..b, got {text!r}")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise ConfigError(f"seeds: expected integers in a..b, got {text!r}") from None
    if b < a:
        raise ConfigError(f"seeds: empty range {text!r}")
    return range(a, b + 1)


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_scenario(args.scenario)
    config = with_overrides(
        config, seed=args.seed, horizon=args.horizon, record_every=args.record_every
    )
    out_dir = args.out if args.out is not None else config.out
    t0 = time.perf_counter()
    summary = run(
        config,
        out_dir=out_dir,
        dump_graphs=args.dump_graphs,
        dump_matchings=args.dump_matchings,
    )
    elapsed = time.perf_counter() - t0
    for line in _summary_lines(summary, config.convergence_tol):
        print(line)
    print(f"runtime: {elapsed:.2f} s")
    if out_dir is not None:
        print(f"wrote {out_dir}/trajectories.csv")
        print(f"wrote {out_dir}/summary.csv")
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    config = load_scenario(args.scenario)
    report = preflight(config, n_samples=args.samples)
    print(f"scenario {config.name}: config ok")
    for label, est in (("chain", report.chain), ("other", report.other)):
        if est.n_samples == 0:
            print(f"{label} class net attraction: {est.value:.6f} (exact)")
        else:
            print(
                f"{label} class net attraction: {est.value:.6f} "
                f"(std err {est.std_error:.2e}, {est.n_samples} samples)"
            )
    print(f"chain edge guaranteed per step: {'yes' if report.chain_edge_guaranteed else 'no'}")
    print(f"thm1-valid: {'yes' if report.thm1_valid else 'no'}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    base = load_scenario(args.scenario)
    base = with_overrides(base, horizon=args.horizon, record_every=args.record_every)
    seeds = _parse_seed_range(args.seeds)
    for seed in seeds:
        config = with_overrides(base, seed=seed)
        out_dir = None
        if args.out is not None:
            out_dir = f"{args.out}/seed-{seed}"
        summary = run(config, out_dir=out_dir)
        to_tol = "-" if summary.steps_to_tol is None else str(summary.steps_to_tol)
        print(
            f"seed {seed}: final error {summary.final_consensus_error:.6e}  "
            f"steps-to-tol {to_tol}  drift {summary.conserved_sum_drift:.2e}"
        )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "check":
            return _cmd_check(args)
        return _cmd_sweep(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConservationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
