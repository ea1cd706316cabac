"""Command-line front end: render attrep CSV outputs to figure files."""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")  # file output only, no display needed

from .plots import plot_diagnostics, plot_trajectories
from .tables import PlotkitError, load_summary, load_trajectories, sidecar_summary_path

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="attrep-plot",
        description="Render attrep trajectory and summary CSVs as figures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_traj = sub.add_parser("traj", help="opinion trajectories, one line per (layer, agent)")
    p_traj.add_argument("--in", dest="infile", required=True, help="path to trajectories.csv")
    p_traj.add_argument(
        "--avg",
        default="auto",
        help="conserved average for the dashed reference line: a number, "
        "'auto' (read the sidecar summary.csv), or 'none'",
    )
    p_traj.add_argument("--window", default=None, help="inclusive time window t0:t1")
    p_traj.add_argument("--out", required=True, help="output figure path (.png or .svg)")

    p_diag = sub.add_parser("diag", help="dispersion and consensus-error panels")
    p_diag.add_argument("--in", dest="infile", required=True, help="path to summary.csv")
    p_diag.add_argument("--out", required=True, help="output figure path (.png or .svg)")

    return parser


def _parse_window(text: str) -> tuple[int, int]:
    t0, sep, t1 = text.partition(":")
    if not sep:
        raise PlotkitError(f"window: expected t0:t1, got {text!r}")
    try:
        return int(t0), int(t1)
    except ValueError:
        raise PlotkitError(f"window: expected integers in t0:t1, got {text!r}") from None


def _resolve_average(spec: str, infile: str) -> float | None:
    if spec == "none":
        return None
    if spec == "auto":
        return load_summary(sidecar_summary_path(infile)).conserved_average()
    try:
        return float(spec)
    except ValueError:
        raise PlotkitError(f"avg: expected a number, 'auto' or 'none', got {spec!r}") from None


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "traj":
            table = load_trajectories(args.infile)
            window = _parse_window(args.window) if args.window else None
            average = _resolve_average(args.avg, args.infile)
            out = plot_trajectories(table, average, args.out, window=window)
        else:
            out = plot_diagnostics(load_summary(args.infile), args.out)
    except PlotkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
