"""Command-line front end.

Exit codes: 0 on success, 1 on a domain or I/O error (one line on stderr),
2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import jsonfmt
from .bidisperse import construct_with_moment
from .bounds import BoundInput, SupportBounds, moment_limits, report_to_json
from .decompose import decompose
from .errors import MomentBoundsError
from .moments import DiscreteDistribution, summarize
from .sweep import SweepConfig, run_sweep, write_report


def _int_list(text: str) -> tuple[int, ...]:
    try:
        items = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not items:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return items


def _seed(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momentbounds",
        description="Standardized moments and their limits for bounded distributions.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("moments", help="moment summary of a distribution JSON file")
    p.add_argument("file", type=Path)
    p.add_argument("--max-order", type=int, default=4)

    p = sub.add_parser("bounds", help="limits on D_n for a mean, std and support")
    p.add_argument("--mean", type=float, required=True)
    p.add_argument("--std", type=float, required=True)
    p.add_argument("--xmin", type=float)
    p.add_argument("--xmax", type=float)
    p.add_argument("--orders", type=_int_list, default=(3, 4))

    p = sub.add_parser("construct", help="bidisperse distributions with a given D_n")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--mean", type=float, required=True)
    p.add_argument("--cov", type=float, required=True)
    p.add_argument("--target", type=float, required=True)

    p = sub.add_parser("decompose", help="split a distribution into two-point pieces")
    p.add_argument("file", type=Path)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("sweep", help="Monte Carlo check of the limits, written as CSV")
    p.add_argument("--xmin", type=float, required=True)
    p.add_argument("--xmax", type=float, required=True)
    p.add_argument("--mean", type=float, required=True)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--orders", type=_int_list, default=(3, 4, 5))
    p.add_argument("--k-values", type=_int_list, default=(2, 3, 4))
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=int, help="parallel bins (default: $MOMENT_BOUNDS_THREADS or 1)")
    p.add_argument("--out", type=Path, required=True)
    return parser


def _load_distribution(path: Path) -> DiscreteDistribution:
    with path.open(encoding="utf-8") as fh:
        obj = json.load(fh)
    return DiscreteDistribution.from_json_dict(obj)


def _cmd_moments(args) -> str:
    summary = summarize(_load_distribution(args.file), args.max_order)
    out = {
        "mean": summary.mean,
        "std": summary.std,
        "cov": summary.cov,
        "central_moments": {str(n): summary.central(n) for n in range(1, summary.max_order + 1)},
        "standardized": {
            str(n): summary.standardized_moment(n) for n in range(3, summary.max_order + 1)
        },
    }
    return jsonfmt.dumps(out)


def _cmd_bounds(args) -> str:
    inp = BoundInput(args.mean, args.std, SupportBounds(args.xmin, args.xmax))
    return jsonfmt.dumps([report_to_json(moment_limits(n, inp)) for n in args.orders])


def _cmd_construct(args) -> str:
    specs = construct_with_moment(args.order, args.mean, args.cov, args.target)
    return jsonfmt.dumps([s.to_distribution().to_json_dict() for s in specs])


def _cmd_decompose(args) -> str | None:
    dec = decompose(_load_distribution(args.file))
    args.out.write_text(jsonfmt.dumps(dec.to_json_dict()) + "\n", encoding="utf-8")
    return None


def _cmd_sweep(args) -> str | None:
    config = SweepConfig(
        support=SupportBounds(args.xmin, args.xmax),
        mean=args.mean,
        orders=args.orders,
        bins=args.bins,
        samples_per_bin=args.samples,
        k_values=args.k_values,
        seed=args.seed,
    )
    records = run_sweep(config, workers=args.workers)
    write_report(records, args.out)
    n_bad = sum(r.n_violations for r in records)
    if n_bad:
        print(f"warning: {n_bad} samples fall outside the analytic limits", file=sys.stderr)
    return None


COMMANDS = {
    "moments": _cmd_moments,
    "bounds": _cmd_bounds,
    "construct": _cmd_construct,
    "decompose": _cmd_decompose,
    "sweep": _cmd_sweep,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = COMMANDS[args.command](args)
    except (MomentBoundsError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if text is not None:
        sys.stdout.write(text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
