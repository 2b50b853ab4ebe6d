"""Command-line entry point for the benchmark harness."""

from __future__ import annotations

import argparse
import sys

from .bench import (DESK, PAPER, SAMPLERS, BenchConfig, run_benchmark,
                    summarize)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ppsampler-bench",
        description="Benchmark the window sampler against CTMC baselines.")
    parser.add_argument("--target", required=True,
                        choices=["poisson", "sk", "neural", "table"])
    parser.add_argument("--grid", required=True,
                        help="comma-separated parameter values")
    parser.add_argument("--samplers", default=",".join(SAMPLERS),
                        help=f"comma-separated subset of {','.join(SAMPLERS)}")
    parser.add_argument("--dim", type=int, default=None)
    parser.add_argument("--steps", type=int, default=None)
    parser.add_argument("--burnin", type=int, default=None)
    parser.add_argument("--batch-size", type=int, default=None)
    parser.add_argument("--reps", type=int, default=None)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--target-seed", type=int, default=1234)
    parser.add_argument("--recompute", choices=["full", "incremental"],
                        default="full")
    parser.add_argument("--scale", choices=["desk", "paper"], default="desk")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", default=None, help="CSV output path")
    parser.add_argument("--table-file", default=None,
                        help="log-f table file for --target table")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    scale = PAPER if args.scale == "paper" else DESK
    config = BenchConfig(
        family=args.target,
        grid=tuple(float(v) for v in args.grid.split(",") if v),
        samplers=tuple(s for s in args.samplers.split(",") if s),
        dim=args.dim if args.dim is not None else scale["dim"],
        steps=args.steps if args.steps is not None else scale["steps"],
        burn_in=args.burnin if args.burnin is not None else scale["burn_in"],
        batch_size=args.batch_size if args.batch_size is not None else scale["batch_size"],
        reps=args.reps if args.reps is not None else scale["reps"],
        base_seed=args.seed,
        target_seed=args.target_seed,
        mode=args.recompute,
        table_path=args.table_file,
        out_path=args.out,
        workers=args.workers,
    )
    records = run_benchmark(config)
    for row in summarize(records):
        ci = f" +-{row.ci_ess_per_1000:.3g}" if row.ci_ess_per_1000 is not None else ""
        print(f"{row.target_family} param={row.param:g} {row.sampler}: "
              f"ess/1000={row.mean_ess_per_1000:.4g}{ci} "
              f"ess/s={row.mean_ess_per_second:.4g} (n={row.n})")
    failed = [r for r in records if not r.status.startswith("ok")]
    for rec in failed:
        print(f"FAILED {rec.target_family} param={rec.param:g} {rec.sampler} "
              f"rep={rec.replicate}: {rec.status}", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
