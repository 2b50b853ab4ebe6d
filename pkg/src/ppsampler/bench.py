"""Benchmark harness: target grids, sampler selection, timing, CSV output.

One run is a (grid point, sampler, replicate) triple: build the target,
burn in from the zero vector, simulate k timed steps, and compute the
multivariate-ESS report.  Target parameters (the coupling matrices) are
regenerated from a recorded seed and shared across samplers and replicates
at a grid point; only the chain seed varies.  Failed runs are recorded with
a status code rather than dropped.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy import stats as sps

from .ctmc import CtmcKernel, ctmc_run
from .ess import NotPositiveDefiniteError, multivariate_ess, timed_run
from .pps import pps_init, pps_run
from .targets import (NeuralTarget, PoissonTarget, SKTarget, TableTarget,
                      neural_random_weights, sk_random_weights)

SAMPLERS = ("pps", "bd", "zanella-sqrt", "zanella-min", "zanella-ratio")
FAMILIES = ("poisson", "sk", "neural", "table")

CSV_COLUMNS = ("target_family", "param", "sampler", "replicate", "seed",
               "k", "b", "ess", "cpu_seconds", "ess_per_second", "status")

# Desk-scale defaults: minutes on a laptop instead of node-days.
DESK = dict(dim=20, steps=300_000, burn_in=30_000, batch_size=3_000, reps=5)
PAPER = dict(dim=100, steps=9_000_000, burn_in=1_000_000, batch_size=3_000, reps=10)

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def derive_seed(base_seed: int, grid_index: int, sampler_index: int,
                replicate_index: int) -> int:
    """Avalanche-quality mix of the four run coordinates (splitmix64 core)."""
    h = (base_seed ^ _GOLDEN) & _MASK64
    for v in (grid_index, sampler_index, replicate_index):
        h = (h + _GOLDEN + (v & _MASK64)) & _MASK64
        h ^= h >> 30
        h = (h * 0xBF58476D1CE4E5B9) & _MASK64
        h ^= h >> 27
        h = (h * 0x94D049BB133111EB) & _MASK64
        h ^= h >> 31
    return h


@dataclass
class BenchConfig:
    family: str
    grid: tuple
    samplers: tuple = SAMPLERS
    dim: int = DESK["dim"]
    steps: int = DESK["steps"]
    burn_in: int = DESK["burn_in"]
    batch_size: int = DESK["batch_size"]
    reps: int = DESK["reps"]
    base_seed: int = 0
    target_seed: int = 1234
    mode: str = "full"          # intensity/rate recomputation mode
    table_path: str | None = None
    out_path: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown target family {self.family!r}")
        if not self.grid:
            raise ValueError("empty parameter grid")
        unknown = set(self.samplers) - set(SAMPLERS)
        if unknown:
            raise ValueError(f"unknown samplers: {sorted(unknown)}")
        if self.steps < 2 * self.batch_size:
            raise ValueError("steps must cover at least two batches")
        if self.reps < 1:
            raise ValueError("need at least one replicate")


@dataclass
class RunRecord:
    target_family: str
    param: float
    sampler: str
    replicate: int
    seed: int
    k: int
    b: int
    ess: float | None
    cpu_seconds: float | None
    ess_per_second: float | None
    status: str


def build_target(family: str, param: float, dim: int, target_seed: int,
                 mode: str = "full", table_path: str | None = None):
    if family == "poisson":
        return PoissonTarget(param, d=dim, mode=mode)
    if family == "sk":
        return SKTarget(param, sk_random_weights(dim, target_seed), mode=mode)
    if family == "neural":
        w = param * neural_random_weights(dim, target_seed)
        return NeuralTarget(w, np.full(dim, 5.0), a0=0.0, a1=1.0, mode=mode)
    if family == "table":
        if table_path is None:
            raise ValueError("table family needs a table file")
        return TableTarget.from_file(table_path, mode=mode)
    raise ValueError(f"unknown target family {family!r}")


def _sampler_loop(target, sampler: str, burn_in: int):
    """Burn in untimed, return a closure running only the measurement loop."""
    if sampler == "pps":
        state = pps_init(target)

        def loop(steps, rng):
            return pps_run(state, target, steps, rng)

        def burn(rng):
            pps_run(state, target, burn_in, rng)
    else:
        kind, _, tag = sampler.partition("-")
        kernel = CtmcKernel(target, "bd" if kind == "bd" else "zanella",
                            tag or None)
        y = np.zeros(target.d, dtype=np.int64)

        def loop(steps, rng):
            return ctmc_run(y, kernel, steps, rng)

        def burn(rng):
            ctmc_run(y, kernel, burn_in, rng)
    return burn, loop


def run_single(config: BenchConfig, grid_index: int, sampler_index: int,
               replicate_index: int) -> RunRecord:
    param = config.grid[grid_index]
    sampler = config.samplers[sampler_index]
    seed = derive_seed(config.base_seed, grid_index, sampler_index, replicate_index)
    target = build_target(config.family, param, config.dim, config.target_seed,
                          config.mode, config.table_path)
    rng = np.random.default_rng(np.random.PCG64(seed))
    burn, loop = _sampler_loop(target, sampler, config.burn_in)
    burn(rng)
    trace, seconds, fallback = timed_run(loop, config.steps, rng)
    try:
        report = multivariate_ess(trace, config.batch_size, cpu_seconds=seconds,
                                  wall_clock_fallback=fallback)
    except NotPositiveDefiniteError as exc:
        return RunRecord(config.family, param, sampler, replicate_index, seed,
                         0, config.batch_size, None, seconds, None,
                         f"not-positive-definite:{exc.which}")
    status = "ok-wall-clock" if fallback else "ok"
    return RunRecord(config.family, param, sampler, replicate_index, seed,
                     report.k, config.batch_size, report.ess, seconds,
                     report.ess_per_second, status)


def _run_payload(payload):
    return run_single(*payload)


def run_benchmark(config: BenchConfig) -> list:
    """All (grid point, sampler, replicate) runs, in deterministic order."""
    coords = [(config, gi, si, ri)
              for gi in range(len(config.grid))
              for si in range(len(config.samplers))
              for ri in range(config.reps)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_run_payload, coords))
    else:
        records = [run_single(*c) for c in coords]
    if config.out_path:
        write_csv(records, config.out_path)
    return records


def write_csv(records, path, append: bool = False) -> None:
    """One header row, then the RunRecord fields in declared order."""
    mode = "a" if append else "w"
    with open(path, mode, newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if not append:
            writer.writerow(CSV_COLUMNS)
        for rec in records:
            row = asdict(rec)
            writer.writerow(["" if row[c] is None else row[c] for c in CSV_COLUMNS])


def read_csv(path) -> list:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV columns: {reader.fieldnames}")
        records = []
        for row in reader:
            records.append(RunRecord(
                target_family=row["target_family"],
                param=float(row["param"]),
                sampler=row["sampler"],
                replicate=int(row["replicate"]),
                seed=int(row["seed"]),
                k=int(row["k"]),
                b=int(row["b"]),
                ess=float(row["ess"]) if row["ess"] else None,
                cpu_seconds=float(row["cpu_seconds"]) if row["cpu_seconds"] else None,
                ess_per_second=float(row["ess_per_second"]) if row["ess_per_second"] else None,
                status=row["status"],
            ))
    return records


@dataclass
class SummaryRow:
    target_family: str
    param: float
    sampler: str
    n: int
    mean_ess_per_1000: float          # ESS scaled to 1000 sequential samples
    ci_ess_per_1000: float | None     # 95% half-width; None with one replicate
    mean_ess_per_second: float
    ci_ess_per_second: float | None


def _mean_ci(values):
    values = np.asarray(values, dtype=float)
    n = len(values)
    mean = float(values.mean())
    if n < 2:
        return mean, None
    sd = float(values.std(ddof=1))
    half = float(sps.t.ppf(0.975, n - 1)) * sd / math.sqrt(n)
    return mean, half


def summarize(records) -> list:
    """Per-(grid point, sampler) means with normal-theory 95% intervals."""
    groups = {}
    for rec in records:
        if rec.ess is None:
            continue
        groups.setdefault((rec.target_family, rec.param, rec.sampler), []).append(rec)
    rows = []
    for (family, param, sampler), recs in sorted(groups.items()):
        scaled = [r.ess * 1000.0 / r.k for r in recs]
        per_sec = [r.ess_per_second for r in recs]
        mean_s, ci_s = _mean_ci(scaled)
        mean_p, ci_p = _mean_ci(per_sec)
        rows.append(SummaryRow(family, param, sampler, len(recs),
                               mean_s, ci_s, mean_p, ci_p))
    return rows
