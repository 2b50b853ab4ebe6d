"""Weighted moment estimation, batch-means covariance, and multivariate ESS.

The effective sample size for k weighted jump-chain samples is
``k * (det(target_cov) / det(asymptotic_cov))^(1/d)``, with the target
covariance estimated directly from the holding-time-weighted trace and the
asymptotic covariance estimated by batch means over consecutive blocks of
jump samples.  Batches are count-based (``b`` jumps each) with time-weighted
means inside every batch; for equal weights this reduces exactly to the
standard batch-means estimator.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .trace import WeightedTrace


class NotPositiveDefiniteError(RuntimeError):
    """A covariance estimate was not positive definite; no jitter is applied."""

    def __init__(self, which: str):
        super().__init__(f"{which} covariance estimate is not positive definite")
        self.which = which


@dataclass
class EssReport:
    k: int                       # samples used in batching (batch_count * batch_size)
    ess: float
    cpu_seconds: float | None
    ess_per_second: float | None
    log_det_target_cov: float
    log_det_asymptotic_cov: float
    batch_size: int
    batch_count: int
    wall_clock_fallback: bool = False


def weighted_moments(trace: WeightedTrace):
    """Time-weighted mean and population covariance of a trace."""
    if trace.k == 0:
        raise ValueError("empty trace")
    w = trace.weights
    total = w.sum()
    mean = w @ trace.samples / total
    centered = trace.samples - mean
    cov = (centered * w[:, None]).T @ centered / total
    cov = 0.5 * (cov + cov.T)
    return mean, cov


def batch_means_cov(trace: WeightedTrace, b: int) -> np.ndarray:
    """Batch-means asymptotic covariance over the first floor(k/b) batches."""
    if b < 1:
        raise ValueError("batch size must be positive")
    k = trace.k
    if k < 2 * b:
        raise ValueError(f"need at least two batches: k={k}, b={b}")
    n_batches = k // b
    used = n_batches * b
    samples = trace.samples[:used].reshape(n_batches, b, trace.d)
    weights = trace.weights[:used].reshape(n_batches, b)
    batch_totals = weights.sum(axis=1)
    batch_means = (weights[:, :, None] * samples).sum(axis=1) / batch_totals[:, None]
    grand_mean = (trace.weights[:used] @ trace.samples[:used]) / trace.weights[:used].sum()
    centered = batch_means - grand_mean
    cov = b / (n_batches - 1) * centered.T @ centered
    return 0.5 * (cov + cov.T)


def _log_det_pd(matrix: np.ndarray, which: str) -> float:
    try:
        chol = np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError:
        raise NotPositiveDefiniteError(which) from None
    return 2.0 * float(np.log(np.diag(chol)).sum())


def multivariate_ess(trace: WeightedTrace, b: int,
                     cpu_seconds: float | None = None,
                     wall_clock_fallback: bool = False) -> EssReport:
    """ESS report for one trace; k counts only the samples used in batching."""
    asym = batch_means_cov(trace, b)
    n_batches = trace.k // b
    used = n_batches * b
    target_cov = weighted_moments(
        WeightedTrace(trace.samples[:used], trace.weights[:used]))[1]
    ld_target = _log_det_pd(target_cov, "target")
    ld_asym = _log_det_pd(asym, "asymptotic")
    ess = used * float(np.exp((ld_target - ld_asym) / trace.d))
    per_second = None
    if cpu_seconds is not None and cpu_seconds > 0:
        per_second = ess / cpu_seconds
    return EssReport(
        k=used,
        ess=ess,
        cpu_seconds=cpu_seconds,
        ess_per_second=per_second,
        log_det_target_cov=ld_target,
        log_det_asymptotic_cov=ld_asym,
        batch_size=b,
        batch_count=n_batches,
        wall_clock_fallback=wall_clock_fallback,
    )


def timed_run(run_fn, steps: int, rng: np.random.Generator):
    """Run a simulation loop under the process-CPU clock.

    ``run_fn(steps, rng)`` must contain only the simulation loop; target
    construction and post-processing stay outside the timed region.  Returns
    (trace, seconds, wall_clock_fallback).
    """
    clock = getattr(time, "process_time", None)
    fallback = clock is None
    if fallback:
        clock = time.perf_counter
    start = clock()
    trace = run_fn(steps, rng)
    elapsed = clock() - start
    return trace, elapsed, fallback
