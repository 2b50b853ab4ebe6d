"""Contrastive fitting of the count-valued network target.

The model is an exponential family in (W upper triangle incl. diagonal, b),
with sufficient statistics y_i*y_j for off-diagonal couplings,
y_i*(y_i - 1)/2 for diagonal ones, and y_i for biases.  The KL gradient is
the difference between free-running and data-clamped expectations of those
statistics; clamping freezes the observed components at their data values
and samples only the latent ones.  The refractory coefficients a0, a1 are
hyperparameters and are never updated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .ctmc import CtmcKernel, ctmc_run
from .pps import pps_init, pps_run
from .targets import NeuralTarget, Target, as_counts
from .trace import WeightedTrace


@dataclass
class Partition:
    """Split of the d components into observed and latent index sets."""

    d: int
    observed: tuple

    def __post_init__(self):
        self.observed = tuple(sorted(int(i) for i in self.observed))
        if len(set(self.observed)) != len(self.observed):
            raise ValueError("duplicate observed indices")
        if self.observed and not (0 <= self.observed[0] and self.observed[-1] < self.d):
            raise ValueError("observed indices out of range")
        self.latent = tuple(i for i in range(self.d) if i not in set(self.observed))


@dataclass
class ParamStats:
    """Sufficient-statistic values (or their expectations / gradients)."""

    dw: np.ndarray   # symmetric d x d
    db: np.ndarray

    def __sub__(self, other: "ParamStats") -> "ParamStats":
        return ParamStats(self.dw - other.dw, self.db - other.db)

    def __mul__(self, c: float) -> "ParamStats":
        return ParamStats(self.dw * c, self.db * c)

    __rmul__ = __mul__

    def __add__(self, other: "ParamStats") -> "ParamStats":
        return ParamStats(self.dw + other.dw, self.db + other.db)

    def max_abs(self) -> float:
        return max(float(np.abs(self.dw).max()), float(np.abs(self.db).max()))


def sufficient_stats(y) -> ParamStats:
    """Statistics at a single state: outer product with y(y-1)/2 diagonal."""
    y = np.asarray(y, dtype=float)
    dw = np.outer(y, y)
    np.fill_diagonal(dw, y * (y - 1.0) / 2.0)
    return ParamStats(dw, y.copy())


def trace_stats(trace: WeightedTrace) -> ParamStats:
    """Time-weighted mean of the sufficient statistics over a trace."""
    if trace.k == 0:
        raise ValueError("empty trace")
    w = trace.weights
    total = w.sum()
    s = trace.samples
    dw = (s * w[:, None]).T @ s / total
    diag = (w @ (s * (s - 1.0))) / (2.0 * total)
    np.fill_diagonal(dw, diag)
    return ParamStats(dw, w @ s / total)


class ClampedTarget(Target):
    """Latent-coordinate view of a target with observed counts frozen."""

    def __init__(self, base: Target, partition: Partition, observed_counts):
        if partition.d != base.d:
            raise ValueError("partition dimension does not match the target")
        observed_counts = as_counts(observed_counts, len(partition.observed))
        self.base = base
        self.partition = partition
        self.d = len(partition.latent)
        self.mode = base.mode
        self._latent = np.array(partition.latent, dtype=np.intp)
        self._template = np.zeros(base.d, dtype=np.int64)
        self._template[list(partition.observed)] = observed_counts

    def embed(self, y_latent) -> np.ndarray:
        full = self._template.copy()
        full[self._latent] = as_counts(y_latent, self.d)
        return full

    def log_f(self, y) -> float:
        return self.base.log_f(self.embed(y))

    def in_support(self, y) -> bool:
        return self.base.in_support(self.embed(y))

    def new_cache(self, y):
        return self.base.new_cache(self.embed(y))

    def update_cache(self, cache, i: int, delta: int) -> None:
        self.base.update_cache(cache, int(self._latent[i]), delta)

    def up_log_ratios(self, y, cache=None) -> np.ndarray:
        return self.base.up_log_ratios(self.embed(y), cache)[self._latent]

    def down_log_ratios(self, y, cache=None) -> np.ndarray:
        return self.base.down_log_ratios(self.embed(y), cache)[self._latent]


def _run_sampler(target: Target, sampler: str, burn_in: int, steps: int,
                 rng: np.random.Generator) -> WeightedTrace:
    if sampler == "pps":
        state = pps_init(target)
        pps_run(state, target, burn_in, rng)
        return pps_run(state, target, steps, rng)
    if sampler == "bd":
        kernel = CtmcKernel(target, "bd")
        y = np.zeros(target.d, dtype=np.int64)
        ctmc_run(y, kernel, burn_in, rng)
        return ctmc_run(y, kernel, steps, rng)
    raise ValueError(f"unknown sampler {sampler!r}")


def clamped_run(target: NeuralTarget, partition: Partition, observed_counts,
                steps: int, rng: np.random.Generator, sampler: str = "pps",
                burn_in: int = 0) -> WeightedTrace:
    """Sample the latent components conditioned on the observed counts.

    Emitted samples are full d-vectors with the observed entries frozen.
    With no latent components the trace is the constant observed vector.
    """
    clamped = ClampedTarget(target, partition, observed_counts)
    if clamped.d == 0:
        samples = np.tile(clamped._template.astype(float), (steps, 1))
        return WeightedTrace(samples, np.ones(steps))
    latent_trace = _run_sampler(clamped, sampler, burn_in, steps, rng)
    full = np.tile(clamped._template.astype(float), (latent_trace.k, 1))
    full[:, clamped._latent] = latent_trace.samples
    return WeightedTrace(full, latent_trace.weights)


def kl_gradient(target: NeuralTarget, psi: dict, steps: int,
                rng: np.random.Generator, burn_in: int = 10_000,
                sampler: str = "pps", partition: Partition | None = None) -> ParamStats:
    """Monte-Carlo contrastive gradient of KL(data || observed marginal).

    ``psi`` maps observed count tuples to probabilities; by default the
    observed components are the leading ones.  Returns model-term minus
    data-term, so plain descent subtracts the result.
    """
    _check_distribution(psi)
    if partition is None:
        partition = _partition_from_psi(target, psi)
    model = trace_stats(_run_sampler(target, sampler, burn_in, steps, rng))
    data = ParamStats(np.zeros((target.d, target.d)), np.zeros(target.d))
    for counts, prob in psi.items():
        clamped = clamped_run(target, partition, counts, steps, rng,
                              sampler=sampler, burn_in=burn_in)
        data = data + prob * trace_stats(clamped)
    return model - data


def _partition_from_psi(target: Target, psi: dict) -> Partition:
    n_obs = len(next(iter(psi)))
    return Partition(target.d, tuple(range(n_obs)))


def _check_distribution(psi: dict) -> None:
    if not psi:
        raise ValueError("empty data distribution")
    total = sum(psi.values())
    if not math.isclose(total, 1.0, abs_tol=1e-9):
        raise ValueError(f"data distribution sums to {total}, not 1")
    lengths = {len(k) for k in psi}
    if len(lengths) != 1:
        raise ValueError("inconsistent count-tuple lengths in data distribution")


def load_distribution(path) -> dict:
    """Read `count-tuple probability` lines into a dict keyed by tuples."""
    psi = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) < 2:
                raise ValueError(f"{path}:{lineno}: expected counts and a probability")
            counts = tuple(int(p) for p in parts[:-1])
            psi[counts] = float(parts[-1])
    _check_distribution(psi)
    return psi


# ---------------------------------------------------------------------------
# Exact (enumeration) counterparts, used for validation and fit monitoring.
# ---------------------------------------------------------------------------

def exact_stats(target: Target, box) -> ParamStats:
    """Expectation of the sufficient statistics under the truncated PMF."""
    pmf = oracle.enumerate_pmf(target, box)
    states = np.indices(pmf.probs.shape).reshape(target.d, -1).T.astype(float)
    probs = pmf.probs.reshape(-1)
    dw = (states * probs[:, None]).T @ states
    np.fill_diagonal(dw, probs @ (states * (states - 1.0)) / 2.0)
    return ParamStats(dw, probs @ states)


def observed_marginal(target: Target, partition: Partition, box) -> dict:
    """Marginal PMF of the observed components, by summing out latents."""
    pmf = oracle.enumerate_pmf(target, box)
    latent_axes = tuple(partition.latent)
    marg = pmf.probs.sum(axis=latent_axes) if latent_axes else pmf.probs
    out = {}
    for idx in np.ndindex(marg.shape):
        out[idx] = float(marg[idx])
    return out


def exact_kl(target: Target, psi: dict, box) -> float:
    """KL(psi || observed marginal of the truncated target)."""
    partition = _partition_from_psi(target, psi)
    marginal = observed_marginal(target, partition, box)
    kl = 0.0
    for counts, prob in psi.items():
        if prob == 0:
            continue
        p_model = marginal.get(counts, 0.0)
        if p_model <= 0:
            return math.inf
        kl += prob * math.log(prob / p_model)
    return kl


def exact_kl_gradient(target: Target, psi: dict, box) -> ParamStats:
    """Contrastive gradient with both expectations taken by enumeration."""
    partition = _partition_from_psi(target, psi)
    model = exact_stats(target, box)
    data = ParamStats(np.zeros((target.d, target.d)), np.zeros(target.d))
    pmf = oracle.enumerate_pmf(target, box)
    states = np.indices(pmf.probs.shape).reshape(target.d, -1).T
    probs = pmf.probs.reshape(-1)
    obs_idx = np.array(partition.observed, dtype=np.intp)
    for counts, prob in psi.items():
        mask = np.all(states[:, obs_idx] == np.array(counts), axis=1)
        cond = probs * mask
        total = cond.sum()
        if total <= 0:
            raise ValueError(f"observed configuration {counts} has zero model mass")
        cond = cond / total
        sf = states.astype(float)
        dw = (sf * cond[:, None]).T @ sf
        np.fill_diagonal(dw, cond @ (sf * (sf - 1.0)) / 2.0)
        data = data + prob * ParamStats(dw, cond @ sf)
    return model - data


# ---------------------------------------------------------------------------
# Fitting loop
# ---------------------------------------------------------------------------

@dataclass
class FitResult:
    weights: list            # W per iteration, initial included
    biases: list
    kl_values: list = field(default_factory=list)   # only when monitored
    aborted: bool = False


def fit(target: NeuralTarget, psi: dict, iterations: int, step_size: float,
        steps: int, rng: np.random.Generator, burn_in: int = 10_000,
        sampler: str = "pps", monitor_box=None) -> FitResult:
    """Plain gradient descent on (W, b) with Monte-Carlo gradients.

    ``monitor_box`` turns on exact-KL tracking by enumeration; ten
    consecutive exact-KL increases abort the run with the trajectory so far.
    Symmetry of W is preserved exactly because the gradient matrix is
    symmetric by construction.
    """
    if step_size < 0:
        raise ValueError("step size must be non-negative")
    weights = target.weights.copy()
    biases = target.bias.copy()
    result = FitResult(weights=[weights.copy()], biases=[biases.copy()])
    current = target
    bad_streak = 0
    last_kl = None
    if monitor_box is not None:
        last_kl = exact_kl(current, psi, monitor_box)
        result.kl_values.append(last_kl)
    for _ in range(iterations):
        grad = kl_gradient(current, psi, steps, rng, burn_in=burn_in,
                           sampler=sampler)
        weights = weights - step_size * grad.dw
        biases = biases - step_size * grad.db
        current = NeuralTarget(weights, biases, a0=target.a0, a1=target.a1,
                               mode=target.mode)
        result.weights.append(weights.copy())
        result.biases.append(biases.copy())
        if monitor_box is not None:
            kl = exact_kl(current, psi, monitor_box)
            result.kl_values.append(kl)
            bad_streak = bad_streak + 1 if kl > last_kl else 0
            last_kl = kl
            if bad_streak >= 10:
                result.aborted = True
                break
    return result
