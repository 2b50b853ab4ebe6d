"""Exact small-instance ground truth for validating the samplers.

Everything here works on an explicit bounding box: brute-force PMF
enumeration (including the 1/y! factorial weights), stationary solves of
truncated generators, time-weighted empirical PMFs, total variation
distance, exact moments, and a two-time joint-symmetry statistic for
reversibility checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.special import gammaln, logsumexp

from .targets import SupportError, Target
from .trace import WeightedTrace

MAX_ENUM_STATES = 10**7
MAX_SOLVE_STATES = 10**4


class ReducibleChainError(RuntimeError):
    """The truncated chain does not communicate across its support."""


@dataclass
class ExactPmf:
    box: tuple
    probs: np.ndarray
    overflow: float = 0.0   # mass observed outside the box (empirical PMFs only)

    def __post_init__(self):
        self.box = tuple(int(b) for b in self.box)
        self.probs = np.asarray(self.probs, dtype=float)
        if self.probs.shape != tuple(b + 1 for b in self.box):
            raise ValueError("probability table does not match the box")

    @property
    def d(self) -> int:
        return len(self.box)


def _states(box) -> np.ndarray:
    shape = tuple(b + 1 for b in box)
    grids = np.indices(shape).reshape(len(box), -1).T
    return grids


def enumerate_pmf(target: Target, box) -> ExactPmf:
    """Normalize exp(log_f(y) - sum_i log(y_i!)) over the box."""
    box = tuple(int(b) for b in box)
    shape = tuple(b + 1 for b in box)
    volume = int(np.prod(shape))
    if volume == 0:
        raise ValueError("empty box")
    if volume > MAX_ENUM_STATES:
        raise ValueError(f"box has {volume} states, over the {MAX_ENUM_STATES} cap")
    log_mass = np.empty(shape)
    for idx in np.ndindex(shape):
        y = np.array(idx, dtype=np.int64)
        lf = target.log_f(y)
        log_mass[idx] = lf - gammaln(y + 1.0).sum() if math.isfinite(lf) else -math.inf
    norm = logsumexp(log_mass)
    if not math.isfinite(norm):
        raise ValueError("target has no mass inside the box")
    return ExactPmf(box, np.exp(log_mass - norm))


def ctmc_stationary(rate_fn, box) -> ExactPmf:
    """Stationary distribution of the generator truncated to the box.

    ``rate_fn(y) -> (up, down)`` may raise SupportError for off-support
    states, which are excluded; rates leaving the box are set to zero.
    """
    box = tuple(int(b) for b in box)
    shape = tuple(b + 1 for b in box)
    volume = int(np.prod(shape))
    if volume > MAX_SOLVE_STATES:
        raise ValueError(f"box has {volume} states, over the {MAX_SOLVE_STATES} cap")
    states = _states(box)
    index = {tuple(s): j for j, s in enumerate(states)}

    generator = np.zeros((volume, volume))
    included = np.zeros(volume, dtype=bool)
    for j, y in enumerate(states):
        try:
            up, down = rate_fn(y)
        except SupportError:
            continue
        included[j] = True
        for i in range(len(box)):
            if y[i] < box[i] and up[i] > 0:
                to = list(y)
                to[i] += 1
                generator[j, index[tuple(to)]] += up[i]
            if y[i] > 0 and down[i] > 0:
                to = list(y)
                to[i] -= 1
                generator[j, index[tuple(to)]] += down[i]
    n_in = int(included.sum())
    if n_in == 0:
        raise ValueError("no in-support states inside the box")

    sub = generator[np.ix_(included, included)]
    if n_in > 1:
        n_comp, _ = connected_components(csr_matrix(sub > 0), directed=True,
                                         connection="strong")
        if n_comp > 1:
            raise ReducibleChainError(
                f"{n_comp} communicating classes on the truncated support")
    np.fill_diagonal(sub, -sub.sum(axis=1) + np.diag(sub))

    system = sub.T.copy()
    system[-1, :] = 1.0
    rhs = np.zeros(n_in)
    rhs[-1] = 1.0
    try:
        pi_sub = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:
        raise ReducibleChainError(f"singular stationary system: {exc}") from None
    pi_sub = np.clip(pi_sub, 0.0, None)
    pi_sub /= pi_sub.sum()

    probs = np.zeros(volume)
    probs[included] = pi_sub
    return ExactPmf(box, probs.reshape(shape))


def empirical_pmf(trace: WeightedTrace, box) -> ExactPmf:
    """Time-weighted occupation measure; out-of-box mass goes to overflow."""
    if trace.k == 0:
        raise ValueError("empty trace")
    box = tuple(int(b) for b in box)
    shape = tuple(b + 1 for b in box)
    samples = np.rint(trace.samples).astype(np.int64)
    inside = np.all((samples >= 0) & (samples <= np.array(box)), axis=1)
    flat = np.zeros(int(np.prod(shape)))
    if inside.any():
        idx = np.ravel_multi_index(samples[inside].T, shape)
        np.add.at(flat, idx, trace.weights[inside])
    total = trace.total_time
    overflow = float(trace.weights[~inside].sum()) / total
    return ExactPmf(box, flat.reshape(shape) / total, overflow=overflow)


def tv_distance(p: ExactPmf, q: ExactPmf) -> float:
    """Total variation distance, treating the overflow bucket as one state."""
    if p.box != q.box:
        raise ValueError("distributions live on different boxes")
    return 0.5 * (float(np.abs(p.probs - q.probs).sum()) + abs(p.overflow - q.overflow))


def exact_moments(pmf: ExactPmf):
    """Mean vector and covariance matrix by direct summation."""
    states = _states(pmf.box).astype(float)
    probs = pmf.probs.reshape(-1)
    mean = probs @ states
    centered = states - mean
    cov = (centered * probs[:, None]).T @ centered
    return mean, 0.5 * (cov + cov.T)


def two_time_symmetry(trace: WeightedTrace, lag: float, box) -> float:
    """TV distance between the lagged joint occupation and its transpose.

    The piecewise-constant trajectory is swept analytically: breakpoints of
    the current-state and lagged-state interval partitions are merged, so no
    time discretization enters the estimate.
    """
    if lag <= 0:
        raise ValueError("lag must be positive")
    box = tuple(int(b) for b in box)
    shape = tuple(b + 1 for b in box)
    n = int(np.prod(shape))
    times = np.concatenate(([0.0], np.cumsum(trace.weights)))
    horizon = times[-1] - lag
    if horizon <= 0:
        raise ValueError("trace is shorter than the requested lag")

    samples = np.rint(trace.samples).astype(np.int64)
    if np.any(samples < 0) or np.any(samples > np.array(box)):
        raise ValueError("trajectory leaves the box")
    flat_states = np.ravel_multi_index(samples.T, shape)

    edges = np.union1d(times, times - lag)
    edges = edges[(edges >= 0.0) & (edges <= horizon)]
    if edges[-1] < horizon:
        edges = np.append(edges, horizon)
    mids = 0.5 * (edges[:-1] + edges[1:])
    seg = np.diff(edges)

    idx_now = np.searchsorted(times, mids, side="right") - 1
    idx_lag = np.searchsorted(times, mids + lag, side="right") - 1
    idx_now = np.clip(idx_now, 0, trace.k - 1)
    idx_lag = np.clip(idx_lag, 0, trace.k - 1)

    joint = np.zeros(n * n)
    np.add.at(joint, flat_states[idx_now] * n + flat_states[idx_lag], seg)
    joint = joint.reshape(n, n) / horizon
    return 0.5 * float(np.abs(joint - joint.T).sum())
