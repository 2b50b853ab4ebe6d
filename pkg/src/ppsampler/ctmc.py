"""Baseline continuous-time Markov chain samplers.

Two rate families share a race-of-exponentials simulator: a birth-death
process (births ``f(y+e_i)/f(y) / m``, deaths ``y_i / m``) and Zanella
processes whose neighbour rates apply a balancing function to the target
PMF ratio.  Both are reversible with respect to the target; the birth-death
process is the memoryless degenerate case of the window sampler.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import expit

from .targets import SupportError, Target, as_counts
from .trace import WeightedTrace

BALANCING_TAGS = ("sqrt", "min", "ratio")


def apply_balancing(tag: str, log_z: np.ndarray) -> np.ndarray:
    """Evaluate a balancing function at ``z = exp(log_z)``, stably.

    All three satisfy bal(z) = z * bal(1/z), which is what makes the
    resulting neighbour chains reversible.
    """
    log_z = np.asarray(log_z, dtype=float)
    if tag == "sqrt":
        return np.exp(0.5 * log_z)
    if tag == "min":
        return np.exp(np.minimum(0.0, log_z))
    if tag == "ratio":
        out = expit(log_z)
        out[np.isneginf(log_z)] = 0.0
        return out
    raise ValueError(f"unknown balancing function {tag!r}")


def bd_rates(target: Target, y, m: float = 1.0, cache=None,
             check_support: bool = True):
    """Birth and death rate vectors of the birth-death sampler at ``y``."""
    y = as_counts(y, target.d)
    if check_support and not target.in_support(y):
        raise SupportError(f"state {tuple(y)} is outside the support")
    up = np.exp(target.up_log_ratios(y, cache)) / m
    down = y.astype(float) / m
    return up, down


def zanella_rates(target: Target, y, tag: str, cache=None,
                  check_support: bool = True):
    """Neighbour rates bal(pi(y +- e_i) / pi(y)) including factorial terms."""
    y = as_counts(y, target.d)
    if check_support and not target.in_support(y):
        raise SupportError(f"state {tuple(y)} is outside the support")
    yf = y.astype(float)
    up_log = target.up_log_ratios(y, cache) - np.log(yf + 1.0)
    with np.errstate(divide="ignore"):
        down_log = target.down_log_ratios(y, cache) + np.log(yf)
    up = apply_balancing(tag, up_log)
    down = apply_balancing(tag, down_log)
    down[y == 0] = 0.0
    return up, down


class CtmcKernel:
    """Bundles a rate family with per-chain cache plumbing for ctmc_run."""

    def __init__(self, target: Target, kind: str, tag: str | None = None,
                 m: float = 1.0):
        if kind not in ("bd", "zanella"):
            raise ValueError(f"unknown kernel kind {kind!r}")
        if kind == "zanella" and tag not in BALANCING_TAGS:
            raise ValueError(f"zanella kernel needs a balancing tag, got {tag!r}")
        self.target = target
        self.kind = kind
        self.tag = tag
        self.m = m
        self.cache = None

    def start(self, y) -> None:
        self.cache = self.target.new_cache(y)

    def rates(self, y):
        if self.kind == "bd":
            return bd_rates(self.target, y, self.m, self.cache, check_support=False)
        return zanella_rates(self.target, y, self.tag, self.cache, check_support=False)

    def moved(self, i: int, delta: int) -> None:
        self.target.update_cache(self.cache, i, delta)


class AbsorbingStateError(RuntimeError):
    """All transition rates vanished; the chain cannot move."""


def ctmc_run(initial, kernel: CtmcKernel, steps: int,
             rng: np.random.Generator, sink=None) -> WeightedTrace:
    """Gillespie simulation of the embedded jump chain with holding times.

    When ``initial`` is already an int64 array it is advanced in place, so
    burn-in chains directly into measurement.  ``sink``, if given, receives
    (state-before, component, delta, holding) per jump.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    d = kernel.target.d
    y = as_counts(initial, d)
    if not kernel.target.in_support(y):
        raise SupportError(f"initial state {tuple(y)} is outside the support")
    kernel.start(y)

    samples = np.empty((steps, d))
    weights = np.empty(steps)
    for j in range(steps):
        up, down = kernel.rates(y)
        rates = np.concatenate((up, down))
        total = rates.sum()
        if not total > 0.0:
            raise AbsorbingStateError(f"zero total rate at state {tuple(y)}")
        holding = rng.exponential(1.0 / total)
        u = rng.random() * total
        idx = int(np.searchsorted(np.cumsum(rates), u, side="right"))
        idx = min(idx, 2 * d - 1)
        i, delta = (idx, 1) if idx < d else (idx - d, -1)

        samples[j, :] = y
        weights[j] = holding
        y[i] += delta
        kernel.moved(i, delta)
        if sink is not None:
            sink((samples[j], i, delta, holding))
    return WeightedTrace(samples, weights)
