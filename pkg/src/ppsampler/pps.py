"""Sliding-window point-process sampler with constant base intensity.

The sampler races an exponential arrival clock, whose rate is the sum of the
per-component conditional intensities ``exp(log_ratio_up) / m``, against the
deterministic expiry of the oldest in-window point.  Points live in a single
global FIFO of (time, component) pairs and each point leaves the window
exactly ``m`` time units after it arrived, in arrival order.  The per-window
count vector is the sampler state; its time-weighted occupation law converges
to the target.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field

import numpy as np

from .targets import Target, as_counts
from .trace import WeightedTrace

ARRIVAL = "arrival"
DEPARTURE = "departure"


class AbsorbingStateError(RuntimeError):
    """No arrival is possible and the window is empty."""


@dataclass(slots=True)
class JumpEvent:
    kind: str          # ARRIVAL or DEPARTURE
    component: int
    time: float        # process time just after the jump
    holding: float     # sojourn in the pre-jump state


class PointWindow:
    """Global FIFO of in-window points as aligned (time, component) queues."""

    __slots__ = ("m", "_items")

    def __init__(self, m: float):
        if not m > 0:
            raise ValueError("window length m must be positive")
        self.m = float(m)
        self._items = deque()

    def __len__(self) -> int:
        return len(self._items)

    def push(self, time: float, component: int) -> None:
        self._items.append((time, component))

    def pop(self):
        return self._items.popleft()

    def peek_time(self) -> float:
        return self._items[0][0]

    def tally(self, d: int) -> np.ndarray:
        counts = np.zeros(d, dtype=np.int64)
        for _, c in self._items:
            counts[c] += 1
        return counts


@dataclass
class PpsState:
    now: float
    counts: np.ndarray
    window: PointWindow
    cache: object = None


def pps_init(target: Target, m: float = 1.0) -> PpsState:
    """Fresh chain at time ``m`` with zero counts and an empty window."""
    window = PointWindow(m)
    counts = np.zeros(target.d, dtype=np.int64)
    if not np.any(np.isfinite(target.up_log_ratios(counts))):
        raise ValueError("support is a singleton; nothing to sample")
    return PpsState(now=float(m), counts=counts, window=window,
                    cache=target.new_cache(counts))


def pps_step(state: PpsState, target: Target, rng: np.random.Generator) -> JumpEvent:
    """Advance by one jump: an arrival beats the head expiry or vice versa.

    Floating-point ties between the proposed arrival and the head expiry go
    to the expiry, matching the strict inequality in the arrival branch.
    """
    m = state.window.m
    up = target.up_log_ratios(state.counts, state.cache)
    rates = np.exp(up) / m
    total = rates.sum()
    if not math.isfinite(total):
        raise FloatingPointError("non-finite arrival rate encountered")

    if total > 0.0:
        t_arrival = state.now + rng.exponential(1.0 / total)
    else:
        t_arrival = math.inf

    if len(state.window) == 0:
        if total == 0.0:
            raise AbsorbingStateError("zero arrival rate with an empty window")
        expiry = math.inf
    else:
        expiry = state.window.peek_time() + m

    if t_arrival < expiry:
        u = rng.random() * total
        c = int(np.searchsorted(np.cumsum(rates), u, side="right"))
        c = min(c, target.d - 1)
        holding = t_arrival - state.now
        state.now = t_arrival
        state.counts[c] += 1
        state.window.push(t_arrival, c)
        target.update_cache(state.cache, c, +1)
        return JumpEvent(ARRIVAL, c, state.now, holding)

    _, c = state.window.pop()
    holding = expiry - state.now
    state.now = expiry
    state.counts[c] -= 1
    target.update_cache(state.cache, c, -1)
    return JumpEvent(DEPARTURE, c, state.now, holding)


def pps_run(state: PpsState, target: Target, steps: int,
            rng: np.random.Generator, sink=None) -> WeightedTrace:
    """Run ``steps`` jumps, emitting (pre-jump counts, holding time) pairs.

    The state is advanced in place so burn-in can be chained directly into
    measurement.  ``sink``, if given, receives every JumpEvent.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    d = target.d
    samples = np.empty((steps, d))
    weights = np.empty(steps)
    for j in range(steps):
        samples[j, :] = state.counts
        event = pps_step(state, target, rng)
        weights[j] = event.holding
        if sink is not None:
            sink(event)
    return WeightedTrace(samples, weights)


def check_state(state: PpsState, target: Target) -> None:
    """Debug invariant: counts match the window tally and sit in support."""
    tally = state.window.tally(target.d)
    if not np.array_equal(tally, state.counts):
        raise AssertionError(f"counts {state.counts} != window tally {tally}")
    if not target.in_support(state.counts):
        raise AssertionError(f"state {tuple(state.counts)} left the support")
