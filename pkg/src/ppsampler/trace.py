"""Holding-time-weighted sample traces shared by all samplers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class WeightedTrace:
    """Embedded jump-chain states with their holding times.

    ``samples`` has one row per jump event (the state *before* the jump);
    ``weights`` holds the matching sojourn durations.
    """

    samples: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.samples.ndim != 2:
            raise ValueError("samples must be a (k, d) array")
        if self.weights.shape != (self.samples.shape[0],):
            raise ValueError("weights must align with samples")
        if self.k > 0 and np.any(self.weights <= 0):
            raise ValueError("holding-time weights must be positive")

    @property
    def k(self) -> int:
        return self.samples.shape[0]

    @property
    def d(self) -> int:
        return self.samples.shape[1]

    @property
    def total_time(self) -> float:
        return float(self.weights.sum())

    def scaled(self, c: float) -> "WeightedTrace":
        """Same trajectory with all holding times multiplied by ``c``."""
        return WeightedTrace(self.samples, self.weights * c)


def concat(traces) -> WeightedTrace:
    traces = list(traces)
    return WeightedTrace(
        np.concatenate([t.samples for t in traces]),
        np.concatenate([t.weights for t in traces]),
    )
