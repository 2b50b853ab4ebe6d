"""Target distributions over non-negative integer count vectors.

Every target is an unnormalized mass function ``f`` on Z^d_{>=0} with
downward-closed support: if ``f(y) > 0`` then ``f`` is positive on the whole
box of componentwise-smaller vectors.  The samplers only ever consume ``f``
through log ratios between neighbouring states, so all arithmetic here is
done in log space and ``exp`` is deferred to the point where rates are formed.

Two evaluation modes exist.  In ``"full"`` mode every ratio is recomputed
from scratch (for quadratic targets this means a fresh matrix-vector product
per evaluation); in ``"incremental"`` mode a per-chain cache of ``W @ y`` is
maintained by adding or subtracting single columns.  Benchmarks default to
full recomputation; correctness tests exercise both and require agreement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NEG_INF = float("-inf")

_MODES = ("full", "incremental")


class SupportError(ValueError):
    """A state lies outside the target's support."""


@dataclass
class QuadCache:
    """Chain-local cache of ``W @ y`` for quadratic targets."""

    wy: np.ndarray


def as_counts(y, d: int) -> np.ndarray:
    """Validate and convert ``y`` to an int64 count vector of length ``d``."""
    arr = np.asarray(y, dtype=np.int64)
    if arr.shape != (d,):
        raise ValueError(f"expected a count vector of length {d}, got shape {arr.shape}")
    if np.any(arr < 0):
        raise ValueError("count vectors must be non-negative")
    return arr


class Target:
    """Base class: unnormalized log mass and single-component log ratios.

    Subclasses set ``d`` and ``mode`` and implement ``log_f`` plus the
    vectorized ratio methods.  ``log_ratio_up`` in full mode is deliberately
    two independent ``log_f`` calls so the two code paths can be checked
    against each other.
    """

    d: int
    mode: str

    def log_f(self, y) -> float:
        raise NotImplementedError

    def in_support(self, y) -> bool:
        return math.isfinite(self.log_f(y))

    def new_cache(self, y):
        """Create an incremental-mode cache for state ``y`` (None in full mode)."""
        return None

    def update_cache(self, cache, i: int, delta: int) -> None:
        """Advance the cache after component ``i`` changed by ``delta``."""
        if cache is not None:
            raise NotImplementedError

    def log_ratio_up(self, y, i: int, cache=None) -> float:
        """log f(y + e_i) - log f(y); -inf iff y + e_i is off support."""
        y = as_counts(y, self.d)
        if not 0 <= i < self.d:
            raise IndexError(f"component index {i} out of range for d={self.d}")
        if not self.in_support(y):
            raise SupportError(f"state {tuple(y)} is outside the support")
        if self.mode == "full":
            up = y.copy()
            up[i] += 1
            hi = self.log_f(up)
            if hi == NEG_INF:
                return NEG_INF
            return hi - self.log_f(y)
        return float(self.up_log_ratios(y, cache)[i])

    def up_log_ratios(self, y, cache=None) -> np.ndarray:
        """Vector of log f(y + e_i) - log f(y) over all components."""
        y = as_counts(y, self.d)
        out = np.empty(self.d)
        lf = self.log_f(y)
        for i in range(self.d):
            up = y.copy()
            up[i] += 1
            hi = self.log_f(up)
            out[i] = NEG_INF if hi == NEG_INF else hi - lf
        return out

    def down_log_ratios(self, y, cache=None) -> np.ndarray:
        """Vector of log f(y - e_i) - log f(y); -inf where y_i = 0."""
        y = as_counts(y, self.d)
        out = np.full(self.d, NEG_INF)
        for i in range(self.d):
            if y[i] > 0:
                dn = y.copy()
                dn[i] -= 1
                out[i] = -self.log_ratio_up(dn, i)
        return out


class PoissonTarget(Target):
    """Independent product of Poisson-shaped components, f(y) = prod rate_i^y_i.

    The univariate case is the textbook Poisson target; the d-dimensional
    generalization keeps the sampler APIs uniformly multivariate.
    """

    def __init__(self, rate, d: int = 1, mode: str = "full"):
        if mode not in _MODES:
            raise ValueError(f"unknown mode {mode!r}")
        rates = np.broadcast_to(np.asarray(rate, dtype=float), (d,)).copy()
        if np.any(rates <= 0):
            raise ValueError("rates must be positive")
        self.d = d
        self.mode = mode
        self.rates = rates
        self._log_rates = np.log(rates)
        self._log_rates.flags.writeable = False
        self.rates.flags.writeable = False

    def log_f(self, y) -> float:
        y = as_counts(y, self.d)
        return float(y @ self._log_rates)

    def in_support(self, y) -> bool:
        as_counts(y, self.d)
        return True

    def up_log_ratios(self, y, cache=None) -> np.ndarray:
        return self._log_rates.copy()

    def down_log_ratios(self, y, cache=None) -> np.ndarray:
        y = as_counts(y, self.d)
        return np.where(y > 0, -self._log_rates, NEG_INF)


def sk_bias(weights) -> np.ndarray:
    """Row sums of a symmetric zero-diagonal coupling matrix."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("coupling matrix must be square")
    if not np.array_equal(w, w.T):
        raise ValueError("coupling matrix must be symmetric")
    if np.any(np.diag(w) != 0):
        raise ValueError("coupling matrix must have a zero diagonal")
    return w.sum(axis=1)


class SKTarget(Target):
    """Spin-glass target on {0,1}^d: f(y) = exp(beta * (y'Wy - b'y)).

    ``W`` is symmetric with zero diagonal and the bias is derived as its row
    sums, so the distribution is the 0/1 relabelling of a +-1 spin model
    without an external field.
    """

    def __init__(self, beta: float, weights, mode: str = "full"):
        if mode not in _MODES:
            raise ValueError(f"unknown mode {mode!r}")
        if beta < 0:
            raise ValueError("inverse temperature must be non-negative")
        self.bias = sk_bias(weights)
        self.weights = np.asarray(weights, dtype=float).copy()
        self.weights.flags.writeable = False
        self.bias.flags.writeable = False
        self.beta = float(beta)
        self.d = self.weights.shape[0]
        self.mode = mode

    def log_f(self, y) -> float:
        y = as_counts(y, self.d)
        if np.any(y > 1):
            return NEG_INF
        yf = y.astype(float)
        return self.beta * float(yf @ self.weights @ yf - self.bias @ yf)

    def in_support(self, y) -> bool:
        y = as_counts(y, self.d)
        return bool(np.all(y <= 1))

    def new_cache(self, y):
        if self.mode != "incremental":
            return None
        return QuadCache(self.weights @ as_counts(y, self.d).astype(float))

    def update_cache(self, cache, i: int, delta: int) -> None:
        if cache is not None:
            cache.wy += delta * self.weights[:, i]

    def _wy(self, y, cache):
        if cache is not None:
            return cache.wy
        return self.weights @ y.astype(float)

    def up_log_ratios(self, y, cache=None) -> np.ndarray:
        y = as_counts(y, self.d)
        out = self.beta * (2.0 * self._wy(y, cache) - self.bias)
        out[y >= 1] = NEG_INF
        return out

    def down_log_ratios(self, y, cache=None) -> np.ndarray:
        y = as_counts(y, self.d)
        out = -self.beta * (2.0 * self._wy(y, cache) - self.bias)
        out[y == 0] = NEG_INF
        return out


class NeuralTarget(Target):
    """Count-valued recurrent network target on all of Z^d_{>=0}.

    log f(y) = y'Wy/2 + (b - diag(W)/2)'y - sum_i exp(a1*y_i + a0)/(e^a1 - 1)

    The double-exponential penalty keeps the mass function summable and acts
    as a soft per-component cap on counts.  On {0,1}^d the diag(W)/2
    correction cancels the quadratic self-term, recovering a Boltzmann form.
    """

    def __init__(self, weights, bias, a0: float = 0.0, a1: float = 1.0, mode: str = "full"):
        if mode not in _MODES:
            raise ValueError(f"unknown mode {mode!r}")
        w = np.asarray(weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weight matrix must be square")
        if not np.array_equal(w, w.T):
            raise ValueError("weight matrix must be symmetric")
        if a1 <= 0:
            raise ValueError("a1 must be positive")
        self.weights = w.copy()
        self.d = w.shape[0]
        self.bias = np.broadcast_to(np.asarray(bias, dtype=float), (self.d,)).copy()
        self.a0 = float(a0)
        self.a1 = float(a1)
        self.mode = mode
        self._diag = np.diag(self.weights).copy()
        self._denom = math.exp(self.a1) - 1.0
        self.weights.flags.writeable = False
        self.bias.flags.writeable = False
        self._diag.flags.writeable = False

    def log_f(self, y) -> float:
        y = as_counts(y, self.d)
        yf = y.astype(float)
        quad = 0.5 * float(yf @ self.weights @ yf)
        lin = float((self.bias - 0.5 * self._diag) @ yf)
        refr = float(np.exp(self.a1 * yf + self.a0).sum()) / self._denom
        return quad + lin - refr

    def in_support(self, y) -> bool:
        as_counts(y, self.d)
        return True

    def new_cache(self, y):
        if self.mode != "incremental":
            return None
        return QuadCache(self.weights @ as_counts(y, self.d).astype(float))

    def update_cache(self, cache, i: int, delta: int) -> None:
        if cache is not None:
            cache.wy += delta * self.weights[:, i]

    def _wy(self, y, cache):
        if cache is not None:
            return cache.wy
        return self.weights @ y.astype(float)

    def up_log_ratios(self, y, cache=None) -> np.ndarray:
        y = as_counts(y, self.d)
        return self._wy(y, cache) + self.bias - np.exp(self.a1 * y + self.a0)

    def down_log_ratios(self, y, cache=None) -> np.ndarray:
        y = as_counts(y, self.d)
        out = -(self._wy(y, cache) - self._diag + self.bias
                - np.exp(self.a1 * (y - 1) + self.a0))
        out[y == 0] = NEG_INF
        return out


class TableTarget(Target):
    """Explicit log-f table on a bounding box; the oracle's workhorse.

    Construction verifies downward closure of the positive-mass set and
    fails fast with the offending pair of states otherwise.
    """

    def __init__(self, log_table, mode: str = "full"):
        if mode not in _MODES:
            raise ValueError(f"unknown mode {mode!r}")
        table = np.asarray(log_table, dtype=float)
        if table.ndim < 1:
            raise ValueError("log table must have at least one axis")
        finite = np.isfinite(table)
        if not finite.any():
            raise ValueError("log table has no states with positive mass")
        for axis in range(table.ndim):
            hi = np.moveaxis(finite, axis, 0)[1:]
            lo = np.moveaxis(finite, axis, 0)[:-1]
            bad = hi & ~lo
            if bad.any():
                where = np.argwhere(bad)[0]
                upper = list(where)
                upper[0] += 1
                upper = tuple(np.roll(np.array(upper), axis))
                lower = tuple(np.roll(np.array(where), axis))
                raise ValueError(
                    "support is not downward closed: "
                    f"f{upper} > 0 but f{lower} = 0"
                )
        self.table = table.copy()
        self.table.flags.writeable = False
        self.d = table.ndim
        self.mode = mode
        self.box = tuple(n - 1 for n in table.shape)

    @classmethod
    def from_file(cls, path, mode: str = "full") -> "TableTarget":
        """Load from a text file of whitespace-separated `count-tuple log-f` lines."""
        entries = []
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split()
                if len(parts) < 2:
                    raise ValueError(f"{path}:{lineno}: expected counts followed by a log-f value")
                try:
                    counts = tuple(int(p) for p in parts[:-1])
                    value = float(parts[-1])
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: {exc}") from None
                if any(c < 0 for c in counts):
                    raise ValueError(f"{path}:{lineno}: negative count")
                entries.append((counts, value))
        if not entries:
            raise ValueError(f"{path}: no entries")
        d = len(entries[0][0])
        if any(len(c) != d for c, _ in entries):
            raise ValueError(f"{path}: inconsistent dimension")
        shape = tuple(max(c[i] for c, _ in entries) + 1 for i in range(d))
        table = np.full(shape, NEG_INF)
        for counts, value in entries:
            table[counts] = value
        return cls(table, mode=mode)

    def log_f(self, y) -> float:
        y = as_counts(y, self.d)
        if np.any(y > np.array(self.box)):
            return NEG_INF
        return float(self.table[tuple(y)])

    def up_log_ratios(self, y, cache=None) -> np.ndarray:
        y = as_counts(y, self.d)
        lf = self.log_f(y)
        out = np.empty(self.d)
        for i in range(self.d):
            if y[i] >= self.table.shape[i] - 1:
                out[i] = NEG_INF
            else:
                idx = list(y)
                idx[i] += 1
                hi = self.table[tuple(idx)]
                out[i] = NEG_INF if hi == NEG_INF else hi - lf
        return out

    def down_log_ratios(self, y, cache=None) -> np.ndarray:
        y = as_counts(y, self.d)
        lf = self.log_f(y)
        out = np.full(self.d, NEG_INF)
        for i in range(self.d):
            if y[i] > 0:
                idx = list(y)
                idx[i] -= 1
                out[i] = self.table[tuple(idx)] - lf
        return out


def sk_random_weights(d: int, seed: int) -> np.ndarray:
    """Symmetric zero-diagonal couplings with off-diagonal entries N(0, 4/d)."""
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.normal(0.0, math.sqrt(4.0 / d), size=(d, d)), k=1)
    return upper + upper.T


def neural_random_weights(d: int, seed: int) -> np.ndarray:
    """Symmetric weights with entries drawn from N(0, 1/d)."""
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.normal(0.0, math.sqrt(1.0 / d), size=(d, d)))
    return upper + np.triu(upper, k=1).T
