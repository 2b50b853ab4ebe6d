import math

import numpy as np
import pytest
from scipy.special import gammaln

from ppsampler.oracle import (ExactPmf, ReducibleChainError, ctmc_stationary,
                              empirical_pmf, enumerate_pmf, exact_moments,
                              tv_distance, two_time_symmetry)
from ppsampler.ctmc import bd_rates
from ppsampler.targets import NeuralTarget, PoissonTarget, TableTarget
from ppsampler.trace import WeightedTrace


def test_uniform_table_enumerates_uniform():
    target = TableTarget(np.zeros((2, 2)))  # f = 1 on {0,1}^2, factorials all 1
    pmf = enumerate_pmf(target, (1, 1))
    assert np.allclose(pmf.probs, 0.25)


def test_poisson_enumeration_matches_series():
    target = PoissonTarget(1.0)
    pmf = enumerate_pmf(target, (20,))
    y = np.arange(21)
    expected = np.exp(-1.0 + y * 0.0 - gammaln(y + 1.0))  # e^-1 / y!
    assert np.allclose(pmf.probs, expected / expected.sum(), atol=1e-15)
    # truncation at 20 leaves less than 1e-18 of the series outside
    assert abs(expected.sum() - 1.0) < 1e-18


def test_neural_ratio_through_enumeration():
    target = NeuralTarget(np.zeros((1, 1)), [0.0], a0=0.0, a1=1.0)
    pmf = enumerate_pmf(target, (30,))
    # pi(1)/pi(0) = f(1)/f(0) = exp(log_f(1) - log_f(0)) = e^-1
    ratio = pmf.probs[1] / pmf.probs[0]
    assert ratio == pytest.approx(math.exp(target.log_f([1]) - target.log_f([0])))
    assert ratio == pytest.approx(math.exp(-1.0), rel=1e-12)


def test_enumeration_rejects_oversized_box():
    target = PoissonTarget(1.0, d=8)
    with pytest.raises(ValueError, match="cap"):
        enumerate_pmf(target, (30,) * 8)


def test_stationary_single_state_box():
    target = PoissonTarget(2.0)
    pmf = ctmc_stationary(lambda y: bd_rates(target, y), (0,))
    assert pmf.probs[0] == 1.0


def test_stationary_matches_enumeration():
    rng = np.random.default_rng(8)
    target = TableTarget(rng.normal(size=(2, 2)))
    solve = ctmc_stationary(lambda y: bd_rates(target, y), (1, 1))
    exact = enumerate_pmf(target, (1, 1))
    assert tv_distance(solve, exact) < 1e-10


def test_stationary_detects_reducibility():
    def stuck_rates(y):
        return np.zeros(1), np.zeros(1)

    with pytest.raises(ReducibleChainError):
        ctmc_stationary(stuck_rates, (2,))


def test_empirical_point_mass():
    trace = WeightedTrace(np.array([[1.0, 0.0]]), np.array([2.5]))
    pmf = empirical_pmf(trace, (1, 1))
    assert pmf.probs[1, 0] == 1.0
    assert pmf.overflow == 0.0


def test_empirical_overflow_bucket():
    trace = WeightedTrace(np.array([[0.0], [5.0]]), np.array([3.0, 1.0]))
    pmf = empirical_pmf(trace, (2,))
    assert pmf.probs[0] == pytest.approx(0.75)
    assert pmf.overflow == pytest.approx(0.25)


def test_tv_examples():
    p = ExactPmf((1,), np.array([0.5, 0.5]))
    q = ExactPmf((1,), np.array([0.75, 0.25]))
    assert tv_distance(p, p) == 0.0
    assert tv_distance(p, q) == pytest.approx(0.25)
    point0 = ExactPmf((1,), np.array([1.0, 0.0]))
    point1 = ExactPmf((1,), np.array([0.0, 1.0]))
    assert tv_distance(point0, point1) == 1.0


def test_tv_is_a_metric_on_random_triples():
    rng = np.random.default_rng(9)
    for _ in range(25):
        a, b, c = (rng.dirichlet(np.ones(6)).reshape(2, 3) for _ in range(3))
        pa, pb, pc = (ExactPmf((1, 2), x) for x in (a, b, c))
        assert tv_distance(pa, pb) == pytest.approx(tv_distance(pb, pa))
        assert tv_distance(pa, pc) <= tv_distance(pa, pb) + tv_distance(pb, pc) + 1e-12


def test_exact_moments():
    point = ExactPmf((2, 2), np.zeros((3, 3)))
    point.probs[1, 2] = 1.0
    mean, cov = exact_moments(point)
    assert np.allclose(mean, [1.0, 2.0])
    assert np.all(cov == 0.0)

    uniform = ExactPmf((1,), np.array([0.5, 0.5]))
    mean, cov = exact_moments(uniform)
    assert mean[0] == pytest.approx(0.5)
    assert cov[0, 0] == pytest.approx(0.25)


def test_exact_moments_truncated_poisson():
    pmf = enumerate_pmf(PoissonTarget(2.0), (30,))
    mean, cov = exact_moments(pmf)
    assert mean[0] == pytest.approx(2.0, abs=1e-9)
    assert cov[0, 0] == pytest.approx(2.0, abs=1e-9)


def test_table_round_trip():
    rng = np.random.default_rng(10)
    target = TableTarget(rng.normal(size=(3, 2)))
    pmf = enumerate_pmf(target, (2, 1))
    # rebuild a table target from the enumerated pi, undoing the factorials
    states = np.indices(pmf.probs.shape)
    log_f = np.log(pmf.probs) + gammaln(states + 1.0).sum(axis=0)
    rebuilt = enumerate_pmf(TableTarget(log_f), (2, 1))
    assert tv_distance(rebuilt, pmf) < 1e-12


def test_symmetry_defect_iid_regeneration():
    # exchangeable pairs: regenerate the state independently each interval
    rng = np.random.default_rng(11)
    k = 200_000
    samples = rng.integers(0, 2, size=(k, 1)).astype(float)
    trace = WeightedTrace(samples, rng.exponential(1.0, size=k))
    assert two_time_symmetry(trace, 0.7, (1,)) < 0.01


def test_symmetry_defect_cyclic_trajectory():
    # deterministic 0 -> 1 -> 2 -> 0 cycle is maximally non-reversible
    samples = np.array([[0.0], [1.0], [2.0]] * 2000)
    trace = WeightedTrace(samples, np.ones(6000))
    assert two_time_symmetry(trace, 1.0, (2,)) > 0.5


def test_symmetry_requires_long_enough_trace():
    trace = WeightedTrace(np.zeros((3, 1)), np.ones(3))
    with pytest.raises(ValueError):
        two_time_symmetry(trace, 10.0, (1,))
