import math

import numpy as np
import pytest
from scipy import stats as sps

from ppsampler.pps import (ARRIVAL, DEPARTURE, AbsorbingStateError, pps_init,
                           pps_run, pps_step, check_state)
from ppsampler.targets import (PoissonTarget, SKTarget, TableTarget,
                               sk_random_weights)


def test_init_state():
    state = pps_init(PoissonTarget(1.0), m=1.0)
    assert state.now == 1.0
    assert np.array_equal(state.counts, [0])
    assert len(state.window) == 0


def test_init_rejects_degenerate_window():
    with pytest.raises(ValueError):
        pps_init(PoissonTarget(1.0), m=0.0)


def test_init_rejects_singleton_support():
    singleton = TableTarget(np.array([0.0]))  # only state {0}
    with pytest.raises(ValueError, match="singleton"):
        pps_init(singleton)


def test_first_event_is_arrival_with_exponential_wait():
    target = PoissonTarget(2.0)
    rng = np.random.default_rng(0)
    waits = []
    for _ in range(4000):
        state = pps_init(target)
        event = pps_step(state, target, rng)
        assert event.kind == ARRIVAL
        waits.append(event.holding)
    _, p = sps.kstest(waits, "expon", args=(0, 0.5))
    assert p > 0.01


def test_saturated_state_forces_departure():
    target = SKTarget(0.3, sk_random_weights(3, seed=1))
    rng = np.random.default_rng(1)
    state = pps_init(target)
    while not np.all(state.counts == 1):
        pps_step(state, target, rng)
    head_time = state.window.peek_time()
    event = pps_step(state, target, rng)
    assert event.kind == DEPARTURE
    assert state.now == head_time + state.window.m  # bit-equal expiry


def test_fifo_discipline_and_exact_service_time():
    target = PoissonTarget(3.0, d=2)
    rng = np.random.default_rng(2)
    state = pps_init(target, m=1.0)
    arrivals = []
    departures = []

    def sink(ev):
        (arrivals if ev.kind == ARRIVAL else departures).append(ev)

    pps_run(state, target, 5000, rng, sink=sink)
    # departures replay arrivals in order, exactly m later
    for arr, dep in zip(arrivals, departures):
        assert dep.component == arr.component
        assert dep.time == arr.time + 1.0


def test_counts_match_window_tally():
    target = PoissonTarget(2.0, d=3)
    rng = np.random.default_rng(3)
    state = pps_init(target)
    for _ in range(2000):
        pps_step(state, target, rng)
        check_state(state, target)


def test_run_zero_steps():
    target = PoissonTarget(1.0)
    rng = np.random.default_rng(4)
    state = pps_init(target)
    before = state.now
    trace = pps_run(state, target, 0, rng)
    assert trace.k == 0
    assert state.now == before


def test_poisson_time_weighted_mean():
    target = PoissonTarget(2.0)
    rng = np.random.default_rng(5)
    state = pps_init(target)
    pps_run(state, target, 10_000, rng)
    trace = pps_run(state, target, 400_000, rng)
    total = trace.total_time
    mean = float(trace.weights @ trace.samples[:, 0]) / total
    # crude standard error for a Poisson window count observed over `total`
    se = math.sqrt(2.0 / total)
    assert abs(mean - 2.0) < 3 * se * 3  # inflate for autocorrelation


def test_event_count_conservation():
    # every arrival departs exactly m later, so the two tallies can differ
    # by at most the number of points currently in the window
    target = PoissonTarget(4.0, d=2)
    rng = np.random.default_rng(6)
    state = pps_init(target)
    kinds = []
    pps_run(state, target, 20_000, rng, sink=lambda ev: kinds.append(ev.kind))
    n_arr = kinds.count(ARRIVAL)
    n_dep = kinds.count(DEPARTURE)
    assert n_arr - n_dep == len(state.window)
    assert n_arr - n_dep >= 0


def test_absorbing_state_is_an_error():
    # singleton support is rejected at init; force the condition through a
    # hand-built state instead
    target = PoissonTarget(1.0)
    state = pps_init(target)
    state_counts = state.counts

    class Stuck:
        d = 1
        mode = "full"

        def up_log_ratios(self, y, cache=None):
            return np.array([-np.inf])

        def new_cache(self, y):
            return None

        def update_cache(self, cache, i, delta):
            pass

    with pytest.raises(AbsorbingStateError):
        pps_step(state, Stuck(), np.random.default_rng(0))
    assert np.array_equal(state_counts, [0])


def test_determinism_per_seed():
    target = SKTarget(0.4, sk_random_weights(4, seed=7))
    traces = []
    for _ in range(2):
        rng = np.random.default_rng(123)
        state = pps_init(target)
        traces.append(pps_run(state, target, 3000, rng))
    assert np.array_equal(traces[0].samples, traces[1].samples)
    assert np.array_equal(traces[0].weights, traces[1].weights)


def test_rates_never_nan():
    target = SKTarget(0.7, sk_random_weights(3, seed=8))
    rng = np.random.default_rng(9)
    state = pps_init(target)
    for _ in range(3000):
        up = target.up_log_ratios(state.counts, state.cache)
        assert not np.any(np.isnan(up))
        pps_step(state, target, rng)
