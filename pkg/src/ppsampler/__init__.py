"""Sampling from multivariate count distributions via a sliding-window
point process, with birth-death and Zanella baselines, exact small-instance
oracles, and a multivariate-ESS benchmark harness."""

from .targets import (NeuralTarget, PoissonTarget, SKTarget, SupportError,
                      TableTarget, sk_bias)
from .trace import WeightedTrace
from .pps import JumpEvent, PointWindow, PpsState, pps_init, pps_run, pps_step
from .ctmc import (BALANCING_TAGS, CtmcKernel, apply_balancing, bd_rates,
                   ctmc_run, zanella_rates)
from .ess import (EssReport, NotPositiveDefiniteError, batch_means_cov,
                  multivariate_ess, timed_run, weighted_moments)
from .oracle import (ExactPmf, ctmc_stationary, empirical_pmf, enumerate_pmf,
                     exact_moments, tv_distance, two_time_symmetry)
from .learning import (Partition, ParamStats, clamped_run, fit, kl_gradient,
                       sufficient_stats, trace_stats)
from .bench import BenchConfig, RunRecord, derive_seed, run_benchmark, summarize

__all__ = [name for name in dir() if not name.startswith("_")]
