"""Tail bounds for sums of bounded variables with a drifting conditional mean.

For variables in [0, b] whose conditional mean given the past stays within
C of a target mu (0 < C < mu), the sum S_n satisfies

    P{S_n >= n(mu+C) + a} <= exp(-2 (a (mu-C) / (b (mu+C)))^2 / n)
    P{S_n <= n(mu-C) - a} <= exp(-2 (a / b)^2 / n)

which degenerate to the classical exp(-2 a^2 / n) two-sided bound when the
drift vanishes and b = 1. This module evaluates the bounds and checks them
empirically against constraint-satisfying processes.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

# adaptive rules live in the kernel; deterministic mean paths are arrays
BUILTIN_PROCESSES = {
    "iid": 0,
    "const_high": 1,
    "const_low": 2,
    "alternating": 3,
    "adversarial_up": 4,
    "adversarial_down": 5,
}


def hoeffding_tail_bound(n: int, a: float) -> float:
    """Classical per-tail bound exp(-2 a^2 / n) for variables in [0, 1]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if a < 0:
        raise ValueError("a must be >= 0")
    return math.exp(-2.0 * a * a / n)


@dataclass(frozen=True)
class DriftBoundParams:
    """Inputs of the drifting-mean tail bounds."""

    n: int
    a: float
    mu: float
    C: float
    b: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.a < 0:
            raise ValueError("a must be >= 0")
        if self.b <= 0:
            raise ValueError("b must be > 0")
        if not 0 < self.C < self.mu:
            raise ValueError("drift bound requires 0 < C < mu")


def generalized_tail_bounds(p: DriftBoundParams) -> tuple[float, float]:
    """(upper, lower) tail bounds for a drifting conditional mean."""
    upper = math.exp(-2.0 * (p.a * (p.mu - p.C) / (p.b * (p.mu + p.C))) ** 2 / p.n)
    lower = math.exp(-2.0 * (p.a / p.b) ** 2 / p.n)
    return upper, lower


@dataclass(frozen=True)
class DriftProcess:
    """A process generating X_1..X_n with conditional means inside [mu-C, mu+C].

    Built-ins are selected by name; a custom process is an explicit per-step
    mean sequence, validated against the drift constraint at construction.
    """

    name: str
    rule: int = -1
    mean_path: np.ndarray | None = None

    @classmethod
    def builtin(cls, name: str) -> "DriftProcess":
        if name not in BUILTIN_PROCESSES:
            raise ValueError(f"unknown process {name!r}, expected one of {sorted(BUILTIN_PROCESSES)}")
        return cls(name=name, rule=BUILTIN_PROCESSES[name])

    @classmethod
    def from_mean_path(cls, means, p: DriftBoundParams) -> "DriftProcess":
        m = np.asarray(means, dtype=np.float64)
        if m.shape != (p.n,):
            raise ValueError(f"mean path must have shape ({p.n},)")
        if (m < p.mu - p.C - 1e-12).any() or (m > p.mu + p.C + 1e-12).any():
            raise ValueError("mean path violates the drift constraint [mu-C, mu+C]")
        return cls(name="mean_path", mean_path=m)


def _simulate_sums(process: DriftProcess, p: DriftBoundParams, trials: int, rng, batch: int) -> np.ndarray:
    if p.mu + p.C > p.b:
        raise ValueError("mu + C must not exceed the range bound b")
    sums = np.empty(trials)
    done = 0
    while done < trials:
        m = min(batch, trials - done)
        u = rng.random((m, p.n))
        if process.mean_path is not None:
            sums[done : done + m] = _kernels.drift_mean_path_sums(u, process.mean_path, p.b)
        else:
            sums[done : done + m] = _kernels.drift_tail_sums(u, process.rule, p.mu, p.C, p.b)
        done += m
    return sums


def empirical_tail_check(
    process,
    p: DriftBoundParams,
    trials: int,
    rng: np.random.Generator,
    batch: int = 4096,
) -> dict:
    """Measure both tail frequencies over ``trials`` runs and compare to the bounds.

    A tail passes when its empirical frequency does not exceed the analytic
    bound by more than three Monte Carlo standard deviations.
    """
    if isinstance(process, str):
        process = DriftProcess.builtin(process)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sums = _simulate_sums(process, p, trials, rng, batch)
    upper_bound, lower_bound = generalized_tail_bounds(p)
    upper_freq = float((sums >= p.n * (p.mu + p.C) + p.a).mean())
    lower_freq = float((sums <= p.n * (p.mu - p.C) - p.a).mean())

    def sigma(freq):
        return math.sqrt(freq * (1.0 - freq) / trials)

    report = {
        "process": process.name,
        "n": p.n,
        "a": p.a,
        "mu": p.mu,
        "C": p.C,
        "b": p.b,
        "trials": trials,
        "upper_freq": upper_freq,
        "upper_bound": upper_bound,
        "upper_sigma": sigma(upper_freq),
        "lower_freq": lower_freq,
        "lower_bound": lower_bound,
        "lower_sigma": sigma(lower_freq),
    }
    report["upper_pass"] = upper_freq <= upper_bound + 3.0 * report["upper_sigma"]
    report["lower_pass"] = lower_freq <= lower_bound + 3.0 * report["lower_sigma"]
    report["pass"] = report["upper_pass"] and report["lower_pass"]
    return report
