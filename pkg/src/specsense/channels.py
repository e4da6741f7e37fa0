"""Bank of independent, identically distributed two-state Markov channels.

State 1 means the channel is free (unit reward when sensed), 0 means busy.
Channel evolution never depends on which channel a policy senses, so a full
(N, T) state path can be sampled up front and shared by several policies.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class TransitionMatrix:
    """Per-channel transition law: p01 = P(busy -> free), p11 = P(free -> free)."""

    p01: float
    p11: float

    def __post_init__(self):
        for name in ("p01", "p11"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")

    def correlation_sign(self) -> int:
        """+1 when p11 > p01 (positively correlated), -1 when smaller, 0 on equality."""
        if self.p11 > self.p01:
            return 1
        if self.p11 < self.p01:
            return -1
        return 0

    def is_iid(self) -> bool:
        return self.p01 == self.p11


@dataclass
class ChannelBankState:
    """Instantaneous bank state: one 0/1 entry per channel, plus the slot index."""

    states: np.ndarray
    t: int = 1

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=np.int8)
        if self.states.ndim != 1 or self.states.size < 1:
            raise ValueError("states must be a non-empty 1-d array")
        if not np.isin(self.states, (0, 1)).all():
            raise ValueError("channel states must be 0 or 1")


def validate_belief(omega, n_channels=None) -> np.ndarray:
    """Check a belief vector (per-channel free probabilities) and return it as float64."""
    w = np.asarray(omega, dtype=np.float64)
    if w.ndim != 1 or w.size < 2:
        raise ValueError("belief vector must be 1-d with at least 2 entries")
    if n_channels is not None and w.size != n_channels:
        raise ValueError(f"belief vector has {w.size} entries, expected {n_channels}")
    if (w < 0).any() or (w > 1).any():
        raise ValueError("belief entries must lie in [0, 1]")
    return w


def stationary_prob(tm: TransitionMatrix) -> float:
    """Stationary probability of the free state for a single channel.

    Fixed point of w = w*p11 + (1-w)*p01. Undefined for the frozen chain
    p01 = 0, p11 = 1, where every distribution is stationary.
    """
    if tm.p01 == 0.0 and tm.p11 == 1.0:
        raise ValueError("absorbing chain, stationary law not unique")
    return tm.p01 / (1.0 + tm.p01 - tm.p11)


def default_belief(tm: TransitionMatrix, n_channels: int) -> np.ndarray:
    """Stationary belief replicated over the bank, the default when none is given."""
    if tm.is_iid():
        warnings.warn(
            "p01 == p11: channels are i.i.d., downstream bound constants are undefined",
            stacklevel=2,
        )
    return np.full(n_channels, stationary_prob(tm))


def sample_initial(belief, rng: np.random.Generator) -> ChannelBankState:
    """Draw the slot-1 bank state, channel i free with probability belief[i]."""
    w = validate_belief(belief)
    states = (rng.random(w.size) < w).astype(np.int8)
    return ChannelBankState(states=states, t=1)


def evolve_bank(state: ChannelBankState, tm: TransitionMatrix, rng: np.random.Generator) -> ChannelBankState:
    """Advance every channel one slot independently; sensing plays no role."""
    s = state.states
    p = np.where(s == 1, tm.p11, tm.p01)
    nxt = (rng.random(s.size) < p).astype(np.int8)
    return ChannelBankState(states=nxt, t=state.t + 1)


def sample_trajectory(tm: TransitionMatrix, belief, t_max: int, rng: np.random.Generator) -> np.ndarray:
    """Pre-sample a full (N, t_max) path of channel states.

    Column 0 is the slot-1 state drawn from the belief; the remaining columns
    follow the transition law. Restless dynamics make the path reusable by
    any number of policies.
    """
    w = validate_belief(belief)
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    u = rng.random((w.size, t_max))
    return _kernels.simulate_states(u, tm.p01, tm.p11, w)
