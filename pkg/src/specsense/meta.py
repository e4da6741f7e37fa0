"""Upper-confidence meta-policy over the two myopic automata.

The meta-policy treats PI1 and PI2 as two arms. After one initialization
block per arm it repeatedly plays, for the next block length of the
schedule, the arm maximizing

    xhat_j / i_j + sqrt(L * ln(n) / i_j)

where xhat_j is the sum of that arm's block sample means, i_j its block
count, and n the total number of slots consumed so far. This module is the
plain reference implementation; the harness uses the compiled kernel, which
is tested for exact agreement with this one.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .policies import PolicyKind
from .schedules import BlockSchedule


@dataclass
class BlockRecord:
    """One meta-decision: which arm ran, for how long, and its sample mean."""

    arm: PolicyKind
    length: int
    sample_mean: float
    start: int  # 1-based slot of the block's first play


@dataclass
class MetaPolicyState:
    """Sufficient statistics of the meta-policy."""

    L: float
    xhat: list = field(default_factory=lambda: [0.0, 0.0])
    counts: list = field(default_factory=lambda: [0, 0])
    n: int = 0
    block_index: int = 1

    def __post_init__(self):
        if not self.L > 2:
            raise ValueError("exploration constant L must be strictly greater than 2")


def ucb_index(xhat_j: float, i_j: int, n: int, L: float) -> float:
    """Sample-mean-plus-radius index of one arm."""
    if i_j < 1:
        raise ValueError("arm has no completed block; play it unconditionally instead")
    if n < 2:
        raise ValueError("n must be >= 2")
    if not L > 2:
        raise ValueError("exploration constant L must be strictly greater than 2")
    return xhat_j / i_j + math.sqrt(L * math.log(n) / i_j)


def select_arm(state: MetaPolicyState) -> PolicyKind:
    """Arm with the larger index; ties go to PI1."""
    i1 = ucb_index(state.xhat[0], state.counts[0], state.n, state.L)
    i2 = ucb_index(state.xhat[1], state.counts[1], state.n, state.L)
    return PolicyKind.PI1 if i1 >= i2 else PolicyKind.PI2


def run_block(state: MetaPolicyState, arm: PolicyKind, k: int, reward_source) -> BlockRecord:
    """Play ``arm`` for k slots and fold the block sample mean into the state.

    ``reward_source(arm, k)`` must return the k per-slot rewards (0 or 1) and
    advance its own notion of global time.
    """
    rewards = np.asarray(reward_source(arm, k))
    if rewards.shape != (k,):
        raise ValueError(f"reward source returned {rewards.shape}, expected ({k},)")
    if not np.isin(rewards, (0, 1)).all():
        raise ValueError("per-slot rewards must be 0 or 1")
    mean = float(rewards.sum()) / k
    record = BlockRecord(arm=arm, length=k, sample_mean=mean, start=state.n + 1)
    j = 0 if arm == PolicyKind.PI1 else 1
    state.xhat[j] += mean
    state.counts[j] += 1
    state.n += k
    state.block_index += 1
    return record


def run_algorithm(
    schedule: BlockSchedule, L: float, horizon: int, reward_source
) -> tuple[list[BlockRecord], np.ndarray, MetaPolicyState]:
    """Full meta-policy run: initialization then UCB blocks until n >= horizon.

    Returns the block log, the per-slot reward trace (which may overshoot the
    horizon; the final block is never cut short), and the end state.
    """
    k1, k2 = schedule.k(1), schedule.k(2)
    if horizon < k1 + k2:
        raise ValueError(f"horizon shorter than initialization (K_1 + K_2 = {k1 + k2})")
    state = MetaPolicyState(L=L)
    log = []
    traces = []

    def play(arm, k):
        got = []

        def capture(a, kk):
            r = reward_source(a, kk)
            got.append(np.asarray(r, dtype=np.int8))
            return r

        log.append(run_block(state, arm, k, capture))
        traces.append(got[0])

    play(PolicyKind.PI1, k1)
    play(PolicyKind.PI2, k2)
    while state.n < horizon:
        arm = select_arm(state)
        play(arm, schedule.k(state.block_index))
    return log, np.concatenate(traces), state
