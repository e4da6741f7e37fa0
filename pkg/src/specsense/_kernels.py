"""Hot inner loops: channel state sampling, policy rollouts, drift-process trials.

Every kernel exists in two flavors: the module-level name is the fast path
(numba-compiled unless disabled, see _accel), and ``<name>_py`` is the pure
NumPy/Python fallback. Both compute bit-identical results.
"""

import math

import numpy as np

from ._accel import NUMBA_ENABLED, njit


def _simulate_states(u, p01, p11, omega):
    """Turn a (N, T) uniform block into channel free/busy states.

    Column t=0 realizes the initial belief omega; later columns follow the
    per-channel two-state transition law.
    """
    n, t_max = u.shape
    s = np.empty((n, t_max), np.int8)
    for i in range(n):
        s[i, 0] = 1 if u[i, 0] < omega[i] else 0
        for t in range(1, t_max):
            p = p11 if s[i, t - 1] == 1 else p01
            s[i, t] = 1 if u[i, t] < p else 0
    return s


def _myopic_rewards(states, kind, nxt, prv, a0, t_max):
    """Roll a myopic automaton over a pre-sampled state path.

    kind 1 stays on an observed 1 and advances along ``nxt`` on a 0;
    kind 2 stays on 0 and, on a 1, advances along ``nxt`` when the target
    slot (1-based) is odd and along ``prv`` when it is even.
    """
    rew = np.empty(t_max, np.int8)
    c = a0
    for t in range(t_max):
        obs = states[c, t]
        rew[t] = obs
        if kind == 1:
            if obs == 0:
                c = nxt[c]
        else:
            if obs == 1:
                c = nxt[c] if (t + 2) % 2 == 1 else prv[c]
    return rew


def _ucb_block_rewards(states, block_len, L, nxt, prv, a0):
    """Upper-confidence block player over the two myopic automata.

    Block 0 plays automaton 1, block 1 plays automaton 2; afterwards the arm
    with the larger sample-mean-plus-radius index is played for the next
    block length. Each automaton keeps its channel and slot parity across
    the blocks it is not playing.

    Returns (per-slot rewards, arm per block, block sample means,
    1-based block start times).
    """
    n_blocks = block_len.shape[0]
    t_total = 0
    for b in range(n_blocks):
        t_total += block_len[b]
    rew = np.empty(t_total, np.int8)
    arm_of = np.empty(n_blocks, np.int8)
    block_mean = np.empty(n_blocks, np.float64)
    block_start = np.empty(n_blocks, np.int64)

    cur = np.empty(2, np.int64)
    tau = np.empty(2, np.int64)
    cur[0] = a0
    cur[1] = a0
    tau[0] = 1
    tau[1] = 1
    xhat = np.zeros(2, np.float64)
    cnt = np.zeros(2, np.int64)

    n = 0
    for b in range(n_blocks):
        k = block_len[b]
        if b == 0:
            j = 0
        elif b == 1:
            j = 1
        else:
            lnn = math.log(n)
            idx0 = xhat[0] / cnt[0] + math.sqrt(L * lnn / cnt[0])
            idx1 = xhat[1] / cnt[1] + math.sqrt(L * lnn / cnt[1])
            j = 0 if idx0 >= idx1 else 1
        arm_of[b] = j
        block_start[b] = n + 1
        c = cur[j]
        tj = tau[j]
        bsum = 0
        if j == 0:
            for _ in range(k):
                obs = states[c, n]
                rew[n] = obs
                bsum += obs
                n += 1
                if obs == 0:
                    c = nxt[c]
                tj += 1
        else:
            for _ in range(k):
                obs = states[c, n]
                rew[n] = obs
                bsum += obs
                n += 1
                if obs == 1:
                    c = nxt[c] if (tj + 1) % 2 == 1 else prv[c]
                tj += 1
        cur[j] = c
        tau[j] = tj
        block_mean[b] = bsum / k
        xhat[j] += block_mean[b]
        cnt[j] += 1
    return rew, arm_of, block_mean, block_start


def _drift_tail_sums(u, rule, mu, c_drift, b):
    """Sum of n bounded variables per trial under a drifting conditional mean.

    Rules: 0 constant mu, 1 constant mu+C, 2 constant mu-C, 3 alternating,
    4 adaptive push toward the upper tail, 5 adaptive push toward the lower
    tail. Every rule keeps the conditional mean inside [mu-C, mu+C].
    """
    trials, n = u.shape
    out = np.empty(trials, np.float64)
    for i in range(trials):
        s = 0.0
        for t in range(n):
            if rule == 0:
                m = mu
            elif rule == 1:
                m = mu + c_drift
            elif rule == 2:
                m = mu - c_drift
            elif rule == 3:
                m = mu + c_drift if t % 2 == 0 else mu - c_drift
            elif rule == 4:
                m = mu + c_drift if s >= t * mu else mu - c_drift
            else:
                m = mu - c_drift if s <= t * mu else mu + c_drift
            x = b if u[i, t] < m / b else 0.0
            s += x
        out[i] = s
    return out


def _drift_tail_sums_py(u, rule, mu, c_drift, b):
    # vectorized over trials; per-trial arithmetic identical to the loop kernel
    trials, n = u.shape
    s = np.zeros(trials, np.float64)
    hi = mu + c_drift
    lo = mu - c_drift
    for t in range(n):
        if rule == 0:
            m = np.full(trials, mu)
        elif rule == 1:
            m = np.full(trials, hi)
        elif rule == 2:
            m = np.full(trials, lo)
        elif rule == 3:
            m = np.full(trials, hi if t % 2 == 0 else lo)
        elif rule == 4:
            m = np.where(s >= t * mu, hi, lo)
        else:
            m = np.where(s <= t * mu, lo, hi)
        s = s + np.where(u[:, t] < m / b, b, 0.0)
    return s


def _drift_mean_path_sums(u, means, b):
    """Same trial sums for an explicit per-step conditional-mean sequence."""
    trials, n = u.shape
    out = np.empty(trials, np.float64)
    for i in range(trials):
        s = 0.0
        for t in range(n):
            x = b if u[i, t] < means[t] / b else 0.0
            s += x
        out[i] = s
    return out


def _drift_mean_path_sums_py(u, means, b):
    return np.where(u < means[np.newaxis, :] / b, b, 0.0).sum(axis=1)


# pure fallbacks, always available
simulate_states_py = _simulate_states
myopic_rewards_py = _myopic_rewards
ucb_block_rewards_py = _ucb_block_rewards
drift_tail_sums_py = _drift_tail_sums_py
drift_mean_path_sums_py = _drift_mean_path_sums_py

if NUMBA_ENABLED:
    simulate_states = njit(cache=True)(_simulate_states)
    myopic_rewards = njit(cache=True)(_myopic_rewards)
    ucb_block_rewards = njit(cache=True)(_ucb_block_rewards)
    drift_tail_sums = njit(cache=True)(_drift_tail_sums)
    drift_mean_path_sums = njit(cache=True)(_drift_mean_path_sums)
else:
    simulate_states = _simulate_states
    myopic_rewards = _myopic_rewards
    ucb_block_rewards = _ucb_block_rewards
    drift_tail_sums = _drift_tail_sums_py
    drift_mean_path_sums = _drift_mean_path_sums_py
