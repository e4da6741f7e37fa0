"""Exact analysis of the ordered-state Markov chain of each myopic automaton.

Running either automaton on an N-channel bank induces a 2^N-state Markov
chain over the channel states listed in the automaton's effective sensing
order (sensed channel first). The chain gives the steady per-slot reward
U_i of each automaton, a uniform bound C_i on the cumulative deviation of
the expected reward from M * U_i, and from those the constants of the
regret bound

    Z1 * G(n) * ln(n) + Z2 * ln(n) + Z3 * G(n) + Z4.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .channels import TransitionMatrix
from .policies import PolicyKind
from .schedules import BlockSchedule

MAX_CHANNELS = 12  # 2^N states must stay tractable


@dataclass(frozen=True)
class OrderedChainModel:
    """Ordered-state chain of one automaton: row-stochastic Q plus reward states.

    States are indexed by reading the ordered channel-state vector as a
    binary number, most significant bit first; the reward states are the
    2^(N-1) states whose leading bit (the sensed channel) is 1.
    """

    kind: PolicyKind
    n_channels: int
    tm: TransitionMatrix
    Q: np.ndarray
    reward_states: np.ndarray


def _source_maps(n: int, kind: PolicyKind):
    # on_one/on_zero[p] = ordered-vector slot whose channel lands at position p,
    # depending on the observed state of the sensed (leading) channel
    if kind == PolicyKind.PI1:
        on_one = np.arange(n)
        on_zero = np.empty(n, np.int64)
        on_zero[: n - 1] = np.arange(1, n)
        on_zero[n - 1] = 0
    else:
        on_one = np.arange(n)[::-1].copy()
        on_zero = np.empty(n, np.int64)
        on_zero[0] = 0
        on_zero[1:] = np.arange(n - 1, 0, -1)
    return on_one, on_zero


def build_ordered_chain(tm: TransitionMatrix, n_channels: int, kind: PolicyKind) -> OrderedChainModel:
    """Build the 2^N-state transition matrix of one automaton under ``tm``.

    When the sensed channel (leading slot) shows 1, PI1 keeps every channel
    in place while PI2 reverses the whole order; when it shows 0, PI1 sends
    the sensed channel to the back and shifts the rest forward, while PI2
    keeps it in front and reverses the rest.
    """
    n = n_channels
    if not 2 <= n <= MAX_CHANNELS:
        raise ValueError(f"n_channels must be between 2 and {MAX_CHANNELS}")
    kind = PolicyKind(kind)
    free_prob = np.array([tm.p01, tm.p11])  # P(next state 1 | current 0 or 1)
    src_on_one, src_on_zero = _source_maps(n, kind)
    size = 1 << n
    Q = np.empty((size, size))
    for s in range(size):
        bits = (s >> np.arange(n - 1, -1, -1)) & 1
        src = src_on_one if bits[0] == 1 else src_on_zero
        row = np.ones(1)
        for p in range(n):
            p1 = free_prob[bits[src[p]]]
            row = np.kron(row, np.array([1.0 - p1, p1]))
        Q[s] = row
    reward_states = np.arange(size // 2, size)
    return OrderedChainModel(kind=kind, n_channels=n, tm=tm, Q=Q, reward_states=reward_states)


def expected_reward_trajectory(model: OrderedChainModel, v1, t_max: int) -> np.ndarray:
    """E[Y(t)] for t = 1..t_max from the initial ordered-state distribution v1."""
    v = np.asarray(v1, dtype=np.float64)
    if v.shape != (model.Q.shape[0],):
        raise ValueError(f"v1 must have shape ({model.Q.shape[0]},)")
    if (v < 0).any() or abs(v.sum() - 1.0) > 1e-9:
        raise ValueError("v1 must be a probability vector")
    out = np.empty(t_max)
    for t in range(t_max):
        out[t] = v[model.reward_states].sum()
        if t + 1 < t_max:
            v = v @ model.Q
    return out


def _unique_stationary(Q: np.ndarray) -> bool:
    # unique stationary law <=> exactly one closed communicating class
    n_comp, labels = connected_components(csr_matrix(Q > 0), connection="strong")
    leaves = set(range(n_comp))
    rows, cols = np.nonzero(Q > 0)
    for r, c in zip(labels[rows], labels[cols]):
        if r != c:
            leaves.discard(r)
    return len(leaves) == 1


def steady_throughput(model: OrderedChainModel, tol: float = 1e-12, max_iter: int = 200_000) -> float:
    """Steady per-slot expected reward: stationary mass on the reward states.

    Computed by power iteration; degenerate transition laws without a unique
    stationary distribution (or periodic ones, where iteration cannot
    settle) are rejected.
    """
    Q = model.Q
    if not _unique_stationary(Q):
        raise ValueError("steady throughput undefined: stationary law is not unique")
    v = np.full(Q.shape[0], 1.0 / Q.shape[0])
    for _ in range(max_iter):
        w = v @ Q
        if np.abs(w - v).sum() < tol:
            return float(w[model.reward_states].sum())
        v = w
    raise ValueError("steady throughput undefined: power iteration did not converge")


def second_eigenvalue_modulus(model: OrderedChainModel) -> float:
    """Modulus of the second-largest eigenvalue of Q (the geometric mixing rate)."""
    mags = np.sort(np.abs(np.linalg.eigvals(model.Q)))[::-1]
    return float(mags[1])


def deviation_constant(model: OrderedChainModel, method: str = "truncated_series") -> float:
    """Uniform bound C on |sum_{t<=M} E[Y(t)] - M*U| over all starts and all M.

    truncated_series: the worst, over the 2^N deterministic initial
    distributions, of the summed absolute deviations |E[Y(t)] - U|, truncated
    once the geometric tail (ratio = second eigenvalue modulus) is below
    1e-10. closed_form_n2: the two-channel closed form; kept as a reference,
    it does not dominate the worst deterministic starts.
    """
    if method == "closed_form_n2":
        if model.n_channels != 2:
            raise ValueError("closed_form_n2 requires exactly 2 channels")
        return closed_form_deviation(model.tm, model.kind)
    if method != "truncated_series":
        raise ValueError(f"unknown method {method!r}")
    u = steady_throughput(model)
    r = second_eigenvalue_modulus(model)
    if r >= 1.0 - 1e-13:
        raise ValueError("deviation constant undefined: chain does not mix")
    # y[s] = E[Y(t) | deterministic start s]; one pass covers every start
    y = np.zeros(model.Q.shape[0])
    y[model.reward_states] = 1.0
    acc = np.zeros_like(y)
    window = []
    tail_gain = r / (1.0 - r) if r > 0 else 0.0
    for t in range(1, 1_000_000):
        dev = np.abs(y - u)
        acc += dev
        window.append(dev.max())
        if len(window) > 25:
            window.pop(0)
        if t >= 30 and max(window) * tail_gain < 1e-11:
            return float(acc.max())
        y = model.Q @ y
    raise ValueError("deviation constant did not converge")


def closed_form_steady(tm: TransitionMatrix, kind: PolicyKind) -> float:
    """Two-channel closed form of the steady throughput."""
    p01, p11 = tm.p01, tm.p11
    d = 1.0 - p11 + p01
    if d == 0.0:
        raise ValueError("steady throughput undefined for the frozen chain")
    if PolicyKind(kind) == PolicyKind.PI1:
        return p01**2 / d**2 + (1.0 - p01 + p11) * p01 * (1.0 - p11) / d**2
    return p01**2 / d**2 + p01 * (1.0 - p11) / d


def closed_form_deviation(tm: TransitionMatrix, kind: PolicyKind) -> float:
    """Two-channel closed form of the deviation constant."""
    p01, p11 = tm.p01, tm.p11
    d = 1.0 - p11 + p01
    if d == 0.0 or abs(p11 - p01) == 1.0:
        raise ValueError("deviation constant undefined for the frozen chain")
    gap = abs(p11 - p01)
    lead = max(p01, 1.0 - p11)
    shared = max(p01**2, (1.0 - p11) ** 2) * gap / ((1.0 - (p11 - p01) ** 2) * d**2)
    if PolicyKind(kind) == PolicyKind.PI1:
        return 2.0 * lead * gap * (1.0 - p11) / d**3 + shared
    return 2.0 * lead * gap * p01 / d**3 + shared


@dataclass(frozen=True)
class SteadyConstants:
    """Steady throughputs and deviation constants of both automata."""

    U1: float
    U2: float
    C1: float
    C2: float
    method: str


def steady_constants(tm: TransitionMatrix, n_channels: int = 2, method: str = "truncated_series") -> SteadyConstants:
    m1 = build_ordered_chain(tm, n_channels, PolicyKind.PI1)
    m2 = build_ordered_chain(tm, n_channels, PolicyKind.PI2)
    return SteadyConstants(
        U1=steady_throughput(m1),
        U2=steady_throughput(m2),
        C1=deviation_constant(m1, method),
        C2=deviation_constant(m2, method),
        method=method,
    )


@dataclass(frozen=True)
class BoundConstants:
    """Everything the regret bound needs, derived from one (P, schedule, L)."""

    U1: float
    U2: float
    C1: float
    C2: float
    L: float
    q: int
    K_q: int
    block_threshold: float  # max{ceil((C1+C2)/|U1-U2|), C2/U2, C1/U1}
    w1: float
    w2: float
    alpha: int
    beta: int
    gamma: float
    gamma_prime: float
    Z1: float
    Z2: float
    Z3: float
    Z4: float

    def c(self, t: float, s: float) -> float:
        """Exploration radius sqrt(L * ln(t) / s)."""
        return math.sqrt(self.L * math.log(t) / s)

    def lam(self, n: float) -> int:
        """Block-count threshold past which the mean-gap inequality cannot hold."""
        du = abs(self.U1 - self.U2)
        if self.U1 >= self.U2:
            ratio = (self.U2 + self.C2 / self.K_q) / (self.U2 - self.C2 / self.K_q)
        else:
            ratio = (self.U1 + self.C1 / self.K_q) / (self.U1 - self.C1 / self.K_q)
        return math.ceil(
            self.L * (1.0 + ratio) ** 2 * math.log(n) / (du - (self.C1 + self.C2) / self.K_q) ** 2
        )


def _alpha_like(q: int, w: float, L: float) -> int:
    return max(q, math.ceil(w / (math.sqrt(L) - math.sqrt(2.0))) ** 2)


def _gamma_like(alpha: int, beta: int, L: float) -> float:
    terms = (5 * alpha + 1, math.exp(4 * alpha / L) + alpha, 5 * beta + 1, math.exp(4 * beta / L) + beta)
    worst = max(terms)
    return math.ceil(worst) if math.isfinite(worst) else math.inf


def bound_constants(
    tm: TransitionMatrix,
    schedule: BlockSchedule,
    L: float,
    n_channels: int = 2,
    method: str = "truncated_series",
    max_q_scan: int = 1_000_000,
) -> BoundConstants:
    """Derive the regret-bound constants for one transition law and schedule.

    q is the first block index whose length reaches the block threshold;
    w, alpha, beta and gamma come from the tail-probability construction for
    the case of a positively correlated law, gamma_prime from the mirrored
    case with the roles of the automata exchanged. The Z constants use the
    worst of the two mean ratios, so one set serves either correlation sign.
    """
    if not L > 2:
        raise ValueError("exploration constant L must be strictly greater than 2")
    sc = steady_constants(tm, n_channels, method)
    u1, u2, c1, c2 = sc.U1, sc.U2, sc.C1, sc.C2
    du = abs(u1 - u2)
    if du < 1e-12:
        raise ValueError("bound undefined for i.i.d. channels")
    threshold = max(math.ceil((c1 + c2) / du), c2 / u2 if u2 > 0 else math.inf, c1 / u1 if u1 > 0 else math.inf)
    q = None
    for i in range(1, max_q_scan + 1):
        if schedule.k(i) >= threshold:
            q = i
            break
    if q is None:
        raise ValueError("q unreachable: schedule never reaches the block threshold")
    K_q = schedule.k(q)

    w1 = q * (u1 - c1 / K_q)
    w2 = q * ((u2 - c2 / K_q) / (u2 + c2 / K_q)) * (u2 + c2 / K_q - 1.0)
    alpha = _alpha_like(q, w1, L)
    beta = _alpha_like(q, w2, L)
    gamma = _gamma_like(alpha, beta, L)

    # mirrored correlation case: the other automaton is the optimal one
    w1m = q * (u2 - c2 / K_q)
    w2m = q * ((u1 - c1 / K_q) / (u1 + c1 / K_q)) * (u1 + c1 / K_q - 1.0)
    gamma_prime = _gamma_like(_alpha_like(q, w1m, L), _alpha_like(q, w2m, L), L)

    ratio = max(
        (u1 + c1 / K_q) / (u1 - c1 / K_q),
        (u2 + c2 / K_q) / (u2 - c2 / K_q),
    )
    denom = (du - (c1 + c2) / K_q) ** 2
    if denom <= 0:
        raise ValueError("bound undefined: block threshold does not separate the means")
    csum = c1 + c2 + max(c1, c2)
    spread = L * (1.0 + ratio) ** 2 / denom
    g_max = max(gamma, gamma_prime)
    z1 = du * spread
    z2 = csum * spread
    z3 = du * (1.0 + g_max + math.pi**2 / 3.0) + 1.0
    z4 = csum * (1.0 + g_max + math.pi**2 / 3.0) + max(c1, c2)
    return BoundConstants(
        U1=u1, U2=u2, C1=c1, C2=c2, L=L, q=q, K_q=K_q, block_threshold=threshold,
        w1=w1, w2=w2, alpha=alpha, beta=beta, gamma=gamma, gamma_prime=gamma_prime,
        Z1=z1, Z2=z2, Z3=z3, Z4=z4,
    )


def regret_bound_at(consts: BoundConstants, schedule: BlockSchedule, n: int) -> float:
    """Value of the regret bound at slot n >= 2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    g = schedule.g(n)
    lnn = math.log(n)
    return consts.Z1 * g * lnn + consts.Z2 * lnn + consts.Z3 * g + consts.Z4


def bound_constants_json(consts: BoundConstants) -> dict:
    """JSON-ready mapping with the externally documented key set."""
    return {
        "U1": consts.U1,
        "U2": consts.U2,
        "C1": consts.C1,
        "C2": consts.C2,
        "q": consts.q,
        "Kq": consts.K_q,
        "alpha": consts.alpha,
        "beta": consts.beta,
        "gamma": consts.gamma,
        "gamma_prime": consts.gamma_prime,
        "Z1": consts.Z1,
        "Z2": consts.Z2,
        "Z3": consts.Z3,
        "Z4": consts.Z4,
    }
