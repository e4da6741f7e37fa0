"""End-to-end regret experiments.

Each replicate pre-samples one channel-state path, runs the genie's myopic
automaton and the UCB meta-policy on that same path, and records the
cumulative reward difference at a geometric grid of checkpoints. Sharing
the path is legitimate because the channels evolve independently of
sensing, and it removes most of the Monte Carlo variance of the
difference.
"""

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .analysis import BoundConstants, bound_constants, bound_constants_json, regret_bound_at
from .channels import TransitionMatrix, default_belief, stationary_prob, validate_belief
from .meta import MetaPolicyState  # noqa: F401  (re-exported for callers)
from .policies import MyopicPolicyState, PolicyKind, first_action, initial_order, myopic_step
from .schedules import BlockSchedule, make_schedule

DEFAULT_SEED = 1729
CSV_HEADER = "n,mean_regret,stderr,g_of_n,normalized_regret,bound"
DIAG_HEADER = "replicate,total_blocks,inferior_blocks,inferior_slots,genie_reward,learner_reward"


def genie_kind(tm: TransitionMatrix) -> PolicyKind:
    """The automaton a parameter-aware genie would run; PI1 on a correlation tie."""
    return PolicyKind.PI2 if tm.correlation_sign() < 0 else PolicyKind.PI1


@dataclass
class ExperimentConfig:
    p01: float
    p11: float
    n_channels: int = 2
    L: float = 3.0
    schedule: BlockSchedule = field(default_factory=lambda: make_schedule("k1"))
    horizon: int = 100_000
    replicates: int = 200
    seed: int = DEFAULT_SEED
    omega1: np.ndarray | None = None
    out_dir: str = "results"
    checkpoint_ratio: float = 1.5

    def tm(self) -> TransitionMatrix:
        return TransitionMatrix(self.p01, self.p11)

    def belief(self) -> np.ndarray:
        if self.omega1 is None:
            return default_belief(self.tm(), self.n_channels)
        return validate_belief(self.omega1, self.n_channels)

    def validate(self) -> "ExperimentConfig":
        tm = self.tm()  # checks p01/p11 ranges
        if self.n_channels < 2:
            raise ValueError("'n_channels' must be >= 2")
        if not self.L > 2:
            raise ValueError("'L' must be strictly greater than 2")
        init = self.schedule.k(1) + self.schedule.k(2)
        if self.horizon < init:
            raise ValueError(f"'horizon' shorter than initialization (K_1 + K_2 = {init})")
        if self.replicates < 1:
            raise ValueError("'replicates' must be >= 1")
        if not self.checkpoint_ratio > 1:
            raise ValueError("'checkpoint_ratio' must be > 1")
        self.belief()
        if tm.is_iid():
            warnings.warn(
                "p01 == p11: arms have equal steady throughput, the regret bound is undefined",
                stacklevel=2,
            )
        return self


_CONFIG_FIELDS = {
    "p01", "p11", "n_channels", "L", "schedule", "horizon", "replicates",
    "seed", "omega1", "out_dir", "checkpoint_ratio",
}


def config_from_dict(d: dict) -> ExperimentConfig:
    unknown = set(d) - _CONFIG_FIELDS
    if unknown:
        raise ValueError(f"unknown config field {sorted(unknown)[0]!r}")
    for required in ("p01", "p11"):
        if required not in d:
            raise ValueError(f"missing config field {required!r}")
    kwargs = dict(d)
    if "schedule" in kwargs:
        kwargs["schedule"] = make_schedule(kwargs["schedule"])
    if kwargs.get("omega1") is not None:
        kwargs["omega1"] = np.asarray(kwargs["omega1"], dtype=np.float64)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cfg = ExperimentConfig(**kwargs)
    return cfg.validate()


def load_config(path) -> ExperimentConfig:
    """Read and validate a JSON experiment config, filling documented defaults."""
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as e:
            raise ValueError(f"config {path} is not valid JSON: {e}") from None
    if not isinstance(d, dict):
        raise ValueError("config must be a JSON object")
    return config_from_dict(d)


def checkpoint_grid(config: ExperimentConfig) -> np.ndarray:
    """Geometric checkpoint slots from K_1 + K_2 up to and including the horizon."""
    start = config.schedule.k(1) + config.schedule.k(2)
    pts = []
    c = float(start)
    while c < config.horizon:
        pts.append(int(round(c)))
        c *= config.checkpoint_ratio
    pts.append(config.horizon)
    return np.unique(np.asarray(pts, dtype=np.int64))


def cumulative_reward_at(rewards: np.ndarray, ns) -> np.ndarray:
    """Cumulative reward after each slot count in ``ns`` (0 slots giving 0)."""
    ns = np.asarray(ns, dtype=np.int64)
    if (ns < 0).any() or (ns > rewards.size).any():
        raise ValueError("checkpoints must lie in [0, len(rewards)]")
    cum = np.concatenate(([0], np.cumsum(rewards.astype(np.int64))))
    return cum[ns]


@dataclass
class RegretCurve:
    """Mean regret and derived columns at each checkpoint."""

    ns: np.ndarray
    mean_regret: np.ndarray
    stderr: np.ndarray
    g_of_n: np.ndarray
    normalized: np.ndarray
    bound: np.ndarray  # NaN where undefined
    bound_defined: bool


@dataclass
class RunDiagnostics:
    """Per-replicate accounting of the meta-policy's behavior."""

    genie: PolicyKind
    inferior: PolicyKind
    total_blocks: int
    inferior_blocks: np.ndarray
    inferior_slots: np.ndarray
    genie_reward: np.ndarray
    learner_reward: np.ndarray
    inferior_share_at: np.ndarray  # mean share of inferior-arm slots per checkpoint


class TrajectoryRewardSource:
    """Reward feed that steps the chosen automaton along a shared state path.

    Reference implementation of the block player's environment; the fast
    kernel reproduces exactly this behavior.
    """

    def __init__(self, states: np.ndarray, belief):
        self.states = states
        w = validate_belief(belief, states.shape[0])
        self.arms = {
            PolicyKind.PI1: MyopicPolicyState.from_belief(PolicyKind.PI1, w),
            PolicyKind.PI2: MyopicPolicyState.from_belief(PolicyKind.PI2, w),
        }
        self.t = 0

    def __call__(self, arm: PolicyKind, k: int) -> np.ndarray:
        automaton = self.arms[arm]
        out = np.empty(k, np.int8)
        for i in range(k):
            obs = int(self.states[automaton.current, self.t])
            out[i] = obs
            self.t += 1
            myopic_step(automaton, obs)
        return out


def _replicate_rng(seed: int, replicate: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(replicate,)))


def estimate_regret_curve(config: ExperimentConfig):
    """Run all replicates and return (RegretCurve, RunDiagnostics)."""
    config.validate()
    tm = config.tm()
    belief = config.belief()
    schedule = config.schedule
    block_len = schedule.blocks_covering(config.horizon)
    t_total = int(block_len.sum())
    cps = checkpoint_grid(config)

    kappa1 = initial_order(belief)
    nxt = kappa1.next_array()
    prv = kappa1.prev_array()
    a0 = first_action(belief)
    genie = genie_kind(tm)
    inferior = PolicyKind.PI2 if genie == PolicyKind.PI1 else PolicyKind.PI1
    inferior_idx = 0 if inferior == PolicyKind.PI1 else 1

    reps = config.replicates
    diffs = np.empty((reps, cps.size))
    share = np.empty((reps, cps.size))
    inf_blocks = np.empty(reps, np.int64)
    inf_slots = np.empty(reps, np.int64)
    genie_total = np.empty(reps, np.int64)
    learner_total = np.empty(reps, np.int64)

    for r in range(reps):
        rng = _replicate_rng(config.seed, r)
        u = rng.random((config.n_channels, t_total))
        states = _kernels.simulate_states(u, tm.p01, tm.p11, belief)
        g_rew = _kernels.myopic_rewards(states, int(genie), nxt, prv, a0, config.horizon)
        l_rew, arm_of, _, _ = _kernels.ucb_block_rewards(states, block_len, config.L, nxt, prv, a0)
        g_cum = cumulative_reward_at(g_rew, cps)
        l_cum = cumulative_reward_at(l_rew[: config.horizon], cps)
        diffs[r] = g_cum - l_cum
        slot_arm = np.repeat(arm_of, block_len)[: config.horizon]
        inf_cum = np.concatenate(([0], np.cumsum((slot_arm == inferior_idx).astype(np.int64))))
        share[r] = inf_cum[cps] / cps
        inf_blocks[r] = int((arm_of == inferior_idx).sum())
        inf_slots[r] = int(inf_cum[config.horizon])
        genie_total[r] = int(g_cum[-1])
        learner_total[r] = int(l_cum[-1])

    mean = diffs.mean(axis=0)
    stderr = (
        diffs.std(axis=0, ddof=1) / math.sqrt(reps) if reps > 1 else np.zeros_like(mean)
    )
    g_vals = np.array([schedule.g(int(n)) for n in cps], dtype=np.int64)
    normalized = mean / (g_vals * np.log(cps))

    consts = None
    if not tm.is_iid():
        try:
            consts = bound_constants(tm, schedule, config.L, config.n_channels)
        except ValueError:
            consts = None
    if consts is not None:
        bound = np.array([regret_bound_at(consts, schedule, int(n)) for n in cps])
    else:
        bound = np.full(cps.size, np.nan)

    curve = RegretCurve(
        ns=cps, mean_regret=mean, stderr=stderr, g_of_n=g_vals,
        normalized=normalized, bound=bound, bound_defined=consts is not None,
    )
    diag = RunDiagnostics(
        genie=genie, inferior=inferior, total_blocks=int(block_len.size),
        inferior_blocks=inf_blocks, inferior_slots=inf_slots,
        genie_reward=genie_total, learner_reward=learner_total,
        inferior_share_at=share.mean(axis=0),
    )
    return curve, diag, consts


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def write_regret_csv(path, curve: RegretCurve) -> None:
    lines = [CSV_HEADER]
    for i, n in enumerate(curve.ns):
        bound = _fmt(curve.bound[i]) if curve.bound_defined else "undefined"
        lines.append(
            f"{int(n)},{_fmt(curve.mean_regret[i])},{_fmt(curve.stderr[i])},"
            f"{int(curve.g_of_n[i])},{_fmt(curve.normalized[i])},{bound}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_diagnostics_csv(path, diag: RunDiagnostics) -> None:
    lines = [DIAG_HEADER]
    for r in range(diag.inferior_blocks.size):
        lines.append(
            f"{r},{diag.total_blocks},{diag.inferior_blocks[r]},"
            f"{diag.inferior_slots[r]},{diag.genie_reward[r]},{diag.learner_reward[r]}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def run_experiment(config: ExperimentConfig) -> dict:
    """Run the experiment and persist curve, diagnostics and analysis files.

    Deterministic for a fixed config and master seed: two runs produce
    byte-identical output.
    """
    curve, diag, consts = estimate_regret_curve(config)
    out = Path(config.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "regret_curve": out / "regret_curve.csv",
            "diagnostics": out / "diagnostics.csv",
            "analysis": out / "analysis.json",
        }
        write_regret_csv(paths["regret_curve"], curve)
        write_diagnostics_csv(paths["diagnostics"], diag)
        analysis = {k: None for k in (
            "U1", "U2", "C1", "C2", "q", "Kq", "alpha", "beta", "gamma",
            "gamma_prime", "Z1", "Z2", "Z3", "Z4",
        )}
        if consts is not None:
            analysis.update(bound_constants_json(consts))
        analysis.update({
            "p01": config.p01,
            "p11": config.p11,
            "n_channels": config.n_channels,
            "L": config.L,
            "schedule": config.schedule.name,
            "seed": config.seed,
            "genie_policy": diag.genie.name,
            "bound_defined": curve.bound_defined,
        })
        paths["analysis"].write_text(json.dumps(analysis, indent=2, sort_keys=True) + "\n")
    except OSError as e:
        raise OSError(f"failed writing experiment output under {out}: {e}") from e
    return {k: str(v) for k, v in paths.items()}
