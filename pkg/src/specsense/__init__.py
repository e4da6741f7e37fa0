"""specsense: simulator and analyzer for learning-driven myopic channel sensing.

A bank of independent two-state Markov channels is sensed one channel per
slot. Two myopic automata (one optimal for positively correlated channels,
one for negatively correlated) are treated as arms of an upper-confidence
meta-policy played in slowly growing blocks. The package simulates the
resulting regret against a parameter-aware genie and computes the matching
analytic constants from the exact ordered-state Markov chain.
"""

from ._accel import NUMBA_ENABLED
from .analysis import (
    BoundConstants,
    OrderedChainModel,
    SteadyConstants,
    bound_constants,
    build_ordered_chain,
    closed_form_deviation,
    closed_form_steady,
    deviation_constant,
    expected_reward_trajectory,
    regret_bound_at,
    steady_constants,
    steady_throughput,
)
from .channels import (
    ChannelBankState,
    TransitionMatrix,
    default_belief,
    evolve_bank,
    sample_initial,
    sample_trajectory,
    stationary_prob,
    validate_belief,
)
from .concentration import (
    BUILTIN_PROCESSES,
    DriftBoundParams,
    DriftProcess,
    empirical_tail_check,
    generalized_tail_bounds,
    hoeffding_tail_bound,
)
from .harness import (
    DEFAULT_SEED,
    ExperimentConfig,
    RegretCurve,
    RunDiagnostics,
    TrajectoryRewardSource,
    checkpoint_grid,
    config_from_dict,
    cumulative_reward_at,
    estimate_regret_curve,
    genie_kind,
    load_config,
    run_experiment,
)
from .meta import BlockRecord, MetaPolicyState, run_algorithm, run_block, select_arm, ucb_index
from .policies import (
    CircularOrder,
    MyopicPolicyState,
    PolicyKind,
    first_action,
    initial_order,
    myopic_step,
)
from .schedules import BlockSchedule, affine_log_schedule, g_of_n, make_schedule

__version__ = "0.1.0"
