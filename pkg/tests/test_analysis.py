import math

import numpy as np
import pytest

from specsense import (
    BlockSchedule,
    PolicyKind,
    TransitionMatrix,
    bound_constants,
    build_ordered_chain,
    closed_form_deviation,
    closed_form_steady,
    deviation_constant,
    expected_reward_trajectory,
    make_schedule,
    regret_bound_at,
    steady_throughput,
)
from specsense import _kernels
from specsense.analysis import bound_constants_json, second_eigenvalue_modulus

TM_POS = TransitionMatrix(0.3, 0.7)
TM_NEG = TransitionMatrix(0.7, 0.3)

# hand evaluation of the two-step product formulas at P(0.3, 0.7), states
# ordered (00, 01, 10, 11) with the sensed channel as the leading bit
Q_PI1_HAND = np.array([
    [0.49, 0.21, 0.21, 0.09],
    [0.21, 0.09, 0.49, 0.21],
    [0.21, 0.09, 0.49, 0.21],
    [0.09, 0.21, 0.21, 0.49],
])
Q_PI2_HAND = np.array([
    [0.49, 0.21, 0.21, 0.09],
    [0.21, 0.49, 0.09, 0.21],
    [0.21, 0.49, 0.09, 0.21],
    [0.09, 0.21, 0.21, 0.49],
])


def grid_points():
    vals = np.linspace(0.05, 0.95, 10)
    return [(a, b) for a in vals for b in vals]


def test_chain_matches_hand_matrices():
    m1 = build_ordered_chain(TM_POS, 2, PolicyKind.PI1)
    m2 = build_ordered_chain(TM_POS, 2, PolicyKind.PI2)
    np.testing.assert_allclose(m1.Q, Q_PI1_HAND, atol=1e-15)
    np.testing.assert_allclose(m2.Q, Q_PI2_HAND, atol=1e-15)
    assert m1.Q[0b10, 0b11] == pytest.approx(0.7 * 0.3, abs=1e-15)
    assert m1.reward_states.tolist() == [2, 3]


def test_reward_state_count():
    for n in (2, 3, 4):
        m = build_ordered_chain(TM_POS, n, PolicyKind.PI2)
        assert m.reward_states.size == 2 ** (n - 1)


def test_chain_size_limits():
    with pytest.raises(ValueError):
        build_ordered_chain(TM_POS, 1, PolicyKind.PI1)
    with pytest.raises(ValueError):
        build_ordered_chain(TM_POS, 13, PolicyKind.PI1)


@pytest.mark.parametrize("kind", [PolicyKind.PI1, PolicyKind.PI2])
def test_rows_stochastic_on_grid(kind):
    for p01, p11 in grid_points():
        m = build_ordered_chain(TransitionMatrix(p01, p11), 2, kind)
        assert np.abs(m.Q.sum(axis=1) - 1.0).max() < 1e-12
        assert (m.Q >= 0).all()


def test_expected_reward_trajectory_basics():
    m = build_ordered_chain(TM_POS, 2, PolicyKind.PI1)
    v1 = np.zeros(4)
    v1[3] = 1.0  # all channels free
    y = expected_reward_trajectory(m, v1, 5)
    assert y[0] == pytest.approx(1.0, abs=0)
    # i.i.d. channels: every slot after the first earns p
    m_iid = build_ordered_chain(TransitionMatrix(0.4, 0.4), 2, PolicyKind.PI1)
    for start in range(4):
        v = np.zeros(4)
        v[start] = 1.0
        y = expected_reward_trajectory(m_iid, v, 6)
        np.testing.assert_allclose(y[1:], 0.4, atol=1e-12)


def test_expected_reward_converges_to_steady():
    m = build_ordered_chain(TM_POS, 2, PolicyKind.PI1)
    v1 = np.full(4, 0.25)
    y = expected_reward_trajectory(m, v1, 200)
    assert y[-1] == pytest.approx(0.6, abs=1e-10)


def test_expected_reward_validates_v1():
    m = build_ordered_chain(TM_POS, 2, PolicyKind.PI1)
    with pytest.raises(ValueError):
        expected_reward_trajectory(m, np.array([0.5, 0.5]), 3)
    with pytest.raises(ValueError):
        expected_reward_trajectory(m, np.array([0.5, 0.5, 0.5, 0.6]), 3)


def test_steady_throughput_iid_equals_p():
    for p in (0.2, 0.5, 0.8):
        for kind in (PolicyKind.PI1, PolicyKind.PI2):
            m = build_ordered_chain(TransitionMatrix(p, p), 2, kind)
            assert steady_throughput(m) == pytest.approx(p, abs=1e-11)


@pytest.mark.parametrize(
    "tm, kind, expected",
    [
        (TM_POS, PolicyKind.PI1, 0.6),
        (TM_POS, PolicyKind.PI2, 0.4),
        (TM_NEG, PolicyKind.PI1, 0.4),
        (TM_NEG, PolicyKind.PI2, 0.6),
    ],
)
def test_steady_throughput_known_values(tm, kind, expected):
    m = build_ordered_chain(tm, 2, kind)
    assert steady_throughput(m) == pytest.approx(expected, abs=1e-10)
    assert closed_form_steady(tm, kind) == pytest.approx(expected, abs=1e-12)


def test_steady_throughput_degenerate_rejected():
    # frozen chain: every state absorbing in the ordered chain
    m = build_ordered_chain(TransitionMatrix(0.0, 1.0), 2, PolicyKind.PI1)
    with pytest.raises(ValueError, match="undefined"):
        steady_throughput(m)
    # deterministic flip: periodic, power iteration cannot settle
    m = build_ordered_chain(TransitionMatrix(1.0, 0.0), 2, PolicyKind.PI1)
    with pytest.raises(ValueError, match="undefined"):
        steady_throughput(m)


def test_steady_matches_monte_carlo():
    # chain value vs the automaton's long-run mean, 3 SEs over 20x50k slots
    rng = np.random.default_rng(12)
    for tm, n in [(TM_POS, 2), (TM_NEG, 3)]:
        belief = np.full(n, 0.5)
        nxt = np.array([(i + 1) % n for i in range(n)], np.int64)
        prv = np.array([(i - 1) % n for i in range(n)], np.int64)
        for kind in (PolicyKind.PI1, PolicyKind.PI2):
            m = build_ordered_chain(tm, n, kind)
            u_chain = steady_throughput(m)
            reps = 20
            means = np.empty(reps)
            for r in range(reps):
                u = rng.random((n, 50_000))
                states = _kernels.simulate_states(u, tm.p01, tm.p11, belief)
                means[r] = _kernels.myopic_rewards(states, int(kind), nxt, prv, n - 1, 50_000).mean()
            se = means.std(ddof=1) / math.sqrt(reps)
            assert abs(means.mean() - u_chain) < 3 * se


def test_closed_form_deviation_hand_values():
    # hand evaluation: both policies give 19/42 at P(0.3, 0.7), 11/42 at P(0.7, 0.3)
    for kind in (PolicyKind.PI1, PolicyKind.PI2):
        assert closed_form_deviation(TM_POS, kind) == pytest.approx(19 / 42, abs=1e-14)
        assert closed_form_deviation(TM_NEG, kind) == pytest.approx(11 / 42, abs=1e-14)
    assert closed_form_deviation(TransitionMatrix(0.5, 0.5), PolicyKind.PI1) == 0.0


def test_deviation_constant_methods():
    m = build_ordered_chain(TM_POS, 2, PolicyKind.PI1)
    assert deviation_constant(m, "closed_form_n2") == pytest.approx(19 / 42, abs=1e-14)
    assert deviation_constant(m, "truncated_series") == pytest.approx(1.0523809523809, abs=1e-9)
    with pytest.raises(ValueError, match="unknown method"):
        deviation_constant(m, "nope")
    m3 = build_ordered_chain(TM_POS, 3, PolicyKind.PI1)
    with pytest.raises(ValueError, match="2 channels"):
        deviation_constant(m3, "closed_form_n2")


def test_second_eigenvalue_modulus():
    m = build_ordered_chain(TM_POS, 2, PolicyKind.PI1)
    assert second_eigenvalue_modulus(m) == pytest.approx(0.4, abs=1e-10)


@pytest.mark.parametrize("tm", [TM_POS, TM_NEG])
@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("kind", [PolicyKind.PI1, PolicyKind.PI2])
def test_series_constant_bounds_all_partial_sums(tm, n, kind):
    """The cumulative expected reward from any deterministic start stays
    within the truncated-series constant of M times the steady rate."""
    m = build_ordered_chain(tm, n, kind)
    u = steady_throughput(m)
    c = deviation_constant(m, "truncated_series")
    y = np.zeros(m.Q.shape[0])
    y[m.reward_states] = 1.0
    partial = np.zeros_like(y)
    worst = 0.0
    for _ in range(500):
        partial += y - u
        worst = max(worst, np.abs(partial).max())
        y = m.Q @ y
    assert worst < c + 1e-9


def test_bound_constants_frozen_values():
    # first verified computation at P(0.3, 0.7), first built-in schedule, L=3
    bc = bound_constants(TM_POS, make_schedule("k1"), 3.0)
    assert (bc.q, bc.K_q) == (1, 102)
    assert bc.block_threshold == 11  # ceil((C1+C2)/|U1-U2|) with the series C
    assert (bc.alpha, bc.beta) == (4, 1)
    assert bc.gamma == 212 and bc.gamma_prime == 212
    assert bc.w1 == pytest.approx(0.58968253968, abs=1e-9)
    assert bc.w2 == pytest.approx(-0.56002732492, abs=1e-9)
    assert bc.Z1 == pytest.approx(78.60199016296, rel=1e-9)
    assert bc.Z2 == pytest.approx(1240.78855900106, rel=1e-9)
    assert bc.Z3 == pytest.approx(44.25797362674, rel=1e-9)
    assert bc.Z4 == pytest.approx(683.91039320306, rel=1e-9)
    assert all(z > 0 for z in (bc.Z1, bc.Z2, bc.Z3, bc.Z4))
    # gamma per its defining expression
    assert bc.gamma == math.ceil(math.exp(4 * bc.alpha / 3.0) + bc.alpha)


def test_bound_constants_first_block_exceeds_threshold():
    # with either deviation method the first block is already long enough
    for method in ("truncated_series", "closed_form_n2"):
        bc = bound_constants(TM_POS, make_schedule("k1"), 3.0, method=method)
        assert bc.q == 1
        assert make_schedule("k1").k(1) >= bc.block_threshold


def test_bound_constants_errors():
    with pytest.raises(ValueError, match="i.i.d."):
        bound_constants(TransitionMatrix(0.5, 0.5), make_schedule("k1"), 3.0)
    bounded = BlockSchedule("const5", lambda i: 5)
    with pytest.raises(ValueError, match="q unreachable"):
        bound_constants(TM_POS, bounded, 3.0, max_q_scan=5_000)
    with pytest.raises(ValueError, match="L"):
        bound_constants(TM_POS, make_schedule("k1"), 2.0)


def test_lambda_and_radius_handles():
    bc = bound_constants(TM_POS, make_schedule("k1"), 3.0)
    assert bc.c(100, 4) == pytest.approx(math.sqrt(3 * math.log(100) / 4), abs=1e-12)
    assert bc.lam(10**5) >= 1
    assert bc.lam(10**6) > bc.lam(10**4)


def test_regret_bound_monotone_and_sublinear():
    schedule = make_schedule("k1")
    bc = bound_constants(TM_POS, schedule, 3.0)
    ns = [204, 500, 10**3, 10**4, 10**5, 10**6]
    vals = [regret_bound_at(bc, schedule, n) for n in ns]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    per_slot = [regret_bound_at(bc, schedule, n) / n for n in (10**4, 10**6, 10**8)]
    assert per_slot[0] > per_slot[1] > per_slot[2]
    with pytest.raises(ValueError):
        regret_bound_at(bc, schedule, 1)


def test_bound_constants_json_keys():
    bc = bound_constants(TM_POS, make_schedule("k1"), 3.0)
    doc = bound_constants_json(bc)
    assert sorted(doc) == sorted(
        ["U1", "U2", "C1", "C2", "q", "Kq", "alpha", "beta", "gamma",
         "gamma_prime", "Z1", "Z2", "Z3", "Z4"]
    )
