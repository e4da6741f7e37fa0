import math

import numpy as np
import pytest

from specsense import BlockSchedule, affine_log_schedule, g_of_n, make_schedule


def brute_force_g(schedule, n):
    """Literal definition: K of the first block whose cumulative length reaches n."""
    total = 0
    i = 1
    while True:
        k = schedule.k(i)
        total += k
        if total >= n:
            return k
        i += 1


def test_builtin_first_values():
    # ceil(100 + ln 3) = 102, ceil(100 + ln ln 3) = 101, ceil(100 + ln ln ln 3) = 98
    assert make_schedule("k1").k(1) == 102
    assert make_schedule("k2").k(1) == 101
    assert make_schedule("k3").k(1) == 98


@pytest.mark.parametrize("name", ["k1", "k2", "k3"])
def test_builtin_non_decreasing_and_positive(name):
    s = make_schedule(name)
    ks = [s.k(i) for i in range(1, 5_000)]
    assert all(k >= 1 for k in ks)
    assert all(b >= a for a, b in zip(ks, ks[1:]))


def test_g_examples_identity_schedule():
    s = BlockSchedule("identity", lambda i: i)
    assert s.g(1) == 1
    assert s.g(4) == 3
    assert s.g(10) == 4


def test_g_constant_prefix():
    c, m = 7, 40
    s = BlockSchedule("step", lambda i: c if i <= m else c + i)
    for n in [1, c, c * m // 2, c * m]:
        assert s.g(n) == c


@pytest.mark.parametrize("name", ["k1", "k2", "k3"])
def test_g_matches_brute_force(name):
    s = make_schedule(name)
    oracle = make_schedule(name)
    for n in [1, 2, 101, 102, 103, 204, 205, 1000, 9999, 100_000]:
        assert g_of_n(s, n) == brute_force_g(oracle, n)


@pytest.mark.parametrize("name", ["k1", "k2", "k3"])
def test_g_non_decreasing_to_1e6(name):
    s = make_schedule(name)
    lengths = s.blocks_covering(1_000_000)
    cum = np.cumsum(lengths)
    g_vals = lengths[np.searchsorted(cum, np.arange(1, 1_000_001), side="left")]
    assert (np.diff(g_vals) >= 0).all()


def test_affine_log_family():
    s = affine_log_schedule(offset=10, coef=2.0, depth=1)
    assert s.k(1) == math.ceil(10 + 2 * math.log(3))
    with pytest.raises(ValueError, match="coef"):
        affine_log_schedule(offset=10, coef=0.0)
    with pytest.raises(ValueError, match="depth"):
        affine_log_schedule(offset=10, coef=1.0, depth=4)
    with pytest.raises(ValueError, match="K_1"):
        affine_log_schedule(offset=-50, coef=1.0)


def test_make_schedule_specs():
    assert make_schedule({"id": "k2"}).name == "k2"
    s = make_schedule({"id": "affine_log", "offset": 100, "coef": 1, "depth": 1})
    assert s.k(1) == 102  # same law as the first built-in
    with pytest.raises(ValueError, match="unknown schedule"):
        make_schedule("k9")
    with pytest.raises(ValueError, match="missing parameter"):
        make_schedule({"id": "affine_log", "offset": 100})
    with pytest.raises(ValueError, match="takes no parameters"):
        make_schedule({"id": "k1", "offset": 3})


def test_decreasing_schedule_rejected():
    s = BlockSchedule("bad", lambda i: 10 - i)
    with pytest.raises(ValueError, match="decreased"):
        s.k(5)


def test_g_rejects_bad_n():
    s = make_schedule("k1")
    with pytest.raises(ValueError):
        s.g(0)
