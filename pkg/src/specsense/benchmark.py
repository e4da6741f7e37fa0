"""Benchmark of the compiled kernels against the pure NumPy/Python fallbacks.

Run as ``python -m specsense.benchmark``. Also verifies that both paths
produce identical outputs on the benchmark workloads.
"""

import argparse
import time

import numpy as np

from . import _kernels
from ._accel import NUMBA_ENABLED


def _time(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def _equal(a, b):
    if isinstance(a, tuple):
        return all(_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def run(horizon: int = 100_000, trials: int = 20_000, n_steps: int = 200) -> list:
    rng = np.random.default_rng(0)
    lens = []
    total = 0
    i = 1
    while total < horizon:
        lens.append(100 + i % 8)
        total += lens[-1]
        i += 1
    block_len = np.array(lens, np.int64)
    u = rng.random((2, total))
    omega = np.array([0.5, 0.5])
    states = _kernels.simulate_states_py(u, 0.3, 0.7, omega)
    nxt = np.array([1, 0], np.int64)
    prv = np.array([1, 0], np.int64)
    ud = rng.random((trials, n_steps))

    cases = [
        ("simulate_states", _kernels.simulate_states, _kernels.simulate_states_py,
         (u, 0.3, 0.7, omega)),
        ("myopic_rewards", _kernels.myopic_rewards, _kernels.myopic_rewards_py,
         (states, 1, nxt, prv, 0, horizon)),
        ("ucb_block_rewards", _kernels.ucb_block_rewards, _kernels.ucb_block_rewards_py,
         (states, block_len, 3.0, nxt, prv, 0)),
        ("drift_tail_sums", _kernels.drift_tail_sums, _kernels.drift_tail_sums_py,
         (ud, 4, 0.5, 0.1, 1.0)),
    ]
    rows = []
    for name, fast, fallback, args in cases:
        fast(*args)  # warm-up compiles outside the timed region
        t_fast, out_fast = _time(fast, *args)
        t_py, out_py = _time(fallback, *args)
        rows.append({
            "kernel": name,
            "fast_s": t_fast,
            "fallback_s": t_py,
            "speedup": t_py / t_fast if t_fast > 0 else float("inf"),
            "identical": _equal(out_fast, out_py),
        })
    return rows


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--horizon", type=int, default=100_000)
    parser.add_argument("--trials", type=int, default=20_000)
    args = parser.parse_args(argv)
    mode = "numba" if NUMBA_ENABLED else "fallback only (numba disabled)"
    print(f"backend: {mode}")
    rows = run(horizon=args.horizon, trials=args.trials)
    print(f"{'kernel':<20} {'fast [s]':>10} {'fallback [s]':>13} {'speedup':>9}  identical")
    for r in rows:
        print(f"{r['kernel']:<20} {r['fast_s']:>10.4f} {r['fallback_s']:>13.4f} "
              f"{r['speedup']:>8.1f}x  {r['identical']}")
    return 0 if all(r["identical"] for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
