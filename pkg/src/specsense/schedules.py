"""Block-length schedules for the meta-policy.

A schedule is a non-decreasing, diverging sequence of positive integers
K_1, K_2, ...; block i of the meta-policy plays the chosen automaton K_i
slots in a row. G(n) is the block length in force at absolute slot n: the
K value of the first block whose cumulative length reaches n.
"""

import math
from typing import Callable

import numpy as np


class BlockSchedule:
    """Lazy view of a block-length sequence with cached prefix sums."""

    def __init__(self, name: str, fn: Callable[[int], int]):
        self.name = name
        self._fn = fn
        self._k = []
        self._cum = []
        k1 = self.k(1)
        if k1 < 1:
            raise ValueError(f"schedule {name!r} must produce positive integers, K_1 = {k1}")

    def k(self, i: int) -> int:
        """Block length K_i, 1-based."""
        if i < 1:
            raise ValueError("block index must be >= 1")
        while len(self._k) < i:
            j = len(self._k) + 1
            v = int(self._fn(j))
            if v < 1:
                raise ValueError(f"schedule {self.name!r} produced K_{j} = {v} < 1")
            if self._k and v < self._k[-1]:
                raise ValueError(f"schedule {self.name!r} decreased at block {j}")
            self._k.append(v)
            self._cum.append((self._cum[-1] if self._cum else 0) + v)
        return self._k[i - 1]

    def blocks_covering(self, total: int) -> np.ndarray:
        """Lengths of the minimal block prefix whose slot count reaches ``total``."""
        if total < 1:
            raise ValueError("total must be >= 1")
        i = max(len(self._k), 1)
        self.k(i)
        while self._cum[-1] < total:
            self.k(len(self._k) + 1)
        idx = int(np.searchsorted(np.asarray(self._cum), total, side="left"))
        return np.asarray(self._k[: idx + 1], dtype=np.int64)

    def g(self, n: int) -> int:
        """G(n): the K value of the block containing absolute slot n."""
        if n < 1:
            raise ValueError("n must be >= 1")
        lengths = self.blocks_covering(n)
        return int(lengths[-1])

    def __repr__(self):
        return f"BlockSchedule({self.name!r})"


def g_of_n(schedule: BlockSchedule, n: int) -> int:
    return schedule.g(n)


def _iterated_log(x: float, depth: int) -> float:
    for _ in range(depth):
        x = math.log(x)
    return x


def affine_log_schedule(offset: float, coef: float, depth: int = 1) -> BlockSchedule:
    """K_i = ceil(offset + coef * log^(depth)(i + 2)); coef > 0 keeps it diverging."""
    if coef <= 0:
        raise ValueError("coef must be > 0 for a diverging schedule")
    if depth not in (1, 2, 3):
        raise ValueError("depth must be 1, 2 or 3")
    name = f"affine_log(offset={offset:g},coef={coef:g},depth={depth})"
    return BlockSchedule(name, lambda i: math.ceil(offset + coef * _iterated_log(i + 2, depth)))


def _k1(i: int) -> int:
    return math.ceil(100 + math.log(i + 2))


def _k2(i: int) -> int:
    return math.ceil(100 + math.log(math.log(i + 2)))


def _k3(i: int) -> int:
    return math.ceil(100 + math.log(math.log(math.log(i + 2))))


BUILTIN_SCHEDULES = {
    "k1": _k1,
    "k2": _k2,
    "k3": _k3,
}


def make_schedule(spec) -> BlockSchedule:
    """Build a schedule from a name ('k1', 'k2', 'k3') or an affine-log mapping."""
    if isinstance(spec, BlockSchedule):
        return spec
    if isinstance(spec, str):
        if spec in BUILTIN_SCHEDULES:
            return BlockSchedule(spec, BUILTIN_SCHEDULES[spec])
        raise ValueError(f"unknown schedule {spec!r}, expected one of {sorted(BUILTIN_SCHEDULES)}")
    if isinstance(spec, dict):
        d = dict(spec)
        sid = d.pop("id", None)
        if sid in BUILTIN_SCHEDULES:
            if d:
                raise ValueError(f"schedule {sid!r} takes no parameters, got {sorted(d)}")
            return BlockSchedule(sid, BUILTIN_SCHEDULES[sid])
        if sid == "affine_log":
            for key in ("offset", "coef"):
                if key not in d:
                    raise ValueError(f"affine_log schedule missing parameter {key!r}")
            offset = float(d.pop("offset"))
            coef = float(d.pop("coef"))
            depth = int(d.pop("depth", 1))
            if d:
                raise ValueError(f"unknown affine_log parameters {sorted(d)}")
            return affine_log_schedule(offset, coef, depth)
        raise ValueError(f"unknown schedule id {sid!r}")
    raise ValueError(f"cannot build a schedule from {type(spec).__name__}")
