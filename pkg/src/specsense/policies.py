"""The two myopic sensing automata over a circular channel order.

Channels are 0-indexed. PI1 stays on an observed 1 and on a 0 moves to the
next channel of the fixed circular order. PI2 stays on 0 and on a 1 moves
to the next channel of the effective order, which is the initial order on
odd slots and its reverse on even slots (slot numbering starts at 1).
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .channels import validate_belief


class PolicyKind(enum.IntEnum):
    PI1 = 1
    PI2 = 2


@dataclass(frozen=True)
class CircularOrder:
    """A cyclic permutation of the channel indices 0..N-1."""

    order: tuple

    def __post_init__(self):
        n = len(self.order)
        if n < 2 or sorted(self.order) != list(range(n)):
            raise ValueError(f"order must be a permutation of 0..N-1, got {self.order}")

    @property
    def n_channels(self) -> int:
        return len(self.order)

    def next_after(self, channel: int) -> int:
        pos = self.order.index(channel)
        return self.order[(pos + 1) % len(self.order)]

    def reverse(self) -> "CircularOrder":
        return CircularOrder(tuple(reversed(self.order)))

    def next_array(self) -> np.ndarray:
        """Successor lookup table: nxt[c] is the channel after c in the cycle."""
        n = len(self.order)
        nxt = np.empty(n, np.int64)
        for pos, c in enumerate(self.order):
            nxt[c] = self.order[(pos + 1) % n]
        return nxt

    def prev_array(self) -> np.ndarray:
        """Successor lookup for the reversed cycle (= predecessor in this one)."""
        return self.reverse().next_array()


def initial_order(belief) -> CircularOrder:
    """Slot-1 circular order: channels sorted by ascending belief, ties by index."""
    w = validate_belief(belief)
    return CircularOrder(tuple(int(i) for i in np.argsort(w, kind="stable")))


def first_action(belief) -> int:
    """Slot-1 action: the channel with the largest belief, ties to the lowest index."""
    w = validate_belief(belief)
    return int(np.argmax(w))


@dataclass
class MyopicPolicyState:
    """One myopic automaton: kind, initial order, current channel and slot.

    ``t`` is the 1-based slot of the pending action ``current``. For PI1 the
    effective order never changes; for PI2 it alternates with the parity of
    the automaton's own slot counter.
    """

    kind: PolicyKind
    kappa1: CircularOrder
    current: int
    t: int = 1
    _nxt: np.ndarray = field(init=False, repr=False)
    _prv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.current < self.kappa1.n_channels:
            raise ValueError("current channel out of range")
        self._nxt = self.kappa1.next_array()
        self._prv = self.kappa1.prev_array()

    @classmethod
    def from_belief(cls, kind: PolicyKind, belief) -> "MyopicPolicyState":
        return cls(kind=kind, kappa1=initial_order(belief), current=first_action(belief))

    @classmethod
    def without_belief(cls, kind: PolicyKind, n_channels: int) -> "MyopicPolicyState":
        # startup transients are forgotten, so the identity order and channel 0 do
        return cls(kind=kind, kappa1=CircularOrder(tuple(range(n_channels))), current=0)


def myopic_step(state: MyopicPolicyState, observation: int) -> int:
    """Advance the automaton given the observed state of its current channel.

    Returns the channel to sense at the next slot and updates the automaton
    in place.
    """
    if observation not in (0, 1):
        raise ValueError("observation must be 0 or 1")
    target = state.t + 1
    if state.kind == PolicyKind.PI1:
        if observation == 0:
            state.current = int(state._nxt[state.current])
    else:
        if observation == 1:
            table = state._nxt if target % 2 == 1 else state._prv
            state.current = int(table[state.current])
    state.t = target
    return state.current
