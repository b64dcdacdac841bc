"""Buffering actuator: newest sequence wins, stale buffers fall back to the default input."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class ControlSequence:
    """Inputs for steps origin .. origin+N, generated at step origin."""

    origin: int
    entries: np.ndarray  # (N+1, m)

    def __post_init__(self):
        arr = np.atleast_2d(np.asarray(self.entries, dtype=float)).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def input_for(self, k: int) -> np.ndarray:
        return self.entries[k - self.origin]


@dataclass(frozen=True)
class BufferState:
    """What the actuator holds: at most one sequence, the newest received."""

    held: Optional[ControlSequence] = None


def receive(state: BufferState, arrivals) -> BufferState:
    """Keep the sequence with the newest origin; out-of-order arrivals are discarded."""
    best = state.held
    for seq in arrivals:
        if best is None or seq.origin > best.origin:
            best = seq
    return BufferState(held=best)


def actuate(state: BufferState, k: int, u_default: np.ndarray, N: int):
    """Apply the buffered entry for step k, or the default input.

    Returns (u_k, theta_k) where theta_k = k - origin is the buffer age,
    and theta_k = N+1 means no held sequence covers step k.
    """
    held = state.held
    if held is not None:
        age = k - held.origin
        if age <= N:
            # age >= 0 always: sequences are generated at or before k
            return held.entries[age], age
    return np.asarray(u_default, dtype=float), N + 1
