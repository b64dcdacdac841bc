"""Packet transport for both links, with losses modeled as infinite delay."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import DelayPmf

# Lost packets never leave the sender; comparing with == is safe because
# LOST is only ever assigned, never computed.
LOST = math.inf


@dataclass(frozen=True)
class Packet:
    """One timestamped transmission: delay is sampled at send time."""

    sent_at: int
    payload: object
    delay: float  # nonnegative int, or LOST


@dataclass(frozen=True)
class MeasurementSet:
    """Measurements arriving at the controller in one step.

    arrivals is a list of (origin step m, y_m) pairs; every element
    satisfies m + sampled delay = step.  May be empty, may hold several.
    """

    step: int
    arrivals: tuple


def sample_delay(pmf: DelayPmf, rng: np.random.Generator):
    """Draw one delay from the PMF: i w.p. probs[i], LOST w.p. loss.

    Consumes exactly one uniform variate per call, so packet streams
    stay aligned across runs that share a seed.
    """
    u = rng.random()
    acc = 0.0
    for i, p in enumerate(pmf.probs):
        acc += p
        if u < acc:
            return i
    return LOST


class Transport:
    """Single-link in-flight store keyed by delivery step.

    Lost packets are dropped at send (they would never be delivered);
    everything else is handed out at exactly sent_at + delay, in send
    order within a step.  No reordering is applied: a slow packet sent
    earlier can surface after a fast one sent later.
    """

    def __init__(self):
        self._due = {}

    def send(self, packet: Packet):
        if packet.delay == LOST:
            return
        self._due.setdefault(packet.sent_at + packet.delay, []).append(packet)

    def deliver_due(self, now: int):
        """Remove and return all packets with sent_at + delay == now."""
        return self._due.pop(now, [])

    def pending(self) -> int:
        return sum(len(v) for v in self._due.values())


class AckChannel:
    """Lossless same-step acknowledgement of the applied buffer age.

    The actuator records the realized age each step; the controller reads
    it one step later (the current step's age is decided only after the
    controller has already sent).  Modeled as shared state, not packets.
    """

    def __init__(self):
        self._theta = []

    def record(self, k: int, theta: int):
        if k != len(self._theta):
            raise ValueError(f"ack for step {k} recorded out of order")
        self._theta.append(int(theta))

    def theta_before(self, k: int) -> Optional[int]:
        """Age applied at step k-1, or None at k=0 (nothing acknowledged yet)."""
        if k == 0:
            return None
        return self._theta[k - 1]

    def history(self):
        return tuple(self._theta)
