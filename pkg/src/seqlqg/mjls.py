"""Buffer-age mode chain and the jump-linear augmentation of the networked loop.

The controller-to-actuator link plus the buffering actuator are absorbed
into an autonomous linear system driven by the sent sequences.  Its state
eta stacks every previously sent input that could still be applied, plus
the default input:

    eta_k = [ tail of the sequence sent 1 step ago   (N entries of size m)
              tail of the sequence sent 2 steps ago  (N-1 entries)
              ...
              tail of the sequence sent N steps ago  (1 entry)
              u_default                              (1 entry) ]

Block i holds the inputs planned for steps k .. k+N-i by the sequence
generated at step k-i; its head entry is the one applicable right now.
The buffer age theta picks which head (or the default) reaches the plant,
so the closed loop is linear with matrices switching on theta, and theta
itself is a Markov chain derived from the link's delay distribution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import CostWeights, DelayPmf, PlantModel, SequenceConfig


def eta_dim(N: int, m: int) -> int:
    """Dimension of eta: m defaults plus m*(N + N-1 + ... + 1) buffered entries."""
    return m + m * (N * (N + 1)) // 2


def _block_offsets(N: int, m: int):
    """Start offsets of blocks 1..N within eta; block i is (N+1-i)*m wide."""
    offs = []
    pos = 0
    for i in range(1, N + 1):
        offs.append(pos)
        pos += (N + 1 - i) * m
    return offs


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic (N+2)x(N+2) matrix of buffer-age transition probabilities."""

    T: np.ndarray
    N: int

    def __post_init__(self):
        arr = np.asarray(self.T, dtype=float).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "T", arr)

    @property
    def n_modes(self) -> int:
        return self.N + 2


def build_transition_matrix(ca: DelayPmf, N: int) -> TransitionMatrix:
    """Transition matrix of the buffer age under the given link distribution.

    q_j is the probability the link delay equals j; delays greater than N
    are folded into loss (a sequence that old has no applicable entries
    left).  From age i the next age is j <= min(i, N) when a packet of
    age j arrives and beats the buffer, and i+1 (capped at N+1) when
    nothing usable arrives.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    q = [0.0] * (N + 1)
    for j, p in enumerate(ca.probs[: N + 1]):
        q[j] = float(p)

    T = np.zeros((N + 2, N + 2))
    for i in range(N + 2):
        upto = min(i, N)
        for j in range(upto + 1):
            T[i, j] = q[j]
        rest = 1.0 - sum(q[: upto + 1])
        if i <= N:
            T[i, i + 1] = rest
        else:
            T[i, i] = rest
    return TransitionMatrix(T=T, N=N)


@dataclass(frozen=True)
class AugmentedModel:
    """Mode-indexed matrices of the augmented loop state xi = [x; eta].

    H[i]/J[i] select the applied input at buffer age i (H from eta, J from
    the freshly sent sequence; exactly one of them is nonzero per mode).
    A_tilde/B_tilde/Q_tilde/R_tilde are the per-mode closed-loop dynamics
    and cost weights; F and G advance eta independently of the mode.
    """

    n: int
    m: int
    N: int
    d: int
    F: np.ndarray
    G: np.ndarray
    H: tuple
    J: tuple
    A_tilde: tuple
    B_tilde: tuple
    Q_tilde: tuple
    R_tilde: tuple
    Q_tilde_terminal: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.N + 2

    @property
    def seq_width(self) -> int:
        """Width of a flattened control sequence, m*(N+1)."""
        return self.m * (self.N + 1)


def build_augmented(
    plant: PlantModel, weights: CostWeights, seq: SequenceConfig
) -> AugmentedModel:
    """Assemble F, G, the per-mode selectors, and the augmented matrices."""
    n, m, N = plant.n, plant.m, seq.N
    d = eta_dim(N, m)
    nu = m * (N + 1)
    offs = _block_offsets(N, m)
    ud_off = d - m

    # eta advance: block 1 of eta' is the tail of the sent sequence (via G),
    # block i of eta' is block i-1 of eta with its head entry dropped,
    # the default block carries over unchanged.
    F = np.zeros((d, d))
    for i in range(2, N + 1):
        src = offs[i - 2]
        dst = offs[i - 1]
        width = (N + 1 - i) * m
        F[dst : dst + width, src + m : src + m + width] = np.eye(width)
    F[ud_off:, ud_off:] = np.eye(m)

    G = np.zeros((d, nu))
    if N >= 1:
        G[0 : N * m, m:nu] = np.eye(N * m)

    H = [np.zeros((m, d)) for _ in range(N + 2)]
    for i in range(1, N + 1):
        H[i][:, offs[i - 1] : offs[i - 1] + m] = np.eye(m)
    H[N + 1][:, ud_off:] = np.eye(m)

    J = [np.zeros((m, nu)) for _ in range(N + 2)]
    J[0][:, 0:m] = np.eye(m)

    A, B = plant.A, plant.B
    Q, R = weights.Q, weights.R

    A_tilde, B_tilde, Q_tilde, R_tilde = [], [], [], []
    for i in range(N + 2):
        Ai = np.zeros((n + d, n + d))
        Ai[:n, :n] = A
        Ai[:n, n:] = B @ H[i]
        Ai[n:, n:] = F
        A_tilde.append(Ai)

        Bi = np.zeros((n + d, nu))
        Bi[:n, :] = B @ J[i]
        Bi[n:, :] = G
        B_tilde.append(Bi)

        Qi = np.zeros((n + d, n + d))
        Qi[:n, :n] = Q
        Qi[n:, n:] = H[i].T @ R @ H[i]
        Q_tilde.append(Qi)

        R_tilde.append(J[i].T @ R @ J[i])

    Q_term = np.zeros((n + d, n + d))
    Q_term[:n, :n] = weights.Q_terminal

    for M in [F, G, Q_term] + H + J + A_tilde + B_tilde + Q_tilde + R_tilde:
        M.setflags(write=False)

    return AugmentedModel(
        n=n,
        m=m,
        N=N,
        d=d,
        F=F,
        G=G,
        H=tuple(H),
        J=tuple(J),
        A_tilde=tuple(A_tilde),
        B_tilde=tuple(B_tilde),
        Q_tilde=tuple(Q_tilde),
        R_tilde=tuple(R_tilde),
        Q_tilde_terminal=Q_term,
    )


def initial_eta(aug: AugmentedModel, u_default: np.ndarray) -> np.ndarray:
    """eta at step 0: the buffer starts out filled with default inputs."""
    return np.tile(np.asarray(u_default, dtype=float).ravel(), aug.d // aug.m)
