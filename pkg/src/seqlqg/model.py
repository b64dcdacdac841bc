"""Plant, cost, and link-delay data types with validation.

The types here are plain containers: constructors only normalize shapes and
freeze the underlying arrays.  All invariant checking (definiteness,
probability mass, dimension consistency) lives in :func:`validate`, so tests
and oracles can build degenerate instances (zero noise, singular weights)
without fighting the constructors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


def _matrix(a) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(a, dtype=float)).copy()
    arr.setflags(write=False)
    return arr


def _vector(a) -> np.ndarray:
    arr = np.asarray(a, dtype=float).ravel().copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PlantModel:
    """Linear stochastic plant x' = A x + B u + w, y = C x + v.

    W and V are the process/measurement noise covariances; x0_mean and
    x0_cov are the initial-state statistics.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    W: np.ndarray
    V: np.ndarray
    x0_mean: np.ndarray
    x0_cov: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", _matrix(self.A))
        object.__setattr__(self, "B", _matrix(self.B))
        object.__setattr__(self, "C", _matrix(self.C))
        object.__setattr__(self, "W", _matrix(self.W))
        object.__setattr__(self, "V", _matrix(self.V))
        object.__setattr__(self, "x0_mean", _vector(self.x0_mean))
        object.__setattr__(self, "x0_cov", _matrix(self.x0_cov))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def q(self) -> int:
        return self.C.shape[0]


@dataclass(frozen=True)
class CostWeights:
    """Quadratic stage weights, terminal weight, and horizon length."""

    Q: np.ndarray
    R: np.ndarray
    Q_terminal: np.ndarray
    horizon: int

    def __post_init__(self):
        object.__setattr__(self, "Q", _matrix(self.Q))
        object.__setattr__(self, "R", _matrix(self.R))
        object.__setattr__(self, "Q_terminal", _matrix(self.Q_terminal))
        object.__setattr__(self, "horizon", int(self.horizon))


@dataclass(frozen=True)
class DelayPmf:
    """Finite-support delay distribution for one link.

    probs[i] is the probability a packet sent now arrives i steps later;
    loss is the probability it never arrives.  Delays beyond the listed
    support must be folded into loss by the caller.
    """

    probs: tuple
    loss: float

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        object.__setattr__(self, "loss", float(self.loss))

    @property
    def support(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class SequenceConfig:
    """Length and fallback of the transmitted input sequences.

    Each packet carries the current input plus N predicted future inputs
    (N+1 entries total); u_default is applied whenever no buffered
    sequence covers the current step.
    """

    N: int
    u_default: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "u_default", _vector(self.u_default))


class LoopConfig(NamedTuple):
    """A validated (plant, weights, ca, sc, seq) bundle."""

    plant: PlantModel
    weights: CostWeights
    ca: DelayPmf
    sc: DelayPmf
    seq: SequenceConfig


_SYM_TOL = 1e-9
_PSD_TOL = 1e-9
_PMF_TOL = 1e-12


def _check_symmetric(name: str, M: np.ndarray) -> None:
    scale = max(1.0, np.abs(M).max()) if M.size else 1.0
    if np.abs(M - M.T).max() > _SYM_TOL * scale:
        raise ValueError(f"{name} not symmetric")


def _check_psd(name: str, M: np.ndarray) -> None:
    _check_symmetric(name, M)
    lam = np.linalg.eigvalsh(0.5 * (M + M.T))
    if lam.min() < -_PSD_TOL * max(1.0, lam.max()):
        raise ValueError(f"{name} not positive semidefinite")


def _check_pd(name: str, M: np.ndarray) -> None:
    _check_symmetric(name, M)
    lam = np.linalg.eigvalsh(0.5 * (M + M.T))
    if lam.min() <= _PSD_TOL * max(1.0, abs(lam.max())):
        raise ValueError(f"{name} not positive definite")


def _check_pmf(name: str, pmf: DelayPmf) -> None:
    entries = pmf.probs + (pmf.loss,)
    if any(p < 0.0 or p > 1.0 for p in entries):
        raise ValueError(f"{name} entries must lie in [0, 1]")
    mass = sum(pmf.probs) + pmf.loss
    if abs(mass - 1.0) > _PMF_TOL:
        raise ValueError(f"{name}: PMF mass {mass:g} != 1")


def validate(
    plant: PlantModel,
    weights: CostWeights,
    ca: DelayPmf,
    sc: DelayPmf,
    seq: SequenceConfig,
) -> LoopConfig:
    """Check every type invariant and return the bundled configuration.

    Raises ValueError naming the offending field on the first violation.
    Validating an already-validated bundle returns an equal bundle.
    """
    n, m, q = plant.n, plant.m, plant.q

    if plant.A.shape != (n, n):
        raise ValueError(f"A must be square, got {plant.A.shape}")
    if plant.B.shape != (n, m):
        raise ValueError(f"B must have {n} rows, got {plant.B.shape}")
    if plant.C.shape != (q, n):
        raise ValueError(f"C must have {n} columns, got {plant.C.shape}")
    if plant.W.shape != (n, n):
        raise ValueError(f"W must be {n}x{n}, got {plant.W.shape}")
    if plant.V.shape != (q, q):
        raise ValueError(f"V must be {q}x{q}, got {plant.V.shape}")
    if plant.x0_mean.shape != (n,):
        raise ValueError(f"x0_mean must have length {n}, got {plant.x0_mean.shape}")
    if plant.x0_cov.shape != (n, n):
        raise ValueError(f"x0_cov must be {n}x{n}, got {plant.x0_cov.shape}")

    _check_psd("W", plant.W)
    _check_pd("V", plant.V)
    _check_psd("x0_cov", plant.x0_cov)

    if weights.Q.shape != (n, n):
        raise ValueError(f"Q must be {n}x{n}, got {weights.Q.shape}")
    if weights.R.shape != (m, m):
        raise ValueError(f"R must be {m}x{m}, got {weights.R.shape}")
    if weights.Q_terminal.shape != (n, n):
        raise ValueError(f"Q_terminal must be {n}x{n}, got {weights.Q_terminal.shape}")
    if weights.horizon < 1:
        raise ValueError("horizon must be positive")

    _check_psd("Q", weights.Q)
    _check_pd("R", weights.R)
    _check_psd("Q_terminal", weights.Q_terminal)

    _check_pmf("ca", ca)
    _check_pmf("sc", sc)

    if seq.N < 0:
        raise ValueError("N must be nonnegative")
    if seq.u_default.shape != (m,):
        raise ValueError(f"u_default must have length {m}, got {seq.u_default.shape}")

    return LoopConfig(plant, weights, ca, sc, seq)


def stage_cost(x: np.ndarray, u: np.ndarray, weights: CostWeights) -> float:
    """Per-step quadratic cost x'Qx + u'Ru."""
    x = np.asarray(x, dtype=float).ravel()
    u = np.asarray(u, dtype=float).ravel()
    if x.shape[0] != weights.Q.shape[0]:
        raise ValueError(f"x has length {x.shape[0]}, Q is {weights.Q.shape}")
    if u.shape[0] != weights.R.shape[0]:
        raise ValueError(f"u has length {u.shape[0]}, R is {weights.R.shape}")
    return float(x @ weights.Q @ x + u @ weights.R @ u)


def terminal_cost(x: np.ndarray, weights: CostWeights) -> float:
    """Terminal quadratic cost x'Q_terminal x."""
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != weights.Q_terminal.shape[0]:
        raise ValueError(f"x has length {x.shape[0]}, Q_terminal is {weights.Q_terminal.shape}")
    return float(x @ weights.Q_terminal @ x)


def double_integrator_benchmark(N: int = 1):
    """Double-integrator benchmark instance.

    Returns (PlantModel, CostWeights, SequenceConfig) for the standard
    test plant: unit-time double integrator with position-only output,
    Q = I, R = 1, noisy start at position 100, horizon 40, zero default
    input.  N selects the sequence tail length (swept in experiments).
    """
    plant = PlantModel(
        A=[[1.0, 1.0], [0.0, 1.0]],
        B=[[0.0], [1.0]],
        C=[[1.0, 0.0]],
        W=[[0.01, 0.0], [0.0, 0.01]],
        V=[[0.04]],
        x0_mean=[100.0, 0.0],
        x0_cov=[[0.25, 0.0], [0.0, 0.25]],
    )
    weights = CostWeights(
        Q=np.eye(2),
        R=[[1.0]],
        Q_terminal=np.eye(2),
        horizon=40,
    )
    seq = SequenceConfig(N=N, u_default=[0.0])
    return plant, weights, seq
