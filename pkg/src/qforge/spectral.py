"""Forward simulator for the joint polarization (x) frequency state.

The working state keeps one complex amplitude per polarization basis
state and frequency-grid point.  Waveplates act identically on every
frequency slice; decoherers imprint frequency-dependent phases, and
tracing out frequency yields the polarization density matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .elements import C_UM_PER_S, DecohererSpec, SpectralModel, spectral_amplitude
from .qmath import validate_density

DEFAULT_GRID_N = 2049
GRID_HALF_SPAN = 6.0  # grid covers +/- 6 delta_eps

BASE_INDEX = 1.5  # n_H; only delta_n affects traced outputs

# polarization of each photon in the basis order HH, HV, VH, VV (0 = H, 1 = V)
_POL_A = np.array([0, 0, 1, 1])
_POL_B = np.array([0, 1, 0, 1])


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform symmetric grid over the frequency deviation eps with
    trapezoid quadrature weights."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.points.size % 2 == 0:
            raise ValueError("frequency grid must have an odd number of points")


def make_grid(sm: SpectralModel, n: int = DEFAULT_GRID_N) -> FrequencyGrid:
    """Trapezoid-rule grid over [-6 delta_eps, +6 delta_eps] with n odd points."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"grid size must be an odd integer >= 3, got {n}")
    pts = np.linspace(-GRID_HALF_SPAN * sm.delta_eps, GRID_HALF_SPAN * sm.delta_eps, n)
    w = np.full(n, pts[1] - pts[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return FrequencyGrid(points=pts, weights=w)


@dataclass(frozen=True)
class JointSpectralState:
    """amps[j, k]: amplitude of polarization basis state j at frequency
    deviation grid.points[k]; normalized so sum_k w_k sum_j |amps|^2 = 1."""

    amps: np.ndarray
    grid: FrequencyGrid

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.grid.weights * np.abs(self.amps) ** 2)))


@dataclass(frozen=True)
class LocalRotationStage:
    """Frequency-independent local unitaries, one per arm."""

    u_a: np.ndarray
    u_b: np.ndarray


@dataclass(frozen=True)
class DecohererStage:
    """A decoherer inserted in one arm ('A' or 'B')."""

    arm: str
    spec: DecohererSpec

    def __post_init__(self):
        if self.arm not in ("A", "B"):
            raise ValueError(f"arm must be 'A' or 'B', got {self.arm!r}")


Stage = Union[LocalRotationStage, DecohererStage]
StageList = Sequence[Stage]


def lift(psi: np.ndarray, sm: SpectralModel, grid: FrequencyGrid) -> JointSpectralState:
    """Tensor the polarization amplitudes with the Gaussian spectral profile."""
    psi = np.asarray(psi, dtype=complex).reshape(4)
    prof = spectral_amplitude(sm, grid.points)
    amps = np.outer(psi, prof)
    n = np.sqrt(np.sum(grid.weights * np.abs(amps) ** 2))
    return JointSpectralState(amps=amps / n, grid=grid)


def apply_local_unitary(
    s: JointSpectralState, u_a: np.ndarray, u_b: np.ndarray
) -> JointSpectralState:
    """Apply u_a (x) u_b to every frequency slice."""
    u4 = np.kron(np.asarray(u_a, dtype=complex), np.asarray(u_b, dtype=complex))
    return JointSpectralState(amps=u4 @ s.amps, grid=s.grid)


def apply_decoherer(
    s: JointSpectralState,
    arm: str,
    d: DecohererSpec,
    sm: SpectralModel,
    n0: float = BASE_INDEX,
) -> JointSpectralState:
    """Phase e^{i n_j L w_arm / c} per slice; arm A sees w/2 + eps, arm B w/2 - eps."""
    if arm == "A":
        pol = _POL_A
        w_arm = 0.5 * sm.omega + s.grid.points
    elif arm == "B":
        pol = _POL_B
        w_arm = 0.5 * sm.omega - s.grid.points
    else:
        raise ValueError(f"arm must be 'A' or 'B', got {arm!r}")
    n_j = n0 + d.delta_n * pol  # n_H = n0, n_V = n0 + delta_n
    phases = np.exp(1j * np.outer(n_j, w_arm) * (d.length_um / C_UM_PER_S))
    return JointSpectralState(amps=s.amps * phases, grid=s.grid)


def trace_to_polarization(s: JointSpectralState, grid: FrequencyGrid | None = None) -> np.ndarray:
    """Trace out frequency: rho_jk = sum_m w_m amps[j,m] conj(amps[k,m])."""
    g = s.grid if grid is None else grid
    rho = (s.amps * g.weights) @ s.amps.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return validate_density(rho)


def simulate_chain(
    psi: np.ndarray,
    stages: StageList,
    sm: SpectralModel,
    grid: FrequencyGrid,
    n0: float = BASE_INDEX,
) -> np.ndarray:
    """Lift psi, apply the stages in order, trace out frequency."""
    state = lift(psi, sm, grid)
    for stage in stages:
        if isinstance(stage, LocalRotationStage):
            state = apply_local_unitary(state, stage.u_a, stage.u_b)
        elif isinstance(stage, DecohererStage):
            state = apply_decoherer(state, stage.arm, stage.spec, sm, n0=n0)
        else:
            raise TypeError(f"unknown stage type {type(stage).__name__}")
    return trace_to_polarization(state)


def analytic_single_stage(
    psi: np.ndarray,
    length_a_um: float,
    length_b_um: float,
    delta_n: float,
    sm: SpectralModel,
) -> np.ndarray:
    """Closed form for one decoherer per arm acting on a pure state.

    Each coherence (j, k) picks up exp(i phi) exp(-(delta_eps t)^2 / 2)
    where phi and t are the constant and eps-linear parts of the optical
    phase difference; exact for the Gaussian spectrum.  The HH<->VV entry
    reproduces analytic_f.
    """
    psi = np.asarray(psi, dtype=complex).reshape(4)
    da = delta_n * (_POL_A[:, None] - _POL_A[None, :]) * length_a_um
    db = delta_n * (_POL_B[:, None] - _POL_B[None, :]) * length_b_um
    const = (da + db) * sm.omega / (2.0 * C_UM_PER_S)
    lin = (da - db) / C_UM_PER_S
    factors = np.exp(1j * const) * np.exp(-0.5 * (sm.delta_eps * lin) ** 2)
    rho = np.outer(psi, psi.conj()) * factors
    return validate_density(rho)
