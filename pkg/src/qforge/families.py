"""Constructors for the named two-qubit state families used as targets.

All constructors return validated density matrices with real nonnegative
off-diagonal elements (the free phase of those entries is set to zero).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BadF, BadNorm, BadWeights, OutOfRange
from .qmath import validate_density

MEMS_BRANCH_SPLIT = 2.0 / 3.0  # branches coincide at r = 2/3


def _check_unit_interval(name: str, x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise OutOfRange(f"{name} = {x} outside [0, 1]")


def mems(r: float) -> np.ndarray:
    """Maximally entangled mixed state with concurrence r.

    Branch I applies for r >= 2/3, branch II for r <= 2/3; the two agree
    at the split.
    """
    _check_unit_interval("r", r)
    m = np.zeros((4, 4), dtype=complex)
    if r >= MEMS_BRANCH_SPLIT:
        m[0, 0] = m[3, 3] = r / 2.0
        m[1, 1] = 1.0 - r
    else:
        m[0, 0] = m[1, 1] = m[3, 3] = 1.0 / 3.0
    m[0, 3] = m[3, 0] = r / 2.0
    return validate_density(m)


def werner(r: float) -> np.ndarray:
    """r |Phi+><Phi+| + (1 - r) I/4."""
    _check_unit_interval("r", r)
    m = np.diag([(1.0 + r) / 4.0, (1.0 - r) / 4.0, (1.0 - r) / 4.0, (1.0 + r) / 4.0]).astype(
        complex
    )
    m[0, 3] = m[3, 0] = r / 2.0
    return validate_density(m)


def collins_gisin(lam: float, theta: float) -> np.ndarray:
    """lam |psi_theta><psi_theta| + (1 - lam)|HV><HV| with
    psi_theta = cos(theta)|HH> + sin(theta)|VV>."""
    _check_unit_interval("lambda", lam)
    ct, st = math.cos(theta), math.sin(theta)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = lam * ct * ct
    m[1, 1] = 1.0 - lam
    m[3, 3] = lam * st * st
    m[0, 3] = m[3, 0] = lam * ct * st
    return validate_density(m)


def bell_diagonal(l1: float, l2: float, l3: float, l4: float) -> np.ndarray:
    """Mixture of the four Bell states with the given weights."""
    lam = np.array([l1, l2, l3, l4], dtype=float)
    if lam.min() < -1e-12:
        raise BadWeights(f"negative weight in {lam.tolist()}")
    if abs(lam.sum() - 1.0) > 1e-12:
        raise BadWeights(f"weights sum to {lam.sum()}, not 1")
    lam = np.clip(lam, 0.0, None)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[3, 3] = (lam[0] + lam[1]) / 2.0
    m[1, 1] = m[2, 2] = (lam[2] + lam[3]) / 2.0
    m[0, 3] = m[3, 0] = (lam[0] - lam[1]) / 2.0
    m[1, 2] = m[2, 1] = (lam[2] - lam[3]) / 2.0
    return validate_density(m)


def family_d1(a: complex, b: complex, c: complex, d: complex, f: complex) -> np.ndarray:
    """Single-decoherence-stage family: diagonal (|a|^2 ... |d|^2) with the
    HH<->VV coherence reduced by the factor f.

    |f| <= 1 guarantees positivity (|f a d*| <= |a||d|), so only the input
    norm can fail.
    """
    amps = np.array([a, b, c, d], dtype=complex)
    norm2 = float(np.sum(np.abs(amps) ** 2))
    if abs(norm2 - 1.0) > 1e-9:
        raise BadNorm(f"|a|^2+..+|d|^2 = {norm2} differs from 1")
    amps = amps / math.sqrt(norm2)
    f = complex(f)
    if abs(f) > 1.0 + 1e-12:
        raise BadF(f"|f| = {abs(f)} exceeds 1")
    m = np.diag(np.abs(amps) ** 2).astype(complex)
    m[0, 3] = f * amps[0] * np.conjugate(amps[3])
    m[3, 0] = np.conjugate(m[0, 3])
    return validate_density(m)


def mems_boundary_tangle(linear_entropy: float) -> float:
    """Largest tangle compatible with the given linear entropy.

    The curve is traced by mems(r) for r in [0, 1]: branch I covers
    entropies up to 16/27, branch II continues linearly to 8/9, and no
    entangled state exists beyond 8/9.
    """
    s = linear_entropy
    if s < 0.0 or s > 1.0 + 1e-12:
        raise OutOfRange(f"linear entropy {s} outside [0, 1]")
    s_split = 16.0 / 27.0  # entropy of mems(2/3)
    s_edge = 8.0 / 9.0  # entropy of mems(0)
    if s <= s_split:
        r = 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - 1.5 * s)))
        return r * r
    if s <= s_edge:
        return max(0.0, 4.0 / 3.0 - 1.5 * s)
    return 0.0
