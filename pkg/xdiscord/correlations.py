"""Closed-form correlation measures for the X-state family.

Concurrence, entanglement of formation, mutual information, classical
correlation (three-branch conditional entropy minimization) and quantum
discord. ``correlation_arrays`` is the vectorized kernel; the scalar
functions below validate one state and delegate to it.
"""
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy.special import xlogy

from .config import config
from .errors import DomainError, NonPhysicalStateError
from .state_core import (
    LN2,
    PAULI_Y,
    DensityMatrix4,
    Spectrum,
    XStateParams,
    binary_f,
    bloch_entropy,
    require_physical,
    spectrum_arrays,
)

BRANCH_NAMES = ("s1", "s2", "s3")


@dataclass(frozen=True)
class CorrelationReport:
    concurrence: float
    eof: float
    mutual_information: float
    classical_correlation: float
    discord: float
    s1: float
    s2: float
    s3: float
    spectrum: Spectrum
    min_branch: str


@dataclass(frozen=True, eq=False)
class CorrelationArrays:
    """Every measure evaluated over broadcast parameter arrays."""

    concurrence: np.ndarray
    concurrence_margin: np.ndarray
    eof: np.ndarray
    mutual_information: np.ndarray
    classical: np.ndarray
    discord: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    s3: np.ndarray
    min_branch: np.ndarray
    entropy_a: np.ndarray
    spectrum: Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


def _sqrt_clamped(radicand: np.ndarray, tol: float) -> np.ndarray:
    if np.any(radicand < -tol):
        raise NonPhysicalStateError(f"negative radicand {np.min(radicand):.3e} (state outside the physical region)")
    return np.sqrt(np.clip(radicand, 0.0, None))


def _xlog2_ratio(numerator: np.ndarray, denominator: np.ndarray) -> np.ndarray:
    """numerator * log2(numerator / denominator), zero where the numerator vanishes."""
    numerator = np.clip(numerator, 0.0, None)
    positive = numerator > 0.0
    safe_den = np.where(denominator > 0.0, denominator, 1.0)
    safe_num = np.where(positive, numerator, 1.0)
    return np.where(positive, numerator * np.log2(safe_num / safe_den), 0.0)


def _spectral_entropy(eigenvalues) -> np.ndarray:
    total = 0.0
    for value in eigenvalues:
        clipped = np.clip(value, 0.0, None)
        total = total - xlogy(clipped, clipped)
    return total / LN2


def _sqrt_lambdas(r, s, c1, c2, c3, tol):
    plus_root = _sqrt_clamped((1.0 + c3) ** 2 - (r + s) ** 2, tol)
    minus_root = _sqrt_clamped((1.0 - c3) ** 2 - (r - s) ** 2, tol)
    a = c1 - c2
    b = c1 + c2
    return np.stack([
        np.abs(a - plus_root),
        np.abs(a + plus_root),
        np.abs(b - minus_root),
        np.abs(b + minus_root),
    ]) / 4.0


def _branch_entropies(r, s, c1, c2, c3):
    """S1 (z measurement), S2 (x measurement), S3 (y measurement)."""
    upper = 2.0 * (1.0 + s)
    lower = 2.0 * (1.0 - s)
    s1 = -0.25 * (
        _xlog2_ratio(1.0 + r + s + c3, upper)
        + _xlog2_ratio(1.0 - r + s - c3, upper)
        + _xlog2_ratio(1.0 + r - s - c3, lower)
        + _xlog2_ratio(1.0 - r - s + c3, lower)
    )
    s2 = bloch_entropy(np.minimum(np.hypot(r, c1), 1.0))
    s3 = bloch_entropy(np.minimum(np.hypot(r, c2), 1.0))
    return s1, s2, s3


def correlation_arrays(r, s, c1, c2, c3, tol: float = None) -> CorrelationArrays:
    """Evaluate all measures on broadcast arrays of physical parameters."""
    tol = config.radicand_tol if tol is None else tol
    r, s, c1, c2, c3 = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (r, s, c1, c2, c3)))

    spectrum = spectrum_arrays(r, s, c1, c2, c3)
    if np.any(np.min(np.stack(spectrum), axis=0) < -config.physical_tol):
        raise NonPhysicalStateError("parameters outside the physical region")

    roots = _sqrt_lambdas(r, s, c1, c2, c3, tol)
    margin = 2.0 * np.max(roots, axis=0) - np.sum(roots, axis=0)
    concurrence = np.clip(margin, 0.0, 1.0)
    eof = bloch_entropy(np.sqrt(np.clip(1.0 - concurrence ** 2, 0.0, 1.0)))

    entropy_a = bloch_entropy(r)
    entropy_b = bloch_entropy(s)
    mutual = entropy_a + entropy_b - _spectral_entropy(spectrum)

    s1, s2, s3 = _branch_entropies(r, s, c1, c2, c3)
    branches = np.stack([s1, s2, s3])
    min_branch = np.argmin(branches, axis=0)
    classical = entropy_a - np.min(branches, axis=0)
    discord = mutual - classical

    return CorrelationArrays(
        concurrence=concurrence,
        concurrence_margin=margin,
        eof=eof,
        mutual_information=mutual,
        classical=classical,
        discord=discord,
        s1=s1,
        s2=s2,
        s3=s3,
        min_branch=min_branch,
        entropy_a=entropy_a,
        spectrum=spectrum,
    )


def _evaluate(p: XStateParams) -> CorrelationArrays:
    require_physical(p)
    return correlation_arrays(*p.as_tuple())


def concurrence(p: XStateParams) -> float:
    """Wootters concurrence from the closed-form spin-flip eigenvalues."""
    return float(_evaluate(p).concurrence)


def eof_from_concurrence(value: float) -> float:
    """Entanglement of formation H((1 + sqrt(1 - C^2)) / 2)."""
    if not -1e-12 <= value <= 1.0 + 1e-12:
        raise DomainError(f"concurrence must lie in [0, 1], got {value}")
    value = min(max(value, 0.0), 1.0)
    return float(bloch_entropy(np.sqrt(1.0 - value * value)))


def mutual_information(p: XStateParams) -> float:
    """S(rho_A) + S(rho_B) - S(rho)."""
    return float(_evaluate(p).mutual_information)


def conditional_entropy_branches(p: XStateParams) -> Tuple[float, float, float]:
    """The three candidate minima (S1, S2, S3) of the measured conditional entropy."""
    require_physical(p)
    return tuple(float(v) for v in _branch_entropies(*(np.asarray(x) for x in p.as_tuple())))


def classical_correlation(p: XStateParams) -> float:
    """S(rho_A) - min{S1, S2, S3}."""
    return float(_evaluate(p).classical)


def quantum_discord(p: XStateParams) -> float:
    """Quantum discord I - C of an X state.

    Args:
        p: State parameters (r, s, c1, c2, c3)

    Returns:
        Discord in bits, 0 for classical states

    Raises:
        NonPhysicalStateError: if rho has a negative eigenvalue
    """
    return float(_evaluate(p).discord)


def correlation_report(p: XStateParams) -> CorrelationReport:
    """Every closed-form measure of one state in a single pass.

    Args:
        p: State parameters (r, s, c1, c2, c3)

    Returns:
        CorrelationReport with concurrence, EoF, I, C, Q, the three
        conditional-entropy branches, the spectrum and the minimizing branch

    Raises:
        NonPhysicalStateError: if rho has a negative eigenvalue
    """
    spectrum = require_physical(p)
    arrays = correlation_arrays(*p.as_tuple())
    return CorrelationReport(
        concurrence=float(arrays.concurrence),
        eof=float(arrays.eof),
        mutual_information=float(arrays.mutual_information),
        classical_correlation=float(arrays.classical),
        discord=float(arrays.discord),
        s1=float(arrays.s1),
        s2=float(arrays.s2),
        s3=float(arrays.s3),
        spectrum=spectrum,
        min_branch=BRANCH_NAMES[int(arrays.min_branch)],
    )


def is_separable(p: XStateParams) -> bool:
    """True when the concurrence vanishes (PPT region of the family)."""
    return concurrence(p) == 0.0


def bell_diagonal_correlations(c1: float, c2: float, c3: float) -> Tuple[float, float]:
    """(classical correlation, discord) for r = s = 0."""
    require_physical(XStateParams.bell_diagonal(c1, c2, c3))
    c = max(abs(c1), abs(c2), abs(c3))
    classical = -binary_f(c)

    weights = np.array([
        1.0 - c1 - c2 - c3,
        1.0 - c1 + c2 + c3,
        1.0 + c1 - c2 + c3,
        1.0 + c1 + c2 - c3,
    ])
    weights = np.clip(weights, 0.0, None)
    total = float(np.sum(xlogy(weights, weights)) / (4.0 * LN2))
    return classical, total - classical


def concurrence_from_matrix(rho: Union[DensityMatrix4, np.ndarray]) -> float:
    """Concurrence from the eigenvalues of rho (σy⊗σy) rho* (σy⊗σy)."""
    entries = rho.entries if isinstance(rho, DensityMatrix4) else np.asarray(rho, dtype=complex)
    flip = np.kron(PAULI_Y, PAULI_Y)
    product = entries @ flip @ entries.conj() @ flip
    eigenvalues = np.sort(np.clip(np.linalg.eigvals(product).real, 0.0, None))[::-1]
    roots = np.sqrt(eigenvalues)
    return float(max(roots[0] - roots[1] - roots[2] - roots[3], 0.0))


def spin_flip_eigenvalues(p: XStateParams) -> np.ndarray:
    """Closed-form λ1..λ4, sorted descending."""
    require_physical(p)
    roots = _sqrt_lambdas(*(np.asarray(x) for x in p.as_tuple()), config.radicand_tol)
    return np.sort(roots ** 2)[::-1]


__all__ = [
    "CorrelationReport",
    "CorrelationArrays",
    "BRANCH_NAMES",
    "correlation_arrays",
    "concurrence",
    "eof_from_concurrence",
    "mutual_information",
    "conditional_entropy_branches",
    "classical_correlation",
    "quantum_discord",
    "correlation_report",
    "is_separable",
    "bell_diagonal_correlations",
    "concurrence_from_matrix",
    "spin_flip_eigenvalues",
]
