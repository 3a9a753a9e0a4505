"""Brute-force classical correlation and discord.

Minimizes the measured conditional entropy over rank-1 projective
measurements on subsystem B, parameterized by a Bloch axis n with
projectors (I ± n·σ)/2. The search is a deterministic hemisphere grid
followed by local grid bisection around the best cell, so results are
reproducible for fixed (grid_n, refine_depth). This path never uses the
closed-form branch formulas; it is the reference the analytic path is
checked against.
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .config import config
from .correlations import conditional_entropy_branches, mutual_information
from .errors import DomainError, MeasurementError
from .logger import log_debug, log_info, log_warning
from .state_core import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    DensityMatrix4,
    XStateParams,
    bloch_entropy,
    build_density_matrix,
    marginal_entropies,
    require_physical,
)

AXIS_TOL = 1e-12
ZERO_PROBABILITY = 1e-14
REFINE_STENCIL = np.arange(-2, 3)


@dataclass(frozen=True)
class MeasurementAxis:
    """Unit Bloch vector of the projector pair (I ± n·σ)/2 on B."""

    nx: float
    ny: float
    nz: float

    def __post_init__(self):
        norm = self.nx ** 2 + self.ny ** 2 + self.nz ** 2
        if abs(norm - 1.0) > AXIS_TOL:
            raise MeasurementError(f"measurement axis must be a unit vector, |n|^2 = {norm:.15f}")
        for name in ("nx", "ny", "nz"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "MeasurementAxis":
        return cls(np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.nx, self.ny, self.nz])

    def negated(self) -> "MeasurementAxis":
        return MeasurementAxis(-self.nx, -self.ny, -self.nz)


X_AXIS = MeasurementAxis(1.0, 0.0, 0.0)
Y_AXIS = MeasurementAxis(0.0, 1.0, 0.0)
Z_AXIS = MeasurementAxis(0.0, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class MeasurementOutcome:
    """One outcome of a B measurement: probability and conditional A state."""

    probability: float
    state: Optional[np.ndarray]
    zero_probability: bool = False


@dataclass(frozen=True)
class OracleResult:
    best_axis: MeasurementAxis
    min_conditional_entropy: float
    classical_correlation: float
    discord: float
    grid_resolution: int
    refinement_depth: int
    local_minimum_certified: bool
    analytic_min_entropy: float
    below_closed_form: bool


def _projectors(axes: np.ndarray, sign: float) -> np.ndarray:
    """Batch of (I + sign n·σ)/2, shape (K, 2, 2)."""
    n_sigma = (
        axes[:, 0, None, None] * PAULI_X
        + axes[:, 1, None, None] * PAULI_Y
        + axes[:, 2, None, None] * PAULI_Z
    )
    return (np.eye(2) + sign * n_sigma) / 2.0


def _unnormalized_conditionals(rho: np.ndarray, projectors: np.ndarray) -> np.ndarray:
    """Tr_B[(I⊗Π) rho (I⊗Π)] for each projector, shape (K, 2, 2)."""
    tensor = rho.reshape(2, 2, 2, 2)
    return np.einsum("acxd,kdc->kax", tensor, projectors)


def _outcome_entropy_terms(rho: np.ndarray, axes: np.ndarray, sign: float):
    sigma = _unnormalized_conditionals(rho, _projectors(axes, sign))
    probability = np.real(sigma[:, 0, 0] + sigma[:, 1, 1])
    live = probability >= ZERO_PROBABILITY
    safe_p = np.where(live, probability, 1.0)
    bx = 2.0 * np.real(sigma[:, 0, 1]) / safe_p
    by = -2.0 * np.imag(sigma[:, 0, 1]) / safe_p
    bz = np.real(sigma[:, 0, 0] - sigma[:, 1, 1]) / safe_p
    length = np.minimum(np.sqrt(bx * bx + by * by + bz * bz), 1.0)
    return np.where(live, probability * bloch_entropy(length), 0.0)


def conditional_entropies(rho: DensityMatrix4, axes: np.ndarray) -> np.ndarray:
    """Measured conditional entropy for a batch of unit axes, shape (K, 3) -> (K,)."""
    axes = np.atleast_2d(np.asarray(axes, dtype=float))
    entries = rho.entries
    plus = _outcome_entropy_terms(entries, axes, 1.0)
    minus = _outcome_entropy_terms(entries, axes, -1.0)
    return plus + minus


def condition_on_measurement(rho: DensityMatrix4, axis: MeasurementAxis) -> List[MeasurementOutcome]:
    """Both outcomes (p_k, rho_k) of measuring B along ``axis``."""
    if not isinstance(axis, MeasurementAxis):
        axis = MeasurementAxis(*axis)
    outcomes = []
    for sign in (1.0, -1.0):
        sigma = _unnormalized_conditionals(rho.entries, _projectors(axis.vector[None, :], sign))[0]
        probability = float(np.real(np.trace(sigma)))
        if probability < ZERO_PROBABILITY:
            outcomes.append(MeasurementOutcome(probability=max(probability, 0.0), state=None, zero_probability=True))
        else:
            outcomes.append(MeasurementOutcome(probability=probability, state=sigma / probability))
    return outcomes


def measured_conditional_entropy(rho: DensityMatrix4, axis: MeasurementAxis) -> float:
    """Σ_k p_k S(rho_k) for the measurement along ``axis``."""
    if not isinstance(axis, MeasurementAxis):
        axis = MeasurementAxis(*axis)
    return float(conditional_entropies(rho, axis.vector[None, :])[0])


def analytic_axis_entropies(p: XStateParams) -> Tuple[float, float, float]:
    """Conditional entropies along z, x and y; these are S1, S2 and S3."""
    rho = build_density_matrix(p)
    return tuple(measured_conditional_entropy(rho, axis) for axis in (Z_AXIS, X_AXIS, Y_AXIS))


def _angles_to_axes(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    sin_theta = np.sin(theta)
    return np.stack([sin_theta * np.cos(phi), sin_theta * np.sin(phi), np.cos(theta)], axis=-1)


class MeasurementOracle:
    """Grid-plus-bisection search over measurement axes on B."""

    def __init__(self, grid_n: int = None, refine_depth: int = None):
        self.grid_n = config.oracle_grid_n if grid_n is None else int(grid_n)
        self.refine_depth = config.oracle_refine_depth if refine_depth is None else int(refine_depth)
        self.exception_margin = config.oracle_exception_margin

        if self.grid_n < 8:
            raise DomainError(f"grid_n must be >= 8, got {self.grid_n}")
        if self.refine_depth < 0:
            raise DomainError(f"refine_depth must be >= 0, got {self.refine_depth}")

    def _neighbours(self, i: int, j: int):
        """The 8 grid neighbours of (i, j), folding φ through the antipodal identification."""
        n = self.grid_n
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == 0 and dj == 0:
                    continue
                ni, nj = i + di, j + dj
                if not 0 <= ni < n:
                    continue
                if nj < 0:
                    ni, nj = n - 1 - ni, n - 1
                elif nj >= n:
                    ni, nj = n - 1 - ni, 0
                yield ni, nj

    def _grid_search(self, rho: DensityMatrix4):
        n = self.grid_n
        thetas = np.linspace(0.0, np.pi, n)
        phis = np.arange(n) * (np.pi / n)
        theta_grid, phi_grid = np.meshgrid(thetas, phis, indexing="ij")
        values = conditional_entropies(rho, _angles_to_axes(theta_grid.ravel(), phi_grid.ravel())).reshape(n, n)

        # argmin over the flattened grid: lowest θ index, then lowest φ index
        i, j = np.unravel_index(int(np.argmin(values)), values.shape)
        best = values[i, j]
        certified = all(values[ni, nj] >= best for ni, nj in self._neighbours(i, j))
        return thetas[i], phis[j], float(best), certified, thetas[1] - thetas[0], phis[1] - phis[0]

    def _refine(self, rho: DensityMatrix4, theta: float, phi: float, best: float, h_theta: float, h_phi: float):
        for depth in range(self.refine_depth):
            h_theta /= 2.0
            h_phi /= 2.0
            offsets_theta, offsets_phi = np.meshgrid(REFINE_STENCIL, REFINE_STENCIL, indexing="ij")
            cand_theta = np.clip(theta + offsets_theta.ravel() * h_theta, 0.0, np.pi)
            cand_phi = phi + offsets_phi.ravel() * h_phi
            values = conditional_entropies(rho, _angles_to_axes(cand_theta, cand_phi))
            k = int(np.argmin(values))
            if values[k] < best:
                theta, phi, best = float(cand_theta[k]), float(cand_phi[k]), float(values[k])
            log_debug("Refinement round", depth=depth + 1, entropy=f"{best:.12f}")
        return theta, phi, best

    def optimize(self, p: XStateParams) -> OracleResult:
        require_physical(p)
        rho = build_density_matrix(p)

        theta, phi, best, certified, h_theta, h_phi = self._grid_search(rho)
        theta, phi, best = self._refine(rho, theta, phi, best, h_theta, h_phi)

        entropy_a, _ = marginal_entropies(p)
        classical = entropy_a - best
        discord = mutual_information(p) - classical

        analytic_min = min(conditional_entropy_branches(p))
        exception = best < analytic_min - self.exception_margin
        if exception:
            log_warning(
                "Oracle beats the three-branch minimum",
                params=p.as_tuple(),
                oracle=f"{best:.10f}",
                analytic=f"{analytic_min:.10f}",
            )

        return OracleResult(
            best_axis=MeasurementAxis.from_angles(theta, phi),
            min_conditional_entropy=best,
            classical_correlation=classical,
            discord=discord,
            grid_resolution=self.grid_n,
            refinement_depth=self.refine_depth,
            local_minimum_certified=certified,
            analytic_min_entropy=analytic_min,
            below_closed_form=exception,
        )


def optimize_measurement(p: XStateParams, grid_n: int = None, refine_depth: int = None) -> OracleResult:
    return MeasurementOracle(grid_n, refine_depth).optimize(p)


def discord_oracle(p: XStateParams, grid_n: int = None, refine_depth: int = None) -> OracleResult:
    """Discord I - (S(rho_A) - min entropy) from the brute-force search."""
    result = optimize_measurement(p, grid_n, refine_depth)
    log_info(
        "Oracle discord computed",
        discord=f"{result.discord:.10f}",
        grid_n=result.grid_resolution,
        refine_depth=result.refinement_depth,
        certified=result.local_minimum_certified,
    )
    return result


__all__ = [
    "MeasurementAxis",
    "MeasurementOutcome",
    "OracleResult",
    "MeasurementOracle",
    "X_AXIS",
    "Y_AXIS",
    "Z_AXIS",
    "conditional_entropies",
    "condition_on_measurement",
    "measured_conditional_entropy",
    "analytic_axis_entropies",
    "optimize_measurement",
    "discord_oracle",
]
