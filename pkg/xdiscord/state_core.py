"""X-state family with z-directional Bloch vectors.

The state is

    rho = 1/4 [I⊗I + r σz⊗I + s I⊗σz + Σ ci σi⊗σi]

written in the basis |00>, |01>, |10>, |11>. Everything downstream takes an
``XStateParams`` as its canonical input.
"""
from dataclasses import dataclass, astuple, replace
from typing import Iterable, Sequence, Tuple, Union

import numpy as np
from scipy.special import xlogy

from .config import config
from .errors import DomainError, NonPhysicalStateError, ParameterBoundsError

ArrayLike = Union[float, np.ndarray]

LN2 = np.log(2.0)
BOUND_TOL = 1e-12
F_DOMAIN_TOL = 1e-12

IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

# Entries that must vanish for an X-shaped 4x4 matrix
X_ZERO_ENTRIES = ((0, 1), (0, 2), (1, 0), (2, 0), (1, 3), (3, 1), (2, 3), (3, 2))


@dataclass(frozen=True)
class XStateParams:
    """The five real parameters (r, s, c1, c2, c3) of an X state."""

    r: float
    s: float
    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        for name in ("r", "s", "c1", "c2", "c3"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ParameterBoundsError(f"{name} must be finite, got {value}")
            if abs(value) > 1.0 + BOUND_TOL:
                raise ParameterBoundsError(f"|{name}| must be <= 1, got {name}={value}")
            object.__setattr__(self, name, value)

    @classmethod
    def bell_diagonal(cls, c1: float, c2: float, c3: float) -> "XStateParams":
        return cls(0.0, 0.0, c1, c2, c3)

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> "XStateParams":
        if len(values) != 5:
            raise ParameterBoundsError(f"expected 5 parameters (r, s, c1, c2, c3), got {len(values)}")
        return cls(*values)

    @property
    def correlations(self) -> Tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)

    def as_tuple(self) -> Tuple[float, float, float, float, float]:
        return astuple(self)

    def with_changes(self, **changes) -> "XStateParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues u± and v± of an X state."""

    u_plus: float
    u_minus: float
    v_plus: float
    v_minus: float

    def values(self) -> Tuple[float, float, float, float]:
        return (self.u_plus, self.u_minus, self.v_plus, self.v_minus)

    def minimum(self) -> float:
        return min(self.values())


@dataclass(frozen=True, eq=False)
class DensityMatrix4:
    """4x4 complex density matrix, row-major in the |00>,|01>,|10>,|11> basis."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (4, 4):
            raise DomainError(f"density matrix must be 4x4, got shape {entries.shape}")
        object.__setattr__(self, "entries", entries)

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def is_hermitian(self, atol: float = 0.0) -> bool:
        return bool(np.allclose(self.entries, self.entries.conj().T, rtol=0.0, atol=atol))

    def is_x_shaped(self, atol: float = 0.0) -> bool:
        return all(abs(self.entries[i, j]) <= atol for i, j in X_ZERO_ENTRIES)


def binary_f(t: ArrayLike) -> ArrayLike:
    """f(t) = -(1-t)/2 log2(1-t) - (1+t)/2 log2(1+t), with 0 log 0 = 0.

    Even in t, decreasing on [0, 1], range [-1, 0]. Accepts scalars or arrays.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(np.abs(t_arr) > 1.0 + F_DOMAIN_TOL):
        raise DomainError(f"binary_f requires |t| <= 1, got max |t| = {np.max(np.abs(t_arr))}")
    t_arr = np.clip(t_arr, -1.0, 1.0)
    value = -(xlogy(1.0 - t_arr, 1.0 - t_arr) + xlogy(1.0 + t_arr, 1.0 + t_arr)) / (2.0 * LN2)
    if np.ndim(value) == 0:
        return float(value)
    return value


def bloch_entropy(length: ArrayLike) -> ArrayLike:
    """Entropy of a qubit whose Bloch vector has the given length, 1 + f(b)."""
    return 1.0 + binary_f(length)


def von_neumann_entropy(spectrum: Union[Spectrum, Iterable[float]], tol: float = None) -> float:
    """-Σ λ log2 λ for a spectrum; tiny negative eigenvalues are clamped to 0."""
    tol = config.physical_tol if tol is None else tol
    values = np.asarray(spectrum.values() if isinstance(spectrum, Spectrum) else list(spectrum), dtype=float)

    if values.size == 0:
        raise NonPhysicalStateError("empty spectrum")
    if np.min(values) < -tol:
        raise NonPhysicalStateError(f"negative eigenvalue {np.min(values):.3e} beyond tolerance {tol:.1e}")
    if abs(values.sum() - 1.0) > 1e-9:
        raise NonPhysicalStateError(f"spectrum sums to {values.sum():.12f}, expected 1")

    values = np.clip(values, 0.0, None)
    return float(-np.sum(xlogy(values, values)) / LN2)


def build_density_matrix(p: XStateParams) -> DensityMatrix4:
    """Explicit 4x4 matrix of the X state."""
    r, s, c1, c2, c3 = p.as_tuple()
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1 + r + s + c3
    rho[1, 1] = 1 + r - s - c3
    rho[2, 2] = 1 - r + s - c3
    rho[3, 3] = 1 - r - s + c3
    rho[0, 3] = rho[3, 0] = c1 - c2
    rho[1, 2] = rho[2, 1] = c1 + c2
    return DensityMatrix4(rho / 4.0)


def spectrum_arrays(r: ArrayLike, s: ArrayLike, c1: ArrayLike, c2: ArrayLike, c3: ArrayLike):
    """Vectorized closed-form eigenvalues (u+, u-, v+, v-)."""
    r, s, c1, c2, c3 = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (r, s, c1, c2, c3)))
    root_u = np.hypot(r - s, c1 + c2)
    root_v = np.hypot(r + s, c1 - c2)
    u_plus = (1.0 - c3 + root_u) / 4.0
    u_minus = (1.0 - c3 - root_u) / 4.0
    v_plus = (1.0 + c3 + root_v) / 4.0
    v_minus = (1.0 + c3 - root_v) / 4.0
    return u_plus, u_minus, v_plus, v_minus


def x_spectrum(p: XStateParams) -> Spectrum:
    """Closed-form eigenvalues of the X state."""
    return Spectrum(*(float(v) for v in spectrum_arrays(*p.as_tuple())))


def physical_mask(r: ArrayLike, s: ArrayLike, c1: ArrayLike, c2: ArrayLike, c3: ArrayLike, tol: float = None) -> np.ndarray:
    """Vectorized positivity test; True where every eigenvalue is >= -tol."""
    tol = config.physical_tol if tol is None else tol
    return np.min(np.stack(spectrum_arrays(r, s, c1, c2, c3)), axis=0) >= -tol


def validate_physical(p: XStateParams, tol: float = None) -> bool:
    """True when every eigenvalue of rho is >= -tol."""
    tol = config.physical_tol if tol is None else tol
    return x_spectrum(p).minimum() >= -tol


def require_physical(p: XStateParams, tol: float = None) -> Spectrum:
    """Return the spectrum, raising NonPhysicalStateError if the state is not positive."""
    tol = config.physical_tol if tol is None else tol
    spectrum = x_spectrum(p)
    if spectrum.minimum() < -tol:
        raise NonPhysicalStateError(
            f"state {p.as_tuple()} is not positive: smallest eigenvalue {spectrum.minimum():.6g}"
        )
    return spectrum


def marginal_entropies(p: XStateParams) -> Tuple[float, float]:
    """(S(rho_A), S(rho_B)) = (1 + f(r), 1 + f(s))."""
    return bloch_entropy(p.r), bloch_entropy(p.s)


def density_matrix_spectrum(rho: Union[DensityMatrix4, np.ndarray]) -> np.ndarray:
    """Ascending eigenvalues from a dense Hermitian eigensolve."""
    entries = rho.entries if isinstance(rho, DensityMatrix4) else np.asarray(rho, dtype=complex)
    return np.linalg.eigvalsh(entries)


def params_from_density_matrix(rho: Union[DensityMatrix4, np.ndarray], atol: float = 1e-10) -> XStateParams:
    """Recover (r, s, c1, c2, c3) from an X-shaped matrix via Pauli expectations."""
    matrix = rho if isinstance(rho, DensityMatrix4) else DensityMatrix4(rho)
    if not matrix.is_hermitian(atol=atol):
        raise NonPhysicalStateError("matrix is not Hermitian")
    if abs(matrix.trace() - 1.0) > atol:
        raise NonPhysicalStateError(f"matrix trace is {matrix.trace():.12f}, expected 1")
    if not matrix.is_x_shaped(atol=atol):
        raise DomainError("matrix is not of X form")

    entries = matrix.entries

    def expectation(op: np.ndarray) -> float:
        return float(np.trace(entries @ op).real)

    r = expectation(np.kron(PAULI_Z, IDENTITY_2))
    s = expectation(np.kron(IDENTITY_2, PAULI_Z))
    c1, c2, c3 = (expectation(np.kron(sigma, sigma)) for sigma in PAULIS)
    return XStateParams(r, s, c1, c2, c3)


__all__ = [
    "XStateParams",
    "Spectrum",
    "DensityMatrix4",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "binary_f",
    "bloch_entropy",
    "von_neumann_entropy",
    "build_density_matrix",
    "spectrum_arrays",
    "x_spectrum",
    "physical_mask",
    "validate_physical",
    "require_physical",
    "marginal_entropies",
    "density_matrix_spectrum",
    "params_from_density_matrix",
]
