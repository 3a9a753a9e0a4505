"""Phase-flip decoherence of X states.

The local phase flip with strength p leaves r, s and c3 alone and damps the
transverse correlations: c1, c2 -> (1-p)^k c1, (1-p)^k c2 with k = 2 when
both qubits are dephased and k = 1 for a single qubit. The channel acts on
parameters directly; ``phase_flip_kraus`` / ``apply_kraus`` give the same
map at the matrix level.
"""
import time
from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Optional, Tuple, Union

import numpy as np
from scipy.optimize import bisect

from .config import config
from .correlations import BRANCH_NAMES, CorrelationArrays, correlation_arrays
from .errors import DomainError
from .logger import log_info, log_warning
from .state_core import (
    IDENTITY_2,
    PAULI_Z,
    DensityMatrix4,
    XStateParams,
    binary_f,
    require_physical,
)

CONSTANT_DISCORD_TOL = 1e-6
CLOSED_FORM_CHECK_TOL = 1e-10
BRANCH_TIE_TOL = 1e-12


class Target(str, Enum):
    A = "A"
    B = "B"
    BOTH = "both"


TargetLike = Union[Target, str]


def _target(targets: TargetLike) -> Target:
    try:
        return Target(targets)
    except ValueError:
        raise DomainError(f"targets must be one of A, B, both; got {targets!r}") from None


@dataclass(frozen=True)
class ChannelSpec:
    p: float
    targets: Target = Target.BOTH
    kind: str = "phase_flip"

    def __post_init__(self):
        if self.kind != "phase_flip":
            raise DomainError(f"unsupported channel kind {self.kind!r}")
        _check_strength(self.p)
        object.__setattr__(self, "targets", _target(self.targets))

    def apply(self, p0: XStateParams) -> XStateParams:
        return apply_phase_flip(p0, self.p, self.targets)


class TrajectorySample(NamedTuple):
    p: float
    concurrence: float
    classical: float
    discord: float
    mutual_information: float
    s1: float
    s2: float
    s3: float


TRAJECTORY_COLUMNS = TrajectorySample._fields


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Correlation measures sampled on an increasing grid of channel strengths."""

    p: np.ndarray
    concurrence: np.ndarray
    classical: np.ndarray
    discord: np.ndarray
    mutual_information: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    s3: np.ndarray
    min_branch: np.ndarray
    t: Optional[np.ndarray] = None

    @property
    def samples(self) -> List[TrajectorySample]:
        columns = [getattr(self, name) for name in TRAJECTORY_COLUMNS]
        return [TrajectorySample(*(float(v) for v in row)) for row in zip(*columns)]

    def __len__(self) -> int:
        return len(self.p)


@dataclass(frozen=True)
class EventReport:
    p_transition: Optional[float] = None
    p_crossing: Optional[float] = None
    p_esd: Optional[float] = None
    plateau_discord: Optional[float] = None
    transition_branches: Optional[str] = None


def _check_strength(p: float):
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"channel strength p must lie in [0, 1], got {p}")


def _scale_power(targets: TargetLike) -> int:
    return 2 if _target(targets) is Target.BOTH else 1


def p_of_time(gamma: float, t: float) -> float:
    """p = 1 - exp(-γ t)."""
    if gamma < 0 or t < 0:
        raise DomainError(f"gamma and t must be non-negative, got gamma={gamma}, t={t}")
    return float(-np.expm1(-gamma * t))


def apply_phase_flip(p0: XStateParams, p: float, targets: TargetLike = Target.BOTH) -> XStateParams:
    """Apply the local phase-flip channel to an X state.

    Args:
        p0: Input state
        p: Channel strength in [0, 1]
        targets: Dephased qubits, "A", "B" or "both"

    Returns:
        The output state; c1 and c2 shrink by (1 - p) per dephased qubit,
        r, s and c3 are unchanged
    """
    _check_strength(p)
    scale = (1.0 - p) ** _scale_power(targets)
    return p0.with_changes(c1=p0.c1 * scale, c2=p0.c2 * scale)


def channel_parameters_at(p0: XStateParams, gamma: float, t: float, targets: TargetLike = Target.BOTH) -> XStateParams:
    return apply_phase_flip(p0, p_of_time(gamma, t), targets)


def phase_flip_kraus(p: float, targets: TargetLike = Target.BOTH) -> List[np.ndarray]:
    """4x4 Kraus operators of the local phase flip on the chosen qubits."""
    _check_strength(p)
    single = [np.sqrt(1.0 - p / 2.0) * IDENTITY_2, np.sqrt(p / 2.0) * PAULI_Z]
    target = _target(targets)
    if target is Target.A:
        return [np.kron(k, IDENTITY_2) for k in single]
    if target is Target.B:
        return [np.kron(IDENTITY_2, k) for k in single]
    return [np.kron(ka, kb) for ka in single for kb in single]


def apply_kraus(rho: Union[DensityMatrix4, np.ndarray], operators: List[np.ndarray]) -> DensityMatrix4:
    entries = rho.entries if isinstance(rho, DensityMatrix4) else np.asarray(rho, dtype=complex)
    return DensityMatrix4(sum(k @ entries @ k.conj().T for k in operators))


def constant_discord_condition(p: XStateParams, tol: float = CONSTANT_DISCORD_TOL) -> bool:
    """c2 = -c3 c1 and s = c3 r."""
    return abs(p.c2 + p.c3 * p.c1) <= tol and abs(p.s - p.c3 * p.r) <= tol


def constant_discord_closed_forms(p0: XStateParams, p: Union[float, np.ndarray], targets: TargetLike = Target.BOTH):
    """(I, S1, S2, S3) along the channel for states with c2 = -c3 c1, s = c3 r."""
    scale = (1.0 - np.asarray(p, dtype=float)) ** _scale_power(targets)
    r, c1, c2, c3 = p0.r, p0.c1, p0.c2, p0.c3
    transverse = np.minimum(np.sqrt(r * r + (scale * c1) ** 2), 1.0)
    mutual = binary_f(r) + binary_f(c3 * r) - binary_f(c3) - binary_f(transverse)
    s1 = np.full(np.shape(scale), 1.0 + binary_f(r) + binary_f(c3) - binary_f(c3 * r))
    s2 = 1.0 + binary_f(transverse)
    s3 = 1.0 + binary_f(np.minimum(np.sqrt(r * r + (scale * c2) ** 2), 1.0))
    return mutual, s1, s2, s3


def plateau_discord(p0: XStateParams) -> float:
    """f(c3 r) - f(c3), the discord held constant while S2 is the minimal branch."""
    return float(binary_f(p0.c3 * p0.r) - binary_f(p0.c3))


def _measures(p0: XStateParams, p_values: np.ndarray, targets: TargetLike) -> CorrelationArrays:
    scale = (1.0 - np.asarray(p_values, dtype=float)) ** _scale_power(targets)
    return correlation_arrays(p0.r, p0.s, p0.c1 * scale, p0.c2 * scale, p0.c3)


def _check_closed_forms(p0: XStateParams, grid: np.ndarray, measures: CorrelationArrays, targets: TargetLike):
    if not constant_discord_condition(p0, tol=1e-12):
        return
    mutual, s1, s2, s3 = constant_discord_closed_forms(p0, grid, targets)
    for name, sampled, closed in (
        ("mutual_information", measures.mutual_information, mutual),
        ("s1", measures.s1, s1),
        ("s2", measures.s2, s2),
        ("s3", measures.s3, s3),
    ):
        deviation = float(np.max(np.abs(sampled - closed)))
        if deviation > CLOSED_FORM_CHECK_TOL:
            log_warning("Closed-form cross-check mismatch", measure=name, max_deviation=f"{deviation:.3e}")


def _trajectory(p0: XStateParams, grid: np.ndarray, targets: TargetLike, times: np.ndarray = None) -> Trajectory:
    require_physical(p0)
    start = time.time()
    measures = _measures(p0, grid, targets)
    _check_closed_forms(p0, grid, measures, targets)

    elapsed = time.time() - start
    log_info("Sweep complete", samples=len(grid), targets=_target(targets).value, elapsed_ms=int(elapsed * 1000))

    return Trajectory(
        p=grid,
        concurrence=measures.concurrence,
        classical=measures.classical,
        discord=measures.discord,
        mutual_information=measures.mutual_information,
        s1=measures.s1,
        s2=measures.s2,
        s3=measures.s3,
        min_branch=measures.min_branch,
        t=times,
    )


def sweep_dynamics(p0: XStateParams, n_samples: int = None, targets: TargetLike = Target.BOTH) -> Trajectory:
    """All measures on a uniform grid of p over [0, 1]."""
    n_samples = config.sweep_samples if n_samples is None else int(n_samples)
    if n_samples < 2:
        raise DomainError(f"n_samples must be >= 2, got {n_samples}")
    return _trajectory(p0, np.linspace(0.0, 1.0, n_samples), targets)


def sweep_time(p0: XStateParams, gamma: float, t_max: float, n_samples: int = None, targets: TargetLike = Target.BOTH) -> Trajectory:
    """The same sweep on a uniform time grid over [0, t_max]."""
    n_samples = config.sweep_samples if n_samples is None else int(n_samples)
    if n_samples < 2:
        raise DomainError(f"n_samples must be >= 2, got {n_samples}")
    if gamma <= 0 or t_max <= 0:
        raise DomainError(f"gamma and t_max must be positive for a time sweep, got gamma={gamma}, t_max={t_max}")
    times = np.linspace(0.0, t_max, n_samples)
    grid = -np.expm1(-gamma * times)
    return _trajectory(p0, grid, targets, times=times)


def _refine_root(func, lo: float, hi: float, tol_p: float) -> float:
    f_lo = func(lo)
    if f_lo == 0.0:
        return lo
    if func(hi) == 0.0:
        return hi
    return float(bisect(func, lo, hi, xtol=tol_p))


def _first_sign_change(values: np.ndarray) -> Optional[Tuple[int, int]]:
    """Indices (i, k) of the first bracket where ``values`` strictly changes sign.

    Exact zeros are stepped over, so touching zero at an endpoint is not an event.
    """
    signs = np.sign(values)
    last = None
    for k, sign in enumerate(signs):
        if sign == 0:
            continue
        if last is not None and sign != signs[last]:
            return last, k
        last = k
    return None


def _starts_on_s2(trajectory: Trajectory) -> bool:
    # a tie with S1 leaves the discord on the decaying S1 branch
    s1, s2, s3 = trajectory.s1[0], trajectory.s2[0], trajectory.s3[0]
    return bool(s2 < s1 - BRANCH_TIE_TOL and s2 <= s3)


def detect_events(p0: XStateParams, targets: TargetLike = Target.BOTH, tol_p: float = None, n_samples: int = None) -> EventReport:
    """Branch transition, concurrence/discord crossing and entanglement sudden death.

    Args:
        p0: State before the channel
        targets: Dephased qubits
        tol_p: Bisection tolerance in p (default ``config.event_tol_p``)
        n_samples: Bracketing grid size (default ``config.sweep_samples``)

    Returns:
        EventReport; an event is None when its sign change never occurs.
        ``plateau_discord`` is set only for constant-discord states that
        start strictly on the S2 branch.
    """
    tol_p = config.event_tol_p if tol_p is None else tol_p
    trajectory = sweep_dynamics(p0, n_samples, targets)
    grid = trajectory.p

    def at(p: float) -> CorrelationArrays:
        return _measures(p0, np.array(min(max(p, 0.0), 1.0)), targets)

    p_transition = None
    transition_branches = None
    changes = np.nonzero(trajectory.min_branch[1:] != trajectory.min_branch[:-1])[0]
    if changes.size:
        k = int(changes[0]) + 1
        old, new = BRANCH_NAMES[trajectory.min_branch[k - 1]], BRANCH_NAMES[trajectory.min_branch[k]]

        def branch_gap(p: float) -> float:
            m = at(p)
            return float(getattr(m, old) - getattr(m, new))

        p_transition = _refine_root(branch_gap, grid[k - 1], grid[k], tol_p)
        transition_branches = f"{old}->{new}"

    p_esd = None
    margins = _measures(p0, grid, targets).concurrence_margin
    if margins[0] > 0.0:
        bracket = _first_sign_change(margins)
        if bracket is not None:
            lo, hi = bracket
            p_esd = _refine_root(lambda p: float(at(p).concurrence_margin), grid[lo], grid[hi], tol_p)

    p_crossing = None
    bracket = _first_sign_change(trajectory.concurrence - trajectory.discord)
    if bracket is not None:
        lo, hi = bracket

        def entanglement_excess(p: float) -> float:
            m = at(p)
            return float(m.concurrence - m.discord)

        p_crossing = _refine_root(entanglement_excess, grid[lo], grid[hi], tol_p)

    plateau = None
    if constant_discord_condition(p0) and _starts_on_s2(trajectory):
        plateau = plateau_discord(p0)

    report = EventReport(
        p_transition=p_transition,
        p_crossing=p_crossing,
        p_esd=p_esd,
        plateau_discord=plateau,
        transition_branches=transition_branches,
    )
    log_info(
        "Events detected",
        p_transition=p_transition,
        p_crossing=p_crossing,
        p_esd=p_esd,
        plateau=plateau,
    )
    return report


__all__ = [
    "Target",
    "ChannelSpec",
    "Trajectory",
    "TrajectorySample",
    "TRAJECTORY_COLUMNS",
    "EventReport",
    "p_of_time",
    "apply_phase_flip",
    "channel_parameters_at",
    "phase_flip_kraus",
    "apply_kraus",
    "constant_discord_condition",
    "constant_discord_closed_forms",
    "plateau_discord",
    "sweep_dynamics",
    "sweep_time",
    "detect_events",
]
