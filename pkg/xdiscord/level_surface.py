"""Constant-measure level surfaces over the (c1, c2, c3) cube.

A measure (discord by default) is sampled on an n^3 grid over [-1, 1]^3 at
fixed Bloch components (r, s). Non-physical grid points are masked with a
NaN sentinel. Marching cubes runs on the grid, triangles from any cell with
a masked corner are discarded, and every surviving vertex is moved onto the
exact level set by bisection along its cell edge.
"""
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, List, NamedTuple

import mcubes
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .config import config
from .correlations import correlation_arrays
from .errors import DomainError
from .logger import log_info
from .state_core import BOUND_TOL, physical_mask

Evaluator = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]

MIN_MESH_GRID = 8
INTEGER_TOL = 1e-9


class Measure(str, Enum):
    DISCORD = "discord"
    CONCURRENCE = "concurrence"
    CLASSICAL = "classical"
    EOF = "eof"
    MUTUAL_INFORMATION = "mutual_information"


@dataclass(frozen=True)
class GridSpec:
    n: int
    r: float = 0.0
    s: float = 0.0
    bounds: tuple = (-1.0, 1.0)

    def __post_init__(self):
        if int(self.n) < 2:
            raise DomainError(f"grid needs at least 2 points per axis, got n={self.n}")
        for name in ("r", "s"):
            if abs(getattr(self, name)) > 1.0 + BOUND_TOL:
                raise DomainError(f"|{name}| must be <= 1, got {getattr(self, name)}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(self.bounds[0], self.bounds[1], self.n)

    @property
    def spacing(self) -> float:
        return (self.bounds[1] - self.bounds[0]) / (self.n - 1)

    def coordinates(self):
        """(c1, c2, c3) arrays of shape (n, n, n), indexed [i, j, k]."""
        return np.meshgrid(self.axis, self.axis, self.axis, indexing="ij")


@dataclass(frozen=True, eq=False)
class ScalarField3:
    values: np.ndarray
    mask: np.ndarray
    grid: GridSpec
    evaluator: Evaluator
    measure: str = Measure.DISCORD.value


@dataclass(frozen=True, eq=False)
class TriangleMesh:
    vertices: np.ndarray
    triangles: np.ndarray
    level: float
    boundary_cells: int = 0
    measure: str = Measure.DISCORD.value

    @property
    def is_empty(self) -> bool:
        return len(self.triangles) == 0


class RegionMembership(NamedTuple):
    in_tetrahedron: bool
    in_octahedron: bool


class SurfaceConfig(NamedTuple):
    label: str
    r: float
    s: float
    level: float


def measure_evaluator(measure: Measure, r: float, s: float) -> Evaluator:
    """Vectorized measure at fixed (r, s) as a function of (c1, c2, c3)."""
    attribute = "classical" if Measure(measure) is Measure.CLASSICAL else Measure(measure).value

    def evaluate(c1, c2, c3):
        return getattr(correlation_arrays(r, s, c1, c2, c3), attribute)

    return evaluate


def sample_field(spec: GridSpec, measure: Measure = Measure.DISCORD) -> ScalarField3:
    """Measure on every physical grid point; NaN elsewhere."""
    measure = Measure(measure)
    c1, c2, c3 = spec.coordinates()
    mask = physical_mask(spec.r, spec.s, c1, c2, c3)
    evaluator = measure_evaluator(measure, spec.r, spec.s)

    values = np.full(mask.shape, np.nan)
    values[mask] = evaluator(c1[mask], c2[mask], c3[mask])

    log_info("Field sampled", n=spec.n, r=spec.r, s=spec.s, measure=measure.value, physical=int(mask.sum()))
    return ScalarField3(values=values, mask=mask, grid=spec, evaluator=evaluator, measure=measure.value)


def _cell_masks(mask: np.ndarray):
    """(all corners physical, some-but-not-all corners physical) per cell."""
    corners = [
        mask[di:mask.shape[0] - 1 + di, dj:mask.shape[1] - 1 + dj, dk:mask.shape[2] - 1 + dk]
        for di in (0, 1) for dj in (0, 1) for dk in (0, 1)
    ]
    stacked = np.stack(corners)
    full = np.all(stacked, axis=0)
    partial = np.any(stacked, axis=0) & ~full
    return full, partial


def _edge_keys(vertices: np.ndarray):
    """Lower grid corner and axis (or -1 when on a grid point) of each vertex."""
    rounded = np.round(vertices)
    on_grid = np.abs(vertices - rounded) <= INTEGER_TOL
    axis = np.where(on_grid.all(axis=1), -1, np.argmin(on_grid, axis=1))
    lower = rounded.astype(np.int64)
    rows = np.nonzero(axis >= 0)[0]
    lower[rows, axis[rows]] = np.floor(vertices[rows, axis[rows]]).astype(np.int64)
    return lower, axis


def _refine_vertices(field: ScalarField3, level: float, lower: np.ndarray, axis: np.ndarray, edge_tol: float) -> np.ndarray:
    """Bisect along each cell edge so vertices sit on the level set to edge_tol."""
    spec = field.grid
    coords = spec.bounds[0] + lower.astype(float) * spec.spacing
    rows = np.nonzero(axis >= 0)[0]
    if rows.size == 0:
        return coords

    lo_idx = lower[rows]
    hi_idx = lo_idx.copy()
    hi_idx[np.arange(rows.size), axis[rows]] += 1
    f_lo = field.values[tuple(lo_idx.T)] - level
    f_hi = field.values[tuple(hi_idx.T)] - level

    t_lo = np.zeros(rows.size)
    t_hi = np.ones(rows.size)
    bracketed = np.sign(f_lo) * np.sign(f_hi) < 0
    # fall back to linear interpolation when the edge is not bracketed
    t_lin = np.where(f_hi != f_lo, f_lo / np.where(f_hi != f_lo, f_lo - f_hi, 1.0), 0.5)

    base = coords[rows]
    unit = np.zeros((rows.size, 3))
    unit[np.arange(rows.size), axis[rows]] = spec.spacing

    iterations = max(int(np.ceil(np.log2(spec.spacing / edge_tol))), 1)
    for _ in range(iterations):
        t_mid = (t_lo + t_hi) / 2.0
        points = base + t_mid[:, None] * unit
        g_mid = field.evaluator(points[:, 0], points[:, 1], points[:, 2]) - level
        same_as_lo = np.sign(g_mid) == np.sign(f_lo)
        t_lo = np.where(same_as_lo, t_mid, t_lo)
        t_hi = np.where(same_as_lo, t_hi, t_mid)

    t_final = np.where(bracketed, (t_lo + t_hi) / 2.0, np.clip(t_lin, 0.0, 1.0))
    coords[rows] = base + t_final[:, None] * unit
    return coords


def _component_labels(triangles: np.ndarray, size: int) -> np.ndarray:
    rows = np.concatenate([triangles[:, 0], triangles[:, 1], triangles[:, 2]])
    cols = np.concatenate([triangles[:, 1], triangles[:, 2], triangles[:, 0]])
    adjacency = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))
    _, labels = connected_components(adjacency, directed=False)
    return labels


@lru_cache(maxsize=None)
def table_connects_above() -> bool:
    """True when the PyMCubes case table joins the above-level corners of an ambiguous face."""
    cube = np.zeros((2, 2, 2))
    cube[0, 0, 0] = cube[1, 1, 0] = 1.0
    vertices, triangles = mcubes.marching_cubes(cube, 0.5)
    vertices = np.asarray(vertices, dtype=float).reshape(-1, 3)
    _, welded = np.unique(np.round(vertices, 9), axis=0, return_inverse=True)
    triangles = np.asarray(welded).reshape(-1)[np.asarray(triangles, dtype=np.int64).reshape(-1, 3)]
    labels = _component_labels(triangles, len(vertices))
    return len(np.unique(labels[np.unique(triangles)])) == 1


def _triangle_cells(vertices: np.ndarray, triangles: np.ndarray, limit: int) -> np.ndarray:
    if triangles.size == 0:
        return np.zeros((0, 3), dtype=np.int64)
    centroids = vertices[triangles].mean(axis=1)
    return np.clip(np.floor(centroids).astype(np.int64), 0, limit)


def extract_isosurface(field: ScalarField3, level: float, edge_tol: float = None) -> TriangleMesh:
    """Marching cubes on fully physical cells with per-edge root refinement.

    The case table always splits the same class of corners on an ambiguous
    face, and meshing the negated field splits the other class. Each cell
    takes its triangles from whichever of the two runs joins the corners on
    the side of the level where its sampled centre value lies.
    """
    edge_tol = config.surface_edge_tol if edge_tol is None else edge_tol
    if level <= 0:
        raise DomainError(f"level must be positive, got {level}")
    if field.grid.n < MIN_MESH_GRID:
        raise DomainError(f"meshing needs n >= {MIN_MESH_GRID}, got n={field.grid.n}")

    spec = field.grid
    full_cells, partial_cells = _cell_masks(field.mask)
    boundary_cells = int(partial_cells.sum())
    empty = TriangleMesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64), level, boundary_cells, field.measure)

    # masked points get a filler value; any triangle that touches one is discarded below
    volume = np.ascontiguousarray(np.where(field.mask, field.values, level - 1.0), dtype=np.float64)
    runs = []
    for sign in (1.0, -1.0):
        vertices, triangles = mcubes.marching_cubes(sign * volume, sign * level)
        vertices = np.asarray(vertices, dtype=float).reshape(-1, 3)
        triangles = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
        if sign < 0:
            triangles = triangles[:, ::-1]
        cells = _triangle_cells(vertices, triangles, spec.n - 2)
        keep = full_cells[cells[:, 0], cells[:, 1], cells[:, 2]]
        runs.append((vertices, triangles[keep], cells[keep], table_connects_above() == (sign > 0)))

    if all(triangles.size == 0 for _, triangles, _, _ in runs):
        log_info("Empty isosurface", level=level, measure=field.measure, boundary_cells=boundary_cells)
        return empty

    candidates = np.unique(np.concatenate([cells for _, _, cells, _ in runs]), axis=0)
    centres = spec.bounds[0] + (candidates + 0.5) * spec.spacing
    centre_above = np.zeros(full_cells.shape, dtype=bool)
    centre_above[tuple(candidates.T)] = field.evaluator(centres[:, 0], centres[:, 1], centres[:, 2]) >= level

    all_vertices, chosen, offset = [], [], 0
    for vertices, triangles, cells, connects_above in runs:
        picked = centre_above[cells[:, 0], cells[:, 1], cells[:, 2]] == connects_above
        all_vertices.append(vertices)
        chosen.append(triangles[picked] + offset)
        offset += len(vertices)
    raw_vertices = np.concatenate(all_vertices)
    triangles = np.concatenate(chosen)
    if triangles.size == 0:
        return empty

    # weld by edge key, not by coordinates
    lower, axis = _edge_keys(raw_vertices)
    keys = np.column_stack([lower, axis])
    used = np.unique(triangles)
    unique_keys, inverse = np.unique(keys[used], axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    remap = np.full(len(raw_vertices), -1, dtype=np.int64)
    remap[used] = inverse
    triangles = remap[triangles]
    triangles = triangles[
        (triangles[:, 0] != triangles[:, 1]) & (triangles[:, 1] != triangles[:, 2]) & (triangles[:, 0] != triangles[:, 2])
    ]

    vertices = _refine_vertices(field, level, unique_keys[:, :3], unique_keys[:, 3], edge_tol)

    log_info(
        "Isosurface extracted",
        level=level,
        measure=field.measure,
        vertices=len(vertices),
        triangles=len(triangles),
        boundary_cells=boundary_cells,
    )
    return TriangleMesh(vertices, triangles, level, boundary_cells, field.measure)


def mesh_components(mesh: TriangleMesh) -> int:
    """Number of connected components of the triangle mesh."""
    if mesh.is_empty:
        return 0
    labels = _component_labels(mesh.triangles, len(mesh.vertices))
    # isolated vertices are not part of any surface patch
    return int(len(np.unique(labels[np.unique(mesh.triangles)])))


def region_predicates(c1: float, c2: float, c3: float, tol: float = None) -> RegionMembership:
    """Membership of a Bell-diagonal correlation vector in the state tetrahedron
    and in the separable octahedron."""
    tol = config.physical_tol if tol is None else tol
    in_tetrahedron = bool(physical_mask(0.0, 0.0, c1, c2, c3, tol=tol))
    in_octahedron = abs(c1) + abs(c2) + abs(c3) <= 1.0 + tol
    return RegionMembership(in_tetrahedron, bool(in_octahedron))


def figure_configurations(include_baseline: bool = True) -> List[SurfaceConfig]:
    """The four constant-discord configurations, plus r = s = 0 baselines."""
    configs = [
        SurfaceConfig("a", 0.3, 0.3, 0.03),
        SurfaceConfig("b", 0.5, 0.5, 0.03),
        SurfaceConfig("c", 0.3, 0.3, 0.15),
        SurfaceConfig("d", 0.5, 0.5, 0.15),
    ]
    if include_baseline:
        configs += [
            SurfaceConfig("baseline-0.03", 0.0, 0.0, 0.03),
            SurfaceConfig("baseline-0.15", 0.0, 0.0, 0.15),
        ]
    return configs


__all__ = [
    "Measure",
    "GridSpec",
    "ScalarField3",
    "TriangleMesh",
    "RegionMembership",
    "SurfaceConfig",
    "measure_evaluator",
    "sample_field",
    "extract_isosurface",
    "table_connects_above",
    "mesh_components",
    "region_predicates",
    "figure_configurations",
]
