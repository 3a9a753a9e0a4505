import numpy as np
import pytest
from numpy.testing import assert_allclose

from xdiscord.correlations import concurrence, correlation_arrays
from xdiscord.errors import DomainError
from xdiscord.level_surface import (
    GridSpec,
    Measure,
    ScalarField3,
    extract_isosurface,
    figure_configurations,
    mesh_components,
    region_predicates,
    sample_field,
)
from xdiscord.state_core import XStateParams, validate_physical


def sphere_field(n=32):
    spec = GridSpec(n)

    def radius_squared(c1, c2, c3):
        return c1 * c1 + c2 * c2 + c3 * c3

    c1, c2, c3 = spec.coordinates()
    values = radius_squared(c1, c2, c3)
    return ScalarField3(values, np.ones(values.shape, dtype=bool), spec, radius_squared, "synthetic")


def saddle_field(offset, n=8):
    # corners of the cells around c1 = c2 = 0 alternate about the level 0.5
    spec = GridSpec(n)

    def saddle(c1, c2, c3):
        return c1 * c2 + 0.5 + offset

    c1, c2, c3 = spec.coordinates()
    values = saddle(c1, c2, c3)
    return ScalarField3(values, np.ones(values.shape, dtype=bool), spec, saddle, "synthetic")


def discord_residuals(mesh, r, s):
    v = mesh.vertices
    return np.abs(correlation_arrays(r, s, v[:, 0], v[:, 1], v[:, 2]).discord - mesh.level)


class TestGridSpec:
    def test_validation(self):
        with pytest.raises(DomainError):
            GridSpec(1)
        with pytest.raises(DomainError):
            GridSpec(8, r=1.5)

    def test_axis(self):
        spec = GridSpec(5)
        assert_allclose(spec.axis, [-1.0, -0.5, 0.0, 0.5, 1.0])
        assert spec.spacing == 0.5


class TestSampleField:
    def test_corners(self):
        field = sample_field(GridSpec(2))
        assert not field.mask[1, 1, 1]
        assert np.isnan(field.values[1, 1, 1])
        assert field.mask[1, 0, 1]
        assert_allclose(field.values[1, 0, 1], 1.0, atol=1e-12)

    def test_product_state_center(self):
        field = sample_field(GridSpec(3, 0.3, 0.3))
        assert_allclose(field.values[1, 1, 1], 0.0, atol=1e-12)

    def test_mask_matches_physicality(self):
        spec = GridSpec(9, 0.3, 0.1)
        field = sample_field(spec)
        for i, j, k in [(0, 0, 0), (4, 4, 4), (8, 0, 8), (8, 8, 8), (2, 6, 3)]:
            p = XStateParams(0.3, 0.1, spec.axis[i], spec.axis[j], spec.axis[k])
            assert field.mask[i, j, k] == validate_physical(p)

    def test_concurrence_measure(self):
        field = sample_field(GridSpec(9), Measure.CONCURRENCE)
        values = field.values[field.mask]
        assert field.measure == "concurrence"
        assert np.all((values >= 0.0) & (values <= 1.0))

    def test_paired_sign_flip_symmetry(self):
        # dyadic grid, so the flipped grid is exactly the same point set
        values = sample_field(GridSpec(17)).values
        assert_allclose(values[::-1, ::-1, :], values, atol=1e-10)
        assert_allclose(values[::-1, :, ::-1], values, atol=1e-10)
        assert_allclose(values[:, ::-1, ::-1], values, atol=1e-10)


class TestExtractIsosurface:
    def test_sphere(self):
        mesh = extract_isosurface(sphere_field(), 0.25)
        assert not mesh.is_empty
        radii = np.linalg.norm(mesh.vertices, axis=1)
        spacing = GridSpec(32).spacing
        assert np.all(np.abs(radii - 0.5) <= 2 * spacing)
        assert np.all(np.abs(radii - 0.5) <= 1e-3)
        assert mesh.boundary_cells == 0
        assert mesh_components(mesh) == 1

    @pytest.mark.parametrize("offset", [0.01, -0.01])
    def test_ambiguous_faces_follow_cell_centre(self, offset):
        mesh = extract_isosurface(saddle_field(offset), 0.5)
        assert mesh_components(mesh) == 2
        half = GridSpec(8).spacing / 2.0
        centroids = mesh.vertices[mesh.triangles].mean(axis=1)
        central = (np.abs(centroids[:, 0]) < half) & (np.abs(centroids[:, 1]) < half)
        assert central.any()
        # the centre sits on the offset side of the level, so only the opposite corners are cut off
        products = centroids[central, 0] * centroids[central, 1]
        assert np.all(np.sign(products) == -np.sign(offset))

    def test_welded_indices(self):
        mesh = extract_isosurface(sphere_field(16), 0.25)
        assert mesh.triangles.min() == 0
        assert mesh.triangles.max() == len(mesh.vertices) - 1
        assert len(np.unique(mesh.vertices.round(12), axis=0)) == len(mesh.vertices)

    def test_level_above_maximum(self):
        mesh = extract_isosurface(sample_field(GridSpec(16)), 1.0 + 1e-6)
        assert mesh.is_empty
        assert mesh_components(mesh) == 0

    def test_discord_surface(self):
        mesh = extract_isosurface(sample_field(GridSpec(32, 0.3, 0.3)), 0.03)
        assert not mesh.is_empty
        assert mesh.boundary_cells > 0
        assert np.max(discord_residuals(mesh, 0.3, 0.3)) <= 5e-3

    @pytest.mark.parametrize("level", [0.03, 0.15])
    def test_bell_diagonal_baseline(self, level):
        mesh = extract_isosurface(sample_field(GridSpec(24)), level)
        assert not mesh.is_empty
        assert np.max(discord_residuals(mesh, 0.0, 0.0)) <= 5e-3

    def test_bad_arguments(self):
        field = sample_field(GridSpec(16))
        with pytest.raises(DomainError):
            extract_isosurface(field, 0.0)
        with pytest.raises(DomainError):
            extract_isosurface(sample_field(GridSpec(4)), 0.1)

    @pytest.mark.slow
    @pytest.mark.parametrize("surface", figure_configurations(), ids=lambda c: c.label)
    def test_figure_configurations(self, surface):
        mesh = extract_isosurface(sample_field(GridSpec(64, surface.r, surface.s)), surface.level)
        assert not mesh.is_empty
        assert np.max(discord_residuals(mesh, surface.r, surface.s)) <= 5e-3


class TestRegions:
    def test_examples(self):
        assert region_predicates(1.0, -1.0, 1.0) == (True, False)
        assert region_predicates(0.5, 0.25, 0.25) == (True, True)
        assert region_predicates(1.0, 1.0, 1.0) == (False, False)

    def test_octahedron_is_separable(self):
        rng = np.random.default_rng(13)
        for c1, c2, c3 in rng.uniform(-1.0, 1.0, size=(2000, 3)):
            inside = region_predicates(c1, c2, c3)
            if inside.in_octahedron:
                assert inside.in_tetrahedron
                assert concurrence(XStateParams.bell_diagonal(c1, c2, c3)) == 0.0

    def test_tetrahedron_is_positivity(self):
        rng = np.random.default_rng(17)
        for c1, c2, c3 in rng.uniform(-1.0, 1.0, size=(2000, 3)):
            physical = validate_physical(XStateParams.bell_diagonal(c1, c2, c3))
            assert region_predicates(c1, c2, c3).in_tetrahedron == physical

    def test_configurations(self):
        labels = [c.label for c in figure_configurations()]
        assert labels[:4] == ["a", "b", "c", "d"]
        assert len(figure_configurations(include_baseline=False)) == 4
