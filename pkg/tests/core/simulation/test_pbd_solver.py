"""
Tests unitaires pour le solveur PBD et la construction des vêtements.
"""

import numpy as np
import pytest

from src.core.exceptions import NumericalDivergenceError, UnknownStyleError
from src.core.garment.types import TriMesh
from src.core.garment.validation import validate_mesh
from src.core.simulation.body_proxy import BodyProxy
from src.core.simulation.garment_builder import add_pleats, build_garment_grid, grid_shape, top_ring_vertices
from src.core.simulation.motion_generator import animate_skeleton
from src.core.simulation.pbd_solver import (
    SimParams,
    bending_pairs,
    min_capsule_clearance,
    simulate,
    strain_report,
)

SPACING = 0.08


@pytest.fixture(scope="module")
def skirt():
    return build_garment_grid("short_skirt", SPACING)


@pytest.fixture(scope="module")
def clip():
    return animate_skeleton("sway", 4, 30.0, seed=0)


@pytest.fixture(scope="module")
def sequence(skirt, clip):
    params = SimParams.for_garment("short_skirt", skirt, particle_spacing=SPACING)
    return simulate(skirt, clip, BodyProxy(), params), params


class TestGarmentBuilder:
    """Tests pour build_garment_grid."""

    @pytest.mark.parametrize("kind", ["long_skirt", "short_skirt", "dress"])
    def test_valid_mesh(self, kind):
        mesh = build_garment_grid(kind, 0.1)
        assert validate_mesh(mesh) == []
        assert mesh.uv.min() >= 0.0 and mesh.uv.max() <= 1.0

    def test_top_ring_is_one_row(self, skirt):
        rows, cols = grid_shape("short_skirt", SPACING)
        assert skirt.num_vertices == rows * cols
        assert len(top_ring_vertices(skirt)) == cols

    def test_finer_spacing_more_vertices(self):
        assert build_garment_grid("long_skirt", 0.05).num_vertices > build_garment_grid("long_skirt", 0.1).num_vertices

    def test_unknown_kind(self):
        with pytest.raises(UnknownStyleError):
            build_garment_grid("poncho", 0.1)

    def test_spacing_too_large(self):
        with pytest.raises(ValueError, match="supérieur"):
            build_garment_grid("short_skirt", 5.0)

    def test_pleats_keep_waist(self, skirt):
        """Les plis n'affectent pas la ceinture et déplacent l'ourlet."""
        pleated = add_pleats(skirt, 0.02, 12)
        top = top_ring_vertices(skirt)
        np.testing.assert_allclose(pleated.vertices[top], skirt.vertices[top], atol=1e-12)
        assert np.abs(pleated.vertices - skirt.vertices).max() > 0.0
        assert add_pleats(skirt, 0.0, 12) is skirt


class TestSimulate:
    """Tests pour simulate."""

    def test_shape(self, sequence, skirt, clip):
        seq, _ = sequence
        assert seq.per_frame_vertices.shape == (len(clip), skirt.num_vertices, 3)
        assert np.all(np.isfinite(seq.per_frame_vertices))

    def test_pins_follow_rest_at_first_frame(self, sequence, skirt):
        """Première frame de sway = pose de repos : les épingles restent en place."""
        seq, params = sequence
        pins = list(params.pins)
        np.testing.assert_allclose(seq.frame(0)[pins], skirt.vertices[pins], atol=1e-9)

    def test_pins_rigid(self, sequence, skirt):
        """Distances entre sommets épinglés conservées à chaque frame."""
        seq, params = sequence
        pins = list(params.pins)
        rest = np.linalg.norm(skirt.vertices[pins][:, None] - skirt.vertices[pins][None], axis=-1)
        for t in range(len(seq)):
            p = seq.frame(t)[pins]
            np.testing.assert_allclose(np.linalg.norm(p[:, None] - p[None], axis=-1), rest, atol=1e-9)

    def test_strain_bounded(self, sequence):
        seq, params = sequence
        report = strain_report(seq)
        assert list(report.columns) == ["frame", "max_strain", "mean_strain"]
        assert report["max_strain"].max() <= params.strain_tolerance

    def test_unreachable_tolerance_raises(self, skirt, clip):
        """Tolérance inatteignable sans passe finale : erreur avec diagnostic, pas de frame silencieuse."""
        params = SimParams.for_garment("short_skirt", skirt, strain_tolerance=1e-12, max_extra_rounds=0)
        with pytest.raises(NumericalDivergenceError, match="Tolérances") as exc_info:
            simulate(skirt, clip, BodyProxy(), params)
        assert exc_info.value.index in (0, 1)
        diagnostics = exc_info.value.diagnostics
        assert diagnostics["strain_tolerance"] == 1e-12
        assert diagnostics["max_strain"] > 1e-12 or diagnostics["max_penetration"] > params.collision_margin

    def test_no_deep_penetration(self, sequence, clip):
        seq, params = sequence
        for t in range(len(seq)):
            clearance = min_capsule_clearance(seq.frame(t), BodyProxy(), clip.pose(t), exclude=np.array(params.pins))
            assert clearance >= -params.collision_margin

    def test_deterministic(self, skirt, clip, sequence):
        seq, params = sequence
        again = simulate(skirt, clip, BodyProxy(), params)
        np.testing.assert_array_equal(again.per_frame_vertices, seq.per_frame_vertices)

    def test_no_pins(self, skirt, clip):
        with pytest.raises(ValueError, match="épinglé"):
            simulate(skirt, clip, BodyProxy(), SimParams())

    def test_divergence(self, skirt, clip):
        """Une gravité non finie déclenche NumericalDivergenceError à la frame 1."""
        params = SimParams.for_garment("short_skirt", skirt, gravity=float("nan"))
        with pytest.raises(NumericalDivergenceError) as exc_info:
            simulate(skirt, clip, BodyProxy(), params)
        assert exc_info.value.index == 1

    def test_invalid_params(self):
        with pytest.raises(ValueError, match="substeps"):
            SimParams(substeps=0)
        with pytest.raises(ValueError, match="strain_tolerance"):
            SimParams(strain_tolerance=0.0)

    def test_bending_pairs(self):
        """Deux triangles adjacents → une paire de sommets opposés."""
        quad = TriMesh(np.zeros((4, 3)), np.array([[0, 1, 2], [0, 2, 3]]), np.zeros((2, 3, 2)))
        assert bending_pairs(quad).tolist() == [[1, 3]]


@pytest.mark.slow
class TestLongSimulation:
    """Invariants du solveur sur une séquence de 200 frames."""

    @pytest.fixture(scope="class")
    def long_run(self, skirt):
        clip = animate_skeleton("sway", 200, 30.0, seed=0)
        params = SimParams.for_garment("short_skirt", skirt, particle_spacing=SPACING)
        return clip, params, simulate(skirt, clip, BodyProxy(), params)

    def test_strain_within_tolerance(self, long_run):
        _, params, seq = long_run
        assert strain_report(seq)["max_strain"].max() <= params.strain_tolerance

    def test_no_penetration_beyond_margin(self, long_run):
        clip, params, seq = long_run
        for t in range(len(seq)):
            clearance = min_capsule_clearance(seq.frame(t), BodyProxy(), clip.pose(t), exclude=np.array(params.pins))
            assert clearance >= -params.collision_margin

    def test_bitwise_rerun(self, skirt, long_run):
        clip, params, seq = long_run
        again = simulate(skirt, clip, BodyProxy(), params)
        np.testing.assert_array_equal(again.per_frame_vertices, seq.per_frame_vertices)
