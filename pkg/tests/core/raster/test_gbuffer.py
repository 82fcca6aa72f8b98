"""
Tests unitaires pour la rastérisation G-buffer et l'ombrage.

L'oracle parcourt tous les pixels pour chaque triangle (sans boîte englobante).
"""

import numpy as np
import pytest

from src.core.exceptions import ShapeMismatchError
from src.core.garment.types import Camera, TriMesh
from src.core.raster.gbuffer import (
    NEAR_PLANE,
    PROJECTED_AREA_EPS,
    edge_function,
    rasterize,
    rasterize_objects,
    world_positions_at,
)
from src.core.raster.shading import face_normals, shade_lambert

RES = 64


def _camera(res: int = RES) -> Camera:
    return Camera.look_at([0.0, 0.0, 3.0], [0.0, 0.0, 0.0], res, res, 50.0)


def _random_mesh(rng: np.random.Generator, num_faces: int) -> TriMesh:
    vertices = rng.uniform(-1.0, 1.0, size=(3 * num_faces, 3))
    faces = np.arange(3 * num_faces).reshape(-1, 3)
    return TriMesh(vertices, faces, rng.uniform(0.0, 1.0, size=(num_faces, 3, 2)))


def _square(z: float = 0.0) -> TriMesh:
    v = np.array([[-0.5, -0.5, z], [0.5, -0.5, z], [0.5, 0.5, z], [-0.5, 0.5, z]])
    uv = np.array([[[0, 0], [1, 0], [1, 1]], [[0, 0], [1, 1], [0, 1]]], dtype=float)
    return TriMesh(v, np.array([[0, 1, 2], [0, 2, 3]]), uv)


def _oracle(mesh: TriMesh, camera: Camera):
    """Test de demi-plans sur toute l'image, premier triangle gagnant à profondeur égale."""
    h, w = camera.height, camera.width
    px, py = np.meshgrid(np.arange(w) + 0.5, np.arange(h) + 0.5)
    best = np.full((h, w), np.inf)
    tri = np.full((h, w), -1)
    bary = np.zeros((h, w, 3))
    xy, z = camera.project(mesh.vertices)
    for f, idx in enumerate(mesh.faces):
        zs = z[idx]
        if np.any(zs <= NEAR_PLANE):
            continue
        p0, p1, p2 = xy[idx]
        area = edge_function(p0, p1, p2[0], p2[1])
        if abs(area) < PROJECTED_AREA_EPS:
            continue
        l0 = edge_function(p1, p2, px, py) / area
        l1 = edge_function(p2, p0, px, py) / area
        l2 = edge_function(p0, p1, px, py) / area
        inside = (l0 >= 0) & (l1 >= 0) & (l2 >= 0)
        s = l0 / zs[0] + l1 / zs[1] + l2 / zs[2]
        depth = 1.0 / np.where(inside, s, 1.0)
        win = inside & (depth < best)
        best[win] = depth[win]
        tri[win] = f
        q = np.stack([l0 / zs[0], l1 / zs[1], l2 / zs[2]], axis=-1)
        bary[win] = q[win] / s[win][:, None]
    return tri, bary


class TestRasterizeOracle:
    """Équivalence avec l'oracle brute force."""

    def test_random_meshes(self):
        rng = np.random.default_rng(1234)
        camera = _camera()
        for _ in range(25):
            mesh = _random_mesh(rng, int(rng.integers(1, 60)))
            gbuf = rasterize(mesh, camera)
            tri, bary = _oracle(mesh, camera)
            np.testing.assert_array_equal(gbuf.triangle_id, tri)
            np.testing.assert_array_equal(gbuf.mask, tri >= 0)
            assert np.abs(gbuf.bary - bary).max() <= 1e-5


class TestRasterize:
    """Propriétés du G-buffer."""

    def test_barycentrics_sum_to_one(self):
        gbuf = rasterize(_square(), _camera())
        assert gbuf.coverage > 0
        np.testing.assert_allclose(gbuf.bary[gbuf.mask].sum(axis=-1), 1.0, atol=1e-12)

    def test_depth_of_plane(self):
        """Plan face à la caméra : profondeur = distance."""
        gbuf = rasterize(_square(z=0.5), _camera())
        np.testing.assert_allclose(gbuf.depth[gbuf.mask], 2.5, atol=1e-9)
        assert np.all(gbuf.depth[~gbuf.mask] == 0.0)

    def test_world_positions(self):
        gbuf = rasterize(_square(), _camera())
        np.testing.assert_allclose(gbuf.world_pos[gbuf.mask][:, 2], 0.0, atol=1e-12)
        assert gbuf.uv[gbuf.mask].min() >= -1e-12 and gbuf.uv[gbuf.mask].max() <= 1.0 + 1e-12

    def test_world_positions_at_same_frame(self):
        mesh = _square()
        gbuf = rasterize(mesh, _camera())
        np.testing.assert_allclose(world_positions_at(gbuf, mesh.vertices), gbuf.world_pos, atol=1e-12)

    def test_world_positions_at_translated(self):
        """Même correspondance, sommets translatés."""
        mesh = _square()
        gbuf = rasterize(mesh, _camera())
        moved = world_positions_at(gbuf, mesh.vertices + [0.1, 0.0, 0.0])
        np.testing.assert_allclose(moved[gbuf.mask] - gbuf.world_pos[gbuf.mask], [[0.1, 0.0, 0.0]], atol=1e-12)

    def test_world_positions_at_mismatch(self):
        gbuf = rasterize(_square(), _camera())
        with pytest.raises(ShapeMismatchError):
            world_positions_at(gbuf, np.zeros((5, 3)))

    def test_behind_camera_ignored(self):
        gbuf = rasterize(_square(z=4.0), _camera())
        assert gbuf.coverage == 0

    def test_resolution_override(self):
        gbuf = rasterize(_square(), _camera(), resolution=32)
        assert (gbuf.height, gbuf.width) == (32, 32)

    def test_nearest_object_wins(self):
        """Le carré le plus proche occulte l'autre."""
        gbuf, object_id = rasterize_objects([_square(z=0.0), _square(z=0.5)], _camera())
        assert set(np.unique(object_id[gbuf.mask]).tolist()) == {1}


class TestShading:
    def test_background_and_range(self):
        mesh = _square()
        gbuf = rasterize(mesh, _camera())
        image = shade_lambert(gbuf, face_normals(mesh.vertices, mesh.faces),
                              np.tile([0.8, 0.2, 0.2], (2, 1)), background=(0.0, 0.0, 1.0))
        np.testing.assert_allclose(image[~gbuf.mask], [[0.0, 0.0, 1.0]])
        assert image.min() >= 0.0 and image.max() <= 1.0
        assert np.all(image[gbuf.mask][:, 0] > 0.0)

    def test_degenerate_normal_zero(self):
        n = face_normals(np.array([[0.0, 0, 0], [1, 0, 0], [2, 0, 0]]), np.array([[0, 1, 2]]))
        np.testing.assert_array_equal(n, np.zeros((1, 3)))
