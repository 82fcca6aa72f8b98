"""
Tests pour la texture neuronale, les features de mouvement et la carte de descripteurs.
"""

import numpy as np
import pytest
import torch

from src.core.exceptions import ShapeMismatchError
from src.core.garment.constants import NUM_JOINTS
from src.core.garment.types import Camera, MotionClip, SkeletonPose, TriMesh
from src.core.neural import (
    NeuralTexture,
    build_descriptor,
    descriptor_channels,
    motion_feature_map,
    sample_texture,
    split_descriptor,
    stack_motion_features,
)
from src.core.raster.gbuffer import rasterize


def _square_gbuffer(res: int = 16):
    v = np.array([[-0.5, -0.5, 0.0], [0.5, -0.5, 0.0], [0.5, 0.5, 0.0], [-0.5, 0.5, 0.0]])
    uv = np.array([[[0, 0], [1, 0], [1, 1]], [[0, 0], [1, 1], [0, 1]]], dtype=float)
    mesh = TriMesh(v, np.array([[0, 1, 2], [0, 2, 3]]), uv)
    camera = Camera.look_at([0.0, 0.0, 3.0], [0.0, 0.0, 0.0], res, res, 50.0)
    return mesh, rasterize(mesh, camera)


class TestNeuralTexture:
    """Tests pour NeuralTexture."""

    def test_levels_shapes_and_init_range(self):
        tex = NeuralTexture(resolution=32, seed=0)

        assert tex.feature_dim == 64
        assert [tuple(l.shape[-2:]) for l in tex.levels] == [(32, 32), (16, 16), (8, 8), (4, 4)]
        assert all(float(l.abs().max()) <= 0.05 for l in tex.levels)

    def test_resolution_not_divisible(self):
        with pytest.raises(ValueError, match="divisible"):
            NeuralTexture(resolution=20)

    def test_seed_determinism(self):
        a, b = NeuralTexture(16, seed=3), NeuralTexture(16, seed=3)

        assert all(torch.equal(x, y) for x, y in zip(a.levels, b.levels))

    def test_texel_center_sample_is_exact(self):
        """Un UV au centre d'un texel du niveau 0 restitue ce texel."""
        tex = NeuralTexture(resolution=8, seed=1)
        uv = torch.tensor([[[[2.5 / 8, 5.5 / 8]]]])
        out = tex.sample(uv, torch.ones(1, 1, 1, dtype=torch.bool))

        expected = tex.levels[0][0, :, 5, 2]
        assert torch.allclose(out[0, :16, 0, 0], expected, atol=1e-6)

    def test_gradient_reaches_texels(self):
        """Les gradients atteignent les texels échantillonnés et seulement sous le masque."""
        tex = NeuralTexture(resolution=8, seed=1)
        uv = torch.tensor([[[[2.5 / 8, 5.5 / 8], [0.5, 0.5]]]])
        mask = torch.tensor([[[True, False]]])
        tex.sample(uv, mask).sum().backward()

        grad = tex.levels[0].grad[0, 0]
        assert float(grad[5, 2]) == pytest.approx(1.0)
        assert float(grad.sum()) == pytest.approx(1.0)

    def test_matches_scalar_bilinear(self):
        """Chaque niveau correspond à l'interpolation bilinéaire scalaire (bords répliqués)."""
        tex = NeuralTexture(resolution=8, levels=3, channels=4, seed=2).double()
        rng = np.random.default_rng(0)
        uv = rng.uniform(0.0, 1.0, size=(50, 2))
        out = tex.sample(torch.from_numpy(uv).view(1, 1, 50, 2), torch.ones(1, 1, 50, dtype=torch.bool))

        for lvl, level in enumerate(tex.levels):
            grid = level[0].detach().numpy()
            size = grid.shape[-1]
            for k, (u, v) in enumerate(uv):
                x = min(max(u * size - 0.5, 0.0), size - 1.0)
                y = min(max(v * size - 0.5, 0.0), size - 1.0)
                x0, y0 = int(np.floor(x)), int(np.floor(y))
                x1, y1 = min(x0 + 1, size - 1), min(y0 + 1, size - 1)
                wx, wy = x - x0, y - y0
                expected = ((1 - wy) * ((1 - wx) * grid[:, y0, x0] + wx * grid[:, y0, x1])
                            + wy * ((1 - wx) * grid[:, y1, x0] + wx * grid[:, y1, x1]))
                got = out[0, lvl * 4:(lvl + 1) * 4, 0, k].detach().numpy()
                np.testing.assert_allclose(got, expected, atol=1e-12)

    def test_texel_gradients_match_central_differences(self):
        """Gradients des texels contre différences centrales (h = 1e-3) sur 120 texels tirés au hasard."""
        h = 1e-3
        tex = NeuralTexture(resolution=8, levels=2, channels=3, seed=4).double()
        rng = np.random.default_rng(1)
        uv = torch.from_numpy(rng.uniform(0.0, 1.0, size=(1, 8, 8, 2)))
        mask = torch.from_numpy(rng.uniform(size=(1, 8, 8)) > 0.2)
        weights = torch.from_numpy(rng.normal(size=(1, tex.feature_dim, 8, 8)))

        def loss() -> torch.Tensor:
            return (tex.sample(uv, mask) * weights).sum()

        loss().backward()
        checked = 0
        with torch.no_grad():
            for level in tex.levels:
                c, rows, cols = level.shape[1:]
                for _ in range(60):
                    idx = (0, int(rng.integers(c)), int(rng.integers(rows)), int(rng.integers(cols)))
                    original = float(level[idx])
                    level[idx] = original + h
                    plus = float(loss())
                    level[idx] = original - h
                    minus = float(loss())
                    level[idx] = original
                    fd = (plus - minus) / (2 * h)
                    analytic = float(level.grad[idx])
                    assert abs(analytic - fd) <= 1e-4 * max(abs(analytic), abs(fd), 1e-6)
                    checked += 1
        assert checked >= 100

    def test_sample_texture_zero_outside_mask(self):
        _, gbuf = _square_gbuffer()
        features = sample_texture(NeuralTexture(16, seed=0), gbuf)

        assert features.shape == (16, 16, 64)
        assert torch.all(features[torch.from_numpy(~gbuf.mask)] == 0)


class TestMotionFeatures:
    """Tests pour motion_feature_map / stack_motion_features."""

    def test_kernel_values(self):
        """1 à distance nulle, e^-1 quand d² = σ."""
        sigma = 0.25
        joints = np.zeros((2, 3))
        joints[1] = [0.5, 0.0, 0.0]
        pos = np.zeros((1, 1, 3))
        out = motion_feature_map(pos, np.ones((1, 1), dtype=bool), SkeletonPose(joints), sigma)

        assert out[0, 0, 0] == pytest.approx(1.0)
        assert out[0, 0, 1] == pytest.approx(np.exp(-1.0))

    def test_zero_outside_mask(self):
        pos = np.zeros((2, 2, 3))
        mask = np.array([[True, False], [False, False]])
        out = motion_feature_map(pos, mask, SkeletonPose(np.zeros((3, 3))), 1.0)

        assert np.all(out[~mask] == 0)
        assert np.all(out[mask] > 0)

    def test_invalid_sigma(self):
        with pytest.raises(ValueError, match="sigma"):
            motion_feature_map(np.zeros((1, 1, 3)), np.ones((1, 1)), SkeletonPose(np.zeros((1, 3))), 0.0)

    def test_stack_shape_and_order(self):
        """Frame courante en premier ; un proxy immobile donne des cartes identiques."""
        mesh, gbuf = _square_gbuffer()
        frames = 5
        clip = MotionClip(np.zeros((frames, NUM_JOINTS, 3)), fps=30.0)
        coarse = np.repeat(mesh.vertices[None], frames, axis=0)

        out = stack_motion_features(gbuf, coarse, clip, t=4, stride=2, maps=6, sigma=1.0)

        assert out.shape == (16, 16, NUM_JOINTS * 6)
        assert np.allclose(out[..., :NUM_JOINTS], out[..., -NUM_JOINTS:])

    def test_stack_uses_past_vertices(self):
        """La première carte suit la frame t, la seconde la frame t - stride."""
        mesh, gbuf = _square_gbuffer()
        clip = MotionClip(np.zeros((3, NUM_JOINTS, 3)), fps=30.0)
        coarse = np.repeat(mesh.vertices[None], 3, axis=0)
        coarse[0] += [0.0, 0.0, 1.0]

        out = stack_motion_features(gbuf, coarse, clip, t=2, stride=2, maps=2, sigma=1.0)

        current, past = out[..., :NUM_JOINTS], out[..., NUM_JOINTS:]
        assert np.all(past[gbuf.mask] < current[gbuf.mask])


class TestDescriptorMap:
    """Tests pour build_descriptor / split_descriptor."""

    def test_channel_count(self):
        assert descriptor_channels(19, 6) == 178
        assert descriptor_channels(19, 6, motion_features=False) == 64

    def test_build_and_split(self):
        mask = torch.tensor([[True, False], [True, True]])
        features = torch.ones(2, 2, 64)
        motion = np.full((2, 2, 114), 0.5)

        desc = build_descriptor(features, motion, mask)

        assert desc.channels == 178
        assert desc.to_nchw().shape == (1, 178, 2, 2)
        assert torch.all(desc.pixels[0, 1] == 0)
        f, m = split_descriptor(desc)
        assert torch.all(f[mask] == 1)
        assert torch.allclose(m[mask], torch.full((3, 114), 0.5))

    def test_without_motion(self):
        desc = build_descriptor(torch.ones(2, 2, 64), None, torch.ones(2, 2, dtype=torch.bool))
        _, motion = split_descriptor(desc)

        assert desc.channels == 64
        assert motion is None

    def test_spatial_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            build_descriptor(torch.ones(2, 2, 64), np.zeros((3, 2, 114)), torch.ones(2, 2))
