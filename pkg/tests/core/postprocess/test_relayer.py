"""
Tests pour la re-superposition bras / vêtement.
"""

import numpy as np
import pytest

from src.core.exceptions import ShapeMismatchError
from src.core.postprocess import LayerInputs, garment_mask_from_alpha, relayer, relayer_pixels


def _inputs(arm_depth: float = 1.0, garment_depth: float = 2.0, render=None) -> LayerInputs:
    h, w = 4, 5
    arm = np.zeros((h, w), dtype=bool)
    arm[1:3, 1:3] = True
    garment = np.zeros((h, w), dtype=bool)
    garment[:, 2:] = True
    return LayerInputs(
        render=np.full((h, w, 3), 0.2) if render is None else render,
        body=np.full((h, w, 3), 0.9),
        arm_mask=arm,
        garment_mask=garment,
        arm_depth=np.full((h, w), arm_depth),
        garment_depth=np.full((h, w), garment_depth),
    )


class TestRelayer:
    """Tests pour relayer."""

    def test_only_arm_over_garment_pixels_change(self):
        inputs = _inputs()
        out = relayer(inputs)
        fix = relayer_pixels(inputs)

        assert fix.sum() == 2
        assert np.all(out[fix] == 0.9)
        assert np.array_equal(out[~fix], inputs.render[~fix])

    def test_arm_behind_garment_unchanged(self):
        inputs = _inputs(arm_depth=2.0, garment_depth=1.5)

        assert np.array_equal(relayer(inputs), inputs.render)

    def test_depth_guard(self):
        """Écart inférieur à δ : pas de correction."""
        inputs = _inputs(arm_depth=1.995, garment_depth=2.0)

        assert not relayer_pixels(inputs, depth_guard=0.01).any()
        assert relayer_pixels(inputs, depth_guard=0.001).sum() == 2

    def test_idempotent(self):
        inputs = _inputs()
        once = relayer(inputs)
        twice = relayer(_inputs(render=once))

        assert np.array_equal(once, twice)

    def test_input_not_modified(self):
        inputs = _inputs()
        relayer(inputs)

        assert np.all(inputs.render == 0.2)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            LayerInputs(np.zeros((4, 4, 3)), np.zeros((4, 4, 3)), np.zeros((4, 4)),
                        np.zeros((3, 4)), np.zeros((4, 4)), np.zeros((4, 4)))

    def test_mask_from_alpha(self):
        alpha = np.array([[[0.2], [0.8]], [[0.5], [0.51]]])

        assert garment_mask_from_alpha(alpha).tolist() == [[False, True], [False, True]]
