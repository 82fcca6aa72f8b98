"""
Re-superposition bras / vêtement en espace image.

Un pixel est corrigé (pris dans le rendu du corps seul) si le bras y est visible,
le vêtement y est présent et le bras est plus proche de la caméra que le proxy
grossier d'au moins δ. Tous les autres pixels sont inchangés.
"""

from dataclasses import dataclass

import numpy as np

from ..exceptions import ShapeMismatchError

DEPTH_GUARD = 0.01
ALPHA_THRESHOLD = 0.5


@dataclass(frozen=True)
class LayerInputs:
    """
    Attributes:
        render: (H, W, 3) rendu final R
        body: (H, W, 3) rendu du corps seul B
        arm_mask: (H, W) bool
        garment_mask: (H, W) bool (A seuillé)
        arm_depth: (H, W) profondeur caméra des bras
        garment_depth: (H, W) profondeur caméra du proxy grossier
    """

    render: np.ndarray
    body: np.ndarray
    arm_mask: np.ndarray
    garment_mask: np.ndarray
    arm_depth: np.ndarray
    garment_depth: np.ndarray

    def __post_init__(self) -> None:
        hw = self.render.shape[:2]
        for name in ("body", "arm_mask", "garment_mask", "arm_depth", "garment_depth"):
            if getattr(self, name).shape[:2] != hw:
                raise ShapeMismatchError(f"relayer: {name} {getattr(self, name).shape[:2]} ≠ rendu {hw}")


def garment_mask_from_alpha(alpha: np.ndarray, threshold: float = ALPHA_THRESHOLD) -> np.ndarray:
    """Masque binaire du vêtement à partir du masque appris A (H, W) ou (H, W, 1)."""
    a = np.asarray(alpha)
    if a.ndim == 3:
        a = a[..., 0]
    return a > threshold


def relayer_pixels(inputs: LayerInputs, depth_guard: float = DEPTH_GUARD) -> np.ndarray:
    """Pixels à corriger : bras ∧ vêtement ∧ z_bras < z_vêtement - δ."""
    arm = inputs.arm_mask.astype(bool)
    garment = inputs.garment_mask.astype(bool)
    return arm & garment & (inputs.arm_depth < inputs.garment_depth - depth_guard)


def relayer(inputs: LayerInputs, depth_guard: float = DEPTH_GUARD) -> np.ndarray:
    """Rendu corrigé (H, W, 3) ; copie de R hors des pixels corrigés."""
    out = np.array(inputs.render, copy=True)
    fix = relayer_pixels(inputs, depth_guard)
    out[fix] = inputs.body[fix]
    return out
