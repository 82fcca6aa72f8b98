"""
Features de mouvement : par pixel couvert et par articulation, exp(-‖v - M_j‖² / σ).

Les cartes des frames passées réutilisent la correspondance pixel → (triangle, bary)
de la frame t, réévaluée sur les sommets de la frame τ.
"""

from typing import Union

import numpy as np

from ..garment.descriptor import history_indices
from ..garment.types import MeshSequence, MotionClip, SkeletonPose
from ..raster.gbuffer import GBuffer, world_positions_at


def motion_feature_map(
    world_pos: np.ndarray,
    mask: np.ndarray,
    pose: SkeletonPose,
    sigma: float,
) -> np.ndarray:
    """
    Carte (H, W, J) ; nulle hors masque, dans (0, 1] sur le masque.

    Raises:
        ValueError: sigma non positif
    """
    if not sigma > 0:
        raise ValueError(f"sigma doit être > 0, reçu {sigma}")
    diff = world_pos[:, :, None, :] - pose.joints[None, None, :, :]
    d2 = np.einsum("hwjc,hwjc->hwj", diff, diff)
    return np.exp(-d2 / sigma) * np.asarray(mask, dtype=np.float64)[:, :, None]


def stack_motion_features(
    gbuffer: GBuffer,
    coarse: Union[MeshSequence, np.ndarray],
    clip: MotionClip,
    t: int,
    stride: int = 2,
    maps: int = 6,
    sigma: float = 1.0,
) -> np.ndarray:
    """
    Concatène les cartes des frames {t, t-stride, …} (indices ramenés à 0), frame courante en premier.

    Args:
        gbuffer: G-buffer rastérisé à la frame t
        coarse: Sommets du proxy par frame (MeshSequence ou tableau (T, V, 3))

    Returns:
        (H, W, J · maps)
    """
    vertices = coarse.per_frame_vertices if isinstance(coarse, MeshSequence) else np.asarray(coarse)
    out = []
    for tau in history_indices(t, stride, maps, clamp=True):
        pos = world_positions_at(gbuffer, vertices[tau])
        out.append(motion_feature_map(pos, gbuffer.mask, clip.pose(int(tau)), sigma))
    return np.concatenate(out, axis=-1)
