"""
Carte de descripteurs Q = [F ∥ S] : features neuronales puis features de mouvement.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
import torch

from ..exceptions import ShapeMismatchError
from ..garment.constants import NEURAL_FEATURE_DIM


@dataclass
class DescriptorImage:
    """
    Attributes:
        pixels: (H, W, C) tenseur, C = 64 (+ J · maps si features de mouvement)
        mask: (H, W) tenseur booléen
    """

    pixels: torch.Tensor
    mask: torch.Tensor

    @property
    def channels(self) -> int:
        return int(self.pixels.shape[-1])

    def to_nchw(self) -> torch.Tensor:
        return self.pixels.permute(2, 0, 1).unsqueeze(0)


def descriptor_channels(num_joints: int, maps: int, motion_features: bool = True) -> int:
    """64 + J · maps (178 par défaut), 64 sans features de mouvement."""
    return NEURAL_FEATURE_DIM + (num_joints * maps if motion_features else 0)


def _as_tensor(x: Union[np.ndarray, torch.Tensor], like: torch.Tensor) -> torch.Tensor:
    if isinstance(x, torch.Tensor):
        return x.to(like.dtype)
    return torch.from_numpy(np.ascontiguousarray(x)).to(like.dtype)


def build_descriptor(
    features: torch.Tensor,
    motion: Optional[Union[np.ndarray, torch.Tensor]],
    mask: Union[np.ndarray, torch.Tensor],
) -> DescriptorImage:
    """
    Concatène les canaux (features neuronales d'abord) et annule tout hors masque.

    Args:
        features: (H, W, 64)
        motion: (H, W, J · maps) ou None (ablation sans features de mouvement)
        mask: (H, W)

    Raises:
        ShapeMismatchError: Dimensions spatiales différentes
    """
    mask_t = (mask if isinstance(mask, torch.Tensor) else torch.from_numpy(np.asarray(mask))).bool()
    parts = [features]
    if motion is not None:
        motion_t = _as_tensor(motion, features)
        if motion_t.shape[:2] != features.shape[:2]:
            raise ShapeMismatchError(
                f"build_descriptor: features {tuple(features.shape[:2])} et mouvement {tuple(motion_t.shape[:2])}"
            )
        parts.append(motion_t)
    if tuple(mask_t.shape) != tuple(features.shape[:2]):
        raise ShapeMismatchError(
            f"build_descriptor: masque {tuple(mask_t.shape)} et features {tuple(features.shape[:2])}"
        )
    pixels = torch.cat(parts, dim=-1) * mask_t.to(features.dtype).unsqueeze(-1)
    return DescriptorImage(pixels, mask_t)


def split_descriptor(
    descriptor: DescriptorImage,
    feature_dim: int = NEURAL_FEATURE_DIM,
) -> Tuple[torch.Tensor, Optional[torch.Tensor]]:
    """Inverse de build_descriptor : (features, mouvement ou None)."""
    features = descriptor.pixels[..., :feature_dim]
    motion = descriptor.pixels[..., feature_dim:] if descriptor.channels > feature_dim else None
    return features, motion
