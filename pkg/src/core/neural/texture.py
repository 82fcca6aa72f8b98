"""
Texture neuronale multi-échelle : 4 niveaux × 16 canaux, concaténés (64 canaux).

Convention UV : u → colonnes, v → lignes (v = 0 première ligne), centres de texels en
((i + 0.5) / W, (j + 0.5) / H). Échantillonnage bilinéaire F.grid_sample
(align_corners=False, bords répliqués) ; les gradients atteignent les texels.
"""

from typing import List

import numpy as np
import torch
import torch.nn.functional as F
from torch import nn

from ..garment.constants import TEXTURE_CHANNELS, TEXTURE_LEVELS
from ..raster.gbuffer import GBuffer

INIT_RANGE = 0.05


class NeuralTexture(nn.Module):
    """
    Hiérarchie de grilles apprenables ; niveau ℓ de taille (R / 2^ℓ)².

    Args:
        resolution: Résolution R du niveau 0 (divisible par 2^(levels-1))
        levels: Nombre de niveaux
        channels: Canaux par niveau
        seed: Graine de l'initialisation uniforme dans [-0.05, 0.05]
    """

    def __init__(self, resolution: int = 256, levels: int = TEXTURE_LEVELS,
                 channels: int = TEXTURE_CHANNELS, seed: int = 0):
        super().__init__()
        if resolution % (2 ** (levels - 1)) != 0:
            raise ValueError(f"resolution ({resolution}) doit être divisible par {2 ** (levels - 1)}")
        self.resolution = int(resolution)
        self.num_levels = int(levels)
        self.channels = int(channels)
        generator = torch.Generator().manual_seed(seed)
        self.levels = nn.ParameterList([
            nn.Parameter(
                (torch.rand(1, channels, resolution >> lvl, resolution >> lvl, generator=generator) * 2 - 1)
                * INIT_RANGE
            )
            for lvl in range(levels)
        ])

    @property
    def feature_dim(self) -> int:
        return self.num_levels * self.channels

    def sample(self, uv: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
        """
        Échantillonne toutes les couches.

        Args:
            uv: (N, H, W, 2) dans [0, 1]²
            mask: (N, H, W) couverture

        Returns:
            (N, 64, H, W), niveau 0 en premier, nul hors masque
        """
        grid = uv.to(self.levels[0].dtype) * 2.0 - 1.0
        n = grid.shape[0]
        out: List[torch.Tensor] = []
        for level in self.levels:
            out.append(F.grid_sample(level.expand(n, -1, -1, -1), grid, mode="bilinear",
                                     padding_mode="border", align_corners=False))
        features = torch.cat(out, dim=1)
        return features * mask.to(features.dtype).unsqueeze(1)


def sample_texture(texture: NeuralTexture, gbuffer: GBuffer) -> torch.Tensor:
    """
    Image de features (H, W, 64) échantillonnée au travers du G-buffer (différentiable).
    """
    uv = torch.from_numpy(np.ascontiguousarray(gbuffer.uv)).unsqueeze(0)
    mask = torch.from_numpy(gbuffer.mask).unsqueeze(0)
    return texture.sample(uv, mask)[0].permute(1, 2, 0)
