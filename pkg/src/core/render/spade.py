"""
Normalisation spatialement adaptative (SPADE) et bloc de normalisation temporelle.

w̃[c, x, y] = γ[c, x, y] · (w[c, x, y] - μ_c) / σ_c + β[c, x, y]

μ_c, σ_c : statistiques d'instance sur l'étendue spatiale de w (σ_c + 1e-5).
γ et β sont produits par deux branches convolutives à partir de la carte de condition.
"""

import torch
import torch.nn.functional as F
from torch import nn

from ..exceptions import ShapeMismatchError

SPADE_EPS = 1e-5
SPADE_HIDDEN = 128


def instance_normalize(w: torch.Tensor, eps: float = SPADE_EPS) -> torch.Tensor:
    """(w - μ_c) / (σ_c + eps), statistiques par échantillon et par canal."""
    mu = w.mean(dim=(2, 3), keepdim=True)
    sigma = w.var(dim=(2, 3), keepdim=True, unbiased=False).clamp_min(1e-12).sqrt()
    return (w - mu) / (sigma + eps)


class SpadeBlock(nn.Module):
    """Normalisation d'instance modulée par γ, β dépendant de la position."""

    def __init__(self, channels: int, condition_channels: int, hidden: int = SPADE_HIDDEN):
        super().__init__()
        self.shared = nn.Sequential(
            nn.Conv2d(condition_channels, hidden, kernel_size=3, padding=1),
            nn.ReLU(),
        )
        self.gamma = nn.Conv2d(hidden, channels, kernel_size=3, padding=1)
        self.beta = nn.Conv2d(hidden, channels, kernel_size=3, padding=1)
        # γ ≈ 1 au départ
        nn.init.constant_(self.gamma.bias, 1.0)

    def forward(self, w: torch.Tensor, condition: torch.Tensor) -> torch.Tensor:
        if condition.shape[2:] != w.shape[2:]:
            condition = F.interpolate(condition, size=w.shape[2:], mode="nearest")
        h = self.shared(condition)
        return self.gamma(h) * instance_normalize(w) + self.beta(h)


def spade_apply(block: SpadeBlock, w: torch.Tensor, condition: torch.Tensor) -> torch.Tensor:
    return block(w, condition)


class TemporalSpade(nn.Module):
    """
    Z̃ = SPADE(I(SPADE(I(Z)))) + SPADE(I(Z)), condition = [Z_t ∥ Z_{t-1}].
    """

    def __init__(self, channels: int, hidden: int = SPADE_HIDDEN):
        super().__init__()
        self.channels = channels
        self.inner = SpadeBlock(channels, 2 * channels, hidden)
        self.outer = SpadeBlock(channels, 2 * channels, hidden)

    def forward(self, z_t: torch.Tensor, z_prev: torch.Tensor) -> torch.Tensor:
        if z_t.shape != z_prev.shape:
            raise ShapeMismatchError(
                f"temporal_normalize: latents {tuple(z_t.shape)} et {tuple(z_prev.shape)} différents"
            )
        condition = torch.cat([z_t, z_prev], dim=1)
        first = self.inner(z_t, condition)
        return self.outer(first, condition) + first
