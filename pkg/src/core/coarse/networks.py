"""
Réseaux Joint2Coarse : auto-encodeur de forme (ζ_E, ζ_D) et encodeur de mouvement (ζ_M).

Perceptrons multicouches entièrement connectés, ReLU, dropout 0.05 :
- encodeur de forme : V·3 → 2048 → 1024 → 512 → 256 → 128 → 64
- décodeur de forme : symétrique 64 → … → V·3
- encodeur de mouvement : 969 → 512 → 256 → 128 → 64
"""

from typing import List, Sequence

import numpy as np
import torch
from torch import nn

from ..exceptions import ShapeMismatchError
from ..garment.types import MotionDescriptor

LATENT_DIM = 64
SHAPE_HIDDEN = (2048, 1024, 512, 256, 128)
MOTION_HIDDEN = (512, 256, 128)
DEFAULT_DROPOUT = 0.05


def mlp(sizes: Sequence[int], dropout: float) -> nn.Sequential:
    """Empilement Linear → ReLU → Dropout ; la dernière couche reste linéaire."""
    layers: List[nn.Module] = []
    for k in range(len(sizes) - 1):
        layers.append(nn.Linear(sizes[k], sizes[k + 1]))
        if k < len(sizes) - 2:
            layers.append(nn.ReLU())
            if dropout > 0:
                layers.append(nn.Dropout(dropout))
    return nn.Sequential(*layers)


def layer_sizes(model: nn.Module) -> List[int]:
    """Largeurs successives des couches Linear (entrée puis sorties)."""
    linears = [m for m in model.modules() if isinstance(m, nn.Linear)]
    return [linears[0].in_features] + [m.out_features for m in linears] if linears else []


def expected_parameter_count(sizes: Sequence[int]) -> int:
    """Nombre de paramètres (poids + biais) d'un MLP de largeurs `sizes`."""
    return sum(a * b + b for a, b in zip(sizes[:-1], sizes[1:]))


class ShapeCodec(nn.Module):
    """Auto-encodeur des sommets normalisés du proxy grossier."""

    def __init__(self, num_vertices: int, latent_dim: int = LATENT_DIM,
                 hidden: Sequence[int] = SHAPE_HIDDEN, dropout: float = DEFAULT_DROPOUT):
        super().__init__()
        self.num_vertices = int(num_vertices)
        self.latent_dim = int(latent_dim)
        sizes = [self.num_vertices * 3, *hidden, self.latent_dim]
        self.encoder = mlp(sizes, dropout)
        self.decoder = mlp(sizes[::-1], dropout)

    def encode(self, x: torch.Tensor) -> torch.Tensor:
        return self.encoder(x.reshape(x.shape[0], -1))

    def decode(self, z: torch.Tensor) -> torch.Tensor:
        return self.decoder(z).reshape(z.shape[0], self.num_vertices, 3)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.decode(self.encode(x))


class MotionEncoder(nn.Module):
    """Projette le descripteur de mouvement aplati dans l'espace latent du codec."""

    def __init__(self, input_dim: int = 969, latent_dim: int = LATENT_DIM,
                 hidden: Sequence[int] = MOTION_HIDDEN, dropout: float = DEFAULT_DROPOUT):
        super().__init__()
        self.input_dim = int(input_dim)
        self.latent_dim = int(latent_dim)
        self.net = mlp([self.input_dim, *hidden, self.latent_dim], dropout)

    def forward(self, m: torch.Tensor) -> torch.Tensor:
        return self.net(m)


def _as_batch(array: np.ndarray, width: int, what: str) -> torch.Tensor:
    flat = np.asarray(array, dtype=np.float32).reshape(-1)
    if flat.size != width:
        raise ShapeMismatchError(f"{what}: {flat.size} valeurs, attendu {width}")
    return torch.from_numpy(flat).unsqueeze(0)


@torch.no_grad()
def encode_shape(codec: ShapeCodec, vertices: np.ndarray) -> np.ndarray:
    """Latent (64,) de sommets normalisés (V, 3), en mode évaluation."""
    codec.eval()
    return codec.encode(_as_batch(vertices, codec.num_vertices * 3, "encode_shape"))[0].numpy()


@torch.no_grad()
def decode_shape(codec: ShapeCodec, latent: np.ndarray) -> np.ndarray:
    """Sommets normalisés (V, 3) ; l'appelant dénormalise."""
    codec.eval()
    return codec.decode(_as_batch(latent, codec.latent_dim, "decode_shape"))[0].numpy().astype(np.float64)


@torch.no_grad()
def encode_motion(menc: MotionEncoder, descriptor: MotionDescriptor) -> np.ndarray:
    """Latent (64,) d'un descripteur de mouvement."""
    menc.eval()
    return menc(_as_batch(descriptor.flatten(), menc.input_dim, "encode_motion"))[0].numpy()
