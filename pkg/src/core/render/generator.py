"""
Générateur G : encodeur convolutif, normalisation temporelle SPADE, décodeur,
fusion avec les features de fond par masque appris, raffinement vers le RGB.

Tenseurs en N × C × H × W ; la résolution doit être divisible par 32.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple

import torch
from torch import nn

from ..exceptions import ShapeMismatchError
from .spade import SPADE_HIDDEN, TemporalSpade

ENCODER_WIDTHS = (64, 128, 256, 512, 512)
FEATURE_CHANNELS = 32
DOWNSAMPLE = 2 ** len(ENCODER_WIDTHS)


@dataclass(frozen=True)
class GeneratorConfig:
    """
    Attributes:
        in_channels: Canaux du descripteur Q (178 par défaut, 64 sans mouvement)
        encoder_widths: Canaux des 5 convolutions stride 2
        feature_channels: Canaux de U et B̂
        spade_hidden: Canaux cachés des branches SPADE
    """

    in_channels: int = 178
    encoder_widths: Tuple[int, ...] = ENCODER_WIDTHS
    feature_channels: int = FEATURE_CHANNELS
    spade_hidden: int = SPADE_HIDDEN

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d["encoder_widths"] = list(self.encoder_widths)
        return d

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "GeneratorConfig":
        return cls(d["in_channels"], tuple(d["encoder_widths"]), d["feature_channels"], d["spade_hidden"])


class ResidualBlock(nn.Module):
    """x + conv(lrelu(conv(x)))."""

    def __init__(self, channels: int):
        super().__init__()
        self.conv1 = nn.Conv2d(channels, channels, kernel_size=3, padding=1)
        self.act = nn.LeakyReLU(0.2)
        self.conv2 = nn.Conv2d(channels, channels, kernel_size=3, padding=1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return x + self.conv2(self.act(self.conv1(x)))


class RefineHead(nn.Module):
    """Deux blocs résiduels puis projection 1×1 vers 3 canaux, sigmoïde."""

    def __init__(self, channels: int):
        super().__init__()
        self.blocks = nn.Sequential(ResidualBlock(channels), ResidualBlock(channels))
        self.project = nn.Conv2d(channels, 3, kernel_size=1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return torch.sigmoid(self.project(self.blocks(x)))


class Generator(nn.Module):
    """Rendu neuronal d'un vêtement à partir de deux descripteurs consécutifs et d'un fond."""

    def __init__(self, config: GeneratorConfig = GeneratorConfig()):
        super().__init__()
        self.config = config
        widths = config.encoder_widths

        enc = []
        c_in = config.in_channels
        for c in widths:
            enc += [nn.Conv2d(c_in, c, kernel_size=4, stride=2, padding=1), nn.LeakyReLU(0.2)]
            c_in = c
        self.encoder = nn.Sequential(*enc)

        self.temporal = TemporalSpade(widths[-1], config.spade_hidden)

        dec = []
        outs = list(widths[::-1][1:]) + [config.feature_channels]
        c_in = widths[-1]
        for k, c in enumerate(outs):
            dec.append(nn.ConvTranspose2d(c_in, c, kernel_size=4, stride=2, padding=1))
            if k < len(outs) - 1:
                dec.append(nn.LeakyReLU(0.2))
            c_in = c
        self.decoder = nn.Sequential(*dec)

        self.background = nn.Sequential(
            nn.Conv2d(3, config.feature_channels, kernel_size=3, padding=1),
            nn.LeakyReLU(0.2),
            nn.Conv2d(config.feature_channels, config.feature_channels, kernel_size=3, padding=1),
        )
        self.mask_head = nn.Conv2d(config.feature_channels, 1, kernel_size=1)
        self.refine_head = RefineHead(config.feature_channels)

    @property
    def downsample(self) -> int:
        return 2 ** len(self.config.encoder_widths)

    def encode(self, q: torch.Tensor) -> torch.Tensor:
        """
        Raises:
            ShapeMismatchError: Canaux ou résolution incompatibles
        """
        if q.shape[1] != self.config.in_channels:
            raise ShapeMismatchError(
                f"encode: {q.shape[1]} canaux, le générateur attend {self.config.in_channels}"
            )
        if q.shape[2] % self.downsample or q.shape[3] % self.downsample:
            raise ShapeMismatchError(
                f"encode: résolution {tuple(q.shape[2:])} non divisible par {self.downsample}"
            )
        return self.encoder(q)

    def temporal_normalize(self, z_t: torch.Tensor, z_prev: torch.Tensor) -> torch.Tensor:
        return self.temporal(z_t, z_prev)

    def decode_and_blend(
        self,
        z: torch.Tensor,
        background: torch.Tensor,
        alpha: Optional[torch.Tensor] = None,
    ) -> Tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
        """
        Returns:
            (U, A, composite) avec composite = (1 - A) · B̂ + A · U

        Args:
            alpha: Masque imposé (N, 1, H, W) ; sinon prédit par la tête de masque
        """
        u = self.decoder(z)
        if background.shape[2:] != u.shape[2:]:
            raise ShapeMismatchError(
                f"decode_and_blend: fond {tuple(background.shape[2:])}, sortie {tuple(u.shape[2:])}"
            )
        b_hat = self.background(background)
        a = torch.sigmoid(self.mask_head(u)) if alpha is None else alpha
        composite = (1.0 - a) * b_hat + a * u
        return u, a, composite

    def refine(self, composite: torch.Tensor) -> torch.Tensor:
        return self.refine_head(composite)

    def forward(
        self,
        q_t: torch.Tensor,
        q_prev: Optional[torch.Tensor],
        background: torch.Tensor,
    ) -> Dict[str, torch.Tensor]:
        """
        Rendu complet ; q_prev = None à la première frame (Q_{t-1} := Q_t).

        Returns:
            {"rgb": R, "alpha": A, "features": U}
        """
        z_t = self.encode(q_t)
        z_prev = z_t if q_prev is None else self.encode(q_prev)
        z = self.temporal_normalize(z_t, z_prev)
        u, a, composite = self.decode_and_blend(z, background)
        return {"rgb": self.refine(composite), "alpha": a, "features": u}

    def refinement_parameters(self):
        """Paramètres dégelés lors de l'adaptation à un nouveau fond."""
        return self.refine_head.parameters()
