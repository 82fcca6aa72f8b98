"""
Extracteur de features perceptuelles multi-couches (gelé) et perte perceptuelle.

Modes :
- "random" : pile de convolutions aléatoires à graine fixe, sans poids à télécharger
- "vgg19"  : VGG19 pré-entraîné (torchvision, import paresseux)
"""

import logging
from typing import List, Sequence

import torch
import torch.nn.functional as F
from torch import nn

from ..exceptions import ShapeMismatchError

logger = logging.getLogger(__name__)

PERCEPTUAL_MODES = ("random", "vgg19")
RANDOM_WIDTHS = (16, 32, 64)
# Sorties relu1_2, relu2_2, relu3_4, relu4_4 de vgg19.features
VGG_TAPS = (3, 8, 17, 26)
IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)


def _random_stack(seed: int, widths: Sequence[int]) -> nn.Sequential:
    generator = torch.Generator().manual_seed(seed)
    layers: List[nn.Module] = []
    c_in = 3
    for k, c in enumerate(widths):
        conv = nn.Conv2d(c_in, c, kernel_size=3, stride=1 if k == 0 else 2, padding=1)
        bound = (6.0 / (9 * c_in)) ** 0.5
        with torch.no_grad():
            conv.weight.copy_((torch.rand(conv.weight.shape, generator=generator) * 2 - 1) * bound)
            conv.bias.zero_()
        layers += [conv, nn.ReLU()]
        c_in = c
    return nn.Sequential(*layers)


def _vgg19_stack() -> nn.Sequential:
    try:
        from torchvision.models import VGG19_Weights, vgg19
    except ImportError as e:
        raise ImportError("Le mode perceptuel 'vgg19' nécessite torchvision") from e
    return vgg19(weights=VGG19_Weights.DEFAULT).features[: VGG_TAPS[-1] + 1]


class PerceptualExtractor(nn.Module):
    """
    Args:
        mode: "random" ou "vgg19"
        seed: Graine de la pile aléatoire
    """

    def __init__(self, mode: str = "random", seed: int = 0):
        super().__init__()
        if mode not in PERCEPTUAL_MODES:
            raise ValueError(f"Mode perceptuel inconnu: {mode} (attendu: {', '.join(PERCEPTUAL_MODES)})")
        self.mode = mode
        if mode == "random":
            self.features = _random_stack(seed, RANDOM_WIDTHS)
            self.taps = tuple(2 * k + 1 for k in range(len(RANDOM_WIDTHS)))
        else:
            self.features = _vgg19_stack()
            self.taps = VGG_TAPS
            self.register_buffer("mean", torch.tensor(IMAGENET_MEAN).view(1, 3, 1, 1))
            self.register_buffer("std", torch.tensor(IMAGENET_STD).view(1, 3, 1, 1))
        for p in self.features.parameters():
            p.requires_grad_(False)
        self.eval()
        logger.debug("Extracteur perceptuel '%s', %d couches prélevées", mode, len(self.taps))

    def train(self, mode: bool = True) -> "PerceptualExtractor":
        # reste en mode évaluation
        return super().train(False)

    def forward(self, image: torch.Tensor) -> List[torch.Tensor]:
        x = image
        if self.mode == "vgg19":
            x = (x - self.mean) / self.std
        out = []
        for k, layer in enumerate(self.features):
            x = layer(x)
            if k in self.taps:
                out.append(x)
        return out


def perceptual_loss(extractor: PerceptualExtractor, rendered: torch.Tensor, target: torch.Tensor) -> torch.Tensor:
    """
    Σ_i ‖Φ^i[R] - Φ^i[I]‖₁ + ‖R - I‖₁ (moyennes des écarts absolus).

    Raises:
        ShapeMismatchError: Dimensions différentes
    """
    if rendered.shape != target.shape:
        raise ShapeMismatchError(
            f"perceptual_loss: {tuple(rendered.shape)} et {tuple(target.shape)} différents"
        )
    loss = F.l1_loss(rendered, target)
    for fr, ft in zip(extractor(rendered), extractor(target)):
        loss = loss + F.l1_loss(fr, ft)
    return loss
