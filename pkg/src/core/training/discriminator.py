"""
Discriminateur temporel par patchs : deux frames RGB consécutives concaténées (6 canaux),
carte de logits dont chaque neurone voit un patch 70 × 70.
"""

from typing import List, Sequence, Tuple

import torch
from torch import nn

from ..exceptions import ShapeMismatchError

# (canaux de sortie, stride, normalisation) ; noyau 4, padding 1
PATCH_LAYERS: Tuple[Tuple[int, int, bool], ...] = (
    (64, 2, False),
    (128, 2, True),
    (256, 2, True),
    (512, 1, True),
    (1, 1, False),
)
KERNEL_SIZE = 4


def receptive_field(kernels: Sequence[int], strides: Sequence[int]) -> int:
    """Champ réceptif d'un neurone de sortie d'une pile de convolutions."""
    rf = 1
    for k, s in zip(reversed(kernels), reversed(strides)):
        rf = rf * s + (k - s)
    return rf


class PatchDiscriminator(nn.Module):
    """
    Args:
        in_channels: 6 (paire de frames RGB)
        layers: Spécification (canaux, stride, instance norm) de chaque convolution
    """

    def __init__(self, in_channels: int = 6, layers: Sequence[Tuple[int, int, bool]] = PATCH_LAYERS):
        super().__init__()
        self.in_channels = in_channels
        self.layer_spec = tuple(layers)
        blocks = []
        c_in = in_channels
        for k, (c, stride, norm) in enumerate(self.layer_spec):
            modules: List[nn.Module] = [nn.Conv2d(c_in, c, kernel_size=KERNEL_SIZE, stride=stride, padding=1)]
            if norm:
                modules.append(nn.InstanceNorm2d(c))
            if k < len(self.layer_spec) - 1:
                modules.append(nn.LeakyReLU(0.2))
            blocks.append(nn.Sequential(*modules))
            c_in = c
        self.blocks = nn.ModuleList(blocks)

    @property
    def receptive_field(self) -> int:
        return receptive_field([KERNEL_SIZE] * len(self.layer_spec), [s for _, s, _ in self.layer_spec])

    def forward(self, first: torch.Tensor, second: torch.Tensor) -> Tuple[torch.Tensor, List[torch.Tensor]]:
        """
        Args:
            first, second: (N, 3, H, W), concaténées dans cet ordre

        Returns:
            (logits (N, 1, h, w), activations intermédiaires D^i)
        """
        x = torch.cat([first, second], dim=1)
        if x.shape[1] != self.in_channels:
            raise ShapeMismatchError(f"discriminateur: {x.shape[1]} canaux, attendu {self.in_channels}")
        features = []
        for block in self.blocks[:-1]:
            x = block(x)
            features.append(x)
        return self.blocks[-1](x), features
