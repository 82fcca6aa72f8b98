"""
Pertes adversariales, de feature matching et pondération totale du générateur.

Les logits du discriminateur sont ramenés en probabilités par sigmoïde ; chaque log est
borné par ε = 1e-7 (entropie croisée binaire par patch, moyenne).
"""

from dataclasses import dataclass
from typing import List, Tuple

import torch
import torch.nn.functional as F

from .discriminator import PatchDiscriminator

BCE_EPS = 1e-7


@dataclass(frozen=True)
class LossWeights:
    """λ1 (feature matching), λ2 (perceptuelle), λ3 (adversariale)."""

    feat: float = 5.0
    percept: float = 10.0
    gan: float = 0.5

    def __post_init__(self) -> None:
        for name in ("feat", "percept", "gan"):
            if getattr(self, name) < 0:
                raise ValueError(f"Poids {name} négatif: {getattr(self, name)}")


def bce_real(logits: torch.Tensor, eps: float = BCE_EPS) -> torch.Tensor:
    """-log D, moyenné sur les patchs."""
    return -torch.log(torch.sigmoid(logits).clamp(eps, 1.0)).mean()


def bce_fake(logits: torch.Tensor, eps: float = BCE_EPS) -> torch.Tensor:
    """-log(1 - D), moyenné sur les patchs."""
    return -torch.log((1.0 - torch.sigmoid(logits)).clamp(eps, 1.0)).mean()


def d_loss(
    disc: PatchDiscriminator,
    rendered: torch.Tensor,
    prev_frame: torch.Tensor,
    frame: torch.Tensor,
    next_frame: torch.Tensor,
) -> torch.Tensor:
    """
    L_D1 + L_D2 ; paires réelles [I_t, I_{t-1}], [I_{t+1}, I_t], paires fausses avec R_t.

    R_t est détaché : aucun gradient ne remonte au générateur.
    """
    fake = rendered.detach()
    real_1, _ = disc(frame, prev_frame)
    fake_1, _ = disc(fake, prev_frame)
    real_2, _ = disc(next_frame, frame)
    fake_2, _ = disc(next_frame, fake)
    return bce_real(real_1) + bce_fake(fake_1) + bce_real(real_2) + bce_fake(fake_2)


def g_gan_loss(
    disc: PatchDiscriminator,
    rendered: torch.Tensor,
    prev_frame: torch.Tensor,
    next_frame: torch.Tensor,
) -> torch.Tensor:
    """-log D[R_t, I_{t-1}] - log D[I_{t+1}, R_t] (forme non saturante)."""
    fake_1, _ = disc(rendered, prev_frame)
    fake_2, _ = disc(next_frame, rendered)
    return bce_real(fake_1) + bce_real(fake_2)


def _layer_l1(fake: List[torch.Tensor], real: List[torch.Tensor]) -> torch.Tensor:
    return sum(F.l1_loss(f, r.detach()) for f, r in zip(fake, real))


def feature_matching_loss(
    disc: PatchDiscriminator,
    rendered: torch.Tensor,
    prev_frame: torch.Tensor,
    frame: torch.Tensor,
    next_frame: torch.Tensor,
) -> torch.Tensor:
    """Σ_i ‖D^i[R_t, I_{t-1}] - D^i[I_t, I_{t-1}]‖₁ + Σ_i ‖D^i[I_{t+1}, R_t] - D^i[I_{t+1}, I_t]‖₁."""
    _, fake_1 = disc(rendered, prev_frame)
    _, real_1 = disc(frame, prev_frame)
    _, fake_2 = disc(next_frame, rendered)
    _, real_2 = disc(next_frame, frame)
    return _layer_l1(fake_1, real_1) + _layer_l1(fake_2, real_2)


def generator_adversarial_losses(
    disc: PatchDiscriminator,
    rendered: torch.Tensor,
    prev_frame: torch.Tensor,
    frame: torch.Tensor,
    next_frame: torch.Tensor,
) -> Tuple[torch.Tensor, torch.Tensor]:
    """
    (L_feat, L_GAN) avec une seule passe du discriminateur par paire.

    Équivaut à feature_matching_loss et g_gan_loss appelées séparément.
    """
    fake_logits_1, fake_1 = disc(rendered, prev_frame)
    fake_logits_2, fake_2 = disc(next_frame, rendered)
    with torch.no_grad():
        _, real_1 = disc(frame, prev_frame)
        _, real_2 = disc(next_frame, frame)
    feat = _layer_l1(fake_1, real_1) + _layer_l1(fake_2, real_2)
    gan = bce_real(fake_logits_1) + bce_real(fake_logits_2)
    return feat, gan


def g_total_loss(weights: LossWeights, feat, percept, gan):
    """λ1 · L_feat + λ2 · L_percept + λ3 · L_GAN."""
    return weights.feat * feat + weights.percept * percept + weights.gan * gan


def l1_objective(rendered: torch.Tensor, target: torch.Tensor) -> torch.Tensor:
    """Perte photométrique L1 seule (objectif de référence sans discriminateur)."""
    return F.l1_loss(rendered, target)
