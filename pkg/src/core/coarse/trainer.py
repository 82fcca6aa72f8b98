"""
Entraînement Joint2Coarse en deux temps : auto-encodeur de forme, puis encodeur de
mouvement (codec figé). RMSprop, erreur quadratique moyenne, meilleure époque conservée.
"""

from __future__ import annotations

import copy
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd
import torch
import torch.nn.functional as F

from ..exceptions import NumericalDivergenceError, ShapeMismatchError
from ..garment.constants import DESCRIPTOR_COUNT, DESCRIPTOR_STRIDE
from ..garment.descriptor import make_descriptor_clamped
from ..garment.types import MeshSequence, MotionClip
from .networks import DEFAULT_DROPOUT, MotionEncoder, ShapeCodec
from .normalizer import CoarseNormalizer

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoarseDataset:
    """
    Séquence simulée du proxy grossier et clip associé.

    Attributes:
        coarse: Sommets par frame (T frames)
        clip: Clip de mouvement (T frames)
        stride: Pas du descripteur de mouvement
        count: Nombre de frames du descripteur
    """

    coarse: MeshSequence
    clip: MotionClip
    stride: int = DESCRIPTOR_STRIDE
    count: int = DESCRIPTOR_COUNT

    def __post_init__(self) -> None:
        if len(self.coarse) != len(self.clip):
            raise ShapeMismatchError(
                f"Proxy grossier ({len(self.coarse)} frames) et clip ({len(self.clip)} frames) incohérents"
            )

    def __len__(self) -> int:
        return len(self.clip)

    def normalizer(self) -> CoarseNormalizer:
        return CoarseNormalizer.from_rest_mesh(self.coarse.topology)

    def normalized_vertices(self, normalizer: CoarseNormalizer) -> np.ndarray:
        roots = self.clip.joints[:, self.clip.root_index]
        return np.stack([
            normalizer.normalize(self.coarse.frame(t), roots[t]) for t in range(len(self))
        ])

    def descriptors(self) -> np.ndarray:
        return np.stack([
            make_descriptor_clamped(self.clip, t, self.stride, self.count).flatten()
            for t in range(len(self))
        ])


def _fit(
    model: torch.nn.Module,
    inputs: torch.Tensor,
    targets: torch.Tensor,
    forward,
    epochs: int,
    lr: float,
    batch_size: int,
    seed: int,
    label: str,
) -> Tuple[torch.nn.Module, pd.DataFrame]:
    """Boucle RMSprop commune ; renvoie le modèle de meilleure époque et l'historique."""
    optimizer = torch.optim.RMSprop(model.parameters(), lr=lr)
    generator = torch.Generator().manual_seed(seed)
    n = inputs.shape[0]
    best_loss, best_state = float("inf"), copy.deepcopy(model.state_dict())
    rows = []

    for epoch in range(1, epochs + 1):
        model.train()
        perm = torch.randperm(n, generator=generator)
        total = 0.0
        for start in range(0, n, batch_size):
            idx = perm[start:start + batch_size]
            loss = F.mse_loss(forward(model, inputs[idx]), targets[idx])
            if not torch.isfinite(loss):
                raise NumericalDivergenceError(
                    f"Perte non finie pendant l'entraînement {label}", index=epoch,
                    diagnostics={"batch": idx.tolist()},
                )
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            total += float(loss) * len(idx)

        model.eval()
        with torch.no_grad():
            eval_loss = float(F.mse_loss(forward(model, inputs), targets))
        rows.append({"epoch": epoch, "train_loss": total / n, "eval_loss": eval_loss})
        if eval_loss < best_loss:
            best_loss, best_state = eval_loss, copy.deepcopy(model.state_dict())
        if epoch == 1 or epoch % max(1, epochs // 10) == 0:
            logger.info("%s époque %d/%d: train=%.6f eval=%.6f", label, epoch, epochs, total / n, eval_loss)

    model.load_state_dict(best_state)
    model.eval()
    return model, pd.DataFrame(rows)


def train_codec(
    dataset: CoarseDataset,
    epochs: int = 500,
    lr: float = 1e-3,
    batch_size: int = 16,
    dropout: float = DEFAULT_DROPOUT,
    seed: int = 0,
    normalizer: CoarseNormalizer | None = None,
) -> Tuple[ShapeCodec, pd.DataFrame]:
    """
    Entraîne l'auto-encodeur de forme sur les sommets normalisés.

    Returns:
        (codec en mode évaluation, historique epoch/train_loss/eval_loss)

    Raises:
        NumericalDivergenceError: Perte non finie (index = époque)
    """
    normalizer = normalizer or dataset.normalizer()
    x = torch.from_numpy(dataset.normalized_vertices(normalizer).astype(np.float32))
    torch.manual_seed(seed)
    codec = ShapeCodec(dataset.coarse.topology.num_vertices, dropout=dropout)
    return _fit(codec, x, x, lambda m, b: m(b), epochs, lr, batch_size, seed, "codec")


def train_motion_encoder(
    dataset: CoarseDataset,
    codec: ShapeCodec,
    epochs: int = 500,
    lr: float = 1e-3,
    batch_size: int = 16,
    dropout: float = DEFAULT_DROPOUT,
    seed: int = 0,
    normalizer: CoarseNormalizer | None = None,
) -> Tuple[MotionEncoder, pd.DataFrame]:
    """
    Entraîne ζ_M pour que ζ_M(M̂_t) ≈ ζ_E(V^c_t), le codec restant figé.

    Les cibles sont calculées sans gradient ; le mode et les drapeaux requires_grad du
    codec appelant ne sont pas modifiés.
    """
    normalizer = normalizer or dataset.normalizer()
    x = torch.from_numpy(dataset.normalized_vertices(normalizer).astype(np.float32))
    was_training = codec.training
    codec.eval()
    try:
        with torch.no_grad():
            targets = codec.encode(x)
    finally:
        codec.train(was_training)
    m = torch.from_numpy(dataset.descriptors().astype(np.float32))
    torch.manual_seed(seed)
    menc = MotionEncoder(input_dim=m.shape[1], latent_dim=codec.latent_dim, dropout=dropout)
    return _fit(menc, m, targets, lambda model, b: model(b), epochs, lr, batch_size, seed, "encodeur de mouvement")
