"""
Entraînement du réseau de rendu (générateur G + texture neuronale F) contre le
discriminateur temporel par patchs.

Chaque step : mise à jour de D (d_loss), puis de G et F (g_total_loss), Adam
(β1=0.9, β2=0.999), lr 1e-4 pour G/F et 3e-4 pour D. L'objectif "l1" remplace le tout
par une perte photométrique L1 sans discriminateur.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import pandas as pd
import torch

from ..exceptions import NumericalDivergenceError
from ..garment.constants import NUM_JOINTS
from ..neural.descriptor_map import descriptor_channels
from ..neural.texture import NeuralTexture
from ..render.frame import MotionFeatureSettings, descriptor_tensor
from ..render.generator import Generator, GeneratorConfig
from ..render.model import RendererModel
from .discriminator import PatchDiscriminator
from .losses import LossWeights, d_loss, g_total_loss, generator_adversarial_losses, l1_objective
from .perceptual import PerceptualExtractor, perceptual_loss
from .samples import RenderBatch, RenderDataset, SampleId

logger = logging.getLogger(__name__)

OBJECTIVES = ("full", "l1")
LOG_COLUMNS = ["step", "L_feat", "L_percept", "L_GAN", "L_D", "L_total"]
TRAIN_LOG_NAME = "train_log.csv"
DIAGNOSTICS_NAME = "diagnostics.json"


@dataclass(frozen=True)
class RenderTrainingConfig:
    """
    Attributes:
        weights: λ1, λ2, λ3
        max_steps: Borne sur le nombre total de steps
        epochs: Borne sur le nombre de passes sur les échantillons
        objective: "full" (adversarial + perceptuel) ou "l1"
        perceptual: Mode de l'extracteur perceptuel ("random" | "vgg19")
        checkpoint_every: Fréquence d'écriture du checkpoint courant (steps)
    """

    weights: LossWeights = field(default_factory=LossWeights)
    lr_generator: float = 1e-4
    lr_discriminator: float = 3e-4
    beta1: float = 0.9
    beta2: float = 0.999
    batch_size: int = 2
    max_steps: int = 2000
    epochs: int = 35
    objective: str = "full"
    perceptual: str = "random"
    checkpoint_every: int = 500
    seed: int = 0

    def __post_init__(self) -> None:
        if self.objective not in OBJECTIVES:
            raise ValueError(f"Objectif inconnu: {self.objective} (attendu: {', '.join(OBJECTIVES)})")
        if self.batch_size < 1 or self.max_steps < 0 or self.epochs < 1:
            raise ValueError("batch_size, epochs >= 1 et max_steps >= 0 requis")

    def to_dict(self) -> Dict:
        d = asdict(self)
        d["weights"] = asdict(self.weights)
        return d


def build_renderer(
    settings: MotionFeatureSettings,
    resolution: int,
    texture_resolution: int = 256,
    texture_levels: int = 4,
    texture_channels: int = 16,
    seed: int = 0,
    renderer_config: Optional[Dict] = None,
) -> RendererModel:
    """Générateur et texture initialisés (graine fixe) pour la configuration de descripteur."""
    torch.manual_seed(seed)
    channels = descriptor_channels(NUM_JOINTS, settings.maps, settings.enabled)
    generator = Generator(GeneratorConfig(in_channels=channels))
    texture = NeuralTexture(texture_resolution, texture_levels, texture_channels, seed=seed)
    return RendererModel(generator, texture, settings, int(resolution), dict(renderer_config or {}))


class RendererTrainer:
    """
    Boucle d'entraînement ; les paramètres hors `generator_parameters` restent figés.

    Args:
        model: Générateur + texture (modifiés en place)
        discriminator: Discriminateur (modifié en place)
        config: Hyperparamètres
        generator_parameters: Paramètres optimisés côté générateur (défaut : G et F)
        out_dir: Dossier du journal CSV, des checkpoints et du dump de diagnostic
    """

    def __init__(
        self,
        model: RendererModel,
        discriminator: PatchDiscriminator,
        config: RenderTrainingConfig = RenderTrainingConfig(),
        generator_parameters: Optional[Iterable[torch.nn.Parameter]] = None,
        out_dir: Optional[Path] = None,
    ):
        self.model = model
        self.discriminator = discriminator
        self.config = config
        self.out_dir = Path(out_dir) if out_dir is not None else None

        if generator_parameters is None:
            params = list(model.generator.parameters()) + list(model.texture.parameters())
        else:
            params = list(generator_parameters)
        trainable = {id(p) for p in params}
        for p in list(model.generator.parameters()) + list(model.texture.parameters()):
            p.requires_grad_(id(p) in trainable)

        betas = (config.beta1, config.beta2)
        self.g_optimizer = torch.optim.Adam(params, lr=config.lr_generator, betas=betas)
        self.d_optimizer = torch.optim.Adam(discriminator.parameters(), lr=config.lr_discriminator, betas=betas)
        self.extractor = PerceptualExtractor(config.perceptual, seed=config.seed) if config.objective == "full" else None
        self.rows: List[Dict[str, float]] = []
        self.step_count = 0

    def _render(self, batch: RenderBatch) -> torch.Tensor:
        q_t = torch.cat([descriptor_tensor(self.model.texture, i) for i in batch.inputs], dim=0)
        q_prev = torch.cat([descriptor_tensor(self.model.texture, i) for i in batch.inputs_prev], dim=0)
        return self.model.generator(q_t, q_prev, batch.background)["rgb"]

    def _abort(self, components: Dict[str, float], batch: RenderBatch) -> None:
        diagnostics = {"step": self.step_count, "sample_ids": [list(i) for i in batch.ids], "losses": components}
        if self.out_dir is not None:
            self.out_dir.mkdir(parents=True, exist_ok=True)
            with open(self.out_dir / DIAGNOSTICS_NAME, "w", encoding="utf-8") as f:
                json.dump(diagnostics, f, indent=2)
        raise NumericalDivergenceError("Perte non finie pendant l'entraînement du rendu",
                                       index=self.step_count, diagnostics=diagnostics)

    def step(self, batch: RenderBatch) -> Dict[str, float]:
        """Un step d'optimisation ; renvoie les composantes de perte."""
        self.model.generator.train()
        self.discriminator.train()
        rendered = self._render(batch)

        if self.config.objective == "full":
            loss_d = d_loss(self.discriminator, rendered, batch.prev_frame, batch.frame, batch.next_frame)
            if not torch.isfinite(loss_d):
                self._abort({"L_D": float(loss_d)}, batch)
            self.d_optimizer.zero_grad()
            loss_d.backward()
            self.d_optimizer.step()

            feat, gan = generator_adversarial_losses(
                self.discriminator, rendered, batch.prev_frame, batch.frame, batch.next_frame
            )
            percept = perceptual_loss(self.extractor, rendered, batch.frame)
            total = g_total_loss(self.config.weights, feat, percept, gan)
            components = {"L_feat": float(feat), "L_percept": float(percept), "L_GAN": float(gan),
                          "L_D": float(loss_d), "L_total": float(total)}
        else:
            total = l1_objective(rendered, batch.frame)
            components = {"L_feat": 0.0, "L_percept": 0.0, "L_GAN": 0.0, "L_D": 0.0, "L_total": float(total)}

        if not all(math.isfinite(v) for v in components.values()):
            self._abort(components, batch)
        self.g_optimizer.zero_grad()
        self.discriminator.zero_grad(set_to_none=True)
        total.backward()
        self.g_optimizer.step()

        self.step_count += 1
        row = {"step": self.step_count, **components}
        self.rows.append(row)
        return row

    @property
    def history(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=LOG_COLUMNS)

    def _save(self, name: str) -> None:
        if self.out_dir is None:
            return
        self.model.discriminator_state = self.discriminator.state_dict()
        self.model.steps = self.step_count
        self.model.history = self.history
        self.model.save(self.out_dir / name)
        self.history.to_csv(self.out_dir / TRAIN_LOG_NAME, index=False)

    def fit(
        self,
        dataset: RenderDataset,
        max_steps: Optional[int] = None,
        sample_ids: Optional[Sequence[SampleId]] = None,
        background: Optional[Dict[int, object]] = None,
    ) -> pd.DataFrame:
        """
        Passes mélangées (graine fixe) sur les échantillons jusqu'à max_steps ou epochs.

        Returns:
            Historique par step (step, L_feat, L_percept, L_GAN, L_D, L_total)
        """
        ids = list(sample_ids) if sample_ids is not None else dataset.sample_ids()
        if not ids:
            raise ValueError("Aucun échantillon d'entraînement (triplets {t-1, t, t+1})")
        max_steps = self.config.max_steps if max_steps is None else max_steps
        generator = torch.Generator().manual_seed(self.config.seed)
        torch.manual_seed(self.config.seed)
        bs = self.config.batch_size
        best = float("inf")

        for epoch in range(1, self.config.epochs + 1):
            if self.step_count >= max_steps:
                break
            perm = torch.randperm(len(ids), generator=generator).tolist()
            start_row = len(self.rows)
            for start in range(0, len(perm), bs):
                if self.step_count >= max_steps:
                    break
                batch = dataset.batch([ids[k] for k in perm[start:start + bs]], background)
                self.step(batch)
                if self.config.checkpoint_every and self.step_count % self.config.checkpoint_every == 0:
                    self._save("renderer_last.pt")

            epoch_rows = pd.DataFrame(self.rows[start_row:], columns=LOG_COLUMNS)
            if epoch_rows.empty:
                continue
            means = epoch_rows.mean()
            logger.info("Rendu époque %d (step %d): L_total=%.5f L_feat=%.5f L_percept=%.5f L_GAN=%.5f L_D=%.5f",
                        epoch, self.step_count, means["L_total"], means["L_feat"], means["L_percept"],
                        means["L_GAN"], means["L_D"])
            if means["L_total"] < best:
                best = float(means["L_total"])
                self._save("renderer_best.pt")

        self._save("renderer_last.pt")
        return self.history


def train_renderer(
    dataset: RenderDataset,
    model: RendererModel,
    discriminator: PatchDiscriminator,
    config: RenderTrainingConfig = RenderTrainingConfig(),
    out_dir: Optional[Path] = None,
) -> pd.DataFrame:
    """
    Entraîne (G, F, D) en place.

    Raises:
        NumericalDivergenceError: Perte non finie (diagnostic écrit dans out_dir)
    """
    trainer = RendererTrainer(model, discriminator, config, out_dir=out_dir)
    logger.info("Entraînement du rendu: %d échantillons, objectif '%s', %d steps max",
                len(dataset.sample_ids()), config.objective, config.max_steps)
    history = trainer.fit(dataset)
    model.discriminator_state = discriminator.state_dict()
    model.steps = trainer.step_count
    model.history = history
    model.eval()
    return history
