"""
Recettes de fine-tuning à partir d'un modèle de rendu entraîné :
- nouvelle morphologie (même gabarit grossier) : tous les paramètres, budget réduit
- nouveau fond : seuls le raffinement final et le discriminateur sont dégelés
"""

from __future__ import annotations

import copy
import logging
import math
from pathlib import Path
from typing import Optional, Sequence, Tuple

import pandas as pd

from ..utils.checkpoint_utils import check_descriptor
from ..render.model import RendererModel, render_descriptor_config
from .discriminator import PatchDiscriminator
from .samples import RenderDataset, SampleId
from .trainer import RendererTrainer, RenderTrainingConfig

logger = logging.getLogger(__name__)

BODY_BUDGET_RATIO = 0.25
BACKGROUND_ITERATIONS = 100


def restore_discriminator(model: RendererModel) -> PatchDiscriminator:
    """Discriminateur du checkpoint (initialisation aléatoire s'il n'a pas été sauvegardé)."""
    disc = PatchDiscriminator()
    if model.discriminator_state is not None:
        disc.load_state_dict(model.discriminator_state)
    return disc


def _clone(model: RendererModel, discriminator: Optional[PatchDiscriminator]) -> Tuple[RendererModel, PatchDiscriminator]:
    base = copy.deepcopy(model)
    disc = copy.deepcopy(discriminator) if discriminator is not None else restore_discriminator(base)
    return base, disc


def finetune_body_shape(
    model: RendererModel,
    dataset: RenderDataset,
    config: RenderTrainingConfig = RenderTrainingConfig(),
    budget_ratio: float = BODY_BUDGET_RATIO,
    discriminator: Optional[PatchDiscriminator] = None,
    out_dir: Optional[Path] = None,
) -> Tuple[RendererModel, pd.DataFrame]:
    """
    Reprend tous les paramètres sur une nouvelle morphologie, budget = ratio · max_steps.

    Le modèle d'origine n'est pas modifié.

    Raises:
        SchemaMismatchError: Configuration de descripteur du jeu de données différente
    """
    check_descriptor(model.descriptor, render_descriptor_config(dataset.settings))
    tuned, disc = _clone(model, discriminator)
    steps = max(1, math.ceil(budget_ratio * config.max_steps))
    logger.info("Fine-tuning morphologie: %d steps (%.0f%% du budget initial)", steps, 100 * budget_ratio)
    trainer = RendererTrainer(tuned, disc, config, out_dir=out_dir)
    history = trainer.fit(dataset, max_steps=steps)
    tuned.discriminator_state = disc.state_dict()
    tuned.steps = model.steps + trainer.step_count
    tuned.history = history
    return tuned.eval(), history


def finetune_background(
    model: RendererModel,
    dataset: RenderDataset,
    config: RenderTrainingConfig = RenderTrainingConfig(),
    iterations: int = BACKGROUND_ITERATIONS,
    discriminator: Optional[PatchDiscriminator] = None,
    out_dir: Optional[Path] = None,
    sample_ids: Optional[Sequence[SampleId]] = None,
) -> Tuple[RendererModel, pd.DataFrame]:
    """
    Adapte le modèle à un nouveau fond à partir de quelques images d'exemple.

    Args:
        dataset: Vérité terrain et fonds du nouveau décor
        sample_ids: Exemples retenus (≥ 2) ; défaut : tous les échantillons du jeu de données

    Raises:
        ValueError: Moins de 2 échantillons d'exemple
    """
    ids = list(sample_ids) if sample_ids is not None else dataset.sample_ids()
    if len(ids) < 2:
        raise ValueError(f"finetune_background: au moins 2 exemples requis, reçu {len(ids)}")
    check_descriptor(model.descriptor, render_descriptor_config(dataset.settings))
    tuned, disc = _clone(model, discriminator)
    # seule la tête de raffinement reste entraînable côté générateur
    trainer = RendererTrainer(tuned, disc, config,
                              generator_parameters=tuned.generator.refinement_parameters(),
                              out_dir=out_dir)
    history = trainer.fit(dataset, max_steps=iterations, sample_ids=ids)
    # boucle sur les exemples jusqu'à épuisement du budget
    while trainer.step_count < iterations:
        history = trainer.fit(dataset, max_steps=iterations, sample_ids=ids)
    tuned.discriminator_state = disc.state_dict()
    tuned.steps = model.steps + trainer.step_count
    tuned.history = history
    logger.info("Fine-tuning fond: %d itérations sur %d exemples", trainer.step_count, len(ids))
    return tuned.eval(), history
