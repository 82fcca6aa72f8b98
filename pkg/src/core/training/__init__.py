# Entraînement adversarial du rendu : discriminateur, pertes, boucle, fine-tuning, métriques
from .discriminator import PatchDiscriminator, receptive_field
from .evaluation import Embedder, evaluate, frechet_distance, nearest_training_view, save_metrics
from .finetune import finetune_background, finetune_body_shape, restore_discriminator
from .losses import (
    LossWeights,
    d_loss,
    feature_matching_loss,
    g_gan_loss,
    g_total_loss,
    l1_objective,
)
from .perceptual import PerceptualExtractor, perceptual_loss
from .samples import RenderBatch, RenderDataset
from .trainer import RendererTrainer, RenderTrainingConfig, build_renderer, train_renderer

__all__ = [
    "Embedder",
    "LossWeights",
    "PatchDiscriminator",
    "PerceptualExtractor",
    "RenderBatch",
    "RenderDataset",
    "RenderTrainingConfig",
    "RendererTrainer",
    "build_renderer",
    "d_loss",
    "evaluate",
    "feature_matching_loss",
    "finetune_background",
    "finetune_body_shape",
    "frechet_distance",
    "g_gan_loss",
    "g_total_loss",
    "l1_objective",
    "nearest_training_view",
    "perceptual_loss",
    "receptive_field",
    "restore_discriminator",
    "save_metrics",
    "train_renderer",
]
