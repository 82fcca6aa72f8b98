"""
Fixtures partagées : petit jeu de données de rendu et petit modèle.
"""

import numpy as np
import pytest
import torch

from src.core.garment.constants import NUM_JOINTS
from src.core.garment.types import Camera, MotionClip, TriMesh
from src.core.neural import NeuralTexture, descriptor_channels
from src.core.render import Generator, GeneratorConfig, MotionFeatureSettings, RendererModel
from src.core.training import RenderDataset

RES = 64
FRAMES = 4
SETTINGS = MotionFeatureSettings(sigma=0.5, maps=2)


def make_dataset(seed: int = 0, background: float = 0.0) -> RenderDataset:
    rng = np.random.default_rng(seed)
    v = np.array([[-0.5, -0.5, 0.0], [0.5, -0.5, 0.0], [0.5, 0.5, 0.0], [-0.5, 0.5, 0.0]])
    uv = np.array([[[0, 0], [1, 0], [1, 1]], [[0, 0], [1, 1], [0, 1]]], dtype=float)
    mesh = TriMesh(v, np.array([[0, 1, 2], [0, 2, 3]]), uv)
    coarse = np.stack([v + [0.02 * t, 0.0, 0.0] for t in range(FRAMES)])
    clip = MotionClip(np.zeros((FRAMES, NUM_JOINTS, 3)), fps=30.0)
    camera = Camera.look_at([0.0, 0.0, 3.0], [0.0, 0.0, 0.0], RES, RES, 50.0)
    gt = rng.uniform(0.0, 1.0, size=(FRAMES, RES, RES, 3))
    bg = np.full((FRAMES, RES, RES, 3), background)
    return RenderDataset(clip, coarse, mesh, {0: camera}, {0: gt}, {0: bg}, SETTINGS)


def make_model(seed: int = 0) -> RendererModel:
    torch.manual_seed(seed)
    channels = descriptor_channels(NUM_JOINTS, SETTINGS.maps)
    generator = Generator(GeneratorConfig(in_channels=channels, encoder_widths=(8, 8, 8, 8, 8),
                                          feature_channels=4, spade_hidden=8))
    return RendererModel(generator, NeuralTexture(16, seed=seed), SETTINGS, RES)


@pytest.fixture
def dataset_factory():
    return make_dataset


@pytest.fixture
def render_dataset():
    return make_dataset()


@pytest.fixture
def small_model():
    return make_model()
