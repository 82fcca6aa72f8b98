"""
Checkpoint du réseau de rendu : générateur, texture neuronale, état du discriminateur,
configuration du descripteur et empreinte sha256 de la configuration.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd

from ..exceptions import SchemaMismatchError
from ..garment.constants import NUM_JOINTS
from ..neural.descriptor_map import descriptor_channels
from ..neural.texture import NeuralTexture
from ..utils.checkpoint_utils import load_checkpoint, save_checkpoint
from .frame import MotionFeatureSettings
from .generator import Generator, GeneratorConfig

logger = logging.getLogger(__name__)

RENDERER_CHECKPOINT_TYPE = "renderer"
RENDERER_SCHEMA_VERSION = "1"


def render_descriptor_config(settings: MotionFeatureSettings, num_joints: int = NUM_JOINTS) -> Dict[str, Any]:
    """Configuration du descripteur Q enregistrée dans le checkpoint et vérifiée au chargement."""
    return {
        "motion_features": bool(settings.enabled),
        "maps": int(settings.maps),
        "stride": int(settings.stride),
        "sigma": round(float(settings.sigma), 9),
        "num_joints": int(num_joints),
        "channels": descriptor_channels(num_joints, settings.maps, settings.enabled),
    }


def config_hash(descriptor: Dict[str, Any], renderer: Dict[str, Any]) -> str:
    """sha256 du JSON canonique (clés triées) des configurations descripteur + rendu."""
    payload = json.dumps({"descriptor": descriptor, "renderer": renderer}, sort_keys=True, default=str)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass
class RendererModel:
    """Modèle de rendu entraîné."""

    generator: Generator
    texture: NeuralTexture
    settings: MotionFeatureSettings
    resolution: int
    renderer_config: Dict[str, Any] = field(default_factory=dict)
    discriminator_state: Optional[Dict[str, Any]] = None
    steps: int = 0
    history: Optional[pd.DataFrame] = None

    @property
    def descriptor(self) -> Dict[str, Any]:
        return render_descriptor_config(self.settings)

    @property
    def config_hash(self) -> str:
        return config_hash(self.descriptor, self.renderer_config)

    def eval(self) -> "RendererModel":
        self.generator.eval()
        self.texture.eval()
        return self

    def save(self, path: Path) -> Path:
        data = {
            "generator": self.generator.state_dict(),
            "generator_config": self.generator.config.to_dict(),
            "texture": self.texture.state_dict(),
            "texture_shape": {
                "resolution": self.texture.resolution,
                "levels": self.texture.num_levels,
                "channels": self.texture.channels,
            },
            "discriminator": self.discriminator_state,
            "motion": {
                "sigma": self.settings.sigma,
                "stride": self.settings.stride,
                "maps": self.settings.maps,
                "enabled": self.settings.enabled,
            },
            "renderer_config": self.renderer_config,
            "steps": self.steps,
            "history": None if self.history is None else self.history.to_dict("list"),
        }
        return save_checkpoint(
            data, path, RENDERER_CHECKPOINT_TYPE,
            description="Générateur + texture neuronale + discriminateur",
            schema_version=RENDERER_SCHEMA_VERSION,
            descriptor=self.descriptor,
            resolution=self.resolution,
            config_hash=self.config_hash,
        )

    @classmethod
    def load(cls, path: Path, expected_descriptor: Optional[Dict[str, Any]] = None) -> "RendererModel":
        """
        Raises:
            SchemaMismatchError: Descripteur incompatible ou empreinte de configuration corrompue
        """
        data, metadata = load_checkpoint(path, RENDERER_CHECKPOINT_TYPE, expected_descriptor)
        generator = Generator(GeneratorConfig.from_dict(data["generator_config"]))
        generator.load_state_dict(data["generator"])
        shape = data["texture_shape"]
        texture = NeuralTexture(shape["resolution"], shape["levels"], shape["channels"])
        texture.load_state_dict(data["texture"])
        settings = MotionFeatureSettings(**data["motion"])
        history = None if data.get("history") is None else pd.DataFrame(data["history"])
        model = cls(generator, texture, settings, int(metadata["resolution"]),
                    data["renderer_config"], data["discriminator"], data["steps"], history)
        if model.config_hash != metadata.get("config_hash"):
            raise SchemaMismatchError(
                f"Empreinte de configuration incohérente: checkpoint={metadata.get('config_hash')!r}, "
                f"recalculée={model.config_hash!r}"
            )
        logger.info("Modèle de rendu chargé (%d steps, descripteur %d canaux)",
                    model.steps, model.descriptor["channels"])
        return model.eval()
