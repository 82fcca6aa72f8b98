"""
Prédiction du proxy grossier à partir du mouvement : V^c_t = ζ_D(ζ_M(M̂_t)), puis
dénormalisation sur la racine de la frame t. Sauvegarde/chargement du checkpoint.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd
import torch

from ..garment.descriptor import make_descriptor_clamped
from ..garment.types import MotionClip, MotionDescriptor, TriMesh
from ..utils.checkpoint_utils import load_checkpoint, save_checkpoint
from .networks import DEFAULT_DROPOUT, MotionEncoder, ShapeCodec, decode_shape
from .normalizer import CoarseNormalizer

logger = logging.getLogger(__name__)

COARSE_CHECKPOINT_TYPE = "coarse"
COARSE_SCHEMA_VERSION = "1"


def predict_coarse(
    codec: ShapeCodec,
    menc: MotionEncoder,
    normalizer: CoarseNormalizer,
    descriptor: MotionDescriptor,
    root: np.ndarray,
) -> np.ndarray:
    """
    Sommets monde (V, 3) du proxy pour la frame du descripteur.

    Args:
        root: Position de la racine à la frame t (réattache la sortie au clip)
    """
    codec.eval()
    menc.eval()
    with torch.no_grad():
        m = torch.from_numpy(descriptor.flatten().astype(np.float32)).unsqueeze(0)
        latent = menc(m)[0].numpy()
    return normalizer.denormalize(decode_shape(codec, latent), root)


def descriptor_config(stride: int, count: int, num_joints: int) -> Dict[str, int]:
    return {"stride": int(stride), "count": int(count), "num_joints": int(num_joints)}


@dataclass
class CoarseModel:
    """Modèles Joint2Coarse entraînés et constantes associées."""

    codec: ShapeCodec
    motion_encoder: MotionEncoder
    normalizer: CoarseNormalizer
    topology: TriMesh
    stride: int
    count: int
    num_joints: int
    dropout: float = DEFAULT_DROPOUT
    history: Optional[pd.DataFrame] = None

    @property
    def descriptor(self) -> Dict[str, int]:
        return descriptor_config(self.stride, self.count, self.num_joints)

    def predict(self, clip: MotionClip, t: int) -> np.ndarray:
        d = make_descriptor_clamped(clip, t, self.stride, self.count)
        return predict_coarse(self.codec, self.motion_encoder, self.normalizer, d,
                              clip.joints[t, clip.root_index])

    def predict_sequence(self, clip: MotionClip) -> np.ndarray:
        """Sommets (T, V, 3) pour toutes les frames du clip."""
        return np.stack([self.predict(clip, t) for t in range(len(clip))])

    def save(self, path: Path) -> Path:
        data: Dict[str, Any] = {
            "codec": self.codec.state_dict(),
            "motion_encoder": self.motion_encoder.state_dict(),
            "normalizer": self.normalizer.to_dict(),
            "num_vertices": self.codec.num_vertices,
            "latent_dim": self.codec.latent_dim,
            "dropout": self.dropout,
            "motion_input_dim": self.motion_encoder.input_dim,
            "topology": {
                "vertices": self.topology.vertices.astype(np.float32),
                "faces": self.topology.faces,
                "uv": self.topology.uv.astype(np.float32),
            },
            "history": None if self.history is None else self.history.to_dict("list"),
        }
        return save_checkpoint(
            data, path, COARSE_CHECKPOINT_TYPE,
            description="Joint2Coarse (codec de forme + encodeur de mouvement)",
            schema_version=COARSE_SCHEMA_VERSION,
            descriptor=self.descriptor,
        )

    @classmethod
    def load(cls, path: Path, expected_descriptor: Optional[Dict[str, int]] = None) -> "CoarseModel":
        """
        Raises:
            SchemaMismatchError: Configuration de descripteur différente de celle attendue
        """
        data, metadata = load_checkpoint(path, COARSE_CHECKPOINT_TYPE, expected_descriptor)
        codec = ShapeCodec(data["num_vertices"], data["latent_dim"], dropout=data["dropout"])
        codec.load_state_dict(data["codec"])
        menc = MotionEncoder(data["motion_input_dim"], data["latent_dim"], dropout=data["dropout"])
        menc.load_state_dict(data["motion_encoder"])
        codec.eval()
        menc.eval()
        desc = metadata["descriptor"]
        topo = data["topology"]
        history = None if data.get("history") is None else pd.DataFrame(data["history"])
        return cls(codec, menc, CoarseNormalizer.from_dict(data["normalizer"]),
                   TriMesh(topo["vertices"], topo["faces"], topo["uv"]),
                   desc["stride"], desc["count"], desc["num_joints"], data["dropout"], history)
