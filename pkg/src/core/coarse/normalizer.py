"""
Normalisation des sommets du proxy grossier : centrage sur la racine de la frame,
division par la diagonale de la boîte englobante du maillage de repos.
"""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from ..garment.types import TriMesh


@dataclass(frozen=True)
class CoarseNormalizer:
    """
    Attributes:
        scale: Constante globale (diagonale de la boîte englobante au repos, m)
    """

    scale: float

    def __post_init__(self) -> None:
        if not self.scale > 0:
            raise ValueError(f"scale doit être > 0, reçu {self.scale}")

    @classmethod
    def from_rest_mesh(cls, mesh: TriMesh) -> "CoarseNormalizer":
        v = mesh.vertices
        return cls(float(np.linalg.norm(v.max(axis=0) - v.min(axis=0))))

    def normalize(self, vertices: np.ndarray, root: np.ndarray) -> np.ndarray:
        return (np.asarray(vertices) - np.asarray(root)) / self.scale

    def denormalize(self, normalized: np.ndarray, root: np.ndarray) -> np.ndarray:
        return np.asarray(normalized) * self.scale + np.asarray(root)

    def to_dict(self) -> Dict[str, Any]:
        return {"scale": self.scale}

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "CoarseNormalizer":
        return cls(float(d["scale"]))
