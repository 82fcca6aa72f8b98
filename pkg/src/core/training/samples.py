"""
Échantillons d'entraînement du réseau de rendu : triplets de frames {t-1, t, t+1}
d'une même vue, avec fond B_t et entrées géométriques du proxy aux frames t-1 et t.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import torch

from ..exceptions import ShapeMismatchError
from ..garment.types import Camera, MotionClip, TriMesh
from ..render.frame import FrameInputs, MotionFeatureSettings, image_to_tensor, prepare_frame_inputs

logger = logging.getLogger(__name__)

SampleId = Tuple[int, int]


@dataclass
class RenderBatch:
    """
    Lot d'échantillons empilés (N, ·, H, W).

    Attributes:
        ids: (vue, t) de chaque échantillon
        inputs_prev, inputs: Entrées géométriques à t-1 et t
    """

    ids: List[SampleId]
    inputs_prev: List[FrameInputs]
    inputs: List[FrameInputs]
    prev_frame: torch.Tensor
    frame: torch.Tensor
    next_frame: torch.Tensor
    background: torch.Tensor


@dataclass
class RenderDataset:
    """
    Séquences de vérité terrain par vue et proxy grossier.

    Attributes:
        clip: Clip de mouvement
        coarse_vertices: (T, V, 3) sommets du proxy (simulés à l'entraînement)
        topology: Faces et UV du proxy
        cameras: {vue: caméra}
        gt, bg: {vue: (T, H, W, 3)}
        settings: Paramètres des features de mouvement
    """

    clip: MotionClip
    coarse_vertices: np.ndarray
    topology: TriMesh
    cameras: Dict[int, Camera]
    gt: Dict[int, np.ndarray]
    bg: Dict[int, np.ndarray]
    settings: MotionFeatureSettings
    _cache: Dict[SampleId, FrameInputs] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        t = len(self.clip)
        if self.coarse_vertices.shape[0] != t:
            raise ShapeMismatchError(
                f"RenderDataset: {self.coarse_vertices.shape[0]} frames de proxy pour un clip de {t} frames"
            )
        if t < 3:
            raise ValueError(f"RenderDataset: au moins 3 frames requises, reçu {t}")
        for view, cam in self.cameras.items():
            if self.gt[view].shape != (t, cam.height, cam.width, 3) or self.bg[view].shape != self.gt[view].shape:
                raise ShapeMismatchError(f"RenderDataset: images de la vue {view} incohérentes avec la caméra")

    @property
    def views(self) -> List[int]:
        return sorted(self.cameras)

    @property
    def resolution(self) -> int:
        return self.cameras[self.views[0]].width

    def sample_ids(self) -> List[SampleId]:
        """(vue, t) pour t ∈ [1, T-2] : triplet {t-1, t, t+1} disponible."""
        return [(p, t) for p in self.views for t in range(1, len(self.clip) - 1)]

    def restrict_views(self, views: Sequence[int]) -> "RenderDataset":
        """Sous-ensemble de vues (ablation du nombre de vues)."""
        missing = set(views) - set(self.cameras)
        if missing:
            raise ValueError(f"Vues inconnues: {sorted(missing)}")
        keep = list(views)
        return RenderDataset(
            self.clip, self.coarse_vertices, self.topology,
            {p: self.cameras[p] for p in keep}, {p: self.gt[p] for p in keep},
            {p: self.bg[p] for p in keep}, self.settings,
        )

    def frame_inputs(self, view: int, t: int) -> FrameInputs:
        key = (view, t)
        if key not in self._cache:
            self._cache[key] = prepare_frame_inputs(
                self.coarse_vertices, self.topology, self.clip, self.cameras[view], t, self.settings
            )
        return self._cache[key]

    def batch(self, ids: Sequence[SampleId], background: Optional[Dict[int, np.ndarray]] = None) -> RenderBatch:
        """
        Args:
            background: Fonds de remplacement {vue: (T, H, W, 3)} (adaptation à un nouveau fond)
        """
        bg = background or self.bg

        def stack(images: List[np.ndarray]) -> torch.Tensor:
            return torch.cat([image_to_tensor(im) for im in images], dim=0)

        return RenderBatch(
            ids=list(ids),
            inputs_prev=[self.frame_inputs(p, t - 1) for p, t in ids],
            inputs=[self.frame_inputs(p, t) for p, t in ids],
            prev_frame=stack([self.gt[p][t - 1] for p, t in ids]),
            frame=stack([self.gt[p][t] for p, t in ids]),
            next_frame=stack([self.gt[p][t + 1] for p, t in ids]),
            background=stack([bg[p][t] for p, t in ids]),
        )
