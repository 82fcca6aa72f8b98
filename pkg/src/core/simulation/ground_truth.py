"""
Rendu de la vérité terrain : corps + vêtement cible (gt), corps seul (bg), masque des bras.

Chaque couple (frame, vue) est indépendant : la boucle est parallélisée avec joblib.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from ..garment.types import Camera, MeshSequence, MotionClip, SkeletonPose, TriMesh
from ..raster import face_normals, rasterize, rasterize_objects, shade_lambert
from .body_proxy import BodyProxy, capsule_mesh

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Palette:
    """
    Couleurs RGB dans [0, 1].

    Attributes:
        background: Fond plat
        body: Corps
        garment: Vêtement
        garment_stripes: Nombre de bandes alternées le long de u (0 = uni)
    """

    background: Tuple[float, float, float] = (0.92, 0.92, 0.95)
    body: Tuple[float, float, float] = (0.80, 0.62, 0.50)
    garment: Tuple[float, float, float] = (0.25, 0.35, 0.75)
    garment_stripes: int = 8

    def garment_face_colors(self, uv: np.ndarray) -> np.ndarray:
        """Couleur par face du vêtement (F, 3) selon la coordonnée u moyenne."""
        base = np.tile(np.asarray(self.garment, dtype=np.float64), (len(uv), 1))
        if self.garment_stripes > 0 and len(uv):
            band = np.floor(uv[:, :, 0].mean(axis=1) * self.garment_stripes) % 2
            base *= (1.0 - 0.25 * band)[:, None]
        return base


@dataclass
class ViewRenders:
    """
    Séquences rendues pour une vue.

    Attributes:
        camera: Caméra de la vue
        gt: (T, H, W, 3) corps habillé
        bg: (T, H, W, 3) corps seul
        arm_mask: (T, H, W) bool, couverture des capsules des bras (sans occlusion)
        arm_depth: (T, H, W) profondeur des bras (0 hors masque)
    """

    camera: Camera
    gt: np.ndarray
    bg: np.ndarray
    arm_mask: np.ndarray
    arm_depth: np.ndarray


def _render_one(
    garment: Optional[TriMesh],
    body: BodyProxy,
    pose: SkeletonPose,
    camera: Camera,
    palette: Palette,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    body_mesh, _ = capsule_mesh(body, pose)
    body_colors = np.tile(np.asarray(palette.body, dtype=np.float64), (body_mesh.num_faces, 1))

    gbuf_bg = rasterize(body_mesh, camera)
    bg = shade_lambert(gbuf_bg, face_normals(body_mesh.vertices, body_mesh.faces), body_colors,
                       palette.background)

    if garment is None or garment.num_faces == 0:
        gt = bg.copy()
    else:
        gbuf, _ = rasterize_objects([body_mesh, garment], camera)
        normals = np.concatenate([
            face_normals(body_mesh.vertices, body_mesh.faces),
            face_normals(garment.vertices, garment.faces),
        ])
        colors = np.concatenate([body_colors, palette.garment_face_colors(garment.uv)])
        gt = shade_lambert(gbuf, normals, colors, palette.background)

    arm_mesh, _ = capsule_mesh(body, pose, body.arm_capsule_indices)
    gbuf_arm = rasterize(arm_mesh, camera)
    return gt, bg, gbuf_arm.mask.copy(), gbuf_arm.depth.copy()


def render_ground_truth(
    target_seq: Optional[MeshSequence],
    body: BodyProxy,
    clip: MotionClip,
    cameras: Sequence[Camera],
    palette: Palette = Palette(),
    n_jobs: int = 1,
) -> Dict[int, ViewRenders]:
    """
    Rend gt / bg / masque des bras pour chaque vue et chaque frame.

    Args:
        target_seq: Séquence du vêtement cible (None = scène sans vêtement, gt ≡ bg)
        body: Corps en capsules
        clip: Clip de mouvement (même nombre de frames que target_seq)
        cameras: Caméras (non vide)
        palette: Couleurs
        n_jobs: Processus joblib (1 = séquentiel)

    Returns:
        {view_id: ViewRenders}

    Raises:
        ValueError: Aucune caméra, ou longueurs de séquences incohérentes
    """
    if not cameras:
        raise ValueError("render_ground_truth: au moins une caméra est requise")
    if target_seq is not None and len(target_seq) != len(clip):
        raise ValueError(f"Séquence vêtement ({len(target_seq)}) et clip ({len(clip)}) de longueurs différentes")

    jobs: List[Tuple[int, int]] = [(t, p) for t in range(len(clip)) for p in range(len(cameras))]
    results = Parallel(n_jobs=n_jobs)(
        delayed(_render_one)(
            None if target_seq is None else target_seq.mesh_at(t),
            body,
            clip.pose(t),
            cameras[p],
            palette,
        )
        for t, p in jobs
    )

    out: Dict[int, ViewRenders] = {}
    for cam in cameras:
        h, w = cam.height, cam.width
        out[cam.view_id] = ViewRenders(
            camera=cam,
            gt=np.zeros((len(clip), h, w, 3)),
            bg=np.zeros((len(clip), h, w, 3)),
            arm_mask=np.zeros((len(clip), h, w), dtype=bool),
            arm_depth=np.zeros((len(clip), h, w)),
        )
    for (t, p), (gt, bg, arm, arm_depth) in zip(jobs, results):
        view = out[cameras[p].view_id]
        view.gt[t], view.bg[t], view.arm_mask[t], view.arm_depth[t] = gt, bg, arm, arm_depth

    logger.info("Vérité terrain rendue: %d frames × %d vues", len(clip), len(cameras))
    return out
