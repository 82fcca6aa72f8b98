"""
Ombrage Lambertien plat (une lumière directionnelle fixe).
"""

from typing import Sequence

import numpy as np

from .gbuffer import GBuffer

DEFAULT_LIGHT = (0.3, 0.8, 0.5)
DEFAULT_AMBIENT = 0.35


def face_normals(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
    """Normales unitaires par face (F, 3) ; nulles pour une face dégénérée."""
    if len(faces) == 0:
        return np.zeros((0, 3))
    p = np.asarray(vertices)[faces]
    n = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    norm = np.linalg.norm(n, axis=1, keepdims=True)
    return np.divide(n, norm, out=np.zeros_like(n), where=norm > 0)


def shade_lambert(
    gbuffer: GBuffer,
    normals: np.ndarray,
    face_colors: np.ndarray,
    background: Sequence[float],
    light_dir: Sequence[float] = DEFAULT_LIGHT,
    ambient: float = DEFAULT_AMBIENT,
) -> np.ndarray:
    """
    Image RGB (H, W, 3) dans [0, 1].

    couleur = c · (ambient + (1 - ambient) · |n · l|) ; la valeur absolue rend les deux
    faces du tissu éclairées de la même façon.

    Args:
        normals: Normales par face (F, 3)
        face_colors: Couleur RGB par face (F, 3)
        background: Couleur RGB des pixels non couverts
    """
    light = np.asarray(light_dir, dtype=np.float64)
    light = light / np.linalg.norm(light)
    image = np.empty((gbuffer.height, gbuffer.width, 3))
    image[:] = np.asarray(background, dtype=np.float64)
    if gbuffer.coverage:
        ids = gbuffer.triangle_id[gbuffer.mask]
        intensity = ambient + (1.0 - ambient) * np.abs(normals[ids] @ light)
        image[gbuffer.mask] = np.asarray(face_colors)[ids] * intensity[:, None]
    return np.clip(image, 0.0, 1.0)
