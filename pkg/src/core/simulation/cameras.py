"""
Placement des caméras sur un cercle autour de l'avatar.
"""

import logging
from typing import List

import numpy as np

from ..garment.types import Camera

logger = logging.getLogger(__name__)

AZIMUTH_MODES = ("random", "uniform")
LOOK_AT_HEIGHT = 1.0


def camera_on_ring(
    azimuth: float,
    radius: float,
    elevation: float,
    resolution: int,
    fov_deg: float,
    view_id: int = 0,
) -> Camera:
    """
    Caméra sur le cercle, visant le bassin au repos.

    Args:
        azimuth: Angle autour de l'axe vertical (rad), 0 = face au personnage (+z)
        radius: Rayon du cercle (m)
        elevation: Hauteur de la caméra au-dessus de la cible (m)
    """
    eye = (radius * np.sin(azimuth), LOOK_AT_HEIGHT + elevation, radius * np.cos(azimuth))
    return Camera.look_at(eye, (0.0, LOOK_AT_HEIGHT, 0.0), resolution, resolution, fov_deg, view_id)


def ring_azimuths(count: int, seed: int, mode: str = "random") -> np.ndarray:
    """Azimuts des vues : tirage graine (random) ou répartition régulière (uniform)."""
    if count < 1:
        raise ValueError(f"count doit être ≥ 1, reçu {count}")
    if mode not in AZIMUTH_MODES:
        raise ValueError(f"Mode d'azimut inconnu: {mode} (attendu: {AZIMUTH_MODES})")
    if mode == "uniform":
        return 2 * np.pi * np.arange(count) / count
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, 2 * np.pi, size=count)


def ring_cameras(
    count: int,
    radius: float,
    elevation: float,
    resolution: int,
    fov_deg: float,
    seed: int,
    mode: str = "random",
) -> List[Camera]:
    """
    Caméras d'entraînement, fixes sur toute la séquence (une par vue).

    Returns:
        Liste de Camera, view_id = 0..count-1
    """
    azimuths = ring_azimuths(count, seed, mode)
    logger.debug("Azimuts des vues (deg): %s", np.round(np.degrees(azimuths), 1).tolist())
    return [
        camera_on_ring(float(a), radius, elevation, resolution, fov_deg, view_id=p)
        for p, a in enumerate(azimuths)
    ]


def camera_azimuth(camera: Camera) -> float:
    """Azimut (rad, dans [0, 2π)) du centre optique autour de l'axe vertical."""
    c = camera.center
    return float(np.arctan2(c[0], c[2]) % (2 * np.pi))


def unseen_camera(training: List[Camera], radius: float, elevation: float, resolution: int,
                  fov_deg: float) -> Camera:
    """Vue hors entraînement : milieu du plus grand écart angulaire entre vues d'entraînement."""
    az = np.sort([camera_azimuth(c) for c in training])
    gaps = np.diff(np.concatenate([az, [az[0] + 2 * np.pi]]))
    k = int(np.argmax(gaps))
    return camera_on_ring(float((az[k] + gaps[k] / 2) % (2 * np.pi)), radius, elevation,
                          resolution, fov_deg, view_id=len(training))
