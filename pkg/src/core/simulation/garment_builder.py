"""
Construction des grilles de vêtements (tronc de cône ouvert) avec atlas UV développé.

Le tronc de cône est développable : l'atlas est le secteur annulaire obtenu en le
déroulant, mis à l'échelle uniformément dans [0, 1]². Les aires UV sont donc
proportionnelles aux aires 3D (facteur uv_scale²). La couture est portée par les UV
par coin de face ; les sommets ne sont pas dupliqués.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..exceptions import UnknownStyleError
from ..garment.types import TriMesh

UV_MARGIN = 0.01


@dataclass(frozen=True)
class GarmentSpec:
    """
    Gabarit d'un vêtement en pose de repos.

    Attributes:
        top_y: Hauteur de la ceinture / encolure (m)
        length: Hauteur verticale du vêtement (m)
        top_radius: Rayon en haut (m)
        hem_radius: Rayon à l'ourlet (m)
        attach_origin: Articulation d'attache
        attach_lateral: Paire (gauche, droite) donnant l'axe x du repère d'attache
        attach_vertical: Paire (bas, haut) donnant l'axe y du repère d'attache
    """

    top_y: float
    length: float
    top_radius: float
    hem_radius: float
    attach_origin: int
    attach_lateral: Tuple[int, int]
    attach_vertical: Tuple[int, int]

    @property
    def slant_length(self) -> float:
        return float(np.hypot(self.length, self.hem_radius - self.top_radius))

    @property
    def mean_circumference(self) -> float:
        return float(np.pi * (self.top_radius + self.hem_radius))


GARMENT_SPECS: Dict[str, GarmentSpec] = {
    "long_skirt": GarmentSpec(1.05, 0.70, 0.17, 0.42, 0, (11, 15), (0, 2)),
    "short_skirt": GarmentSpec(1.05, 0.35, 0.17, 0.30, 0, (11, 15), (0, 2)),
    "dress": GarmentSpec(1.35, 1.00, 0.19, 0.42, 2, (5, 8), (0, 3)),
}


def garment_spec(kind: str) -> GarmentSpec:
    if kind not in GARMENT_SPECS:
        raise UnknownStyleError(f"Type de vêtement inconnu: {kind} (attendu: {sorted(GARMENT_SPECS)})")
    return GARMENT_SPECS[kind]


def grid_shape(kind: str, spacing: float) -> Tuple[int, int]:
    """(lignes, colonnes) de la grille pour un espacement donné."""
    spec = garment_spec(kind)
    if spacing <= 0:
        raise ValueError(f"spacing doit être > 0, reçu {spacing}")
    if spacing > spec.slant_length:
        raise ValueError(
            f"spacing ({spacing} m) supérieur à la dimension du vêtement {kind} "
            f"({spec.slant_length:.3f} m)"
        )
    rows = max(2, int(round(spec.slant_length / spacing)) + 1)
    cols = max(3, int(round(spec.mean_circumference / spacing)))
    return rows, cols


def _development(spec: GarmentSpec, s: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Point du plan développé pour la distance le long de la génératrice s et l'angle θ."""
    dr = spec.hem_radius - spec.top_radius
    sin_beta = dr / spec.slant_length
    if abs(sin_beta) < 1e-9:
        # Cylindre : développement rectangulaire
        return np.stack([spec.top_radius * theta, -s], axis=-1)
    apex = spec.top_radius / sin_beta
    rho = apex + s
    alpha = theta * sin_beta
    return np.stack([rho * np.cos(alpha), rho * np.sin(alpha)], axis=-1)


def _development_bounds(spec: GarmentSpec) -> Tuple[np.ndarray, float]:
    """Origine et facteur d'échelle (uv par mètre) de l'atlas, indépendants de l'espacement."""
    s = np.linspace(0.0, spec.slant_length, 65)
    theta = np.linspace(0.0, 2 * np.pi, 2049)
    pts = _development(spec, s[:, None], theta[None, :]).reshape(-1, 2)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    scale = (1.0 - 2 * UV_MARGIN) / float(np.max(hi - lo))
    return lo, scale


def uv_scale(kind: str) -> float:
    """Facteur d'échelle uniforme atlas/monde (unités uv par mètre)."""
    return _development_bounds(garment_spec(kind))[1]


def build_garment_grid(kind: str, spacing: float) -> TriMesh:
    """
    Construit le maillage de repos d'un vêtement.

    Args:
        kind: long_skirt | short_skirt | dress
        spacing: Distance entre particules (m)

    Raises:
        UnknownStyleError: Type inconnu
        ValueError: Espacement non positif ou supérieur à la dimension du vêtement
    """
    spec = garment_spec(kind)
    rows, cols = grid_shape(kind, spacing)

    frac = np.linspace(0.0, 1.0, rows)
    heights = spec.top_y - frac * spec.length
    radii = spec.top_radius + frac * (spec.hem_radius - spec.top_radius)
    s_along = frac * spec.slant_length
    # Couture au dos (θ = 0 ↔ -z), θ croissant vers la gauche du personnage
    theta = 2 * np.pi * np.arange(cols + 1) / cols

    vertices = np.zeros((rows, cols, 3))
    vertices[..., 0] = -radii[:, None] * np.sin(theta[None, :cols])
    vertices[..., 1] = heights[:, None]
    vertices[..., 2] = -radii[:, None] * np.cos(theta[None, :cols])

    origin, scale = _development_bounds(spec)
    uv_grid = (_development(spec, s_along[:, None], theta[None, :]) - origin) * scale + UV_MARGIN
    uv_grid = np.clip(uv_grid, 0.0, 1.0)

    faces, uv = [], []
    for i in range(rows - 1):
        for j in range(cols):
            j2 = (j + 1) % cols
            a, b = i * cols + j, i * cols + j2
            c, d = (i + 1) * cols + j, (i + 1) * cols + j2
            ua, ub = uv_grid[i, j], uv_grid[i, j + 1]
            uc, ud = uv_grid[i + 1, j], uv_grid[i + 1, j + 1]
            if (i + j) % 2 == 0:
                faces += [(a, c, b), (b, c, d)]
                uv += [(ua, uc, ub), (ub, uc, ud)]
            else:
                faces += [(a, c, d), (a, d, b)]
                uv += [(ua, uc, ud), (ua, ud, ub)]

    return TriMesh(vertices.reshape(-1, 3), np.asarray(faces, dtype=np.int64), np.asarray(uv))


def top_ring_vertices(mesh: TriMesh, tol: float = 1e-9) -> np.ndarray:
    """Indices des sommets de la ceinture (hauteur maximale au repos) : sommets épinglés."""
    y = mesh.vertices[:, 1]
    return np.where(y >= y.max() - tol)[0]


def add_pleats(mesh: TriMesh, amplitude: float, count: int) -> TriMesh:
    """
    Plis radiaux croissant vers l'ourlet (détail propre au vêtement cible).

    Déplacement r += amplitude · h · sin(count · θ), h ∈ [0, 1] de la ceinture à l'ourlet.
    """
    if amplitude == 0.0:
        return mesh
    v = mesh.vertices.copy()
    y = v[:, 1]
    h = (y.max() - y) / max(y.max() - y.min(), 1e-9)
    radial = v[:, [0, 2]]
    r = np.linalg.norm(radial, axis=1)
    theta = np.arctan2(-v[:, 0], -v[:, 2])
    new_r = r + amplitude * h * np.sin(count * theta)
    scale = np.where(r > 1e-9, new_r / np.maximum(r, 1e-9), 1.0)
    v[:, 0] *= scale
    v[:, 2] *= scale
    return mesh.with_vertices(v)
