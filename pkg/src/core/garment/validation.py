"""
Validation des invariants de TriMesh (diagnostic, ne lève jamais).
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from .constants import DEGENERATE_AREA_EPS
from .types import TriMesh

INDEX_OUT_OF_RANGE = "index-out-of-range"
UV_OUT_OF_RANGE = "uv-out-of-range"
DEGENERATE_FACE = "degenerate-face"
NON_FINITE_VERTEX = "non-finite-vertex"


@dataclass(frozen=True)
class MeshViolation:
    """Invariant violé et indice fautif (face ou sommet)."""

    invariant: str
    index: int

    def __str__(self) -> str:
        return f"{self.invariant} @ {self.index}"


def face_areas(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
    """Aires des triangles (F,)."""
    if len(faces) == 0:
        return np.zeros(0)
    p = vertices[faces]
    return 0.5 * np.linalg.norm(np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]), axis=1)


def validate_mesh(mesh: TriMesh) -> List[MeshViolation]:
    """
    Vérifie les invariants de TriMesh.

    Returns:
        Liste vide si tous les invariants tiennent, sinon une violation par face/sommet fautif
    """
    violations: List[MeshViolation] = []
    n_vertices = mesh.num_vertices

    bad_vertices = np.where(~np.all(np.isfinite(mesh.vertices), axis=1))[0]
    violations.extend(MeshViolation(NON_FINITE_VERTEX, int(i)) for i in bad_vertices)

    if mesh.num_faces == 0:
        return violations

    out_of_range = np.any((mesh.faces < 0) | (mesh.faces >= n_vertices), axis=1)
    violations.extend(MeshViolation(INDEX_OUT_OF_RANGE, int(f)) for f in np.where(out_of_range)[0])

    bad_uv = np.any((mesh.uv < 0.0) | (mesh.uv > 1.0) | ~np.isfinite(mesh.uv), axis=(1, 2))
    violations.extend(MeshViolation(UV_OUT_OF_RANGE, int(f)) for f in np.where(bad_uv)[0])

    valid = ~out_of_range
    if np.any(valid) and len(bad_vertices) == 0:
        areas = np.full(mesh.num_faces, np.inf)
        areas[valid] = face_areas(mesh.vertices, mesh.faces[valid])
        violations.extend(
            MeshViolation(DEGENERATE_FACE, int(f)) for f in np.where(areas <= DEGENERATE_AREA_EPS)[0]
        )
    return violations
