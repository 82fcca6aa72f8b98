"""
Corps procédural : capsules attachées au squelette.

Remplace l'avatar riggé : chaque capsule relie deux articulations avec un rayon fixe.
Sert à la collision du tissu et au rendu du corps (maillage de capsules).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..garment.constants import ARM_SEGMENTS, JOINT_PARENTS, NUM_JOINTS
from ..garment.types import SkeletonPose, TriMesh

# Offsets de repos (enfant - parent), en mètres, personnage tourné vers +z
REST_OFFSETS = np.array([
    [0.00, 1.00, 0.00],    # hips (position absolue de la racine)
    [0.00, 0.12, 0.00],    # spine
    [0.00, 0.18, 0.00],    # chest
    [0.00, 0.20, 0.00],    # neck
    [0.00, 0.15, 0.00],    # head
    [-0.20, 0.15, 0.00],   # l_shoulder
    [-0.10, -0.26, 0.00],  # l_elbow
    [-0.06, -0.23, 0.00],  # l_wrist
    [0.20, 0.15, 0.00],    # r_shoulder
    [0.10, -0.26, 0.00],   # r_elbow
    [0.06, -0.23, 0.00],   # r_wrist
    [-0.09, -0.05, 0.00],  # l_hip
    [0.00, -0.45, 0.00],   # l_knee
    [0.00, -0.42, 0.00],   # l_ankle
    [0.00, -0.06, 0.12],   # l_toe
    [0.09, -0.05, 0.00],   # r_hip
    [0.00, -0.45, 0.00],   # r_knee
    [0.00, -0.42, 0.00],   # r_ankle
    [0.00, -0.06, 0.12],   # r_toe
])

DEFAULT_CAPSULES: List[Tuple[int, int, float]] = [
    (0, 1, 0.12),
    (1, 2, 0.13),
    (2, 3, 0.06),
    (3, 4, 0.10),
    (11, 15, 0.10),
    (5, 8, 0.07),
    (5, 6, 0.045),
    (6, 7, 0.04),
    (8, 9, 0.045),
    (9, 10, 0.04),
    (11, 12, 0.07),
    (12, 13, 0.05),
    (13, 14, 0.04),
    (15, 16, 0.07),
    (16, 17, 0.05),
    (17, 18, 0.04),
]


def rest_pose() -> SkeletonPose:
    """Pose de repos (positions monde) obtenue en cumulant les offsets."""
    joints = np.zeros((NUM_JOINTS, 3))
    for j, parent in enumerate(JOINT_PARENTS):
        joints[j] = REST_OFFSETS[j] if parent < 0 else joints[parent] + REST_OFFSETS[j]
    return SkeletonPose(joints)


@dataclass(frozen=True)
class BodyProxy:
    """
    Corps en capsules.

    Attributes:
        capsules: Liste de (articulation a, articulation b, rayon en mètres)
        num_joints: Nombre d'articulations du squelette
    """

    capsules: Tuple[Tuple[int, int, float], ...] = field(
        default_factory=lambda: tuple(DEFAULT_CAPSULES)
    )
    num_joints: int = NUM_JOINTS

    def __post_init__(self) -> None:
        caps = tuple((int(a), int(b), float(r)) for a, b, r in self.capsules)
        for a, b, r in caps:
            if r <= 0:
                raise ValueError(f"Rayon de capsule invalide: {r}")
            if not (0 <= a < self.num_joints and 0 <= b < self.num_joints):
                raise ValueError(f"Indices d'articulations invalides: ({a}, {b})")
        object.__setattr__(self, "capsules", caps)

    @property
    def radii(self) -> np.ndarray:
        return np.array([r for _, _, r in self.capsules])

    @property
    def arm_capsule_indices(self) -> List[int]:
        arm = {tuple(s) for s in ARM_SEGMENTS}
        return [k for k, (a, b, _) in enumerate(self.capsules) if (a, b) in arm or (b, a) in arm]

    def segments(self, pose: SkeletonPose) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Extrémités (K, 3), (K, 3) et rayons (K,) des capsules pour une pose."""
        a_idx = [a for a, _, _ in self.capsules]
        b_idx = [b for _, b, _ in self.capsules]
        return pose.joints[a_idx], pose.joints[b_idx], self.radii

    def scaled(self, radius_scale: float) -> "BodyProxy":
        """Variante de morphologie (mince < 1 < large), même squelette."""
        if radius_scale <= 0:
            raise ValueError(f"radius_scale doit être > 0, reçu {radius_scale}")
        return BodyProxy(tuple((a, b, r * radius_scale) for a, b, r in self.capsules), self.num_joints)

    def height(self, pose: Optional[SkeletonPose] = None) -> float:
        """Hauteur totale du corps (capsules comprises) pour la pose donnée (repos par défaut)."""
        pose = pose or rest_pose()
        a, b, r = self.segments(pose)
        top = max(np.max(a[:, 1] + r), np.max(b[:, 1] + r))
        bottom = min(np.min(a[:, 1] - r), np.min(b[:, 1] - r))
        return float(top - bottom)

    def default_sigma(self) -> float:
        """σ par défaut des features de mouvement : (0.5 · taille)² en m²."""
        return (0.5 * self.height()) ** 2


def capsule_distance(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Distance de points (N, 3) au segment [a, b].

    Returns:
        (distances (N,), points les plus proches sur le segment (N, 3))
    """
    ab = b - a
    denom = float(ab @ ab)
    if denom <= 0.0:
        t = np.zeros(len(points))
    else:
        t = np.clip((points - a) @ ab / denom, 0.0, 1.0)
    closest = a + t[:, None] * ab
    return np.linalg.norm(points - closest, axis=1), closest


def _orthonormal_frame(axis: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    helper = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 0.0, 1.0])
    u = np.cross(axis, helper)
    u /= np.linalg.norm(u)
    return u, np.cross(axis, u)


def _single_capsule_mesh(a: np.ndarray, b: np.ndarray, radius: float, segments: int, rings: int):
    axis = b - a
    length = float(np.linalg.norm(axis))
    axis = axis / length if length > 1e-9 else np.array([0.0, 1.0, 0.0])
    u, w = _orthonormal_frame(axis)

    # Profil (hauteur le long de l'axe, rayon) : demi-sphère basse, cylindre, demi-sphère haute
    profile = []
    for k in range(1, rings + 1):
        phi = -np.pi / 2 + np.pi / 2 * k / rings
        profile.append((radius * np.sin(phi), radius * np.cos(phi)))
    for k in range(rings + 1):
        phi = np.pi / 2 * k / rings
        profile.append((length + radius * np.sin(phi), radius * np.cos(phi)))
    profile = profile[:-1]  # le pôle haut est ajouté séparément

    angles = 2 * np.pi * np.arange(segments) / segments
    ring_dirs = np.cos(angles)[:, None] * u + np.sin(angles)[:, None] * w
    verts = [a - radius * axis]
    for h, r in profile:
        verts.extend(a + h * axis + r * ring_dirs)
    verts.append(b + radius * axis)
    verts = np.asarray(verts)

    faces = []
    n_rings = len(profile)
    bottom, top = 0, len(verts) - 1
    for s in range(segments):
        s2 = (s + 1) % segments
        faces.append((bottom, 1 + s2, 1 + s))
        for k in range(n_rings - 1):
            r0, r1 = 1 + k * segments, 1 + (k + 1) * segments
            faces.append((r0 + s, r0 + s2, r1 + s))
            faces.append((r0 + s2, r1 + s2, r1 + s))
        last = 1 + (n_rings - 1) * segments
        faces.append((last + s, last + s2, top))
    return verts, np.asarray(faces, dtype=np.int64)


def capsule_mesh(
    body: BodyProxy,
    pose: SkeletonPose,
    capsule_indices: Optional[List[int]] = None,
    segments: int = 12,
    rings: int = 3,
) -> Tuple[TriMesh, np.ndarray]:
    """
    Maillage triangulé des capsules du corps pour une pose.

    Returns:
        (TriMesh avec uv nuls, indice de capsule par face (F,))
    """
    a_all, b_all, r_all = body.segments(pose)
    indices = range(len(body.capsules)) if capsule_indices is None else capsule_indices
    all_verts, all_faces, owner = [], [], []
    offset = 0
    for k in indices:
        verts, faces = _single_capsule_mesh(a_all[k], b_all[k], r_all[k], segments, rings)
        all_verts.append(verts)
        all_faces.append(faces + offset)
        owner.append(np.full(len(faces), k, dtype=np.int64))
        offset += len(verts)
    if not all_faces:
        return TriMesh.empty(), np.zeros(0, dtype=np.int64)
    faces = np.concatenate(all_faces)
    mesh = TriMesh(np.concatenate(all_verts), faces, np.zeros((len(faces), 3, 2)))
    return mesh, np.concatenate(owner)
