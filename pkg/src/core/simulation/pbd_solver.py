"""
Simulation de tissu par dynamique basée positions (PBD / XPBD).

Intégration semi-implicite, projection Gauss-Seidel des contraintes de distance
(arêtes colorées pour une mise à jour vectorisée sans conflit), projection sur les
capsules du corps. Les sommets épinglés suivent exactement le repère d'attache
construit à partir des articulations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from ..exceptions import NumericalDivergenceError
from ..garment.types import MeshSequence, MotionClip, SkeletonPose, TriMesh
from .body_proxy import BodyProxy, capsule_distance, rest_pose
from .garment_builder import garment_spec, top_ring_vertices

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimParams:
    """
    Paramètres du solveur.

    Attributes:
        gravity: Accélération verticale (m/s², négative vers le bas)
        substeps: Sous-pas par frame (≥ 1)
        iterations: Itérations de projection par sous-pas (≥ 1)
        stretch_compliance: Compliance XPBD des arêtes (0 = inextensible)
        pins: Indices des sommets épinglés
        collision_margin: Pénétration tolérée dans les capsules (m, ≥ 0)
        particle_spacing: Distance nominale entre particules (m)
        seed: Graine de la perturbation initiale
        damping: Amortissement des vitesses par sous-pas
        bending_stiffness: Raideur des ressorts dièdres (0 = désactivés)
        jitter: Écart-type de la perturbation initiale des sommets libres (m)
        strain_tolerance: Déformation relative maximale visée après projection
        max_extra_rounds: Passes supplémentaires autorisées pour atteindre la tolérance
        attach_origin: Articulation portant le repère d'attache
        attach_lateral: Paire (gauche, droite) définissant l'axe x du repère
        attach_vertical: Paire (bas, haut) définissant l'axe y du repère
    """

    gravity: float = -9.81
    substeps: int = 4
    iterations: int = 20
    stretch_compliance: float = 0.0
    pins: Tuple[int, ...] = ()
    collision_margin: float = 0.005
    particle_spacing: float = 0.06
    seed: int = 0
    damping: float = 0.01
    bending_stiffness: float = 0.0
    jitter: float = 0.0
    strain_tolerance: float = 0.02
    max_extra_rounds: int = 400
    attach_origin: int = 0
    attach_lateral: Tuple[int, int] = (11, 15)
    attach_vertical: Tuple[int, int] = (0, 2)

    def __post_init__(self) -> None:
        if self.substeps < 1:
            raise ValueError(f"substeps doit être ≥ 1, reçu {self.substeps}")
        if self.iterations < 1:
            raise ValueError(f"iterations doit être ≥ 1, reçu {self.iterations}")
        if self.collision_margin < 0:
            raise ValueError(f"collision_margin doit être ≥ 0, reçu {self.collision_margin}")
        if self.stretch_compliance < 0:
            raise ValueError(f"stretch_compliance doit être ≥ 0, reçu {self.stretch_compliance}")
        if self.strain_tolerance <= 0:
            raise ValueError(f"strain_tolerance doit être > 0, reçu {self.strain_tolerance}")
        if self.max_extra_rounds < 0:
            raise ValueError(f"max_extra_rounds doit être ≥ 0, reçu {self.max_extra_rounds}")
        if not 0.0 <= self.damping < 1.0:
            raise ValueError(f"damping doit être dans [0, 1), reçu {self.damping}")
        object.__setattr__(self, "pins", tuple(int(p) for p in self.pins))

    @classmethod
    def for_garment(cls, kind: str, mesh: TriMesh, **overrides) -> "SimParams":
        """Paramètres avec épingles (ceinture) et repère d'attache du type de vêtement."""
        spec = garment_spec(kind)
        params = cls(
            pins=tuple(int(i) for i in top_ring_vertices(mesh)),
            attach_origin=spec.attach_origin,
            attach_lateral=spec.attach_lateral,
            attach_vertical=spec.attach_vertical,
        )
        return replace(params, **overrides)


def attachment_frame(joints: np.ndarray, params: SimParams) -> Tuple[np.ndarray, np.ndarray]:
    """
    Repère rigide (origine, rotation 3×3 en colonnes x, y, z) construit par Gram-Schmidt.
    """
    origin = joints[params.attach_origin]
    left, right = params.attach_lateral
    low, high = params.attach_vertical
    x = joints[right] - joints[left]
    x = x / np.linalg.norm(x)
    y = joints[high] - joints[low]
    y = y - (y @ x) * x
    y = y / np.linalg.norm(y)
    z = np.cross(x, y)
    return origin, np.stack([x, y, z], axis=1)


def _color_edges(edges: np.ndarray, num_vertices: int) -> List[np.ndarray]:
    """Coloration gloutonne : aucune couleur ne contient deux arêtes partageant un sommet."""
    used: List[set] = [set() for _ in range(num_vertices)]
    colors = np.zeros(len(edges), dtype=np.int64)
    for k, (i, j) in enumerate(edges):
        c = 0
        while c in used[i] or c in used[j]:
            c += 1
        colors[k] = c
        used[i].add(c)
        used[j].add(c)
    return [np.where(colors == c)[0] for c in range(int(colors.max()) + 1)] if len(edges) else []


def bending_pairs(mesh: TriMesh) -> np.ndarray:
    """Paires de sommets opposés des triangles adjacents (ressorts dièdres)."""
    owner = {}
    pairs = []
    for tri in mesh.faces:
        for k in range(3):
            a, b, c = int(tri[k]), int(tri[(k + 1) % 3]), int(tri[(k + 2) % 3])
            key = (min(a, b), max(a, b))
            if key in owner:
                pairs.append((owner[key], c))
            else:
                owner[key] = c
    if not pairs:
        return np.zeros((0, 2), dtype=np.int64)
    return np.unique(np.sort(np.asarray(pairs, dtype=np.int64), axis=1), axis=0)


@dataclass
class _Constraints:
    edges: np.ndarray
    rest: np.ndarray
    colors: List[np.ndarray]
    stiffness: float
    compliance: float
    lambdas: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self.lambdas = np.zeros(len(self.edges))

    def reset(self) -> None:
        self.lambdas[:] = 0.0

    def project(self, x: np.ndarray, inv_mass: np.ndarray, dt: float, hard: bool = False) -> None:
        """Une passe Gauss-Seidel ; hard=True ignore la compliance et parcourt les couleurs aller-retour."""
        alpha = 0.0 if hard else self.compliance / (dt * dt)
        colors = self.colors + self.colors[::-1] if hard else self.colors
        for idx in colors:
            i, j = self.edges[idx, 0], self.edges[idx, 1]
            d = x[i] - x[j]
            length = np.linalg.norm(d, axis=1)
            w = inv_mass[i] + inv_mass[j]
            ok = (w > 0) & (length > 1e-12)
            if not np.any(ok):
                continue
            i, j, d, length, w, idx = i[ok], j[ok], d[ok], length[ok], w[ok], idx[ok]
            c = length - self.rest[idx]
            dlam = (-c - alpha * self.lambdas[idx]) / (w + alpha)
            self.lambdas[idx] += dlam
            corr = (self.stiffness * dlam / length)[:, None] * d
            x[i] += inv_mass[i][:, None] * corr
            x[j] -= inv_mass[j][:, None] * corr


def _orthogonal(axis: np.ndarray) -> np.ndarray:
    helper = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 * np.linalg.norm(axis) else np.array([0.0, 0.0, 1.0])
    n = np.cross(axis, helper)
    norm = np.linalg.norm(n)
    return n / norm if norm > 1e-12 else helper


def _project_collisions(
    x: np.ndarray,
    free: np.ndarray,
    capsules: Tuple[np.ndarray, np.ndarray, np.ndarray],
    passes: int = 2,
) -> None:
    a_all, b_all, r_all = capsules
    for _ in range(passes):
        for a, b, r in zip(a_all, b_all, r_all):
            dist, closest = capsule_distance(x, a, b)
            inside = free & (dist < r)
            if not np.any(inside):
                continue
            d = x[inside] - closest[inside]
            n = dist[inside]
            # Point sur l'axe : poussée selon une direction orthogonale quelconque
            fallback = _orthogonal(b - a)
            degenerate = n < 1e-12
            d[degenerate] = fallback
            n = np.where(degenerate, 1.0, n)
            x[inside] = closest[inside] + d / n[:, None] * r


def _max_penetration(
    x: np.ndarray,
    free: np.ndarray,
    capsules: Tuple[np.ndarray, np.ndarray, np.ndarray],
) -> float:
    """Profondeur maximale (m) des sommets libres à l'intérieur des capsules."""
    depth = 0.0
    for a, b, r in zip(*capsules):
        dist, _ = capsule_distance(x[free], a, b)
        if len(dist):
            depth = max(depth, float((r - dist).max()))
    return depth


def edge_strain(vertices: np.ndarray, edges: np.ndarray, rest: np.ndarray) -> np.ndarray:
    """Déformation relative |l - l0| / l0 par arête."""
    length = np.linalg.norm(vertices[edges[:, 0]] - vertices[edges[:, 1]], axis=1)
    return np.abs(length - rest) / rest


def simulate(
    garment: TriMesh,
    clip: MotionClip,
    body: BodyProxy,
    params: SimParams,
) -> MeshSequence:
    """
    Simule le vêtement sur le clip.

    Args:
        garment: Maillage de repos (en pose de repos du squelette)
        clip: Clip de mouvement (≥ 1 frame)
        body: Corps en capsules pour la collision
        params: Paramètres du solveur (pins non vides)

    Returns:
        MeshSequence de même topologie que garment, une frame par pose

    Raises:
        ValueError: Aucun sommet épinglé ou indice d'épingle invalide
        NumericalDivergenceError: Coordonnée non finie, ou allongement / pénétration hors
            tolérance après max_extra_rounds passes finales (index = frame fautive)
    """
    if not params.pins:
        raise ValueError("simulate: au moins un sommet épinglé est requis")
    pins = np.asarray(params.pins, dtype=np.int64)
    if pins.min() < 0 or pins.max() >= garment.num_vertices:
        raise ValueError(f"Indices d'épingles hors bornes (V={garment.num_vertices})")

    rest_vertices = np.array(garment.vertices)
    edges = garment.edges()
    rest_len = np.linalg.norm(rest_vertices[edges[:, 0]] - rest_vertices[edges[:, 1]], axis=1)
    stretch = _Constraints(edges, rest_len, _color_edges(edges, garment.num_vertices), 1.0,
                           params.stretch_compliance)
    constraint_sets = [stretch]
    if params.bending_stiffness > 0:
        pairs = bending_pairs(garment)
        pair_len = np.linalg.norm(rest_vertices[pairs[:, 0]] - rest_vertices[pairs[:, 1]], axis=1)
        constraint_sets.append(
            _Constraints(pairs, pair_len, _color_edges(pairs, garment.num_vertices),
                         float(params.bending_stiffness), 0.0)
        )

    inv_mass = np.ones(garment.num_vertices)
    inv_mass[pins] = 0.0
    free = inv_mass > 0

    rest_origin, rest_rot = attachment_frame(rest_pose().joints, params)
    local = (rest_vertices - rest_origin) @ rest_rot

    def rigid(joints: np.ndarray) -> np.ndarray:
        origin, rot = attachment_frame(joints, params)
        return origin + local @ rot.T

    out = np.zeros((len(clip), garment.num_vertices, 3))
    x = rigid(clip.joints[0])
    if params.jitter > 0:
        rng = np.random.default_rng(params.seed)
        x[free] += params.jitter * rng.standard_normal((int(free.sum()), 3))
    v = np.zeros_like(x)
    gravity = np.array([0.0, params.gravity, 0.0])
    dt = 1.0 / (clip.fps * params.substeps)

    def finish(frame: int, pin_target: np.ndarray, capsules) -> None:
        """
        Passes finales : collision puis arêtes inextensibles, jusqu'à ce que l'allongement
        maximal et la pénétration respectent leurs tolérances.

        Raises:
            NumericalDivergenceError: Coordonnée non finie ou tolérances non atteintes
        """
        if not np.all(np.isfinite(x)):
            raise NumericalDivergenceError("Divergence du solveur PBD", index=frame,
                                           diagnostics={"non_finite": int((~np.isfinite(x)).sum())})
        for rounds in range(params.max_extra_rounds + 1):
            max_strain = float(edge_strain(x, edges, rest_len).max(initial=0.0))
            depth = _max_penetration(x, free, capsules)
            if max_strain <= params.strain_tolerance and depth <= params.collision_margin:
                return
            if rounds == params.max_extra_rounds:
                break
            _project_collisions(x, free, capsules)
            stretch.project(x, inv_mass, dt, hard=True)
            x[pins] = pin_target[pins]
        raise NumericalDivergenceError(
            f"Tolérances du solveur PBD non atteintes à la frame {frame}",
            index=frame,
            diagnostics={
                "max_strain": max_strain,
                "strain_tolerance": params.strain_tolerance,
                "max_penetration": depth,
                "collision_margin": params.collision_margin,
                "extra_rounds": params.max_extra_rounds,
            },
        )

    # Frame 0 : projection seule (pas d'intégration)
    capsules0 = body.segments(clip.pose(0))
    target = rigid(clip.joints[0])
    for cs in constraint_sets:
        cs.reset()
    for _ in range(params.iterations):
        for cs in constraint_sets:
            cs.project(x, inv_mass, dt)
        _project_collisions(x, free, capsules0, passes=1)
    x[pins] = target[pins]
    finish(0, target, capsules0)
    out[0] = x

    for t in range(1, len(clip)):
        prev_joints, next_joints = clip.joints[t - 1], clip.joints[t]
        for s in range(1, params.substeps + 1):
            alpha = s / params.substeps
            joints = next_joints if s == params.substeps else (1 - alpha) * prev_joints + alpha * next_joints
            target = rigid(joints)
            capsules = body.segments(SkeletonPose(joints, clip.root_index))

            x_prev = x.copy()
            v[free] = (v[free] + gravity * dt) * (1.0 - params.damping)
            x[free] += v[free] * dt
            x[pins] = target[pins]
            for cs in constraint_sets:
                cs.reset()
            for _ in range(params.iterations):
                for cs in constraint_sets:
                    cs.project(x, inv_mass, dt)
                _project_collisions(x, free, capsules, passes=1)
            x[pins] = target[pins]
            if s == params.substeps:
                finish(t, target, capsules)
            elif not np.all(np.isfinite(x)):
                raise NumericalDivergenceError("Divergence du solveur PBD", index=t)
            v = (x - x_prev) / dt
        out[t] = x

    logger.debug("Simulation terminée: %d frames, %d sommets, %d épingles",
                 len(clip), garment.num_vertices, len(pins))
    return MeshSequence(garment, out)


def strain_report(sequence: MeshSequence) -> pd.DataFrame:
    """Déformation des arêtes par frame : colonnes frame, max_strain, mean_strain."""
    edges = sequence.topology.edges()
    rest = sequence.topology.vertices
    rest_len = np.linalg.norm(rest[edges[:, 0]] - rest[edges[:, 1]], axis=1)
    rows = []
    for t in range(len(sequence)):
        s = edge_strain(sequence.frame(t), edges, rest_len)
        rows.append({"frame": t, "max_strain": float(s.max(initial=0.0)), "mean_strain": float(s.mean()) if len(s) else 0.0})
    return pd.DataFrame(rows)


def min_capsule_clearance(vertices: np.ndarray, body: BodyProxy, pose, exclude: Optional[np.ndarray] = None) -> float:
    """Distance signée minimale (distance à l'axe - rayon) des sommets aux capsules."""
    mask = np.ones(len(vertices), dtype=bool)
    if exclude is not None:
        mask[exclude] = False
    a_all, b_all, r_all = body.segments(pose)
    best = np.inf
    for a, b, r in zip(a_all, b_all, r_all):
        dist, _ = capsule_distance(vertices[mask], a, b)
        if len(dist):
            best = min(best, float((dist - r).min()))
    return best
