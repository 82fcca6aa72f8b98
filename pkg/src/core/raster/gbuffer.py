"""
Rastérisation différée (G-buffer) de maillages triangulaires.

Pour chaque pixel couvert : identifiant de triangle, barycentriques corrigées en
perspective, UV interpolées par coin de face, position monde, profondeur caméra.
Les faces arrière sont conservées (tissu double face) ; le z-buffer est strict, le
premier triangle traité gagne en cas d'égalité.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ShapeMismatchError
from ..garment.types import Camera, TriMesh

logger = logging.getLogger(__name__)

NEAR_PLANE = 1e-3
PROJECTED_AREA_EPS = 1e-9


@dataclass(frozen=True)
class GBuffer:
    """
    Buffers par pixel d'une rastérisation.

    Attributes:
        triangle_id: (H, W) int64, -1 hors couverture
        bary: (H, W, 3) barycentriques corrigées en perspective
        uv: (H, W, 2)
        world_pos: (H, W, 3) mètres
        depth: (H, W) profondeur caméra (0 hors couverture)
        mask: (H, W) bool
        faces: (F, 3) topologie rastérisée
        num_vertices: Nombre de sommets de la topologie
    """

    triangle_id: np.ndarray
    bary: np.ndarray
    uv: np.ndarray
    world_pos: np.ndarray
    depth: np.ndarray
    mask: np.ndarray
    faces: np.ndarray
    num_vertices: int

    @property
    def height(self) -> int:
        return int(self.triangle_id.shape[0])

    @property
    def width(self) -> int:
        return int(self.triangle_id.shape[1])

    @property
    def coverage(self) -> int:
        return int(self.mask.sum())


def edge_function(a: np.ndarray, b: np.ndarray, px: np.ndarray, py: np.ndarray) -> np.ndarray:
    """Fonction d'arête signée (b - a) × (p - a)."""
    return (b[0] - a[0]) * (py - a[1]) - (b[1] - a[1]) * (px - a[0])


def _camera_for(camera: Camera, resolution: Optional[Tuple[int, int] | int]) -> Camera:
    if resolution is None:
        return camera
    w, h = (resolution, resolution) if isinstance(resolution, (int, np.integer)) else resolution
    if (w, h) == (camera.width, camera.height):
        return camera
    return camera.with_resolution(int(w), int(h))


def rasterize_arrays(
    vertices: np.ndarray,
    faces: np.ndarray,
    uv: np.ndarray,
    camera: Camera,
    resolution: Optional[Tuple[int, int] | int] = None,
) -> GBuffer:
    """
    Rastérise des tableaux bruts (sommets (V, 3), faces (F, 3), uv (F, 3, 2)).

    Les triangles traversant le plan proche ou de surface projetée < ε sont ignorés.
    """
    camera = _camera_for(camera, resolution)
    width, height = camera.width, camera.height
    vertices = np.asarray(vertices, dtype=np.float64)
    faces = np.asarray(faces, dtype=np.int64).reshape(-1, 3)
    uv = np.asarray(uv, dtype=np.float64).reshape(-1, 3, 2)

    triangle_id = np.full((height, width), -1, dtype=np.int64)
    zbuf = np.full((height, width), np.inf)
    bary = np.zeros((height, width, 3))

    if len(faces):
        xy, z = camera.project(vertices)
        for f in range(len(faces)):
            idx = faces[f]
            zs = z[idx]
            if np.any(zs <= NEAR_PLANE):
                continue
            p0, p1, p2 = xy[idx[0]], xy[idx[1]], xy[idx[2]]
            area = edge_function(p0, p1, p2[0], p2[1])
            if abs(area) < PROJECTED_AREA_EPS:
                continue
            xs = (p0[0], p1[0], p2[0])
            ys = (p0[1], p1[1], p2[1])
            j0 = max(int(np.ceil(min(xs) - 0.5)), 0)
            j1 = min(int(np.floor(max(xs) - 0.5)), width - 1)
            i0 = max(int(np.ceil(min(ys) - 0.5)), 0)
            i1 = min(int(np.floor(max(ys) - 0.5)), height - 1)
            if j0 > j1 or i0 > i1:
                continue
            px, py = np.meshgrid(np.arange(j0, j1 + 1) + 0.5, np.arange(i0, i1 + 1) + 0.5)
            l0 = edge_function(p1, p2, px, py) / area
            l1 = edge_function(p2, p0, px, py) / area
            l2 = edge_function(p0, p1, px, py) / area
            inside = (l0 >= 0) & (l1 >= 0) & (l2 >= 0)
            if not np.any(inside):
                continue
            q = np.stack([l0 / zs[0], l1 / zs[1], l2 / zs[2]], axis=-1)
            s = q.sum(axis=-1)
            d = 1.0 / np.where(inside, s, 1.0)
            region = (slice(i0, i1 + 1), slice(j0, j1 + 1))
            closer = inside & (d < zbuf[region])
            if not np.any(closer):
                continue
            zbuf[region][closer] = d[closer]
            triangle_id[region][closer] = f
            bary[region][closer] = q[closer] / s[closer][:, None]

    mask = triangle_id >= 0
    depth = np.where(mask, zbuf, 0.0)
    uv_img = np.zeros((height, width, 2))
    world = np.zeros((height, width, 3))
    if np.any(mask):
        ids = triangle_id[mask]
        b = bary[mask]
        uv_img[mask] = np.einsum("nk,nkc->nc", b, uv[ids])
        world[mask] = np.einsum("nk,nkc->nc", b, vertices[faces[ids]])
    return GBuffer(triangle_id, bary, uv_img, world, depth, mask, faces, int(len(vertices)))


def rasterize(mesh: TriMesh, camera: Camera, resolution: Optional[Tuple[int, int] | int] = None) -> GBuffer:
    """
    Rastérise un TriMesh.

    Args:
        mesh: Maillage (validate_mesh supposé passé)
        camera: Caméra
        resolution: Entier (carré) ou (largeur, hauteur) ; défaut = résolution de la caméra
    """
    return rasterize_arrays(mesh.vertices, mesh.faces, mesh.uv, camera, resolution)


def world_positions_at(gbuffer: GBuffer, other_frame_vertices: np.ndarray) -> np.ndarray:
    """
    Réévalue le point de surface de chaque pixel couvert sur d'autres positions de sommets.

    La correspondance (triangle_id, bary) reste celle de la frame rastérisée.

    Raises:
        ShapeMismatchError: Nombre de sommets différent de la topologie rastérisée
    """
    verts = np.asarray(other_frame_vertices, dtype=np.float64)
    if verts.ndim != 2 or verts.shape != (gbuffer.num_vertices, 3):
        raise ShapeMismatchError(
            f"world_positions_at: {verts.shape} sommets pour une topologie à V={gbuffer.num_vertices}"
        )
    out = np.zeros((gbuffer.height, gbuffer.width, 3))
    if gbuffer.coverage:
        ids = gbuffer.triangle_id[gbuffer.mask]
        out[gbuffer.mask] = np.einsum("nk,nkc->nc", gbuffer.bary[gbuffer.mask], verts[gbuffer.faces[ids]])
    return out


def merge_meshes(meshes: Sequence[TriMesh]) -> Tuple[TriMesh, np.ndarray]:
    """Concatène des maillages ; renvoie aussi l'objet d'origine de chaque face."""
    verts, faces, uvs, owner = [], [], [], []
    offset = 0
    for k, m in enumerate(meshes):
        verts.append(m.vertices)
        faces.append(m.faces + offset)
        uvs.append(m.uv)
        owner.append(np.full(m.num_faces, k, dtype=np.int64))
        offset += m.num_vertices
    if not meshes:
        return TriMesh.empty(), np.zeros(0, dtype=np.int64)
    merged = TriMesh(np.concatenate(verts), np.concatenate(faces), np.concatenate(uvs))
    return merged, np.concatenate(owner)


def rasterize_objects(
    meshes: Sequence[TriMesh],
    camera: Camera,
    resolution: Optional[Tuple[int, int] | int] = None,
) -> Tuple[GBuffer, np.ndarray]:
    """
    Z-buffer commun à plusieurs objets.

    Returns:
        (GBuffer du maillage fusionné, image d'identifiant d'objet (H, W), -1 = vide)
    """
    merged, owner = merge_meshes(meshes)
    gbuffer = rasterize(merged, camera, resolution)
    object_id = np.full(gbuffer.triangle_id.shape, -1, dtype=np.int64)
    object_id[gbuffer.mask] = owner[gbuffer.triangle_id[gbuffer.mask]]
    return gbuffer, object_id
