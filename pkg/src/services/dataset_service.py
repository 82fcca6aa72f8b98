"""
Conteneur de jeu de données sur disque.

Structure :
    meta.json
    motion/joints.f32                 [T, J, 3] float32 little-endian
    coarse/topology.json              faces, uv (par coin de face), sommets de repos
    coarse/verts.f32                  [T, Vc, 3] float32 little-endian
    views/view_<p>.json               Camera (vues d'entraînement et vues hors entraînement)
    frames/view_<p>/gt_<t>.png        corps habillé (8 bits, sRGB)
    frames/view_<p>/bg_<t>.png        corps seul
    masks/view_<p>/arm_<t>.png        masque des bras
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from PIL import Image as PILImage

from ..core.exceptions import SchemaMismatchError
from ..core.garment.types import Camera, MeshSequence, MotionClip, TriMesh
from ..core.simulation.ground_truth import ViewRenders

logger = logging.getLogger(__name__)

DATASET_SCHEMA_VERSION = "1"
RAW_DTYPE = "<f4"
META_KEYS = ("schema_version", "fps", "num_frames", "num_joints", "joint_names", "resolution",
             "views", "stride", "count", "sigma", "num_coarse_vertices")


def save_png(image: np.ndarray, path: Path) -> None:
    """Image flottante [0, 1] (H, W, 3) ou masque (H, W) → PNG 8 bits (round(x · 255))."""
    path.parent.mkdir(parents=True, exist_ok=True)
    data = np.round(np.clip(np.asarray(image, dtype=np.float64), 0.0, 1.0) * 255.0).astype(np.uint8)
    PILImage.fromarray(data).save(path)


def load_png(path: Path) -> np.ndarray:
    """PNG 8 bits → flottants dans [0, 1] ((H, W, 3) en RGB, (H, W) en niveaux de gris)."""
    if not path.exists():
        raise FileNotFoundError(f"Image introuvable: {path}")
    with PILImage.open(path) as im:
        if im.mode not in ("L", "RGB"):
            im = im.convert("RGB")
        return np.asarray(im, dtype=np.float64) / 255.0


def write_raw(array: np.ndarray, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    np.ascontiguousarray(array, dtype=RAW_DTYPE).tofile(path)


def read_raw(path: Path, shape: tuple) -> np.ndarray:
    if not path.exists():
        raise FileNotFoundError(f"Tableau introuvable: {path}")
    data = np.fromfile(path, dtype=RAW_DTYPE)
    expected = int(np.prod(shape))
    if data.size != expected:
        raise SchemaMismatchError(f"{path.name}: {data.size} valeurs, attendu {expected} pour {shape}")
    return data.reshape(shape).astype(np.float64)


@dataclass
class GarmentDataset:
    """Jeu de données chargé en mémoire."""

    root: Path
    meta: Dict[str, Any]
    clip: MotionClip
    coarse: MeshSequence
    cameras: Dict[int, Camera]
    gt: Dict[int, np.ndarray]
    bg: Dict[int, np.ndarray]
    arm_masks: Dict[int, np.ndarray]

    @property
    def views(self) -> List[int]:
        return sorted(self.cameras)


def write_dataset(
    root: Path,
    clip: MotionClip,
    coarse: MeshSequence,
    renders: Dict[int, ViewRenders],
    stride: int,
    count: int,
    sigma: float,
    extra_meta: Optional[Dict[str, Any]] = None,
    unseen: Sequence[int] = (),
) -> Path:
    """
    Écrit le conteneur complet.

    Les vues listées dans `unseen` sont écrites comme les autres mais exclues de
    meta["views"] (clé "unseen_views") : elles ne servent qu'à l'évaluation.

    Raises:
        ValueError: Longueurs de séquences incohérentes
    """
    root = Path(root)
    t = len(clip)
    if len(coarse) != t:
        raise ValueError(f"Proxy ({len(coarse)} frames) et clip ({t} frames) incohérents")
    resolution = next(iter(renders.values())).camera.width if renders else 0
    meta = {
        "schema_version": DATASET_SCHEMA_VERSION,
        "fps": clip.fps,
        "num_frames": t,
        "num_joints": clip.num_joints,
        "joint_names": list(clip.joint_names),
        "root_index": clip.root_index,
        "resolution": resolution,
        "views": sorted(set(renders) - set(unseen)),
        "unseen_views": sorted(set(unseen) & set(renders)),
        "stride": int(stride),
        "count": int(count),
        "sigma": float(sigma),
        "num_coarse_vertices": coarse.topology.num_vertices,
        # frames t disposant du triplet {t-1, t, t+1}
        "triplets": list(range(1, t - 1)),
        **(extra_meta or {}),
    }
    root.mkdir(parents=True, exist_ok=True)
    with open(root / "meta.json", "w", encoding="utf-8") as f:
        json.dump(meta, f, indent=2)

    write_raw(clip.joints, root / "motion" / "joints.f32")
    topo = coarse.topology
    (root / "coarse").mkdir(parents=True, exist_ok=True)
    with open(root / "coarse" / "topology.json", "w", encoding="utf-8") as f:
        json.dump({"faces": topo.faces.tolist(), "uv": topo.uv.tolist(),
                   "rest_vertices": topo.vertices.tolist()}, f)
    write_raw(coarse.per_frame_vertices, root / "coarse" / "verts.f32")

    for p, view in renders.items():
        (root / "views").mkdir(parents=True, exist_ok=True)
        with open(root / "views" / f"view_{p}.json", "w", encoding="utf-8") as f:
            json.dump(view.camera.to_dict(), f, indent=2)
        for i in range(t):
            save_png(view.gt[i], root / "frames" / f"view_{p}" / f"gt_{i}.png")
            save_png(view.bg[i], root / "frames" / f"view_{p}" / f"bg_{i}.png")
            save_png(view.arm_mask[i].astype(np.float64), root / "masks" / f"view_{p}" / f"arm_{i}.png")

    logger.info("Jeu de données écrit: %s (%d frames × %d vues)", root, t, len(renders))
    return root


def read_meta(root: Path) -> Dict[str, Any]:
    path = Path(root) / "meta.json"
    if not path.exists():
        raise FileNotFoundError(f"meta.json introuvable dans {root}")
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def read_camera(root: Path, view: int) -> Camera:
    path = Path(root) / "views" / f"view_{view}.json"
    if not path.exists():
        raise FileNotFoundError(f"Caméra introuvable: {path}")
    with open(path, "r", encoding="utf-8") as f:
        return Camera.from_dict(json.load(f))


def all_views(meta: Dict[str, Any]) -> List[int]:
    """Vues d'entraînement puis vues hors entraînement."""
    return list(meta["views"]) + list(meta.get("unseen_views", []))


def validate_dataset(root: Path) -> List[str]:
    """
    Vérifie la structure du conteneur.

    Returns:
        Liste des violations (vide si le conteneur est valide)
    """
    root = Path(root)
    try:
        meta = read_meta(root)
    except (FileNotFoundError, json.JSONDecodeError) as e:
        return [f"meta.json: {e}"]

    violations = [f"meta.json: clé manquante '{k}'" for k in META_KEYS if k not in meta]
    if violations:
        return violations
    if meta["schema_version"] != DATASET_SCHEMA_VERSION:
        violations.append(f"schema_version {meta['schema_version']} ≠ {DATASET_SCHEMA_VERSION}")

    t, j, v = meta["num_frames"], meta["num_joints"], meta["num_coarse_vertices"]
    for rel, size in (("motion/joints.f32", t * j * 3), ("coarse/verts.f32", t * v * 3)):
        path = root / rel
        if not path.exists():
            violations.append(f"{rel}: fichier manquant")
        elif path.stat().st_size != 4 * size:
            violations.append(f"{rel}: {path.stat().st_size} octets, attendu {4 * size}")
    if not (root / "coarse" / "topology.json").exists():
        violations.append("coarse/topology.json: fichier manquant")

    for p in all_views(meta):
        if not (root / "views" / f"view_{p}.json").exists():
            violations.append(f"views/view_{p}.json: fichier manquant")
        for prefix, folder in (("gt", "frames"), ("bg", "frames"), ("arm", "masks")):
            found = len(list((root / folder / f"view_{p}").glob(f"{prefix}_*.png")))
            if found != t:
                violations.append(f"{folder}/view_{p}: {found} images {prefix}, attendu {t}")
    return violations


def read_dataset(root: Path, views: Optional[List[int]] = None) -> GarmentDataset:
    """
    Charge le conteneur (éventuellement restreint à certaines vues).

    Raises:
        SchemaMismatchError: Conteneur invalide
    """
    root = Path(root)
    violations = validate_dataset(root)
    if violations:
        raise SchemaMismatchError(f"Jeu de données invalide ({root}):\n  - " + "\n  - ".join(violations))
    meta = read_meta(root)
    t, j = meta["num_frames"], meta["num_joints"]

    joints = read_raw(root / "motion" / "joints.f32", (t, j, 3))
    clip = MotionClip(joints, fps=meta["fps"], joint_names=tuple(meta["joint_names"]),
                      root_index=meta.get("root_index", 0))
    with open(root / "coarse" / "topology.json", "r", encoding="utf-8") as f:
        topo = json.load(f)
    topology = TriMesh(np.asarray(topo["rest_vertices"]), np.asarray(topo["faces"], dtype=np.int64),
                       np.asarray(topo["uv"]))
    verts = read_raw(root / "coarse" / "verts.f32", (t, meta["num_coarse_vertices"], 3))

    selected = meta["views"] if views is None else list(views)
    unknown = set(selected) - set(all_views(meta))
    if unknown:
        raise ValueError(f"Vues absentes du jeu de données: {sorted(unknown)}")
    cameras, gt, bg, arm = {}, {}, {}, {}
    for p in selected:
        cameras[p] = read_camera(root, p)
        frames = root / "frames" / f"view_{p}"
        gt[p] = np.stack([load_png(frames / f"gt_{i}.png") for i in range(t)])
        bg[p] = np.stack([load_png(frames / f"bg_{i}.png") for i in range(t)])
        arm[p] = np.stack([load_png(root / "masks" / f"view_{p}" / f"arm_{i}.png") > 0.5 for i in range(t)])

    return GarmentDataset(root, meta, clip, MeshSequence(topology, verts), cameras, gt, bg, arm)
