"""
Import/export minimal de clips de mouvement au format JSON.

Format : {"fps": 30.0, "root_index": 0, "joint_names": [...], "frames": [[[x, y, z], ...], ...]}
"""

import json
from pathlib import Path
from typing import Union

import numpy as np

from ..exceptions import ShapeMismatchError
from .types import MotionClip


def load_motion_json(path: Union[str, Path]) -> MotionClip:
    """
    Charge un clip depuis un fichier JSON.

    Raises:
        FileNotFoundError: Si le fichier n'existe pas
        ShapeMismatchError: Si les frames n'ont pas toutes le même nombre d'articulations
        ValueError: Si le JSON est invalide
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Clip de mouvement introuvable: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except json.JSONDecodeError as e:
        raise ValueError(f"JSON de mouvement invalide ({path}): {e}") from e

    frames = payload.get("frames")
    if not frames:
        raise ValueError(f"Aucune frame dans {path}")
    sizes = {len(frame) for frame in frames}
    if len(sizes) != 1:
        raise ShapeMismatchError(f"Frames de tailles différentes dans {path}: {sorted(sizes)}")

    joints = np.asarray(frames, dtype=np.float64)
    kwargs = {}
    if "joint_names" in payload:
        kwargs["joint_names"] = tuple(payload["joint_names"])
    elif joints.shape[1] != 19:
        kwargs["joint_names"] = tuple(f"joint_{i}" for i in range(joints.shape[1]))
    return MotionClip(
        joints=joints,
        fps=float(payload.get("fps", 30.0)),
        root_index=int(payload.get("root_index", 0)),
        **kwargs,
    )


def save_motion_json(clip: MotionClip, path: Union[str, Path]) -> None:
    """Écrit un clip au format JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "fps": clip.fps,
        "root_index": clip.root_index,
        "joint_names": list(clip.joint_names),
        "frames": clip.joints.tolist(),
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f)
