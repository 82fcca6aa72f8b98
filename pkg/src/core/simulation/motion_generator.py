"""
Génération procédurale de clips de mouvement (sway, step, spin).

Cinématique directe sur le squelette à 19 articulations : chaque articulation reçoit
une rotation locale sinusoïdale (nulle à t=0), la racine une translation et un lacet.
Toutes les trajectoires sont C∞ en t ; le clip est déterministe pour une graine donnée.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict

import numpy as np

from ..exceptions import UnknownStyleError
from ..garment.constants import JOINT_INDEX, JOINT_PARENTS, NUM_JOINTS
from ..garment.types import MotionClip
from .body_proxy import REST_OFFSETS

logger = logging.getLogger(__name__)

MOTION_STYLES = ("sway", "step", "spin")


@dataclass(frozen=True)
class MotionParams:
    """
    Paramètres des générateurs procéduraux.

    Attributes:
        frequency: Fréquence des oscillations (Hz)
        stride_length: Longueur d'un pas (m), style step
        step_frequency: Pas par seconde, style step
        spin_rate: Vitesse de lacet (rad/s), style spin
        spin_radius: Rayon du cercle décrit par la racine (m), style spin
        amplitude_jitter: Variation relative des amplitudes tirée de la graine
    """

    frequency: float = 0.8
    stride_length: float = 0.35
    step_frequency: float = 1.6
    spin_rate: float = 1.5
    spin_radius: float = 0.10
    amplitude_jitter: float = 0.2


def _rotation(axis: str, angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    if axis == "x":
        return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])
    if axis == "y":
        return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def forward_kinematics(
    root_position: np.ndarray,
    root_yaw: float,
    local_rotations: Dict[int, np.ndarray],
) -> np.ndarray:
    """
    Positions monde (J, 3) à partir des rotations locales (identité si absente).
    """
    world_rot = [np.eye(3)] * NUM_JOINTS
    joints = np.zeros((NUM_JOINTS, 3))
    for j, parent in enumerate(JOINT_PARENTS):
        local = local_rotations.get(j, np.eye(3))
        if parent < 0:
            world_rot[j] = _rotation("y", root_yaw) @ local
            joints[j] = root_position
        else:
            world_rot[j] = world_rot[parent] @ local
            joints[j] = joints[parent] + world_rot[parent] @ REST_OFFSETS[j]
    return joints


def root_displacement_step(num_frames: int, fps: float, params: MotionParams) -> float:
    """Déplacement de la racine (forme fermée) à la dernière frame du style step."""
    duration = (num_frames - 1) / fps
    return params.stride_length * params.step_frequency * duration


def _pose_sway(t: float, amp: np.ndarray, params: MotionParams):
    w = 2 * np.pi * params.frequency
    phase = np.sin(w * t)
    rots = {
        JOINT_INDEX["hips"]: _rotation("z", 0.12 * amp[0] * phase),
        JOINT_INDEX["spine"]: _rotation("z", -0.08 * amp[1] * phase),
        JOINT_INDEX["chest"]: _rotation("y", 0.15 * amp[2] * np.sin(0.5 * w * t)),
        JOINT_INDEX["l_shoulder"]: _rotation("x", -0.5 * amp[3] * phase),
        JOINT_INDEX["r_shoulder"]: _rotation("x", 0.5 * amp[3] * phase),
        JOINT_INDEX["l_elbow"]: _rotation("x", -0.3 * amp[4] * (1 - np.cos(w * t))),
        JOINT_INDEX["r_elbow"]: _rotation("x", -0.3 * amp[4] * (1 - np.cos(w * t))),
        JOINT_INDEX["l_hip"]: _rotation("z", -0.12 * amp[0] * phase),
        JOINT_INDEX["r_hip"]: _rotation("z", -0.12 * amp[0] * phase),
    }
    return REST_OFFSETS[0].copy(), 0.0, rots


def _pose_step(t: float, amp: np.ndarray, params: MotionParams):
    w = np.pi * params.step_frequency  # une période = deux pas
    phase = np.sin(w * t)
    root = REST_OFFSETS[0].copy()
    root[2] += params.stride_length * params.step_frequency * t
    rots = {
        JOINT_INDEX["l_hip"]: _rotation("x", -0.45 * amp[0] * phase),
        JOINT_INDEX["r_hip"]: _rotation("x", 0.45 * amp[0] * phase),
        JOINT_INDEX["l_knee"]: _rotation("x", 0.5 * amp[1] * np.maximum(phase, 0.0) ** 2),
        JOINT_INDEX["r_knee"]: _rotation("x", 0.5 * amp[1] * np.maximum(-phase, 0.0) ** 2),
        JOINT_INDEX["l_shoulder"]: _rotation("x", 0.4 * amp[3] * phase),
        JOINT_INDEX["r_shoulder"]: _rotation("x", -0.4 * amp[3] * phase),
        JOINT_INDEX["chest"]: _rotation("y", -0.1 * amp[2] * phase),
    }
    return root, 0.0, rots


def _pose_spin(t: float, amp: np.ndarray, params: MotionParams):
    yaw = params.spin_rate * t
    root = REST_OFFSETS[0].copy()
    root[0] += params.spin_radius * np.sin(yaw)
    root[2] += params.spin_radius * (1 - np.cos(yaw))
    lift = 0.6 * amp[3] * np.sin(0.5 * params.spin_rate * t) ** 2
    rots = {
        JOINT_INDEX["l_shoulder"]: _rotation("z", -lift),
        JOINT_INDEX["r_shoulder"]: _rotation("z", lift),
        JOINT_INDEX["l_elbow"]: _rotation("x", -0.4 * amp[4] * np.sin(2 * np.pi * params.frequency * t)),
        JOINT_INDEX["r_elbow"]: _rotation("x", 0.4 * amp[4] * np.sin(2 * np.pi * params.frequency * t)),
        JOINT_INDEX["hips"]: _rotation("z", 0.08 * amp[0] * np.sin(2 * np.pi * params.frequency * t)),
    }
    return root, yaw, rots


_GENERATORS = {"sway": _pose_sway, "step": _pose_step, "spin": _pose_spin}


def animate_skeleton(
    style: str,
    num_frames: int,
    fps: float,
    seed: int,
    params: MotionParams = MotionParams(),
) -> MotionClip:
    """
    Génère un clip procédural.

    Args:
        style: sway (racine fixe), step (translation avant), spin (lacet + cercle)
        num_frames: Nombre de frames (≥ 1)
        fps: Frames par seconde
        seed: Graine des variations d'amplitude

    Raises:
        UnknownStyleError: Style inconnu
    """
    if style not in _GENERATORS:
        raise UnknownStyleError(f"Style de mouvement inconnu: {style} (attendu: {MOTION_STYLES})")
    if num_frames < 1:
        raise ValueError(f"num_frames doit être ≥ 1, reçu {num_frames}")
    if fps <= 0:
        raise ValueError(f"fps doit être > 0, reçu {fps}")

    rng = np.random.default_rng(seed)
    amp = 1.0 + params.amplitude_jitter * rng.uniform(-1.0, 1.0, size=6)
    generator = _GENERATORS[style]

    frames = np.zeros((num_frames, NUM_JOINTS, 3))
    for i in range(num_frames):
        root, yaw, rots = generator(i / fps, amp, params)
        frames[i] = forward_kinematics(root, yaw, rots)

    logger.debug("Clip %s généré: %d frames @ %.1f fps (seed=%d)", style, num_frames, fps, seed)
    return MotionClip(joints=frames, fps=fps)
