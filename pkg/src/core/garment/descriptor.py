"""
Descripteur de mouvement : fenêtre de poses passées relative à la racine.

Fenêtre par défaut : 17 frames espacées de 2 (t, t-2, ..., t-32) × 19 articulations × 3
= 969 valeurs, taille d'entrée de l'encodeur de mouvement.
"""

import numpy as np

from ..exceptions import InsufficientHistoryError
from .constants import DESCRIPTOR_COUNT, DESCRIPTOR_STRIDE
from .types import MotionClip, MotionDescriptor


def history_indices(t: int, stride: int, count: int, clamp: bool = True) -> np.ndarray:
    """
    Indices {t, t-stride, ..., t-stride·(count-1)}.

    Args:
        clamp: Si True, les indices négatifs sont ramenés à 0

    Raises:
        InsufficientHistoryError: Si clamp=False et l'historique est insuffisant
    """
    if stride < 1:
        raise ValueError(f"stride doit être ≥ 1, reçu {stride}")
    if count < 1:
        raise ValueError(f"count doit être ≥ 1, reçu {count}")
    idx = t - stride * np.arange(count)
    if idx[-1] < 0:
        if not clamp:
            raise InsufficientHistoryError(
                f"Frame {t}: historique insuffisant pour stride={stride}, count={count} "
                f"(besoin de t ≥ {stride * (count - 1)})"
            )
        idx = np.maximum(idx, 0)
    return idx


def make_descriptor(
    clip: MotionClip,
    t: int,
    stride: int = DESCRIPTOR_STRIDE,
    count: int = DESCRIPTOR_COUNT,
) -> MotionDescriptor:
    """
    Construit le descripteur strict : lève une erreur si l'historique manque.

    Ligne k de la fenêtre = pose de la frame t - k·stride moins la racine de la frame t.
    """
    if not 0 <= t < len(clip):
        raise IndexError(f"Frame {t} hors du clip ({len(clip)} frames)")
    idx = history_indices(t, stride, count, clamp=False)
    return _window(clip, t, idx)


def make_descriptor_clamped(
    clip: MotionClip,
    t: int,
    stride: int = DESCRIPTOR_STRIDE,
    count: int = DESCRIPTOR_COUNT,
) -> MotionDescriptor:
    """Variante utilisée par les appelants : indices négatifs ramenés à la frame 0."""
    if not 0 <= t < len(clip):
        raise IndexError(f"Frame {t} hors du clip ({len(clip)} frames)")
    idx = history_indices(t, stride, count, clamp=True)
    return _window(clip, t, idx)


def _window(clip: MotionClip, t: int, idx: np.ndarray) -> MotionDescriptor:
    root = clip.joints[t, clip.root_index]
    window = clip.joints[idx] - root[None, None, :]
    return MotionDescriptor(window=window, frame_index=t)


def descriptor_length(count: int, num_joints: int) -> int:
    """Taille aplatie d'un descripteur (969 pour 17 × 19 × 3)."""
    return count * num_joints * 3
