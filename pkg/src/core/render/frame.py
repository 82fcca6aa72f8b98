"""
Rendu d'une frame : G-buffer du proxy grossier → descripteur Q → générateur.

Les entrées géométriques d'une frame (G-buffer + pile de features de mouvement) sont
calculées une fois en numpy et réutilisées ; seul l'échantillonnage de la texture
neuronale et le générateur sont différentiables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
import torch

from ..garment.constants import MOTION_MAPS, MOTION_STRIDE
from ..garment.types import Camera, MotionClip, TriMesh
from ..neural.descriptor_map import build_descriptor
from ..neural.motion_features import stack_motion_features
from ..neural.texture import NeuralTexture, sample_texture
from ..raster.gbuffer import GBuffer, rasterize
from .generator import Generator


@dataclass(frozen=True)
class MotionFeatureSettings:
    """Paramètres des cartes de features de mouvement (enabled=False : ablation)."""

    sigma: float
    stride: int = MOTION_STRIDE
    maps: int = MOTION_MAPS
    enabled: bool = True


@dataclass
class FrameInputs:
    """
    Attributes:
        gbuffer: Rastérisation du proxy grossier à la frame t
        motion: (H, W, J · maps) ou None sans features de mouvement
    """

    gbuffer: GBuffer
    motion: Optional[np.ndarray]


def prepare_frame_inputs(
    coarse_vertices: np.ndarray,
    topology: TriMesh,
    clip: MotionClip,
    camera: Camera,
    t: int,
    settings: MotionFeatureSettings,
    resolution: Optional[int] = None,
) -> FrameInputs:
    """
    Args:
        coarse_vertices: (T, V, 3) sommets du proxy pour tout le clip
        topology: Faces et UV du proxy
    """
    mesh = topology.with_vertices(coarse_vertices[t])
    gbuffer = rasterize(mesh, camera, resolution)
    motion = None
    if settings.enabled:
        motion = stack_motion_features(gbuffer, coarse_vertices, clip, t,
                                       settings.stride, settings.maps, settings.sigma)
    return FrameInputs(gbuffer, motion)


def prepare_sequence_inputs(
    coarse_vertices: np.ndarray,
    topology: TriMesh,
    clip: MotionClip,
    camera: Camera,
    settings: MotionFeatureSettings,
    resolution: Optional[int] = None,
) -> List[FrameInputs]:
    return [
        prepare_frame_inputs(coarse_vertices, topology, clip, camera, t, settings, resolution)
        for t in range(len(clip))
    ]


def descriptor_tensor(texture: NeuralTexture, inputs: FrameInputs) -> torch.Tensor:
    """Q au format (1, C, H, W), différentiable par rapport aux texels."""
    features = sample_texture(texture, inputs.gbuffer)
    return build_descriptor(features, inputs.motion, inputs.gbuffer.mask).to_nchw()


def image_to_tensor(image: np.ndarray) -> torch.Tensor:
    """(H, W, 3) numpy → (1, 3, H, W) float32."""
    return torch.from_numpy(np.ascontiguousarray(image, dtype=np.float32)).permute(2, 0, 1).unsqueeze(0)


def tensor_to_image(rgb: torch.Tensor) -> np.ndarray:
    """(1, 3, H, W) → (H, W, 3) float64 dans [0, 1]."""
    return rgb.detach()[0].permute(1, 2, 0).cpu().numpy().astype(np.float64).clip(0.0, 1.0)


def render_frame(
    generator: Generator,
    texture: NeuralTexture,
    current: FrameInputs,
    previous: Optional[FrameInputs],
    background: np.ndarray | torch.Tensor,
) -> Dict[str, torch.Tensor]:
    """
    R_t = G(Q_t, Q_{t-1}, B_t).

    Args:
        previous: Entrées de la frame t-1 ; None en début de séquence (Q_{t-1} := Q_t)
        background: Rendu du corps seul, (H, W, 3) numpy ou (1, 3, H, W)

    Returns:
        {"rgb": (1, 3, H, W), "alpha": (1, 1, H, W), "features": (1, 32, H, W)}
    """
    q_t = descriptor_tensor(texture, current)
    q_prev = None if previous is None else descriptor_tensor(texture, previous)
    b = background if isinstance(background, torch.Tensor) else image_to_tensor(background)
    return generator(q_t, q_prev, b)


def render_sequence(
    generator: Generator,
    texture: NeuralTexture,
    inputs: List[FrameInputs],
    backgrounds: np.ndarray,
) -> np.ndarray:
    """
    Rend une séquence complète frame par frame (Q_{t-1} := Q_t à la première frame).

    Args:
        inputs: Entrées géométriques par frame
        backgrounds: (T, H, W, 3)

    Returns:
        (T, H, W, 3) dans [0, 1]
    """
    frames = []
    with torch.no_grad():
        for t, current in enumerate(inputs):
            out = render_frame(generator, texture, current, inputs[t - 1] if t else None, backgrounds[t])
            frames.append(tensor_to_image(out["rgb"]))
    return np.stack(frames)
