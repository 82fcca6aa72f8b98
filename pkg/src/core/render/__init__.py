# Réseau de rendu : SPADE temporel, générateur, rendu de frame, checkpoint
from .frame import (
    FrameInputs,
    MotionFeatureSettings,
    image_to_tensor,
    prepare_frame_inputs,
    prepare_sequence_inputs,
    render_frame,
    render_sequence,
    tensor_to_image,
)
from .generator import Generator, GeneratorConfig
from .model import RendererModel, config_hash, render_descriptor_config
from .spade import SpadeBlock, TemporalSpade, instance_normalize, spade_apply

__all__ = [
    "FrameInputs",
    "Generator",
    "GeneratorConfig",
    "MotionFeatureSettings",
    "RendererModel",
    "SpadeBlock",
    "TemporalSpade",
    "config_hash",
    "image_to_tensor",
    "instance_normalize",
    "prepare_frame_inputs",
    "prepare_sequence_inputs",
    "render_descriptor_config",
    "render_frame",
    "render_sequence",
    "spade_apply",
    "tensor_to_image",
]
