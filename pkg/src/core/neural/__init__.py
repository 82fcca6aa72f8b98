# Descripteurs neuronaux : texture multi-échelle, features de mouvement, carte Q
from .descriptor_map import DescriptorImage, build_descriptor, descriptor_channels, split_descriptor
from .motion_features import motion_feature_map, stack_motion_features
from .texture import NeuralTexture, sample_texture

__all__ = [
    "DescriptorImage",
    "NeuralTexture",
    "build_descriptor",
    "descriptor_channels",
    "motion_feature_map",
    "sample_texture",
    "split_descriptor",
    "stack_motion_features",
]
