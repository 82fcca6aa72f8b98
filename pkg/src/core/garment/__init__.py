# Types géométriques et cinématiques partagés (squelette, maillages, caméras)
from .descriptor import make_descriptor, make_descriptor_clamped
from .types import Camera, Image, MeshSequence, MotionClip, MotionDescriptor, SkeletonPose, TriMesh
from .validation import MeshViolation, validate_mesh

__all__ = [
    "Camera",
    "Image",
    "MeshSequence",
    "MeshViolation",
    "MotionClip",
    "MotionDescriptor",
    "SkeletonPose",
    "TriMesh",
    "make_descriptor",
    "make_descriptor_clamped",
    "validate_mesh",
]
