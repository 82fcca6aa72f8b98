# Rastérisation différée (G-buffer) et ombrage plat
from .gbuffer import GBuffer, rasterize, rasterize_arrays, rasterize_objects, world_positions_at
from .shading import face_normals, shade_lambert

__all__ = [
    "GBuffer",
    "face_normals",
    "rasterize",
    "rasterize_arrays",
    "rasterize_objects",
    "shade_lambert",
    "world_positions_at",
]
