# Génération de données : squelette procédural, corps en capsules, tissu PBD, vérité terrain
from .body_proxy import BodyProxy, capsule_mesh, rest_pose
from .cameras import ring_cameras, unseen_camera
from .garment_builder import add_pleats, build_garment_grid, top_ring_vertices
from .ground_truth import Palette, ViewRenders, render_ground_truth
from .motion_generator import MotionParams, animate_skeleton
from .pbd_solver import SimParams, simulate, strain_report

__all__ = [
    "BodyProxy",
    "MotionParams",
    "Palette",
    "SimParams",
    "ViewRenders",
    "add_pleats",
    "animate_skeleton",
    "build_garment_grid",
    "capsule_mesh",
    "rest_pose",
    "render_ground_truth",
    "ring_cameras",
    "simulate",
    "strain_report",
    "top_ring_vertices",
    "unseen_camera",
]
