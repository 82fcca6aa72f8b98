"""
Constantes du domaine : squelette, fenêtres de descripteurs, unités.

Unités : mètres et secondes partout. Tableaux sur disque : float32 little-endian.
"""

from typing import Dict, List, Tuple

# Squelette à 19 articulations (racine = bassin)
JOINT_NAMES: List[str] = [
    "hips",
    "spine",
    "chest",
    "neck",
    "head",
    "l_shoulder",
    "l_elbow",
    "l_wrist",
    "r_shoulder",
    "r_elbow",
    "r_wrist",
    "l_hip",
    "l_knee",
    "l_ankle",
    "l_toe",
    "r_hip",
    "r_knee",
    "r_ankle",
    "r_toe",
]
JOINT_INDEX: Dict[str, int] = {name: i for i, name in enumerate(JOINT_NAMES)}
NUM_JOINTS = len(JOINT_NAMES)
ROOT_INDEX = 0

# Parent de chaque articulation (-1 pour la racine)
JOINT_PARENTS: List[int] = [-1, 0, 1, 2, 3, 2, 5, 6, 2, 8, 9, 0, 11, 12, 13, 0, 15, 16, 17]

# Segments des bras (épaule→coude, coude→poignet)
ARM_SEGMENTS: List[Tuple[int, int]] = [(5, 6), (6, 7), (8, 9), (9, 10)]

# Fenêtre du descripteur de mouvement : 17 frames × 19 × 3 = 969
DESCRIPTOR_STRIDE = 2
DESCRIPTOR_COUNT = 17

# Cartes de features de mouvement : frame courante + 5 passées, intervalle 2
MOTION_MAPS = 6
MOTION_STRIDE = 2

# Features neuronales : 4 niveaux × 16 canaux
TEXTURE_LEVELS = 4
TEXTURE_CHANNELS = 16
NEURAL_FEATURE_DIM = TEXTURE_LEVELS * TEXTURE_CHANNELS

# Tolérances
ROTATION_TOLERANCE = 1e-6
DEGENERATE_AREA_EPS = 1e-12
