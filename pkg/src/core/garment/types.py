"""
Types géométriques et cinématiques partagés par tous les modules.

Tous les types sont immuables après construction (tableaux numpy en lecture seule),
ce qui permet de les partager entre threads sans copie.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ..exceptions import ShapeMismatchError
from .constants import JOINT_NAMES, ROOT_INDEX, ROTATION_TOLERANCE

IMAGE_KINDS = ("rgb", "feature", "mask", "depth")


def _frozen(array: Any, dtype=np.float64) -> np.ndarray:
    """Copie un tableau et le passe en lecture seule."""
    out = np.array(array, dtype=dtype, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class SkeletonPose:
    """
    Pose du squelette : positions monde des J articulations (mètres).

    Attributes:
        joints: Tableau (J, 3)
        root_index: Indice de l'articulation racine
    """

    joints: np.ndarray
    root_index: int = ROOT_INDEX

    def __post_init__(self) -> None:
        joints = _frozen(self.joints)
        if joints.ndim != 2 or joints.shape[1] != 3:
            raise ShapeMismatchError(f"SkeletonPose attend (J, 3), reçu {joints.shape}")
        if not np.all(np.isfinite(joints)):
            raise ValueError("SkeletonPose: coordonnées non finies")
        if not 0 <= self.root_index < joints.shape[0]:
            raise ValueError(f"root_index hors bornes: {self.root_index}")
        object.__setattr__(self, "joints", joints)

    @property
    def num_joints(self) -> int:
        return int(self.joints.shape[0])

    @property
    def root(self) -> np.ndarray:
        return self.joints[self.root_index]


@dataclass(frozen=True)
class MotionClip:
    """
    Séquence de poses à fréquence constante.

    Stockée sous forme dense (T, J, 3) ; `poses` reconstruit la liste de SkeletonPose.
    """

    joints: np.ndarray
    fps: float
    root_index: int = ROOT_INDEX
    joint_names: Tuple[str, ...] = field(default_factory=lambda: tuple(JOINT_NAMES))

    def __post_init__(self) -> None:
        joints = _frozen(self.joints)
        if joints.ndim != 3 or joints.shape[2] != 3:
            raise ShapeMismatchError(f"MotionClip attend (T, J, 3), reçu {joints.shape}")
        if joints.shape[0] < 1:
            raise ValueError("MotionClip doit contenir au moins une frame")
        if self.fps <= 0:
            raise ValueError(f"fps doit être > 0, reçu {self.fps}")
        if not np.all(np.isfinite(joints)):
            raise ValueError("MotionClip: coordonnées non finies")
        if len(self.joint_names) != joints.shape[1]:
            raise ShapeMismatchError(
                f"{len(self.joint_names)} noms d'articulations pour J={joints.shape[1]}"
            )
        object.__setattr__(self, "joints", joints)
        object.__setattr__(self, "joint_names", tuple(self.joint_names))

    @classmethod
    def from_poses(cls, poses: Sequence[SkeletonPose], fps: float) -> "MotionClip":
        """Construit un clip depuis une liste de poses (J constant requis)."""
        if not poses:
            raise ValueError("MotionClip doit contenir au moins une frame")
        sizes = {p.num_joints for p in poses}
        if len(sizes) != 1:
            raise ShapeMismatchError(f"Nombre d'articulations variable: {sorted(sizes)}")
        joints = np.stack([p.joints for p in poses])
        names = tuple(JOINT_NAMES) if joints.shape[1] == len(JOINT_NAMES) else tuple(
            f"joint_{i}" for i in range(joints.shape[1])
        )
        return cls(joints=joints, fps=fps, root_index=poses[0].root_index, joint_names=names)

    def __len__(self) -> int:
        return int(self.joints.shape[0])

    @property
    def num_joints(self) -> int:
        return int(self.joints.shape[1])

    def pose(self, t: int) -> SkeletonPose:
        return SkeletonPose(self.joints[t], self.root_index)

    @property
    def poses(self) -> List[SkeletonPose]:
        return [self.pose(t) for t in range(len(self))]

    def translated(self, offset: Sequence[float]) -> "MotionClip":
        """Copie du clip translatée globalement."""
        return MotionClip(
            joints=self.joints + np.asarray(offset, dtype=np.float64),
            fps=self.fps,
            root_index=self.root_index,
            joint_names=self.joint_names,
        )


@dataclass(frozen=True)
class MotionDescriptor:
    """
    Fenêtre de poses relative à la racine de la frame t.

    Attributes:
        window: (count, J, 3), ligne 0 = frame t
        frame_index: t
    """

    window: np.ndarray
    frame_index: int

    def __post_init__(self) -> None:
        window = _frozen(self.window)
        if window.ndim != 3 or window.shape[2] != 3:
            raise ShapeMismatchError(f"MotionDescriptor attend (F, J, 3), reçu {window.shape}")
        if not np.all(np.isfinite(window)):
            raise ValueError("MotionDescriptor: valeurs non finies")
        object.__setattr__(self, "window", window)

    def flatten(self) -> np.ndarray:
        return self.window.reshape(-1).copy()

    @property
    def flat_length(self) -> int:
        return int(self.window.size)


@dataclass(frozen=True)
class TriMesh:
    """
    Maillage triangulaire avec atlas UV par coin de face.

    Attributes:
        vertices: (V, 3) mètres
        faces: (F, 3) indices de sommets
        uv: (F, 3, 2) dans [0, 1]²
    """

    vertices: np.ndarray
    faces: np.ndarray
    uv: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", _frozen(self.vertices).reshape(-1, 3))
        object.__setattr__(self, "faces", _frozen(self.faces, dtype=np.int64).reshape(-1, 3))
        object.__setattr__(self, "uv", _frozen(self.uv).reshape(-1, 3, 2))
        if self.uv.shape[0] != self.faces.shape[0]:
            raise ShapeMismatchError(
                f"uv ({self.uv.shape[0]} faces) et faces ({self.faces.shape[0]}) incohérents"
            )

    @classmethod
    def empty(cls) -> "TriMesh":
        return cls(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64), np.zeros((0, 3, 2)))

    @property
    def num_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def num_faces(self) -> int:
        return int(self.faces.shape[0])

    def edges(self) -> np.ndarray:
        """Arêtes uniques (E, 2), triées par (i, j) avec i < j."""
        if self.num_faces == 0:
            return np.zeros((0, 2), dtype=np.int64)
        f = self.faces
        e = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        e = np.sort(e, axis=1)
        return np.unique(e, axis=0)

    def with_vertices(self, vertices: np.ndarray) -> "TriMesh":
        return TriMesh(vertices, self.faces, self.uv)


@dataclass(frozen=True)
class MeshSequence:
    """Topologie constante + positions déformées par frame (T, V, 3)."""

    topology: TriMesh
    per_frame_vertices: np.ndarray

    def __post_init__(self) -> None:
        verts = _frozen(self.per_frame_vertices)
        if verts.ndim != 3 or verts.shape[1:] != (self.topology.num_vertices, 3):
            raise ShapeMismatchError(
                f"per_frame_vertices {verts.shape} incompatible avec V={self.topology.num_vertices}"
            )
        object.__setattr__(self, "per_frame_vertices", verts)

    def __len__(self) -> int:
        return int(self.per_frame_vertices.shape[0])

    def frame(self, t: int) -> np.ndarray:
        return self.per_frame_vertices[t]

    def mesh_at(self, t: int) -> TriMesh:
        return self.topology.with_vertices(self.per_frame_vertices[t])


@dataclass(frozen=True)
class Camera:
    """
    Caméra sténopé (convention : x droite, y bas, z avant).

    X_cam = R · X_monde + t ; pixel = (fx·X/Z + cx, fy·Y/Z + cy).
    """

    intrinsics: Tuple[float, float, float, float]
    rotation: np.ndarray
    translation: np.ndarray
    view_id: int = 0
    width: int = 128
    height: int = 128

    def __post_init__(self) -> None:
        fx, fy, _, _ = (float(v) for v in self.intrinsics)
        if fx <= 0 or fy <= 0:
            raise ValueError(f"Focales invalides: fx={fx}, fy={fy}")
        rot = _frozen(self.rotation).reshape(3, 3)
        if np.max(np.abs(rot @ rot.T - np.eye(3))) > ROTATION_TOLERANCE:
            raise ValueError("La rotation de la caméra n'est pas orthonormée")
        object.__setattr__(self, "intrinsics", tuple(float(v) for v in self.intrinsics))
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "translation", _frozen(self.translation).reshape(3))

    @classmethod
    def look_at(
        cls,
        eye: Sequence[float],
        target: Sequence[float],
        width: int,
        height: int,
        fov_deg: float,
        view_id: int = 0,
        up: Sequence[float] = (0.0, 1.0, 0.0),
    ) -> "Camera":
        """Caméra placée en `eye` et visant `target`."""
        eye_v = np.asarray(eye, dtype=np.float64)
        forward = np.asarray(target, dtype=np.float64) - eye_v
        forward /= np.linalg.norm(forward)
        right = np.cross(forward, np.asarray(up, dtype=np.float64))
        right /= np.linalg.norm(right)
        down = np.cross(forward, right)
        rot = np.stack([right, down, forward])
        focal = 0.5 * width / np.tan(np.radians(fov_deg) / 2.0)
        return cls(
            intrinsics=(focal, focal, width / 2.0, height / 2.0),
            rotation=rot,
            translation=-rot @ eye_v,
            view_id=view_id,
            width=width,
            height=height,
        )

    @property
    def center(self) -> np.ndarray:
        """Position monde du centre optique."""
        return -self.rotation.T @ self.translation

    def to_camera(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=np.float64) @ self.rotation.T + self.translation

    def project(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Projette des points monde.

        Returns:
            (xy pixels (N, 2), profondeur caméra (N,))
        """
        cam = self.to_camera(points)
        fx, fy, cx, cy = self.intrinsics
        z = cam[:, 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            xy = np.stack([fx * cam[:, 0] / z + cx, fy * cam[:, 1] / z + cy], axis=1)
        return xy, z

    def with_resolution(self, width: int, height: int) -> "Camera":
        """Même caméra, intrinsèques remises à l'échelle."""
        sx, sy = width / self.width, height / self.height
        fx, fy, cx, cy = self.intrinsics
        return Camera((fx * sx, fy * sy, cx * sx, cy * sy), self.rotation, self.translation,
                      self.view_id, width, height)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "view_id": self.view_id,
            "intrinsics": list(self.intrinsics),
            "rotation": self.rotation.tolist(),
            "translation": self.translation.tolist(),
            "width": self.width,
            "height": self.height,
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "Camera":
        return cls(
            intrinsics=tuple(d["intrinsics"]),
            rotation=np.asarray(d["rotation"]),
            translation=np.asarray(d["translation"]),
            view_id=int(d.get("view_id", 0)),
            width=int(d.get("width", 128)),
            height=int(d.get("height", 128)),
        )


@dataclass(frozen=True)
class Image:
    """Image flottante (H, W, C) typée."""

    pixels: np.ndarray
    kind: str = "rgb"

    def __post_init__(self) -> None:
        if self.kind not in IMAGE_KINDS:
            raise ValueError(f"Type d'image inconnu: {self.kind}")
        px = _frozen(self.pixels, dtype=np.float32)
        if px.ndim == 2:
            px = px[..., None]
            px.flags.writeable = False
        if px.ndim != 3 or px.shape[0] == 0 or px.shape[1] == 0:
            raise ShapeMismatchError(f"Image attend (H, W, C) non vide, reçu {px.shape}")
        if self.kind in ("rgb", "mask") and (px.min() < 0.0 or px.max() > 1.0):
            raise ValueError(f"Valeurs {self.kind} hors de [0, 1]")
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

