"""
Validation de configuration avec Pydantic.

Un seul fichier YAML (config/config.yaml) ; les options de la CLI surchargent les champs
après validation (validate_assignment=True : chaque surcharge est revalidée).
"""

from pathlib import Path
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..garment.constants import NUM_JOINTS
from ..utils.path_resolver import PathResolver

RESOLUTION_MULTIPLE = 32


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", validate_assignment=True)


class PathsConfig(_Section):
    """Configuration des chemins de dossiers (relatifs à la racine du projet)."""

    data_root: str = Field(..., description="Dossier data")
    datasets: str = Field(..., description="Jeux de données générés")
    models: str = Field(..., description="Checkpoints")
    renders: str = Field(..., description="Frames rendues et métriques")

    @field_validator("data_root", "datasets", "models", "renders")
    @classmethod
    def validate_paths_exist(cls, v: str) -> str:
        """Valide que les dossiers existent."""
        path = PathResolver.absolute(Path(v))
        if not path.exists():
            raise ValueError(f"Chemin introuvable: {v}. Le dossier doit exister.")
        if not path.is_dir():
            raise ValueError(f"Le chemin n'est pas un dossier: {v}")
        return v


class DatasetConfig(_Section):
    """Génération du jeu de données (caméras, images)."""

    name: str = Field(..., min_length=1)
    num_frames: int = Field(ge=3, le=100000, description="Frames simulées")
    fps: float = Field(gt=0.0, le=1000.0)
    resolution: int = Field(ge=RESOLUTION_MULTIPLE, le=4096, description="Côté des images (pixels)")
    views: int = Field(ge=1, le=64, description="Caméras par frame")
    camera_radius: float = Field(gt=0.0)
    camera_elevation: float = Field(ge=-1.5, le=1.5, description="Mètres au-dessus de la cible")
    camera_fov_deg: float = Field(gt=1.0, lt=179.0)
    azimuth_mode: Literal["random", "uniform"] = "random"
    seed: int = Field(ge=0)
    n_jobs: int = Field(default=1, description="Processus joblib (-1 = tous les cœurs)")
    unseen_view: bool = Field(default=True, description="Rend aussi une vue hors entraînement (évaluation)")

    @field_validator("resolution")
    @classmethod
    def validate_resolution(cls, v: int) -> int:
        if v % RESOLUTION_MULTIPLE:
            raise ValueError(f"resolution ({v}) doit être divisible par {RESOLUTION_MULTIPLE}")
        return v

    @field_validator("n_jobs")
    @classmethod
    def validate_n_jobs(cls, v: int) -> int:
        if v == 0 or v < -1:
            raise ValueError(f"n_jobs doit être >= 1 ou -1, reçu {v}")
        return v


class PaletteConfig(_Section):
    background: List[float] = Field(min_length=3, max_length=3)
    body: List[float] = Field(min_length=3, max_length=3)
    garment: List[float] = Field(min_length=3, max_length=3)

    @field_validator("background", "body", "garment")
    @classmethod
    def validate_rgb(cls, v: List[float]) -> List[float]:
        if any(c < 0.0 or c > 1.0 for c in v):
            raise ValueError(f"Couleur hors de [0, 1]: {v}")
        return v


class SimulationConfig(_Section):
    """Simulation PBD du proxy et du vêtement cible."""

    motion_style: Literal["sway", "step", "spin"] = "sway"
    template_kind: Literal["long_skirt", "short_skirt", "dress"] = "long_skirt"
    target_kind: Literal["long_skirt", "short_skirt", "dress"] = "long_skirt"
    coarse_spacing: float = Field(gt=0.0, le=1.0, description="Mètres")
    target_spacing: float = Field(gt=0.0, le=1.0, description="Mètres")
    target_pleat_amplitude: float = Field(ge=0.0, le=0.2)
    gravity: float = Field(le=0.0)
    substeps: int = Field(ge=1, le=64)
    iterations: int = Field(ge=1, le=500)
    stretch_compliance: float = Field(ge=0.0)
    bending_stiffness: float = Field(ge=0.0, le=1.0)
    collision_margin: float = Field(ge=0.0, le=0.1)
    strain_tolerance: float = Field(gt=0.0, le=1.0)
    body_radius_scale: float = Field(gt=0.0, le=3.0)
    palette: PaletteConfig


class DescriptorConfig(_Section):
    """Descripteur de mouvement et cartes de features de mouvement."""

    stride: int = Field(ge=1, le=64)
    count: int = Field(ge=1, le=256)
    joints: int = Field(ge=1)
    motion_maps: int = Field(ge=1, le=64)
    motion_stride: int = Field(ge=1, le=64)
    sigma: Optional[float] = Field(default=None, gt=0.0, description="m² ; None → (0.5 · taille)²")
    motion_features: bool = True

    @field_validator("joints")
    @classmethod
    def validate_joints(cls, v: int) -> int:
        if v != NUM_JOINTS:
            raise ValueError(f"Le squelette compte {NUM_JOINTS} articulations, reçu {v}")
        return v

    @property
    def flat_length(self) -> int:
        return self.count * self.joints * 3


class CoarseConfig(_Section):
    """Joint2Coarse."""

    epochs: int = Field(ge=1)
    motion_epochs: int = Field(ge=1)
    lr: float = Field(gt=0.0, le=1.0)
    dropout: float = Field(ge=0.0, lt=1.0)
    batch_size: int = Field(ge=1)
    seed: int = Field(ge=0)
    motion_input_dim: Optional[int] = Field(default=None, ge=1, description="Entrée de l'encodeur de mouvement")


class RendererConfig(_Section):
    """Réseau de rendu, pertes et optimiseurs."""

    texture_resolution: int = Field(ge=8, le=4096)
    texture_levels: int = Field(ge=1, le=8)
    texture_channels: int = Field(ge=1, le=64)
    lambda_feat: float = Field(ge=0.0)
    lambda_percept: float = Field(ge=0.0)
    lambda_gan: float = Field(ge=0.0)
    beta1: float = Field(ge=0.0, lt=1.0)
    beta2: float = Field(ge=0.0, lt=1.0)
    lr_generator: float = Field(gt=0.0, le=1.0)
    lr_discriminator: float = Field(gt=0.0, le=1.0)
    batch_size: int = Field(ge=1)
    max_steps: int = Field(ge=0)
    epochs: int = Field(ge=1)
    perceptual: Literal["random", "vgg19"] = "random"
    objective: Literal["full", "l1"] = "full"
    checkpoint_every: int = Field(ge=0)
    seed: int = Field(ge=0)

    @model_validator(mode="after")
    def validate_texture_levels(self):
        """La résolution de texture doit se diviser exactement à chaque niveau."""
        if self.texture_resolution % (2 ** (self.texture_levels - 1)):
            raise ValueError(
                f"texture_resolution ({self.texture_resolution}) non divisible par "
                f"2^(texture_levels-1) = {2 ** (self.texture_levels - 1)}"
            )
        return self


class FinetuneConfig(_Section):
    body_budget_ratio: float = Field(gt=0.0, le=1.0)
    background_iterations: int = Field(ge=1)
    background_batch_size: int = Field(ge=1)


class EvaluationConfig(_Section):
    embedder: Optional[Literal["inception"]] = None
    vfid_window: int = Field(ge=1)


class PostprocessConfig(_Section):
    relayer: bool = False
    depth_guard: float = Field(ge=0.0, le=1.0, description="Mètres")


class PipelineConfig(BaseModel):
    """
    Configuration complète du pipeline.

    Valide la structure, les types, les plages de valeurs, les chemins et la cohérence.
    """
    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    paths: PathsConfig
    dataset: DatasetConfig
    simulation: SimulationConfig
    descriptor: DescriptorConfig
    coarse: CoarseConfig
    renderer: RendererConfig
    finetune: FinetuneConfig
    evaluation: EvaluationConfig
    postprocess: PostprocessConfig

    @model_validator(mode="after")
    def validate_motion_input_coherence(self):
        """count · J · 3 doit égaler l'entrée de l'encodeur de mouvement."""
        expected = self.coarse.motion_input_dim
        if expected is not None and expected != self.descriptor.flat_length:
            raise ValueError(
                f"Incohérence descripteur: count ({self.descriptor.count}) × joints "
                f"({self.descriptor.joints}) × 3 = {self.descriptor.flat_length} ≠ "
                f"coarse.motion_input_dim ({expected})"
            )
        return self

    @model_validator(mode="after")
    def validate_spacing_coherence(self):
        """Le vêtement cible doit être plus fin que le proxy grossier."""
        if self.simulation.target_spacing >= self.simulation.coarse_spacing:
            raise ValueError(
                f"target_spacing ({self.simulation.target_spacing}) doit être < "
                f"coarse_spacing ({self.simulation.coarse_spacing})"
            )
        return self


def _format_errors(e: ValidationError) -> str:
    errors = []
    for error in e.errors():
        field_path = " -> ".join(str(loc) for loc in error["loc"]) or "(racine)"
        if error["type"] == "missing":
            errors.append(f"Champ manquant: {field_path}")
        elif error["type"] == "extra_forbidden":
            errors.append(f"Champ inattendu: {field_path}")
        else:
            errors.append(f"Erreur dans '{field_path}': {error['msg']}")
    return "Erreurs de validation de configuration:\n" + "\n".join(f"  - {err}" for err in errors)


def load_and_validate_config(config_path: str) -> PipelineConfig:
    """
    Charge et valide un fichier de configuration YAML.

    Args:
        config_path: Chemin vers le fichier config.yaml

    Returns:
        Instance de PipelineConfig validée

    Raises:
        FileNotFoundError: Si le fichier n'existe pas
        ValueError: YAML invalide ou validation échouée (messages par champ)
    """
    import yaml

    path = Path(config_path)
    if not path.exists():
        raise FileNotFoundError(f"Fichier de configuration introuvable: {config_path}")

    try:
        with open(path, "r", encoding="utf-8") as f:
            config_dict = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ValueError(f"Erreur de parsing YAML: {e}") from e

    if config_dict is None:
        raise ValueError("Le fichier de configuration est vide")
    return validate_config_dict(config_dict)


def validate_config_dict(config_dict: Dict) -> PipelineConfig:
    """
    Valide un dictionnaire de configuration.

    Raises:
        ValueError: Si la validation échoue
    """
    try:
        return PipelineConfig(**config_dict)
    except ValidationError as e:
        raise ValueError(_format_errors(e)) from e
