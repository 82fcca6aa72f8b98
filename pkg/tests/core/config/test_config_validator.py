"""
Tests unitaires pour la validation de configuration avec Pydantic.
"""

import copy
from typing import Dict

import pytest
import yaml
from pydantic import ValidationError

from src.core.config.config_validator import (
    DatasetConfig,
    DescriptorConfig,
    PathsConfig,
    PipelineConfig,
    load_and_validate_config,
    validate_config_dict,
)
from src.core.utils.path_resolver import PathResolver


@pytest.fixture
def base_config() -> Dict:
    """Configuration du dépôt, chargée comme dictionnaire brut."""
    with open(PathResolver.config_file(), "r", encoding="utf-8") as f:
        return yaml.safe_load(f)


class TestPathsConfig:
    """Tests pour PathsConfig."""

    def test_paths_exist(self):
        config = PathsConfig(data_root="data", datasets="data/datasets", models="data/models",
                             renders="data/renders")

        assert config.models == "data/models"

    def test_paths_missing(self):
        with pytest.raises(ValidationError) as exc_info:
            PathsConfig(data_root="data", datasets="data/nonexistent", models="data/models",
                        renders="data/renders")

        assert any("introuvable" in str(e.get("msg", "")) for e in exc_info.value.errors())


class TestSectionValidators:
    """Tests pour les validateurs de section."""

    def test_resolution_multiple_of_32(self, base_config):
        section = {**base_config["dataset"], "resolution": 100}

        with pytest.raises(ValidationError, match="divisible par 32"):
            DatasetConfig(**section)

    def test_n_jobs_zero(self, base_config):
        with pytest.raises(ValidationError, match="n_jobs"):
            DatasetConfig(**{**base_config["dataset"], "n_jobs": 0})

    def test_joint_count(self, base_config):
        with pytest.raises(ValidationError, match="19 articulations"):
            DescriptorConfig(**{**base_config["descriptor"], "joints": 20})

    def test_flat_length(self, base_config):
        assert DescriptorConfig(**base_config["descriptor"]).flat_length == 969

    def test_extra_field_forbidden(self, base_config):
        with pytest.raises(ValidationError):
            DescriptorConfig(**{**base_config["descriptor"], "window": 3})


class TestPipelineConfig:
    """Tests pour la configuration complète."""

    def test_repository_config_is_valid(self, base_config):
        config = validate_config_dict(base_config)

        assert isinstance(config, PipelineConfig)
        assert config.dataset.resolution % 32 == 0
        assert config.descriptor.motion_features is True

    def test_motion_input_incoherence(self, base_config):
        cfg = copy.deepcopy(base_config)
        cfg["descriptor"]["count"] = 5

        with pytest.raises(ValueError, match="Incohérence descripteur"):
            validate_config_dict(cfg)

    def test_spacing_incoherence(self, base_config):
        cfg = copy.deepcopy(base_config)
        cfg["simulation"]["target_spacing"] = cfg["simulation"]["coarse_spacing"]

        with pytest.raises(ValueError, match="target_spacing"):
            validate_config_dict(cfg)

    def test_texture_levels_divisibility(self, base_config):
        cfg = copy.deepcopy(base_config)
        cfg["renderer"]["texture_resolution"] = 100

        with pytest.raises(ValueError, match="texture_resolution"):
            validate_config_dict(cfg)

    def test_missing_section_message(self, base_config):
        cfg = copy.deepcopy(base_config)
        del cfg["coarse"]

        with pytest.raises(ValueError, match="Champ manquant: coarse"):
            validate_config_dict(cfg)

    def test_palette_out_of_range(self, base_config):
        cfg = copy.deepcopy(base_config)
        cfg["simulation"]["palette"]["body"] = [1.5, 0.0, 0.0]

        with pytest.raises(ValueError, match="palette"):
            validate_config_dict(cfg)

    def test_assignment_revalidated(self, base_config):
        """Une surcharge CLI invalide est refusée."""
        config = validate_config_dict(base_config)

        with pytest.raises(ValidationError):
            config.dataset.resolution = 33


class TestLoadConfig:
    """Tests pour load_and_validate_config."""

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_and_validate_config(str(tmp_path / "absent.yaml"))

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("", encoding="utf-8")

        with pytest.raises(ValueError, match="vide"):
            load_and_validate_config(str(path))

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("dataset: [unclosed", encoding="utf-8")

        with pytest.raises(ValueError, match="YAML"):
            load_and_validate_config(str(path))

    def test_repository_file(self):
        config = load_and_validate_config(str(PathResolver.config_file()))

        assert config.coarse.motion_input_dim == 969
