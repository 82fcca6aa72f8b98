"""pytest conftest racine tests/ (marqueurs et fixtures partagés)."""

import sys
from pathlib import Path

import pytest
import yaml

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

# Échelle minimale : quelques frames, images 32×32, entraînements de 2 steps
TINY_OVERRIDES = {
    "dataset": {"num_frames": 6, "resolution": 32, "views": 2, "seed": 3},
    "simulation": {"coarse_spacing": 0.2, "target_spacing": 0.1, "substeps": 2, "iterations": 5},
    "coarse": {"epochs": 2, "motion_epochs": 2, "batch_size": 4},
    "renderer": {"texture_resolution": 16, "texture_levels": 2, "max_steps": 2, "epochs": 1,
                 "checkpoint_every": 0},
    "finetune": {"background_iterations": 2},
}


def pytest_configure(config):
    """Enregistre les marqueurs personnalisés."""
    config.addinivalue_line("markers", "slow: marque les tests lents (simulation et entraînements)")


def write_tiny_config(path: Path, **sections) -> Path:
    """Copie de config/config.yaml réduite pour les tests de bout en bout."""
    with open(ROOT / "config" / "config.yaml", "r", encoding="utf-8") as f:
        config = yaml.safe_load(f)
    for section, values in {**TINY_OVERRIDES, **sections}.items():
        config[section].update(values)
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(config, f)
    return path


@pytest.fixture(scope="session")
def tiny_config_path(tmp_path_factory) -> Path:
    return write_tiny_config(tmp_path_factory.mktemp("config") / "config.yaml")
