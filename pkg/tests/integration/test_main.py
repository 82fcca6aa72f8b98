"""
Tests d'intégration pour main.py : surcharges de la CLI, codes de sortie, enchaînement
des commandes.
"""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest
import yaml

from main import EXIT_CONFIG, EXIT_SCHEMA, _parse_args, apply_overrides, main

# Racine projet
ROOT = Path(__file__).resolve().parents[2]


def _config(path: Path, **sections) -> Path:
    with open(ROOT / "config" / "config.yaml", "r", encoding="utf-8") as f:
        config = yaml.safe_load(f)
    for section, values in sections.items():
        config[section].update(values)
    path.write_text(yaml.safe_dump(config), encoding="utf-8")
    return path


def test_config_load_and_validate() -> None:
    """Charge et valide config/config.yaml (structure, valeurs, chemins)."""
    from src.core.config.config_validator import load_and_validate_config
    from src.core.utils.path_resolver import PathResolver

    path = PathResolver.config_file("config.yaml")
    assert path.exists(), "config/config.yaml doit exister"
    config = load_and_validate_config(str(path))
    assert config.dataset.resolution % 32 == 0
    assert config.descriptor.flat_length == config.coarse.motion_input_dim


def test_overrides_applied() -> None:
    from src.core.config.config_validator import load_and_validate_config

    args = _parse_args(["--seed", "7", "--resolution", "64", "--views", "3", "--no-motion-features",
                        "--relayer", "gen-data"])
    config = apply_overrides(load_and_validate_config(str(ROOT / "config" / "config.yaml")), args)

    assert config.dataset.seed == config.coarse.seed == config.renderer.seed == 7
    assert config.dataset.resolution == 64
    assert config.dataset.views == 3
    assert config.descriptor.motion_features is False
    assert config.postprocess.relayer is True


def test_missing_config_exit_code(tmp_path) -> None:
    assert main(["--config", str(tmp_path / "absent.yaml"), "gen-data"]) == EXIT_CONFIG


def test_invalid_config_exit_code(tmp_path) -> None:
    path = _config(tmp_path / "config.yaml", dataset={"resolution": 100})

    assert main(["--config", str(path), "gen-data"]) == EXIT_CONFIG


def test_invalid_override_exit_code() -> None:
    """--resolution non multiple de 32 : configuration invalide."""
    assert main(["--resolution", "33", "gen-data"]) == EXIT_CONFIG


def test_invalid_dataset_exit_code(tmp_path) -> None:
    """Dossier sans meta.json : jeu de données incompatible."""
    assert main(["train-coarse", "--dataset", str(tmp_path)]) == EXIT_SCHEMA


def test_views_override_too_large_exit_code(tmp_path) -> None:
    """--views supérieur au nombre de vues du jeu de données : configuration invalide."""
    (tmp_path / "meta.json").write_text(json.dumps({"views": [0, 1]}), encoding="utf-8")

    assert main(["--views", "9", "train-render", "--dataset", str(tmp_path)]) == EXIT_CONFIG


def test_missing_motion_file_exit_code(tmp_path) -> None:
    """Fichier --motion absent : code 2, pas de trace d'exception."""
    code = main(["--out", str(tmp_path / "frames"), "render", "--motion", str(tmp_path / "absent.json"),
                 "--camera", str(tmp_path / "camera.json"),
                 "--coarse-checkpoint", str(tmp_path / "coarse.pt"),
                 "--renderer-checkpoint", str(tmp_path / "renderer.pt")])

    assert code == EXIT_CONFIG


def test_missing_subcommand() -> None:
    with pytest.raises(SystemExit):
        _parse_args([])


def test_help_cli() -> None:
    """python -m main --help s'exécute sans erreur."""
    r = subprocess.run([sys.executable, "-m", "main", "--help"], cwd=str(ROOT),
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0, (r.stdout, r.stderr)
    assert "gen-data" in r.stdout


@pytest.mark.slow
def test_cli_end_to_end(tmp_path, tiny_config_path) -> None:
    """gen-data → train-coarse → train-render → export-view → render → evaluate."""
    cfg = ["--config", str(tiny_config_path)]
    data, models, export, frames = (tmp_path / n for n in ("data", "models", "export", "frames"))

    assert main(cfg + ["--out", str(data), "gen-data"]) == 0
    assert main(cfg + ["--out", str(models / "coarse.pt"), "train-coarse", "--dataset", str(data)]) == 0
    assert main(cfg + ["--out", str(models), "train-render", "--dataset", str(data)]) == 0
    assert main(cfg + ["--out", str(export), "export-view", "--dataset", str(data), "--view", "1"]) == 0
    assert main(cfg + ["--out", str(frames), "render", "--motion", str(export / "motion.json"),
                       "--camera", str(export / "camera_1.json"),
                       "--coarse-checkpoint", str(models / "coarse.pt"),
                       "--renderer-checkpoint", str(models / "renderer.pt")]) == 0
    assert main(cfg + ["evaluate", "--pred", str(frames), "--gt", str(data / "frames" / "view_1")]) == 0
    assert main(cfg + ["--out", str(export / "unseen"), "export-view", "--dataset", str(data), "--unseen"]) == 0
    assert (export / "unseen" / "camera_2.json").exists()

    record = json.loads((frames / "metrics.json").read_text(encoding="utf-8"))
    assert len(record["per_frame_mse"]) == 6


@pytest.mark.slow
def test_cli_descriptor_mismatch_exit_code(tmp_path, tiny_config_path) -> None:
    """Checkpoint entraîné avec features de mouvement, rendu sans : code 4."""
    cfg = ["--config", str(tiny_config_path)]
    data, models, export = (tmp_path / n for n in ("data", "models", "export"))

    assert main(cfg + ["--out", str(data), "gen-data"]) == 0
    assert main(cfg + ["--out", str(models / "coarse.pt"), "train-coarse", "--dataset", str(data)]) == 0
    assert main(cfg + ["--out", str(models), "train-render", "--dataset", str(data)]) == 0
    assert main(cfg + ["--out", str(export), "export-view", "--dataset", str(data)]) == 0
    code = main(cfg + ["--no-motion-features", "--out", str(tmp_path / "frames"), "render",
                       "--motion", str(export / "motion.json"), "--camera", str(export / "camera_0.json"),
                       "--coarse-checkpoint", str(models / "coarse.pt"),
                       "--renderer-checkpoint", str(models / "renderer.pt")])
    assert code == EXIT_SCHEMA
