"""
Tests pour PathResolver.
"""

import tempfile
from pathlib import Path

from src.core.utils.path_resolver import PathResolver


class TestPathResolver:
    """Tests pour la résolution de chemins."""

    def test_get_project_root(self):
        """La racine contient README.md et config/config.yaml."""
        root = PathResolver.get_project_root()

        assert root.is_absolute()
        assert (root / "README.md").exists()
        assert (root / "config" / "config.yaml").exists()

    def test_resolve_parts_and_slash_string(self):
        """Parties séparées ou chaîne avec '/' donnent le même chemin."""
        a = PathResolver.resolve("data", "datasets", "desk")
        b = PathResolver.resolve("data/datasets/desk")

        assert a == b
        assert a.is_absolute()
        assert a.name == "desk"

    def test_data_dirs(self):
        """Dossiers de données standard."""
        assert "datasets" in str(PathResolver.data_datasets("run"))
        assert PathResolver.data_models("coarse.pt").name == "coarse.pt"
        assert "renders" in str(PathResolver.data_renders())

    def test_config_file(self):
        path = PathResolver.config_file()

        assert path.name == "config.yaml"
        assert path.parent.name == "config"

    def test_absolute_keeps_absolute_path(self, tmp_path):
        """Un chemin absolu est retourné tel quel."""
        assert PathResolver.absolute(tmp_path / "x.pt") == tmp_path / "x.pt"

    def test_absolute_resolves_relative_path(self):
        path = PathResolver.absolute(Path("data/models/coarse.pt"))

        assert path == PathResolver.data_models("coarse.pt")

    def test_relative_to_root(self):
        root = PathResolver.get_project_root()
        relative = PathResolver.relative_to_root(root / "config" / "config.yaml")

        assert relative in ("config/config.yaml", "config\\config.yaml")

    def test_relative_to_root_outside(self):
        """Un chemin hors du projet est retourné inchangé."""
        with tempfile.TemporaryDirectory() as tmpdir:
            outside = Path(tmpdir) / "file.txt"

            assert PathResolver.relative_to_root(outside) == str(outside)
