"""
Système centralisé de résolution de chemins.

Tous les chemins relatifs sont résolus depuis la racine du projet.
"""

from pathlib import Path
from typing import Optional


class PathResolver:
    """
    Résolution de chemins relatifs à la racine du projet.

    La racine est le premier dossier parent contenant README.md et config/config.yaml.
    """

    _project_root: Optional[Path] = None

    @classmethod
    def get_project_root(cls) -> Path:
        """
        Détecte et retourne la racine du projet.

        Raises:
            RuntimeError: Si la racine du projet ne peut pas être détectée
        """
        if cls._project_root is not None:
            return cls._project_root

        current = Path(__file__).resolve()
        for _ in range(10):
            if (current / "README.md").exists() and (current / "config" / "config.yaml").exists():
                cls._project_root = current
                return cls._project_root
            parent = current.parent
            if parent == current:
                break
            current = parent

        cwd = Path.cwd()
        if (cwd / "README.md").exists() and (cwd / "config" / "config.yaml").exists():
            cls._project_root = cwd
            return cls._project_root

        raise RuntimeError(
            "Impossible de détecter la racine du projet. "
            "Assurez-vous que README.md et config/config.yaml existent."
        )

    @classmethod
    def resolve(cls, *path_parts: str) -> Path:
        """
        Résout un chemin relatif depuis la racine du projet.

        Examples:
            >>> PathResolver.resolve("data", "datasets", "desk")
            Path("/path/to/project/data/datasets/desk")
        """
        root = cls.get_project_root()
        if len(path_parts) == 1 and ("/" in path_parts[0] or "\\" in path_parts[0]):
            parts = path_parts[0].replace("\\", "/").split("/")
        else:
            parts = list(path_parts)

        resolved = root
        for part in parts:
            if part:
                resolved = resolved / part
        return resolved.resolve()

    @classmethod
    def absolute(cls, path: Path) -> Path:
        """Chemin absolu : inchangé s'il l'est déjà, sinon résolu depuis la racine."""
        path = Path(path)
        return path if path.is_absolute() else cls.resolve(str(path))

    @classmethod
    def data_datasets(cls, *path_parts: str) -> Path:
        """Dossier data/datasets (conteneurs de jeux de données)."""
        return cls.resolve("data", "datasets", *path_parts)

    @classmethod
    def data_models(cls, *path_parts: str) -> Path:
        """Dossier data/models (checkpoints)."""
        return cls.resolve("data", "models", *path_parts)

    @classmethod
    def data_renders(cls, *path_parts: str) -> Path:
        """Dossier data/renders (frames rendues, métriques)."""
        return cls.resolve("data", "renders", *path_parts)

    @classmethod
    def config_file(cls, filename: str = "config.yaml") -> Path:
        return cls.resolve("config", filename)

    @classmethod
    def relative_to_root(cls, path: Path) -> str:
        """Chemin relatif depuis la racine (inchangé s'il n'est pas sous la racine)."""
        root = cls.get_project_root()
        try:
            return str(Path(path).relative_to(root))
        except ValueError:
            return str(path)
