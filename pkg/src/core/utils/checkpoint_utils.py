"""
Conteneur standardisé des checkpoints (torch.save).

Structure :
{
    'data': ...,            # state_dicts, constantes, historiques
    'metadata': {
        'version': '1.0',       # Version du format de conteneur
        'created_at': str,      # Horodatage ISO
        'type': str,            # "coarse" | "renderer"
        'description': str,
        'schema_version': str,  # Version du schéma des données
        'descriptor': {...},    # Configuration du descripteur d'entraînement
        ...
    }
}
"""

import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import torch

from ..exceptions import SchemaMismatchError
from .path_resolver import PathResolver

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT_VERSION = "1.0"


def create_checkpoint_data(
    data: Any,
    data_type: str,
    description: str = "",
    schema_version: Optional[str] = None,
    **extra_metadata: Any,
) -> Dict[str, Any]:
    """Encapsule les données avec leurs métadonnées."""
    metadata = {
        "version": CHECKPOINT_FORMAT_VERSION,
        "created_at": datetime.now().isoformat(timespec="seconds"),
        "type": data_type,
        "description": description,
        **extra_metadata,
    }
    if schema_version is not None:
        metadata["schema_version"] = schema_version
    return {"data": data, "metadata": metadata}


def save_checkpoint(
    data: Any,
    path: Path,
    data_type: str,
    description: str = "",
    schema_version: Optional[str] = None,
    **extra_metadata: Any,
) -> Path:
    """
    Écrit un checkpoint standardisé.

    Raises:
        IOError: Si l'écriture échoue
    """
    payload = create_checkpoint_data(data, data_type, description, schema_version, **extra_metadata)
    path = PathResolver.absolute(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        torch.save(payload, path)
    except Exception as e:
        raise IOError(f"Erreur lors de la sauvegarde du checkpoint: {e}") from e
    logger.info("Checkpoint %s écrit: %s", data_type, path)
    return path


def load_checkpoint(
    path: Path,
    expected_type: Optional[str] = None,
    expected_descriptor: Optional[Dict[str, Any]] = None,
) -> Tuple[Any, Dict[str, Any]]:
    """
    Charge un checkpoint standardisé.

    Args:
        expected_type: Type attendu (vérifié si fourni)
        expected_descriptor: Configuration du descripteur attendue (comparée clé à clé)

    Returns:
        (data, metadata)

    Raises:
        FileNotFoundError: Si le fichier n'existe pas
        IOError: Si la lecture échoue
        SchemaMismatchError: Format, type, version ou descripteur incompatibles
    """
    path = PathResolver.absolute(path)
    if not path.exists():
        raise FileNotFoundError(f"Checkpoint introuvable: {path}")
    try:
        payload = torch.load(path, map_location="cpu", weights_only=False)
    except Exception as e:
        raise IOError(f"Erreur lors du chargement du checkpoint: {e}") from e

    if not isinstance(payload, dict) or "data" not in payload or "metadata" not in payload:
        raise SchemaMismatchError("Format de checkpoint non standardisé: clés 'data' et 'metadata' requises")

    metadata = payload["metadata"]
    if metadata.get("version") != CHECKPOINT_FORMAT_VERSION:
        raise SchemaMismatchError(
            f"Version du format inattendue: attendu '{CHECKPOINT_FORMAT_VERSION}', "
            f"reçu '{metadata.get('version')}'"
        )
    if expected_type is not None and metadata.get("type") != expected_type:
        raise SchemaMismatchError(
            f"Type de checkpoint inattendu: attendu '{expected_type}', reçu '{metadata.get('type')}'"
        )
    if expected_descriptor is not None:
        check_descriptor(metadata.get("descriptor", {}), expected_descriptor)
    return payload["data"], metadata


def check_descriptor(stored: Dict[str, Any], expected: Dict[str, Any]) -> None:
    """
    Compare la configuration de descripteur d'un checkpoint à la configuration courante.

    Raises:
        SchemaMismatchError: Au moins une clé diffère
    """
    diffs = {
        key: (stored.get(key), value)
        for key, value in expected.items()
        if stored.get(key) != value
    }
    if diffs:
        detail = ", ".join(f"{k}: checkpoint={a!r} / config={b!r}" for k, (a, b) in sorted(diffs.items()))
        raise SchemaMismatchError(f"Configuration de descripteur incompatible ({detail})")
