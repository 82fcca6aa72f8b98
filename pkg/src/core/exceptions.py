"""
Exceptions du domaine.

Toutes dérivent des exceptions natives (ValueError, RuntimeError) pour rester
compatibles avec les appelants qui attrapent ces dernières ; la CLI les
convertit en codes de sortie (2 config, 3 numérique, 4 schéma).
"""

from typing import Any, Dict, Optional


class InsufficientHistoryError(ValueError):
    """La frame t ne dispose pas d'assez de frames passées pour la fenêtre demandée."""


class ShapeMismatchError(ValueError):
    """Dimensions incompatibles entre deux tableaux / tenseurs."""


class SchemaMismatchError(ValueError):
    """Checkpoint ou jeu de données incompatible avec la configuration courante."""


class UnknownStyleError(ValueError):
    """Style de mouvement ou type de vêtement inconnu."""


class NumericalDivergenceError(RuntimeError):
    """
    Divergence numérique (coordonnée ou perte non finie).

    Attributes:
        index: Frame (simulation) ou step (entraînement) fautif
        diagnostics: Informations complémentaires (composantes de perte, ids d'échantillons)
    """

    def __init__(self, message: str, index: int, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(f"{message} (index={index})")
        self.index = index
        self.diagnostics = diagnostics or {}
