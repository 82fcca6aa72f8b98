# Post-traitement : re-superposition des bras devant le vêtement synthétisé
from .relayer import LayerInputs, garment_mask_from_alpha, relayer, relayer_pixels

__all__ = ["LayerInputs", "garment_mask_from_alpha", "relayer", "relayer_pixels"]
