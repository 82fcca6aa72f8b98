# Validation de la configuration du pipeline (pydantic)
from .config_validator import PipelineConfig, load_and_validate_config, validate_config_dict

__all__ = ["PipelineConfig", "load_and_validate_config", "validate_config_dict"]
