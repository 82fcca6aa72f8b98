"""
Services : conteneur de jeu de données et orchestration du pipeline.
"""

from .dataset_service import GarmentDataset, read_dataset, validate_dataset, write_dataset
from .pipeline_service import PipelineService, frames_to_video, load_frame_dir

__all__ = [
    "GarmentDataset",
    "read_dataset",
    "validate_dataset",
    "write_dataset",
    "PipelineService",
    "frames_to_video",
    "load_frame_dir",
]
