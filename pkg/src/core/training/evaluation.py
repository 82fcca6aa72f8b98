"""
Métriques de séquences rendues : MSE par frame (μ, σ), FID et V-FID optionnels.

Convention MSE : moyenne sur H × W × 3, valeurs de pixels dans [0, 1], image entière
(sans masque). FID / V-FID ne sont calculés que si un embedder est fourni.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Protocol, Sequence

import numpy as np
import pandas as pd
from scipy import linalg
from sklearn.metrics import mean_squared_error

from ..exceptions import ShapeMismatchError
from ..garment.types import Camera
from ..simulation.cameras import camera_azimuth

logger = logging.getLogger(__name__)

MSE_CONVENTION = "mean over H×W×3, pixel scale [0,1], full frame"
METRICS_NAME = "metrics.json"
PER_FRAME_NAME = "per_frame_mse.csv"


class Embedder(Protocol):
    """Projette des images (N, H, W, 3) dans [0, 1] vers des vecteurs (N, D)."""

    def __call__(self, frames: np.ndarray) -> np.ndarray: ...


class InceptionEmbedder:
    """Features pool3 (2048) d'Inception v3 pré-entraîné (torchvision, import paresseux)."""

    def __init__(self, batch_size: int = 16):
        try:
            import torch
            from torchvision.models import Inception_V3_Weights, inception_v3
        except ImportError as e:
            raise ImportError("L'embedder 'inception' nécessite torchvision") from e
        self._torch = torch
        model = inception_v3(weights=Inception_V3_Weights.DEFAULT)
        model.fc = torch.nn.Identity()
        self.model = model.eval()
        self.batch_size = batch_size
        self.mean = torch.tensor([0.485, 0.456, 0.406]).view(1, 3, 1, 1)
        self.std = torch.tensor([0.229, 0.224, 0.225]).view(1, 3, 1, 1)

    def __call__(self, frames: np.ndarray) -> np.ndarray:
        torch = self._torch
        out = []
        with torch.no_grad():
            for start in range(0, len(frames), self.batch_size):
                x = torch.from_numpy(np.ascontiguousarray(frames[start:start + self.batch_size], dtype=np.float32))
                x = x.permute(0, 3, 1, 2)
                x = torch.nn.functional.interpolate(x, size=(299, 299), mode="bilinear", align_corners=False)
                out.append(self.model((x - self.mean) / self.std).numpy())
        return np.concatenate(out).astype(np.float64)


def make_embedder(name: Optional[str]) -> Optional[Embedder]:
    if name is None:
        return None
    if name == "inception":
        return InceptionEmbedder()
    raise ValueError(f"Embedder inconnu: {name}")


def per_frame_mse(pred: np.ndarray, gt: np.ndarray) -> np.ndarray:
    """
    Raises:
        ShapeMismatchError: Longueurs ou dimensions différentes
    """
    pred = np.asarray(pred, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    if pred.shape != gt.shape:
        raise ShapeMismatchError(f"evaluate: prédiction {pred.shape} et vérité terrain {gt.shape}")
    return np.array([
        mean_squared_error(g.reshape(-1), p.reshape(-1)) for p, g in zip(pred, gt)
    ])


def frechet_distance(emb_a: np.ndarray, emb_b: np.ndarray) -> float:
    """‖μ_a - μ_b‖² + Tr(Σ_a + Σ_b - 2 (Σ_a Σ_b)^½)."""
    emb_a = np.atleast_2d(np.asarray(emb_a, dtype=np.float64))
    emb_b = np.atleast_2d(np.asarray(emb_b, dtype=np.float64))
    if emb_a.shape[1] != emb_b.shape[1]:
        raise ShapeMismatchError(f"frechet_distance: dimensions {emb_a.shape[1]} et {emb_b.shape[1]}")
    mu_a, mu_b = emb_a.mean(axis=0), emb_b.mean(axis=0)
    sigma_a = np.atleast_2d(np.cov(emb_a, rowvar=False))
    sigma_b = np.atleast_2d(np.cov(emb_b, rowvar=False))
    covmean = linalg.sqrtm(sigma_a.dot(sigma_b))
    if np.iscomplexobj(covmean):
        covmean = covmean.real
    diff = mu_a - mu_b
    return float(diff.dot(diff) + np.trace(sigma_a + sigma_b - 2.0 * covmean))


def clip_embeddings(frame_embeddings: np.ndarray, window: int) -> np.ndarray:
    """Embeddings de clips : fenêtres glissantes de `window` frames concaténées."""
    n = len(frame_embeddings) - window + 1
    if n < 1:
        return np.zeros((0, window * frame_embeddings.shape[1]))
    return np.stack([frame_embeddings[k:k + window].reshape(-1) for k in range(n)])


def evaluate(
    pred: np.ndarray,
    gt: np.ndarray,
    embedder: Optional[Embedder] = None,
    vfid_window: int = 8,
) -> Dict[str, Any]:
    """
    Args:
        pred, gt: (T, H, W, 3) dans [0, 1]

    Returns:
        {"mu_mse", "sigma_mse", "fid", "vfid", "per_frame_mse", "mse_convention"}
    """
    errors = per_frame_mse(pred, gt)
    record: Dict[str, Any] = {
        "mu_mse": float(errors.mean()) if len(errors) else 0.0,
        "sigma_mse": float(errors.std()) if len(errors) else 0.0,
        "fid": None,
        "vfid": None,
        "per_frame_mse": [float(e) for e in errors],
        "mse_convention": MSE_CONVENTION,
    }
    if embedder is not None:
        emb_pred, emb_gt = embedder(np.asarray(pred)), embedder(np.asarray(gt))
        record["fid"] = frechet_distance(emb_pred, emb_gt)
        clips_pred = clip_embeddings(emb_pred, vfid_window)
        clips_gt = clip_embeddings(emb_gt, vfid_window)
        if len(clips_pred) >= 2:
            record["vfid"] = frechet_distance(clips_pred, clips_gt)
        else:
            logger.warning("V-FID non calculé: séquence plus courte que %d + 1 frames", vfid_window)
    logger.info("Évaluation: μ_mse=%.5f σ_mse=%.5f sur %d frames", record["mu_mse"], record["sigma_mse"], len(errors))
    return record


def save_metrics(record: Dict[str, Any], out_dir: Path) -> Path:
    """Écrit metrics.json et la table des MSE par frame (CSV)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / METRICS_NAME
    with open(path, "w", encoding="utf-8") as f:
        json.dump(record, f, indent=2)
    pd.DataFrame({"frame": range(len(record["per_frame_mse"])), "mse": record["per_frame_mse"]}).to_csv(
        out_dir / PER_FRAME_NAME, index=False
    )
    return path


def nearest_training_view(camera: Camera, training: Sequence[Camera]) -> Camera:
    """Vue d'entraînement d'azimut le plus proche (écart angulaire circulaire)."""
    if not training:
        raise ValueError("nearest_training_view: aucune vue d'entraînement")
    a = camera_azimuth(camera)

    def gap(c: Camera) -> float:
        d = abs(camera_azimuth(c) - a) % (2 * np.pi)
        return min(d, 2 * np.pi - d)

    return min(training, key=gap)
