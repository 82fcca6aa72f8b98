"""
Service d'orchestration du pipeline : génération de données, entraînements, rendu,
évaluation, fine-tuning.

Chaque commande lit la configuration validée, résout ses chemins via PathResolver et
écrit ses sorties dans un dossier ; relancer une commande avec la même configuration
et la même graine reproduit les mêmes fichiers.
"""

from __future__ import annotations

import json
import logging
import shutil
import subprocess
import time
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
import torch

from ..core.coarse.predictor import CoarseModel, descriptor_config
from ..core.coarse.trainer import CoarseDataset, train_codec, train_motion_encoder
from ..core.config.config_validator import PipelineConfig
from ..core.exceptions import SchemaMismatchError
from ..core.garment.motion_io import load_motion_json, save_motion_json
from ..core.garment.types import Camera
from ..core.postprocess.relayer import LayerInputs, garment_mask_from_alpha, relayer
from ..core.render.frame import (
    FrameInputs,
    MotionFeatureSettings,
    prepare_frame_inputs,
    prepare_sequence_inputs,
    render_frame,
    render_sequence,
    tensor_to_image,
)
from ..core.render.model import RendererModel
from ..core.simulation.body_proxy import BodyProxy
from ..core.simulation.cameras import ring_cameras, unseen_camera
from ..core.simulation.garment_builder import add_pleats, build_garment_grid
from ..core.simulation.ground_truth import Palette, render_ground_truth
from ..core.simulation.motion_generator import animate_skeleton
from ..core.simulation.pbd_solver import SimParams, simulate, strain_report
from ..core.training.discriminator import PatchDiscriminator
from ..core.training.evaluation import evaluate, make_embedder, nearest_training_view, save_metrics
from ..core.training.finetune import finetune_background, finetune_body_shape
from ..core.training.losses import LossWeights
from ..core.training.samples import RenderDataset
from ..core.training.trainer import RenderTrainingConfig, build_renderer, train_renderer
from ..core.utils.path_resolver import PathResolver
from .dataset_service import (
    GarmentDataset,
    load_png,
    read_camera,
    read_dataset,
    read_meta,
    save_png,
    validate_dataset,
    write_dataset,
)

logger = logging.getLogger(__name__)

PLEAT_COUNT = 12
COARSE_CHECKPOINT_NAME = "coarse.pt"
RENDERER_CHECKPOINT_NAME = "renderer.pt"
ABLATION_SUMMARY_NAME = "ablation_summary.csv"


def load_frame_dir(directory: Path) -> np.ndarray:
    """
    Charge une séquence d'images triée par indice de frame.

    Priorité aux fichiers gt_<t>.png (dossier de vérité terrain), sinon frame_<t>.png.

    Raises:
        FileNotFoundError: Aucune image trouvée
    """
    directory = Path(directory)
    for prefix in ("gt", "frame"):
        files = list(directory.glob(f"{prefix}_*.png"))
        if files:
            files.sort(key=lambda p: int(p.stem.split("_")[-1]))
            return np.stack([load_png(p) for p in files])
    raise FileNotFoundError(f"Aucune frame (gt_*.png ou frame_*.png) dans {directory}")


def frames_to_video(frame_dir: Path, out_path: Path, fps: float) -> Optional[Path]:
    """Assemble frame_<t>.png en vidéo via ffmpeg s'il est installé ; sinon ne fait rien."""
    ffmpeg = shutil.which("ffmpeg")
    if ffmpeg is None:
        logger.warning("ffmpeg introuvable: vidéo non générée (les frames restent la sortie de référence)")
        return None
    cmd = [ffmpeg, "-y", "-loglevel", "error", "-framerate", f"{fps:g}",
           "-i", str(Path(frame_dir) / "frame_%d.png"), "-pix_fmt", "yuv420p", str(out_path)]
    logger.info("Assemblage vidéo: %s", " ".join(cmd))
    subprocess.run(cmd, check=True)
    return Path(out_path)


class PipelineService:
    """
    Orchestration des commandes de la CLI.

    Args:
        config: Configuration validée (les surcharges CLI y sont déjà appliquées)
    """

    def __init__(self, config: PipelineConfig):
        self.config = config

    # ------------------------------------------------------------------ helpers

    def _dir(self, configured: str, *parts: str) -> Path:
        return PathResolver.absolute(Path(configured)).joinpath(*parts)

    def dataset_dir(self, name: Optional[str] = None) -> Path:
        return self._dir(self.config.paths.datasets, name or self.config.dataset.name)

    def models_dir(self) -> Path:
        return self._dir(self.config.paths.models, self.config.dataset.name)

    def renders_dir(self) -> Path:
        return self._dir(self.config.paths.renders, self.config.dataset.name)

    def body(self, radius_scale: Optional[float] = None) -> BodyProxy:
        scale = self.config.simulation.body_radius_scale if radius_scale is None else radius_scale
        return BodyProxy().scaled(scale)

    def palette(self) -> Palette:
        p = self.config.simulation.palette
        return Palette(tuple(p.background), tuple(p.body), tuple(p.garment))

    def unseen_camera(self, training: List[Camera]) -> Camera:
        """Vue hors entraînement placée dans le plus grand écart d'azimut des vues d'entraînement."""
        cfg = self.config.dataset
        return unseen_camera(training, cfg.camera_radius, cfg.camera_elevation, cfg.resolution, cfg.camera_fov_deg)

    def sim_params(self, kind: str, mesh, spacing: float) -> SimParams:
        s = self.config.simulation
        return SimParams.for_garment(
            kind, mesh,
            gravity=s.gravity, substeps=s.substeps, iterations=s.iterations,
            stretch_compliance=s.stretch_compliance, collision_margin=s.collision_margin,
            particle_spacing=spacing, bending_stiffness=s.bending_stiffness,
            strain_tolerance=s.strain_tolerance, seed=self.config.dataset.seed,
        )

    def motion_settings(self, sigma: float) -> MotionFeatureSettings:
        d = self.config.descriptor
        return MotionFeatureSettings(sigma=float(sigma), stride=d.motion_stride, maps=d.motion_maps,
                                     enabled=d.motion_features)

    def coarse_descriptor(self) -> Dict[str, int]:
        d = self.config.descriptor
        return descriptor_config(d.stride, d.count, d.joints)

    def renderer_descriptor(self) -> Dict[str, object]:
        """Clés du descripteur de rendu fixées par la configuration (σ seulement s'il est explicite)."""
        d = self.config.descriptor
        expected: Dict[str, object] = {"motion_features": d.motion_features, "maps": d.motion_maps,
                                       "stride": d.motion_stride, "num_joints": d.joints}
        if d.sigma is not None:
            expected["sigma"] = round(float(d.sigma), 9)
        return expected

    def training_config(self) -> RenderTrainingConfig:
        r = self.config.renderer
        return RenderTrainingConfig(
            weights=LossWeights(r.lambda_feat, r.lambda_percept, r.lambda_gan),
            lr_generator=r.lr_generator, lr_discriminator=r.lr_discriminator,
            beta1=r.beta1, beta2=r.beta2, batch_size=r.batch_size, max_steps=r.max_steps,
            epochs=r.epochs, objective=r.objective, perceptual=r.perceptual,
            checkpoint_every=r.checkpoint_every, seed=r.seed,
        )

    def render_dataset(self, ds: GarmentDataset, settings: MotionFeatureSettings,
                       coarse_vertices: Optional[np.ndarray] = None) -> RenderDataset:
        verts = ds.coarse.per_frame_vertices if coarse_vertices is None else coarse_vertices
        return RenderDataset(ds.clip, np.asarray(verts), ds.coarse.topology, ds.cameras, ds.gt, ds.bg, settings)

    def _select_views(self, dataset_dir: Path, views: Optional[int]) -> Optional[List[int]]:
        if views is None:
            return None
        available = read_meta(dataset_dir)["views"]
        if views > len(available):
            raise ValueError(f"--views {views}: le jeu de données ne contient que {len(available)} vues")
        return available[:views]

    # ------------------------------------------------------------------ commandes

    def gen_data(self, out: Optional[Path] = None, body_radius_scale: Optional[float] = None) -> Path:
        """
        Simule proxy et vêtement cible, rend la vérité terrain et écrit le conteneur.

        Raises:
            NumericalDivergenceError: Divergence de la simulation
            SchemaMismatchError: Conteneur écrit invalide
        """
        cfg, sim = self.config.dataset, self.config.simulation
        out = Path(out) if out is not None else self.dataset_dir()
        body = self.body(body_radius_scale)

        clip = animate_skeleton(sim.motion_style, cfg.num_frames, cfg.fps, cfg.seed)
        coarse_mesh = build_garment_grid(sim.template_kind, sim.coarse_spacing)
        coarse = simulate(coarse_mesh, clip, body, self.sim_params(sim.template_kind, coarse_mesh, sim.coarse_spacing))
        target_mesh = add_pleats(build_garment_grid(sim.target_kind, sim.target_spacing),
                                 sim.target_pleat_amplitude, PLEAT_COUNT)
        target = simulate(target_mesh, clip, body, self.sim_params(sim.target_kind, target_mesh, sim.target_spacing))
        logger.info("Simulation: proxy %d sommets, cible %d sommets, %d frames",
                    coarse_mesh.num_vertices, target_mesh.num_vertices, len(clip))

        cameras = ring_cameras(cfg.views, cfg.camera_radius, cfg.camera_elevation, cfg.resolution,
                               cfg.camera_fov_deg, cfg.seed, cfg.azimuth_mode)
        held_out = []
        if cfg.unseen_view:
            held_out = [self.unseen_camera(cameras)]
        renders = render_ground_truth(target, body, clip, cameras + held_out, self.palette(), n_jobs=cfg.n_jobs)

        sigma = self.config.descriptor.sigma or body.default_sigma()
        write_dataset(out, clip, coarse, renders, self.config.descriptor.stride, self.config.descriptor.count,
                      sigma, extra_meta={
                          "seed": cfg.seed,
                          "motion_style": sim.motion_style,
                          "template_kind": sim.template_kind,
                          "target_kind": sim.target_kind,
                          "body_radius_scale": body_radius_scale or sim.body_radius_scale,
                      }, unseen=[c.view_id for c in held_out])
        save_motion_json(clip, out / "motion" / "clip.json")
        report = pd.concat([strain_report(coarse).assign(mesh="coarse"),
                            strain_report(target).assign(mesh="target")])
        report.to_csv(out / "strain_report.csv", index=False)
        logger.info("Allongement max: proxy %.4f, cible %.4f",
                    report[report["mesh"] == "coarse"]["max_strain"].max(),
                    report[report["mesh"] == "target"]["max_strain"].max())

        violations = validate_dataset(out)
        if violations:
            raise SchemaMismatchError("Conteneur généré invalide:\n  - " + "\n  - ".join(violations))
        return out

    def train_coarse(self, dataset_dir: Optional[Path] = None, out: Optional[Path] = None) -> Path:
        """Entraîne Joint2Coarse (codec de forme puis encodeur de mouvement)."""
        dataset_dir = Path(dataset_dir) if dataset_dir is not None else self.dataset_dir()
        ds = read_dataset(dataset_dir, views=[])
        c, d = self.config.coarse, self.config.descriptor
        data = CoarseDataset(ds.coarse, ds.clip, d.stride, d.count)
        normalizer = data.normalizer()
        codec, h_codec = train_codec(data, c.epochs, c.lr, c.batch_size, c.dropout, c.seed, normalizer)
        menc, h_motion = train_motion_encoder(data, codec, c.motion_epochs, c.lr, c.batch_size,
                                              c.dropout, c.seed, normalizer)
        history = pd.concat([h_codec.assign(stage="codec"), h_motion.assign(stage="motion")], ignore_index=True)
        model = CoarseModel(codec, menc, normalizer, ds.coarse.topology, d.stride, d.count, d.joints,
                            c.dropout, history)
        path = Path(out) if out is not None else self.models_dir() / COARSE_CHECKPOINT_NAME
        return model.save(path)

    def train_render(
        self,
        dataset_dir: Optional[Path] = None,
        coarse_checkpoint: Optional[Path] = None,
        views: Optional[int] = None,
        out: Optional[Path] = None,
    ) -> Path:
        """
        Entraîne générateur, texture neuronale et discriminateur.

        Args:
            coarse_checkpoint: Si fourni, entraîne sur le proxy prédit par Joint2Coarse
                au lieu du proxy simulé
            views: Nombre de vues d'entraînement (premières vues du jeu de données)
        """
        dataset_dir = Path(dataset_dir) if dataset_dir is not None else self.dataset_dir()
        ds = read_dataset(dataset_dir, views=self._select_views(dataset_dir, views))
        coarse_vertices = None
        if coarse_checkpoint is not None:
            coarse = CoarseModel.load(coarse_checkpoint, self.coarse_descriptor())
            if coarse.topology.num_vertices != ds.coarse.topology.num_vertices:
                raise SchemaMismatchError(
                    f"Proxy du checkpoint ({coarse.topology.num_vertices} sommets) ≠ proxy du jeu de données "
                    f"({ds.coarse.topology.num_vertices})"
                )
            coarse_vertices = coarse.predict_sequence(ds.clip)

        settings = self.motion_settings(ds.meta["sigma"])
        data = self.render_dataset(ds, settings, coarse_vertices)
        r = self.config.renderer
        model = build_renderer(settings, ds.meta["resolution"], r.texture_resolution, r.texture_levels,
                               r.texture_channels, r.seed, renderer_config=r.model_dump())
        torch.manual_seed(r.seed)
        disc = PatchDiscriminator()

        out_dir = Path(out) if out is not None else self.models_dir()
        train_renderer(data, model, disc, self.training_config(), out_dir=out_dir)
        path = model.save(out_dir / RENDERER_CHECKPOINT_NAME)
        logger.info("Rendu entraîné: %d steps, empreinte de configuration %s", model.steps, model.config_hash[:12])
        return path

    def render(
        self,
        motion_file: Path,
        camera_file: Path,
        coarse_checkpoint: Path,
        renderer_checkpoint: Path,
        out: Optional[Path] = None,
        relayer_enabled: Optional[bool] = None,
        video: bool = False,
    ) -> Path:
        """
        Chemin de test complet : mouvement → proxy prédit → G-buffer → frames.

        Écrit frame_<t>.png dans le dossier de sortie ; temps par frame journalisés.
        """
        relayer_enabled = self.config.postprocess.relayer if relayer_enabled is None else relayer_enabled
        clip = load_motion_json(motion_file)
        coarse = CoarseModel.load(coarse_checkpoint, self.coarse_descriptor())
        model = RendererModel.load(renderer_checkpoint, self.renderer_descriptor())
        with open(camera_file, "r", encoding="utf-8") as f:
            camera = Camera.from_dict(json.load(f))
        if (camera.width, camera.height) != (model.resolution, model.resolution):
            camera = camera.with_resolution(model.resolution, model.resolution)

        out = Path(out) if out is not None else self.renders_dir() / "frames"
        out.mkdir(parents=True, exist_ok=True)

        coarse_ms = np.zeros(len(clip))
        vertices = np.zeros((len(clip), coarse.topology.num_vertices, 3))
        for t in range(len(clip)):
            start = time.perf_counter()
            vertices[t] = coarse.predict(clip, t)
            coarse_ms[t] = 1000 * (time.perf_counter() - start)

        body_view = render_ground_truth(None, self.body(), clip, [camera], self.palette())[camera.view_id]
        previous: Optional[FrameInputs] = None
        timings = []
        with torch.no_grad():
            for t in range(len(clip)):
                start = time.perf_counter()
                current = prepare_frame_inputs(vertices, coarse.topology, clip, camera, t, model.settings)
                result = render_frame(model.generator, model.texture, current, previous, body_view.bg[t])
                image = tensor_to_image(result["rgb"])
                if relayer_enabled:
                    alpha = result["alpha"][0, 0].numpy()
                    image = relayer(LayerInputs(
                        render=image, body=body_view.bg[t], arm_mask=body_view.arm_mask[t],
                        garment_mask=garment_mask_from_alpha(alpha),
                        arm_depth=body_view.arm_depth[t],
                        garment_depth=np.where(current.gbuffer.mask, current.gbuffer.depth, np.inf),
                    ), self.config.postprocess.depth_guard)
                render_ms = 1000 * (time.perf_counter() - start)
                save_png(image, out / f"frame_{t}.png")
                previous = current
                timings.append({"frame": t, "coarse_ms": coarse_ms[t], "render_ms": render_ms})
                logger.info("Frame %d: proxy %.1f ms, rendu %.1f ms", t, coarse_ms[t], render_ms)

        pd.DataFrame(timings).to_csv(out / "timings.csv", index=False)
        if video:
            frames_to_video(out, out / "render.mp4", clip.fps)
        return out

    def evaluate(self, pred_dir: Path, gt_dir: Path, out: Optional[Path] = None) -> Path:
        """Écrit metrics.json (μ_mse, σ_mse, FID/V-FID si un embedder est configuré)."""
        pred = load_frame_dir(pred_dir)
        gt = load_frame_dir(gt_dir)
        record = evaluate(pred, gt, make_embedder(self.config.evaluation.embedder),
                          self.config.evaluation.vfid_window)
        return save_metrics(record, Path(out) if out is not None else Path(pred_dir))

    def training_error(self, renderer_checkpoint: Path, dataset_dir: Path,
                       views: Optional[List[int]] = None) -> Dict[str, float]:
        """μ_mse des séquences rendues sur les vues d'un jeu de données (proxy simulé)."""
        model = RendererModel.load(renderer_checkpoint)
        ds = read_dataset(dataset_dir, views=views)
        errors = []
        for p in ds.views:
            inputs = prepare_sequence_inputs(ds.coarse.per_frame_vertices, ds.coarse.topology, ds.clip,
                                             ds.cameras[p], model.settings)
            pred = render_sequence(model.generator, model.texture, inputs, ds.bg[p])
            errors.extend(evaluate(pred, ds.gt[p])["per_frame_mse"])
        return {"mu_mse": float(np.mean(errors)), "sigma_mse": float(np.std(errors))}

    def finetune_body(self, renderer_checkpoint: Path, dataset_dir: Path, out: Optional[Path] = None) -> Path:
        """Fine-tuning sur une nouvelle morphologie (σ et descripteur du modèle de base conservés)."""
        model = RendererModel.load(renderer_checkpoint, self.renderer_descriptor())
        ds = read_dataset(dataset_dir)
        data = self.render_dataset(ds, model.settings)
        out_dir = Path(out) if out is not None else self.models_dir() / "finetune_body"
        tuned, _ = finetune_body_shape(model, data, self.training_config(),
                                       self.config.finetune.body_budget_ratio, out_dir=out_dir)
        return tuned.save(out_dir / RENDERER_CHECKPOINT_NAME)

    def finetune_bg(self, renderer_checkpoint: Path, dataset_dir: Path, examples: int = 2,
                    out: Optional[Path] = None) -> Path:
        """Adaptation à un nouveau fond à partir des `examples` premiers échantillons."""
        model = RendererModel.load(renderer_checkpoint, self.renderer_descriptor())
        ds = read_dataset(dataset_dir)
        data = self.render_dataset(ds, model.settings)
        ft = self.config.finetune
        config = replace(self.training_config(), batch_size=ft.background_batch_size)
        out_dir = Path(out) if out is not None else self.models_dir() / "finetune_bg"
        tuned, _ = finetune_background(model, data, config, ft.background_iterations, out_dir=out_dir,
                                       sample_ids=data.sample_ids()[:examples])
        return tuned.save(out_dir / RENDERER_CHECKPOINT_NAME)

    def export_training_view(self, dataset_dir: Path, view: int, out_dir: Path) -> Dict[str, Path]:
        """Écrit le clip et la caméra d'une vue au format attendu par `render`."""
        ds = read_dataset(dataset_dir, views=[view])
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        motion = out_dir / "motion.json"
        camera = out_dir / f"camera_{view}.json"
        save_motion_json(ds.clip, motion)
        camera.write_text(json.dumps(ds.cameras[view].to_dict(), indent=2), encoding="utf-8")
        return {"motion": motion, "camera": camera}

    def export_unseen_view(self, dataset_dir: Path, out_dir: Path) -> Dict[str, Path]:
        """
        Écrit le clip et la caméra hors entraînement.

        Reprend la vue hors entraînement stockée par gen-data ; à défaut, la calcule à
        partir des caméras d'entraînement (sans vérité terrain associée).
        """
        meta = read_meta(dataset_dir)
        if meta.get("unseen_views"):
            return self.export_training_view(dataset_dir, meta["unseen_views"][0], out_dir)
        camera = self.unseen_camera([read_camera(dataset_dir, p) for p in meta["views"]])
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = {"motion": out_dir / "motion.json", "camera": out_dir / f"camera_{camera.view_id}.json"}
        shutil.copyfile(Path(dataset_dir) / "motion" / "clip.json", paths["motion"])
        paths["camera"].write_text(json.dumps(camera.to_dict(), indent=2), encoding="utf-8")
        logger.warning("Aucune vue hors entraînement dans %s : caméra calculée, sans vérité terrain", dataset_dir)
        return paths

    def unseen_error(self, renderer_checkpoint: Path, dataset_dir: Path,
                     training_views: Optional[List[int]] = None) -> Dict[str, float]:
        """
        μ_mse de la vue hors entraînement, comparé à celui de la vue d'entraînement d'azimut
        le plus proche.

        Returns:
            unseen_mu_mse, unseen_sigma_mse, nearest_view, nearest_mu_mse, unseen_ratio ;
            dictionnaire vide si le jeu de données n'a pas de vue hors entraînement
        """
        meta = read_meta(dataset_dir)
        if not meta.get("unseen_views"):
            return {}
        training_views = list(training_views) if training_views is not None else list(meta["views"])
        unseen = meta["unseen_views"][0]
        nearest = nearest_training_view(read_camera(dataset_dir, unseen),
                                        [read_camera(dataset_dir, p) for p in training_views]).view_id
        unseen_err = self.training_error(renderer_checkpoint, dataset_dir, views=[unseen])
        nearest_err = self.training_error(renderer_checkpoint, dataset_dir, views=[nearest])
        ratio = unseen_err["mu_mse"] / nearest_err["mu_mse"] if nearest_err["mu_mse"] > 0 else float("inf")
        logger.info("Vue hors entraînement %d: μ_mse=%.5f (vue %d la plus proche: %.5f, rapport %.2f)",
                    unseen, unseen_err["mu_mse"], nearest, nearest_err["mu_mse"], ratio)
        return {"unseen_mu_mse": unseen_err["mu_mse"], "unseen_sigma_mse": unseen_err["sigma_mse"],
                "nearest_view": nearest, "nearest_mu_mse": nearest_err["mu_mse"], "unseen_ratio": ratio}

    def ablation(
        self,
        dataset_dir: Optional[Path] = None,
        view_counts: Optional[List[int]] = None,
        template_kinds: Optional[List[str]] = None,
        out: Optional[Path] = None,
    ) -> Path:
        """
        Entraînements appariés (même graine) et erreur d'entraînement de chaque variante
        (et, si le jeu de données en contient une, erreur sur la vue hors entraînement).

        Variantes : features de mouvement activées / désactivées × nombre de vues ; en option,
        un jeu de données régénéré par gabarit grossier (le vêtement cible ne change pas).

        Returns:
            Chemin du tableau récapitulatif (CSV)
        """
        dataset_dir = Path(dataset_dir) if dataset_dir is not None else self.dataset_dir()
        out_dir = Path(out) if out is not None else self.models_dir() / "ablation"
        available = read_meta(dataset_dir)["views"]
        if view_counts is None:
            view_counts = sorted({max(1, len(available) // 2), len(available)})
        rows = []

        for motion_features in (True, False):
            for n in view_counts:
                variant = f"motion_{'on' if motion_features else 'off'}_views_{n}"
                svc = self._variant(motion_features=motion_features)
                ckpt = svc.train_render(dataset_dir, views=n, out=out_dir / variant)
                error = svc.training_error(ckpt, dataset_dir, views=available[:n])
                error.update(svc.unseen_error(ckpt, dataset_dir, available[:n]))
                rows.append({"variant": variant, "motion_features": motion_features, "views": n,
                             "template_kind": self.config.simulation.template_kind, **error})
                logger.info("Ablation %s: μ_mse=%.5f", variant, error["mu_mse"])

        for kind in template_kinds or []:
            variant = f"template_{kind}"
            svc = self._variant(template_kind=kind)
            data = svc.gen_data(out_dir / variant / "dataset")
            ckpt = svc.train_render(data, out=out_dir / variant)
            error = svc.training_error(ckpt, data)
            error.update(svc.unseen_error(ckpt, data))
            rows.append({"variant": variant, "motion_features": self.config.descriptor.motion_features,
                         "views": len(read_meta(data)["views"]), "template_kind": kind, **error})
            logger.info("Ablation %s: μ_mse=%.5f", variant, error["mu_mse"])

        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / ABLATION_SUMMARY_NAME
        pd.DataFrame(rows).to_csv(path, index=False)
        return path

    def _variant(self, motion_features: Optional[bool] = None, template_kind: Optional[str] = None) -> "PipelineService":
        config = self.config.model_copy(deep=True)
        if motion_features is not None:
            config.descriptor.motion_features = motion_features
        if template_kind is not None:
            config.simulation.template_kind = template_kind
        return PipelineService(config)
