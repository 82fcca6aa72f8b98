"""
Point d'entrée principal : génération de données, entraînements, rendu, évaluation.

Usage:
  python main.py gen-data
  python main.py train-coarse
  python main.py train-render [--views 2] [--coarse-checkpoint data/models/<nom>/coarse.pt]
  python main.py render --motion clip.json --camera camera.json \\
      --coarse-checkpoint coarse.pt --renderer-checkpoint renderer.pt [--relayer]
  python main.py evaluate --pred <frames> --gt <dataset>/frames/view_0
  python main.py finetune-body --renderer-checkpoint renderer.pt --dataset <nouveau corps>
  python main.py finetune-bg --renderer-checkpoint renderer.pt --dataset <nouveau fond>
  python main.py ablation [--view-counts 1 2] [--templates short_skirt]
  python main.py export-view --view 0 --out <dossier>
  python main.py export-view --unseen --out <dossier>

Codes de sortie : 0 succès, 2 configuration invalide, 3 divergence numérique,
4 checkpoint ou jeu de données incompatible.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from src.core.config.config_validator import PipelineConfig, load_and_validate_config
from src.core.exceptions import NumericalDivergenceError, SchemaMismatchError
from src.core.utils.path_resolver import PathResolver
from src.services.pipeline_service import PipelineService

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    datefmt="%H:%M:%S",
)
logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_SCHEMA = 4


def _parse_args(argv: Optional[list] = None) -> argparse.Namespace:
    p = argparse.ArgumentParser(description="Pipeline de vêtements neuronaux dynamiques")
    p.add_argument("--config", type=str, default=None, help="Chemin config YAML (défaut: config/config.yaml)")
    p.add_argument("--seed", type=int, default=None, help="Graine (données et entraînements)")
    p.add_argument("--out", type=str, default=None, help="Dossier ou fichier de sortie de la commande")
    p.add_argument("--views", type=int, default=None, help="Nombre de vues (gen-data : caméras ; train-render : vues utilisées)")
    p.add_argument("--resolution", type=int, default=None, help="Côté des images (multiple de 32)")
    p.add_argument("--no-motion-features", action="store_true", help="Désactive les cartes de features de mouvement")
    p.add_argument("--relayer", action="store_true", help="Active la correction d'ordre bras / vêtement au rendu")
    p.add_argument("-v", "--verbose", action="store_true", help="Journalisation DEBUG")

    sub = p.add_subparsers(dest="command", required=True)
    gen = sub.add_parser("gen-data", help="Simule et rend un jeu de données")
    gen.add_argument("--body-radius-scale", type=float, default=None, help="Échelle des capsules du corps")

    tc = sub.add_parser("train-coarse", help="Entraîne Joint2Coarse")
    tc.add_argument("--dataset", type=str, default=None)

    tr = sub.add_parser("train-render", help="Entraîne le réseau de rendu")
    tr.add_argument("--dataset", type=str, default=None)
    tr.add_argument("--coarse-checkpoint", type=str, default=None,
                    help="Entraîne sur le proxy prédit au lieu du proxy simulé")

    rd = sub.add_parser("render", help="Rend un clip de mouvement depuis une caméra")
    rd.add_argument("--motion", type=str, required=True)
    rd.add_argument("--camera", type=str, required=True)
    rd.add_argument("--coarse-checkpoint", type=str, required=True)
    rd.add_argument("--renderer-checkpoint", type=str, required=True)
    rd.add_argument("--video", action="store_true", help="Assemble aussi une vidéo (ffmpeg)")

    ev = sub.add_parser("evaluate", help="μ_mse / σ_mse (et FID, V-FID si configurés)")
    ev.add_argument("--pred", type=str, required=True)
    ev.add_argument("--gt", type=str, required=True)

    fb = sub.add_parser("finetune-body", help="Fine-tuning sur une nouvelle morphologie")
    fb.add_argument("--renderer-checkpoint", type=str, required=True)
    fb.add_argument("--dataset", type=str, required=True)

    fg = sub.add_parser("finetune-bg", help="Adaptation à un nouveau fond")
    fg.add_argument("--renderer-checkpoint", type=str, required=True)
    fg.add_argument("--dataset", type=str, required=True)
    fg.add_argument("--examples", type=int, default=2, help="Nombre d'exemples (≥ 2)")

    ab = sub.add_parser("ablation", help="Variantes appariées : features de mouvement, nombre de vues, gabarit")
    ab.add_argument("--dataset", type=str, default=None)
    ab.add_argument("--view-counts", type=int, nargs="+", default=None)
    ab.add_argument("--templates", type=str, nargs="*", default=None,
                    choices=["long_skirt", "short_skirt", "dress"])

    xv = sub.add_parser("export-view", help="Écrit le clip et la caméra d'une vue (entraînement ou hors entraînement)")
    xv.add_argument("--dataset", type=str, default=None)
    xv.add_argument("--view", type=int, default=0)
    xv.add_argument("--unseen", action="store_true", help="Exporte la vue hors entraînement (ignore --view)")
    return p.parse_args(argv)


def apply_overrides(config: PipelineConfig, args: argparse.Namespace) -> PipelineConfig:
    """
    Applique les options globales de la CLI (revalidées par pydantic).

    Raises:
        ValueError: Valeur surchargée invalide
    """
    try:
        if args.seed is not None:
            config.dataset.seed = args.seed
            config.coarse.seed = args.seed
            config.renderer.seed = args.seed
        if args.resolution is not None:
            config.dataset.resolution = args.resolution
        if args.views is not None and args.command == "gen-data":
            config.dataset.views = args.views
        if args.no_motion_features:
            config.descriptor.motion_features = False
        if args.relayer:
            config.postprocess.relayer = True
    except ValidationError as e:
        raise ValueError(f"Option invalide: {e}") from e
    return config


def _path(value: Optional[str]) -> Optional[Path]:
    return Path(value) if value is not None else None


def run_command(svc: PipelineService, args: argparse.Namespace) -> Path:
    out = _path(args.out)
    if args.command == "gen-data":
        return svc.gen_data(out, body_radius_scale=args.body_radius_scale)
    if args.command == "train-coarse":
        return svc.train_coarse(_path(args.dataset), out)
    if args.command == "train-render":
        return svc.train_render(_path(args.dataset), _path(args.coarse_checkpoint), args.views, out)
    if args.command == "render":
        return svc.render(Path(args.motion), Path(args.camera), Path(args.coarse_checkpoint),
                          Path(args.renderer_checkpoint), out, relayer_enabled=args.relayer or None,
                          video=args.video)
    if args.command == "evaluate":
        return svc.evaluate(Path(args.pred), Path(args.gt), out)
    if args.command == "finetune-body":
        return svc.finetune_body(Path(args.renderer_checkpoint), Path(args.dataset), out)
    if args.command == "finetune-bg":
        return svc.finetune_bg(Path(args.renderer_checkpoint), Path(args.dataset), args.examples, out)
    if args.command == "ablation":
        return svc.ablation(_path(args.dataset), args.view_counts, args.templates, out)
    if args.command == "export-view":
        dataset = _path(args.dataset) or svc.dataset_dir()
        if args.unseen:
            return svc.export_unseen_view(dataset, out or dataset / "export")["camera"].parent
        return svc.export_training_view(dataset, args.view, out or dataset / "export")["camera"].parent
    raise ValueError(f"Commande inconnue: {args.command}")


def main(argv: Optional[list] = None) -> int:
    args = _parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    config_path = args.config or str(PathResolver.config_file("config.yaml"))
    try:
        config = apply_overrides(load_and_validate_config(config_path), args)
    except (FileNotFoundError, ValueError) as e:
        logger.error("Configuration invalide: %s", e)
        return EXIT_CONFIG

    try:
        result = run_command(PipelineService(config), args)
    except NumericalDivergenceError as e:
        logger.error("Divergence numérique: %s", e)
        if e.diagnostics:
            logger.error("Diagnostic: %s", e.diagnostics)
        return EXIT_NUMERICAL
    except SchemaMismatchError as e:
        logger.error("Données incompatibles: %s", e)
        return EXIT_SCHEMA
    except (FileNotFoundError, ValueError) as e:
        logger.error("Entrée invalide: %s", e)
        return EXIT_CONFIG

    logger.info("%s terminé: %s", args.command, result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
