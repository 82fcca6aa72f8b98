"""
Tests pour les échantillons, la boucle d'entraînement et le fine-tuning du rendu.
"""

import hashlib
import json

import numpy as np
import pytest
import torch

from src.core.exceptions import NumericalDivergenceError, SchemaMismatchError, ShapeMismatchError
from src.core.render import MotionFeatureSettings, RendererModel
from src.core.render.frame import prepare_sequence_inputs, render_sequence
from src.core.training import (
    PatchDiscriminator,
    RendererTrainer,
    RenderTrainingConfig,
    finetune_background,
    finetune_body_shape,
    train_renderer,
)
from src.core.training.trainer import LOG_COLUMNS

FRAMES = 4
RES = 64

L1 = RenderTrainingConfig(objective="l1", batch_size=2, max_steps=3, epochs=5, lr_generator=1e-3)


def _snapshot(module: torch.nn.Module):
    return {k: v.detach().clone() for k, v in module.state_dict().items()}


def _digest(module: torch.nn.Module) -> str:
    h = hashlib.sha256()
    for name, tensor in module.state_dict().items():
        h.update(name.encode())
        h.update(tensor.detach().cpu().numpy().tobytes())
    return h.hexdigest()


def _example_mse(model: RendererModel, dataset, frames=(1, 2)) -> float:
    inputs = prepare_sequence_inputs(dataset.coarse_vertices, dataset.topology, dataset.clip,
                                     dataset.cameras[0], dataset.settings)
    pred = render_sequence(model.generator, model.texture, inputs, dataset.bg[0])
    idx = list(frames)
    return float(((pred[idx] - dataset.gt[0][idx]) ** 2).mean())


class TestRenderDataset:
    """Tests pour RenderDataset."""

    def test_sample_ids_need_neighbours(self, render_dataset):
        assert render_dataset.sample_ids() == [(0, t) for t in range(1, FRAMES - 1)]

    def test_batch_shapes(self, render_dataset):
        batch = render_dataset.batch([(0, 1), (0, 2)])

        assert batch.frame.shape == (2, 3, RES, RES)
        assert batch.background.shape == (2, 3, RES, RES)
        assert torch.allclose(batch.next_frame[0], batch.frame[1])
        assert len(batch.inputs_prev) == 2

    def test_frame_inputs_cached(self, render_dataset):
        assert render_dataset.frame_inputs(0, 1) is render_dataset.frame_inputs(0, 1)

    def test_restrict_unknown_view(self, render_dataset):
        with pytest.raises(ValueError, match="Vues inconnues"):
            render_dataset.restrict_views([0, 5])

    def test_inconsistent_images(self, render_dataset):
        with pytest.raises(ShapeMismatchError):
            type(render_dataset)(render_dataset.clip, render_dataset.coarse_vertices, render_dataset.topology,
                                 render_dataset.cameras, {0: np.zeros((FRAMES, 8, 8, 3))},
                                 render_dataset.bg, render_dataset.settings)


class TestRendererTrainer:
    """Tests pour RendererTrainer."""

    def test_config_validation(self):
        with pytest.raises(ValueError, match="Objectif"):
            RenderTrainingConfig(objective="wgan")

    def test_l1_run_writes_log_and_checkpoints(self, render_dataset, small_model, tmp_path):
        before = _snapshot(small_model.texture)
        history = train_renderer(render_dataset, small_model, PatchDiscriminator(), L1, out_dir=tmp_path)

        assert list(history.columns) == LOG_COLUMNS
        assert history["step"].tolist() == [1, 2, 3]
        assert np.isfinite(history["L_total"]).all()
        assert (tmp_path / "train_log.csv").exists()
        assert (tmp_path / "renderer_best.pt").exists()
        assert small_model.steps == 3
        assert any(not torch.equal(before[k], v) for k, v in small_model.texture.state_dict().items())

        reloaded = RendererModel.load(tmp_path / "renderer_last.pt")
        assert reloaded.steps == 3

    def test_full_step_updates_discriminator(self, render_dataset, small_model):
        disc = PatchDiscriminator()
        before = _snapshot(disc)
        trainer = RendererTrainer(small_model, disc, RenderTrainingConfig(batch_size=2, max_steps=1))

        row = trainer.step(render_dataset.batch(render_dataset.sample_ids()))

        assert all(np.isfinite(row[c]) for c in LOG_COLUMNS)
        assert row["L_D"] > 0
        assert any(not torch.equal(before[k], v) for k, v in disc.state_dict().items())

    def test_perceptual_extractor_unchanged_by_training(self, render_dataset, small_model):
        """L'extracteur perceptuel garde la même empreinte de paramètres après 2 steps adversariaux."""
        trainer = RendererTrainer(small_model, PatchDiscriminator(), RenderTrainingConfig(batch_size=2, max_steps=2))
        before = _digest(trainer.extractor)

        history = trainer.fit(render_dataset)

        assert len(history) == 2
        assert history["L_percept"].gt(0).all()
        assert _digest(trainer.extractor) == before

    def test_non_finite_loss_aborts_with_diagnostics(self, dataset_factory, small_model, tmp_path):
        dataset = dataset_factory()
        dataset.gt[0][1:3] = np.nan

        with pytest.raises(NumericalDivergenceError) as info:
            train_renderer(dataset, small_model, PatchDiscriminator(), L1, out_dir=tmp_path)

        assert info.value.index == 0
        diagnostics = json.loads((tmp_path / "diagnostics.json").read_text(encoding="utf-8"))
        assert diagnostics["sample_ids"]
        assert "L_total" in diagnostics["losses"]


class TestFinetune:
    """Tests pour les recettes de fine-tuning."""

    def test_body_shape_keeps_original(self, render_dataset, small_model):
        before = _snapshot(small_model.generator)
        config = RenderTrainingConfig(objective="l1", batch_size=2, max_steps=8, lr_generator=1e-3)

        tuned, history = finetune_body_shape(small_model, render_dataset, config, budget_ratio=0.25)

        assert len(history) == 2
        assert tuned is not small_model
        assert all(torch.equal(before[k], v) for k, v in small_model.generator.state_dict().items())

    def test_background_trains_refinement_only(self, dataset_factory, small_model):
        dataset = dataset_factory(background=0.7)
        gen_before = _snapshot(small_model.generator)
        tex_before = _snapshot(small_model.texture)
        config = RenderTrainingConfig(objective="l1", batch_size=2, lr_generator=1e-3)

        tuned, _ = finetune_background(small_model, dataset, config, iterations=3)

        changed = {k for k, v in tuned.generator.state_dict().items() if not torch.equal(gen_before[k], v)}
        assert changed
        assert all(k.startswith("refine_head.") for k in changed)
        assert all(torch.equal(tex_before[k], v) for k, v in tuned.texture.state_dict().items())

    def test_background_needs_two_examples(self, render_dataset, small_model):
        with pytest.raises(ValueError, match="au moins 2"):
            finetune_background(small_model, render_dataset, L1, sample_ids=[(0, 1)])

    def test_descriptor_mismatch(self, render_dataset, small_model):
        render_dataset.settings = MotionFeatureSettings(sigma=0.5, maps=2, enabled=False)

        with pytest.raises(SchemaMismatchError):
            finetune_body_shape(small_model, render_dataset, L1)

    def test_background_full_objective_diff_set(self, dataset_factory, small_model):
        """Objectif complet : seuls la tête de raffinement et le discriminateur changent."""
        dataset = dataset_factory(background=0.7)
        disc = PatchDiscriminator()
        disc_before = _snapshot(disc)
        gen_before = _snapshot(small_model.generator)
        tex_before = _snapshot(small_model.texture)
        config = RenderTrainingConfig(batch_size=2, lr_generator=1e-3)

        tuned, history = finetune_background(small_model, dataset, config, iterations=2, discriminator=disc)

        assert history["L_D"].gt(0).all()
        changed = {k for k, v in tuned.generator.state_dict().items() if not torch.equal(gen_before[k], v)}
        assert changed
        assert all(k.startswith("refine_head.") for k in changed)
        assert all(torch.equal(tex_before[k], v) for k, v in tuned.texture.state_dict().items())
        assert any(not torch.equal(disc_before[k], v) for k, v in tuned.discriminator_state.items())

    def test_background_reduces_example_error(self, dataset_factory, small_model):
        """Sur un fond uniforme, l'erreur sur les exemples est au moins divisée par deux."""
        dataset = dataset_factory(background=0.9)
        dataset.gt[0][:] = 0.9
        config = RenderTrainingConfig(objective="l1", batch_size=2, lr_generator=1e-2)
        before = _example_mse(small_model.eval(), dataset)

        tuned, _ = finetune_background(small_model, dataset, config, iterations=100)

        assert _example_mse(tuned, dataset) <= 0.5 * before
