"""
Tests pour le conteneur de jeu de données sur disque.
"""

import numpy as np
import pytest

from src.core.exceptions import SchemaMismatchError
from src.core.garment.constants import NUM_JOINTS
from src.core.garment.types import Camera, MeshSequence, MotionClip, TriMesh
from src.core.simulation.ground_truth import ViewRenders
from src.services.dataset_service import load_png, read_dataset, save_png, validate_dataset, write_dataset
from src.services.pipeline_service import load_frame_dir

T = 4
RES = 8


def _write(root, views=(0, 1), unseen=()):
    rng = np.random.default_rng(0)
    v = np.array([[-0.5, -0.5, 0.0], [0.5, -0.5, 0.0], [0.5, 0.5, 0.0], [-0.5, 0.5, 0.0]])
    uv = np.array([[[0, 0], [1, 0], [1, 1]], [[0, 0], [1, 1], [0, 1]]], dtype=float)
    topology = TriMesh(v, np.array([[0, 1, 2], [0, 2, 3]]), uv)
    coarse = MeshSequence(topology, v[None] + rng.normal(scale=0.01, size=(T, 4, 3)))
    clip = MotionClip(rng.normal(size=(T, NUM_JOINTS, 3)), fps=30.0)
    renders = {
        p: ViewRenders(
            camera=Camera.look_at([0.0, 0.0, 3.0 + p], [0.0, 0.0, 0.0], RES, RES, 50.0, view_id=p),
            gt=rng.uniform(size=(T, RES, RES, 3)),
            bg=rng.uniform(size=(T, RES, RES, 3)),
            arm_mask=rng.uniform(size=(T, RES, RES)) > 0.5,
            arm_depth=np.zeros((T, RES, RES)),
        )
        for p in views
    }
    write_dataset(root, clip, coarse, renders, stride=2, count=17, sigma=0.2, unseen=unseen)
    return clip, coarse, renders


class TestDatasetContainer:
    """Tests pour write_dataset / validate_dataset / read_dataset."""

    def test_round_trip(self, tmp_path):
        clip, coarse, renders = _write(tmp_path)

        assert validate_dataset(tmp_path) == []
        ds = read_dataset(tmp_path)

        assert ds.views == [0, 1]
        assert ds.meta["triplets"] == [1, 2]
        assert ds.meta["sigma"] == pytest.approx(0.2)
        assert np.allclose(ds.clip.joints, clip.joints, atol=1e-6)
        assert np.allclose(ds.coarse.per_frame_vertices, coarse.per_frame_vertices, atol=1e-6)
        assert np.array_equal(ds.coarse.topology.faces, coarse.topology.faces)
        assert np.allclose(ds.cameras[1].center, renders[1].camera.center)
        assert np.allclose(ds.gt[0], np.round(renders[0].gt * 255) / 255)
        assert np.array_equal(ds.arm_masks[1], renders[1].arm_mask)

    def test_read_subset_of_views(self, tmp_path):
        _write(tmp_path)

        assert read_dataset(tmp_path, views=[1]).views == [1]
        with pytest.raises(ValueError, match="Vues absentes"):
            read_dataset(tmp_path, views=[3])

    def test_unseen_view_held_out(self, tmp_path):
        """Vue hors entraînement : écrite et validée, absente de meta['views'], lisible par identifiant."""
        _, _, renders = _write(tmp_path, views=(0, 1, 2), unseen=(2,))

        assert validate_dataset(tmp_path) == []
        ds = read_dataset(tmp_path)
        assert ds.views == [0, 1]
        assert ds.meta["unseen_views"] == [2]
        held_out = read_dataset(tmp_path, views=[2])
        assert np.allclose(held_out.cameras[2].center, renders[2].camera.center)
        assert held_out.gt[2].shape == (T, RES, RES, 3)

    def test_missing_unseen_image_reported(self, tmp_path):
        _write(tmp_path, views=(0, 1, 2), unseen=(2,))
        (tmp_path / "frames" / "view_2" / "gt_0.png").unlink()

        assert validate_dataset(tmp_path) == ["frames/view_2: 3 images gt, attendu 4"]

    def test_missing_image_reported(self, tmp_path):
        _write(tmp_path)
        (tmp_path / "frames" / "view_0" / "bg_2.png").unlink()

        violations = validate_dataset(tmp_path)
        assert violations == ["frames/view_0: 3 images bg, attendu 4"]
        with pytest.raises(SchemaMismatchError, match="Jeu de données invalide"):
            read_dataset(tmp_path)

    def test_truncated_array_reported(self, tmp_path):
        _write(tmp_path)
        path = tmp_path / "coarse" / "verts.f32"
        path.write_bytes(path.read_bytes()[:-4])

        assert any("coarse/verts.f32" in v for v in validate_dataset(tmp_path))

    def test_missing_meta(self, tmp_path):
        assert validate_dataset(tmp_path)[0].startswith("meta.json")

    def test_inconsistent_lengths(self, tmp_path):
        clip, coarse, renders = _write(tmp_path / "ok")
        short = MeshSequence(coarse.topology, coarse.per_frame_vertices[:2])

        with pytest.raises(ValueError, match="incohérents"):
            write_dataset(tmp_path / "bad", clip, short, renders, 2, 17, 0.2)


class TestImages:
    """Tests pour les PNG 8 bits et le chargement de dossiers de frames."""

    def test_png_quantization(self, tmp_path):
        image = np.array([[[0.0, 0.5, 1.0]]])
        save_png(image, tmp_path / "a.png")

        assert np.allclose(load_png(tmp_path / "a.png"), [[[0.0, 128 / 255, 1.0]]])

    def test_png_clipped(self, tmp_path):
        save_png(np.full((2, 2, 3), 1.7), tmp_path / "a.png")

        assert np.all(load_png(tmp_path / "a.png") == 1.0)

    def test_missing_png(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_png(tmp_path / "absent.png")

    def test_frame_dir_numeric_order(self, tmp_path):
        for t in (0, 2, 10):
            save_png(np.full((2, 2, 3), t / 10), tmp_path / f"frame_{t}.png")

        frames = load_frame_dir(tmp_path)
        assert frames.shape == (3, 2, 2, 3)
        assert frames[:, 0, 0, 0].tolist() == pytest.approx([0.0, 51 / 255, 1.0])

    def test_frame_dir_empty(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_frame_dir(tmp_path)
