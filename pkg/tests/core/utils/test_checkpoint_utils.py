"""
Tests pour le conteneur de checkpoints.
"""

import pytest
import torch

from src.core.exceptions import SchemaMismatchError
from src.core.utils.checkpoint_utils import (
    CHECKPOINT_FORMAT_VERSION,
    check_descriptor,
    create_checkpoint_data,
    load_checkpoint,
    save_checkpoint,
)


DESCRIPTOR = {"stride": 2, "count": 3, "num_joints": 19}


class TestCreateCheckpointData:
    """Tests pour create_checkpoint_data."""

    def test_structure(self):
        payload = create_checkpoint_data({"w": 1}, "coarse", "test", schema_version="2", descriptor=DESCRIPTOR)

        assert payload["data"] == {"w": 1}
        meta = payload["metadata"]
        assert meta["version"] == CHECKPOINT_FORMAT_VERSION
        assert meta["type"] == "coarse"
        assert meta["schema_version"] == "2"
        assert meta["descriptor"] == DESCRIPTOR
        assert "created_at" in meta

    def test_schema_version_optional(self):
        payload = create_checkpoint_data(None, "renderer")

        assert "schema_version" not in payload["metadata"]


class TestSaveLoadCheckpoint:
    """Tests pour save_checkpoint / load_checkpoint."""

    def test_round_trip(self, tmp_path):
        """Les tenseurs et les métadonnées sont restitués."""
        data = {"state": {"weight": torch.arange(6.0).reshape(2, 3)}}
        path = save_checkpoint(data, tmp_path / "sub" / "m.pt", "coarse", descriptor=DESCRIPTOR)

        loaded, meta = load_checkpoint(path, expected_type="coarse", expected_descriptor=DESCRIPTOR)

        assert torch.equal(loaded["state"]["weight"], data["state"]["weight"])
        assert meta["descriptor"] == DESCRIPTOR

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_checkpoint(tmp_path / "absent.pt")

    def test_wrong_type(self, tmp_path):
        path = save_checkpoint({}, tmp_path / "m.pt", "coarse")

        with pytest.raises(SchemaMismatchError, match="Type de checkpoint"):
            load_checkpoint(path, expected_type="renderer")

    def test_descriptor_mismatch(self, tmp_path):
        """Un stride différent est refusé."""
        path = save_checkpoint({}, tmp_path / "m.pt", "coarse", descriptor=DESCRIPTOR)

        with pytest.raises(SchemaMismatchError, match="stride"):
            load_checkpoint(path, expected_descriptor={**DESCRIPTOR, "stride": 4})

    def test_non_standard_payload(self, tmp_path):
        """Un fichier torch sans 'data'/'metadata' est refusé."""
        path = tmp_path / "raw.pt"
        torch.save({"weights": 1}, path)

        with pytest.raises(SchemaMismatchError, match="non standardisé"):
            load_checkpoint(path)

    def test_wrong_format_version(self, tmp_path):
        path = tmp_path / "old.pt"
        torch.save({"data": {}, "metadata": {"version": "0.1", "type": "coarse"}}, path)

        with pytest.raises(SchemaMismatchError, match="Version du format"):
            load_checkpoint(path)

    def test_corrupted_file(self, tmp_path):
        path = tmp_path / "bad.pt"
        path.write_bytes(b"not a checkpoint")

        with pytest.raises(IOError):
            load_checkpoint(path)


class TestCheckDescriptor:
    """Tests pour check_descriptor."""

    def test_identical(self):
        check_descriptor(dict(DESCRIPTOR), DESCRIPTOR)

    def test_missing_key_in_stored(self):
        with pytest.raises(SchemaMismatchError, match="num_joints"):
            check_descriptor({"stride": 2, "count": 3}, DESCRIPTOR)
