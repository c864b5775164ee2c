"""检查点读写测试"""
import json

import numpy as np
import pytest

from core.errors import CheckpointError
from core.text import Vocabulary
from model.cesar import CesarModel
from model.checkpoint import FORMAT_VERSION, load_checkpoint, save_checkpoint

TEXTS = ["Fire starts.", "The house burns.", "Rain falls.", "The river rises."]
PAIRS = [("Fire starts.", None, "The house burns."),
         ("Fire starts.", "Rain falls.", "The house burns."),
         ("Rain falls.", None, "The river rises.")]


@pytest.fixture(params=['lookup', 'mixer'])
def model(request):
    return CesarModel.create(Vocabulary.build(TEXTS), dim=6, embedder=request.param, seed=7)


class TestCheckpoint:

    def test_round_trip_preserves_scores(self, model, tmp_path):
        path = tmp_path / "m.ckpt"
        save_checkpoint(model, path)
        loaded = load_checkpoint(path)
        for cause, addition, effect in PAIRS:
            assert loaded.score_value(cause, addition, effect) == model.score_value(cause, addition, effect)
        np.testing.assert_array_equal(loaded.get_flat_params(), model.get_flat_params())
        assert loaded.embedder.kind == model.embedder.kind
        assert loaded.attention_mode == model.attention_mode

    def test_save_is_deterministic(self, model, tmp_path):
        save_checkpoint(model, tmp_path / "a.ckpt")
        save_checkpoint(load_checkpoint(tmp_path / "a.ckpt"), tmp_path / "b.ckpt")
        assert (tmp_path / "a.ckpt").read_bytes() == (tmp_path / "b.ckpt").read_bytes()

    def test_wrong_format_version(self, model, tmp_path):
        path = tmp_path / "m.ckpt"
        save_checkpoint(model, path)
        lines = path.read_text(encoding="utf-8").split("\n")
        header = json.loads(lines[0])
        header['format_version'] = FORMAT_VERSION + 1
        lines[0] = json.dumps(header)
        path.write_text("\n".join(lines), encoding="utf-8")
        with pytest.raises(CheckpointError, match="format_version"):
            load_checkpoint(path)

    def test_vocabulary_hash_mismatch(self, model, tmp_path):
        path = tmp_path / "m.ckpt"
        save_checkpoint(model, path)
        other = Vocabulary.build(TEXTS + ["Snow melts."])
        with pytest.raises(CheckpointError, match="Vocabulary hash mismatch"):
            load_checkpoint(path, expected_vocab=other)
        assert load_checkpoint(path, expected_vocab=model.vocab) is not None

    def test_truncated_file(self, model, tmp_path):
        path = tmp_path / "m.ckpt"
        save_checkpoint(model, path)
        text = path.read_text(encoding="utf-8")
        path.write_text(text[:len(text) // 2], encoding="utf-8")
        with pytest.raises(CheckpointError):
            load_checkpoint(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(CheckpointError, match="Cannot read"):
            load_checkpoint(tmp_path / "none.ckpt")
