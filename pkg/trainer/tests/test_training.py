from __future__ import annotations

import dataclasses
import json

import pytest

from conftest import make_run_dir
from wotrainer.data import SchemaError
from wotrainer.training import (
    TrainingConfig,
    TrainingFailure,
    export_run_manifest,
    train_model,
)


def _log(run_dir):
    return json.loads((run_dir / "training_log.json").read_text(encoding="utf-8"))


class TestConfig:
    def test_defaults_are_toy_scale(self):
        config = TrainingConfig()
        assert config.hidden == 64
        assert config.enc_layers == 2 and config.dec_layers == 2
        assert config.dropout == 0.3
        assert config.learning_rate == 1.0
        assert config.early_stop_patience == 4
        assert config.max_steps == 30_000

    def test_paper_scale(self):
        config = TrainingConfig.paper_scale()
        assert config.hidden == 500 and config.embedding == 500

    def test_validation(self):
        with pytest.raises(ValueError):
            TrainingConfig(architecture="rnn")
        with pytest.raises(ValueError):
            TrainingConfig(early_stop_patience=0)
        with pytest.raises(ValueError):
            TrainingConfig(max_steps=0)


class TestTrainModel:
    def test_step_cap_respected(self, run_dir):
        config = TrainingConfig(max_steps=10, valid_interval=50, seed=3)
        train_model(run_dir, config)
        log = _log(run_dir)
        assert log["steps"] == 10
        assert log["stop_reason"] == "max_steps"
        assert (run_dir / "checkpoint.pt").exists()

    def test_early_stopping_exact_patience(self, run_dir):
        # Zero learning rate freezes the model, so every validation after
        # the first repeats the same loss.
        for patience in (1, 3):
            config = TrainingConfig(
                learning_rate=0.0,
                early_stop_patience=patience,
                valid_interval=5,
                max_steps=1_000,
                seed=3,
            )
            train_model(run_dir, config)
            log = _log(run_dir)
            assert log["stop_reason"] == "early_stopping"
            assert len(log["validations"]) == patience + 1
            assert [v["improved"] for v in log["validations"]] == [True] + [
                False
            ] * patience

    def test_loss_decreases_on_copy_task(self, tmp_path):
        run = make_run_dir(tmp_path, n_train=200, n_valid=20, seed=57)
        config = TrainingConfig(max_steps=300, valid_interval=50, seed=5)
        train_model(run, config)
        log = _log(run)
        first = log["validations"][0]["valid_loss"]
        last = log["validations"][-1]["valid_loss"]
        assert last < first

    def test_nonfinite_loss_reports_step(self, run_dir, monkeypatch):
        # Poison one weight so the very first forward pass yields NaN.
        import torch

        import wotrainer.training as training_module

        real_build = training_module.build_model

        def poisoned(config, vocab_size):
            model = real_build(config, vocab_size)
            with torch.no_grad():
                next(model.parameters()).fill_(float("nan"))
            return model

        monkeypatch.setattr(training_module, "build_model", poisoned)
        with pytest.raises(TrainingFailure, match="step 0"):
            train_model(run_dir, TrainingConfig(max_steps=60, valid_interval=50, seed=3))

    def test_empty_train_set_is_schema_error(self, run_dir):
        (run_dir / "train.src").write_text("")
        (run_dir / "train.tgt").write_text("")
        with pytest.raises(SchemaError):
            train_model(run_dir, TrainingConfig(max_steps=5))

    def test_transformer_architecture_trains(self, run_dir):
        config = TrainingConfig(
            architecture="transformer", max_steps=20, valid_interval=10, seed=3
        )
        train_model(run_dir, config)
        assert _log(run_dir)["steps"] == 20


class TestManifest:
    def test_complete_run_has_all_fields(self, run_dir):
        train_model(run_dir, TrainingConfig(max_steps=10, valid_interval=5, seed=3))
        path = export_run_manifest(run_dir)
        manifest = json.loads(path.read_text(encoding="utf-8"))
        for key in ("config", "seed", "steps", "best_valid_loss", "data_hashes", "created_at"):
            assert key in manifest
        assert manifest["data_hashes"]

    def test_incomplete_run_is_error(self, run_dir):
        with pytest.raises(SchemaError, match="incomplete"):
            export_run_manifest(run_dir)

    def test_tampered_data_fails_audit(self, run_dir):
        train_model(run_dir, TrainingConfig(max_steps=10, valid_interval=5, seed=3))
        (run_dir / "train.src").write_text("tampered\n", encoding="utf-8")
        with pytest.raises(SchemaError, match="hash"):
            export_run_manifest(run_dir)

    def test_same_seed_reruns_identical_except_timestamp(self, tmp_path):
        manifests = []
        for name in ("a", "b"):
            run = make_run_dir(tmp_path / name)
            train_model(run, TrainingConfig(max_steps=30, valid_interval=10, seed=9))
            manifests.append(json.loads((run / "manifest.json").read_text()))
        for m in manifests:
            m.pop("created_at")
        assert manifests[0] == manifests[1]
