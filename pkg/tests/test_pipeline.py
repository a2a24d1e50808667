"""End-to-end pipeline: artifacts, determinism, resume, stage errors."""

from __future__ import annotations

import json

import pytest

from kgtyper.cnn import CnnConfig
from kgtyper.embeddings import TrainingConfig
from kgtyper.errors import StageError
from kgtyper.ntriples import RDF_TYPE
from kgtyper.pipeline import PipelineConfig, run_pipeline
from kgtyper.synth import generate_synthetic_kg

ARTIFACTS = [
    "corpus.txt",
    "vectors.txt",
    "dataset.tsv",
    "train.tsv",
    "test.tsv",
    "model.bin",
    "pred_cnn.tsv",
    "pred_similarity.tsv",
    "metrics.json",
]


def small_config(tmp_path, run_name: str = "run", **overrides) -> PipelineConfig:
    synth_dir = tmp_path / "synth"
    if not (synth_dir / "kg.nt").exists():
        generate_synthetic_kg(
            synth_dir, num_classes=3, entities_per_class=8, predicates_per_class=2,
            noise_fraction=0.0, seed=3,
        )
    defaults = dict(
        input_nt=synth_dir / "kg.nt",
        out_dir=tmp_path / run_name,
        embedding=TrainingConfig(
            dimension=12, window=2, epochs=8, initial_learning_rate=0.1
        ),
        cnn=CnnConfig(
            kernel_widths=(3, 4), filters_per_width=8, hidden_units=16,
            batch_size=8, epochs=60, learning_rate=0.3,
        ),
        num_classes=3,
        entities_per_class=8,
        train_fraction=0.75,
        seed=5,
    )
    defaults.update(overrides)
    return PipelineConfig(**defaults)


def test_happy_path_writes_every_artifact(tmp_path):
    config = small_config(tmp_path)
    result = run_pipeline(config)
    for name in ARTIFACTS:
        assert (config.out_dir / name).exists(), name
        assert result.paths[name] == config.out_dir / name

    for method in ("cnn", "similarity"):
        for metric in ("accuracy", "hits@1", "hits@3"):
            value = result.metrics[method][metric]
            assert 0.0 <= value <= 1.0
        assert result.metrics[method]["hits@1"] <= result.metrics[method]["hits@3"]
    assert result.metrics["test_entities"] == 6  # 2 held out per class

    on_disk = json.loads((config.out_dir / "metrics.json").read_text())
    assert on_disk == result.metrics


def test_report_text_lists_method_metric_value(tmp_path):
    config = small_config(tmp_path)
    result = run_pipeline(config)
    lines = result.report_text().splitlines()
    assert len(lines) == 6
    first = lines[0].split("\t")
    assert first[0] == "cnn" and first[1] == "accuracy"
    float(first[2])  # numeric


def test_missing_input_fails_in_ingest_stage(tmp_path):
    config = small_config(tmp_path, input_nt=tmp_path / "nowhere.nt")
    with pytest.raises(StageError) as excinfo:
        run_pipeline(config)
    assert excinfo.value.stage == "ingest"
    assert "ingest" in str(excinfo.value)


def test_same_seed_reruns_byte_identically(tmp_path):
    first = small_config(tmp_path, "run_a")
    second = small_config(tmp_path, "run_b")
    run_pipeline(first)
    run_pipeline(second)
    for name in ARTIFACTS:
        assert (first.out_dir / name).read_bytes() == (
            second.out_dir / name
        ).read_bytes(), name


def test_different_seed_changes_vectors(tmp_path):
    first = small_config(tmp_path, "run_a", seed=5)
    second = small_config(
        tmp_path, "run_b", seed=6,
        embedding=TrainingConfig(dimension=12, window=2, epochs=8, initial_learning_rate=0.1),
        cnn=CnnConfig(kernel_widths=(3, 4), filters_per_width=8, hidden_units=16,
                      batch_size=8, epochs=60, learning_rate=0.3),
    )
    run_pipeline(first)
    run_pipeline(second)
    assert (first.out_dir / "vectors.txt").read_bytes() != (
        second.out_dir / "vectors.txt"
    ).read_bytes()


def test_resume_reuses_persisted_artifacts(tmp_path):
    config = small_config(tmp_path)
    fresh = run_pipeline(config)
    vectors_before = (config.out_dir / "vectors.txt").read_bytes()
    model_before = (config.out_dir / "model.bin").read_bytes()

    resumed_config = small_config(tmp_path, resume=True)
    resumed = run_pipeline(resumed_config)
    assert (config.out_dir / "vectors.txt").read_bytes() == vectors_before
    assert (config.out_dir / "model.bin").read_bytes() == model_before
    assert resumed.metrics == fresh.metrics


def test_resume_skips_embedding_training(tmp_path, monkeypatch):
    config = small_config(tmp_path)
    run_pipeline(config)

    def explode(*args, **kwargs):
        raise AssertionError("resume must not retrain embeddings")

    monkeypatch.setattr("kgtyper.pipeline.train_cbow", explode)
    resumed = small_config(tmp_path, resume=True)
    run_pipeline(resumed)  # completes because vectors.txt is reused


def test_seed_propagates_to_every_seeded_component(tmp_path):
    config = small_config(tmp_path, seed=77)
    assert config.embedding.seed == 77
    assert config.cnn.seed == 77


def test_unknown_trainer_rejected(tmp_path):
    with pytest.raises(ValueError):
        small_config(tmp_path, trainer="svd")


def test_type_triples_held_out_by_default(tmp_path):
    config = small_config(tmp_path)
    run_pipeline(config)
    corpus = (config.out_dir / "corpus.txt").read_text()
    assert RDF_TYPE not in corpus


def test_type_triples_kept_when_requested(tmp_path):
    config = small_config(tmp_path, hold_out_type_triples=False)
    run_pipeline(config)
    corpus = (config.out_dir / "corpus.txt").read_text()
    assert RDF_TYPE in corpus


def test_fasttext_and_glove_trainers_run_end_to_end(tmp_path):
    from kgtyper.embeddings import NGramConfig

    for trainer in ("fasttext", "glove"):
        config = small_config(
            tmp_path, f"run_{trainer}", trainer=trainer,
            ngram=NGramConfig(n_min=3, n_max=4, bucket_count=211),
        )
        result = run_pipeline(config)
        assert "cnn" in result.metrics and "similarity" in result.metrics
