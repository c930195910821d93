import dataclasses
import json

import pytest

from stylochron.cli import RunConfig, main, max_threads, run_pipeline
from stylochron.errors import ConfigError


class TestRunConfig:
    def test_round_trip_through_file(self, tmp_path):
        cfg = RunConfig(batch_size=4, linkage="complete", svm_c=25.0,
                        normalized_distance=True, seed=11)
        path = tmp_path / "run.cfg"
        cfg.to_file(path)
        assert RunConfig.from_file(path) == cfg

    def test_comments_and_blank_lines_ignored(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("# a comment\n\nseed = 7\n", encoding="utf-8")
        assert RunConfig.from_file(path).seed == 7

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("not_a_key = 1\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="not_a_key"):
            RunConfig.from_file(path)

    def test_bad_value_rejected(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("batch_size = many\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="batch_size"):
            RunConfig.from_file(path)

    def test_missing_equals_rejected(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("just some words\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            RunConfig.from_file(path)

    def test_bool_parsing(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("normalized_distance = true\n", encoding="utf-8")
        assert RunConfig.from_file(path).normalized_distance is True
        path.write_text("normalized_distance = yes\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            RunConfig.from_file(path)


class TestMaxThreads:
    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("STYLOCHRON_THREADS", "3")
        assert max_threads() == 3

    def test_invalid_env_falls_back(self, monkeypatch):
        monkeypatch.setenv("STYLOCHRON_THREADS", "zero")
        assert max_threads() >= 1
        monkeypatch.setenv("STYLOCHRON_THREADS", "0")
        assert max_threads() >= 1


class TestCommands:
    def test_synth_writes_manifest(self, tmp_path, capsys):
        out = tmp_path / "synthetic"
        rc = main(["synth", "--kind", "drift", "--seed", "1", "--out", str(out)])
        assert rc == 0
        assert (out / "manifest.csv").is_file()
        header = (out / "manifest.csv").read_text(encoding="utf-8").splitlines()[0]
        assert header == "file_path,doc_id,year,volume,period,exclude"
        assert "manifest" in capsys.readouterr().out

    def test_ingest_smoke_on_bundled_corpus(self, tmp_path):
        rc = main(["ingest", "--out", str(tmp_path / "out")])
        assert rc == 0
        lines = (tmp_path / "out" / "corpus_summary.csv").read_text(
            encoding="utf-8"
        ).splitlines()
        assert lines[0] == "doc_id,year,volume,period,tokens,sentences"
        assert len(lines) == 13  # bundled corpus has 12 documents

    def test_cluster_smoke_on_bundled_corpus(self, tmp_path):
        rc = main(["cluster", "--out", str(tmp_path / "out")])
        assert rc == 0
        for name in ("distance_style.csv", "dendrogram_style.newick",
                     "dendrogram_content.json", "dendrogram_content.svg"):
            assert (tmp_path / "out" / name).is_file()

    def test_missing_manifest_exits_2(self, tmp_path, capsys):
        rc = main(["ingest", "--manifest", str(tmp_path / "nope.csv"),
                   "--out", str(tmp_path / "out")])
        assert rc == 2
        assert "error" in capsys.readouterr().err

    def test_failed_run_leaves_no_partial_artifacts(self, tmp_path):
        out = tmp_path / "out"
        rc = main(["all", "--manifest", str(tmp_path / "nope.csv"),
                   "--out", str(out)])
        assert rc == 2
        assert list(out.iterdir()) == []

    def test_unknown_command_rejected(self):
        with pytest.raises(SystemExit):
            main(["explode"])

    def test_classify_planted_corpus_via_config(self, tmp_path, capsys):
        corpus_dir = tmp_path / "corpus"
        assert main(["synth", "--kind", "period", "--seed", "0",
                     "--out", str(corpus_dir)]) == 0
        capsys.readouterr()
        cfg = RunConfig(
            corpus_root=str(corpus_dir),
            manifest_path=str(corpus_dir / "manifest.csv"),
            svm_c=100.0,
            svm_epochs=50,
            output_dir=str(tmp_path / "out"),
        )
        cfg_path = tmp_path / "run.cfg"
        cfg.to_file(cfg_path)
        rc = main(["classify", "--config", str(cfg_path),
                   "--target", "period", "--features", "fw"])
        assert rc == 0
        payload = json.loads(
            (tmp_path / "out" / "eval_period_functionwords.json").read_text(
                encoding="utf-8"
            )
        )
        assert payload["accuracy"] >= 0.95
        assert payload["classes"] == ["communism", "democracy"]

    def test_drift_on_synthetic_corpus(self, tmp_path):
        corpus_dir = tmp_path / "corpus"
        assert main(["synth", "--kind", "drift", "--seed", "2",
                     "--out", str(corpus_dir)]) == 0
        cfg = RunConfig(
            corpus_root=str(corpus_dir),
            manifest_path=str(corpus_dir / "manifest.csv"),
            n_permutations=100,
            output_dir=str(tmp_path / "out"),
        )
        run_pipeline(cfg, "drift")
        csv = (tmp_path / "out" / "drift_avg_sentence_length.csv").read_text(
            encoding="utf-8"
        )
        assert csv.splitlines()[0].startswith("year,raw_mean")
        assert (tmp_path / "out" / "drift_ari.svg").is_file()

    def test_features_artifacts(self, tmp_path):
        rc = main(["features", "--out", str(tmp_path / "out")])
        assert rc == 0
        for name in ("features_functionwords.csv", "features_content.csv",
                     "features_style.csv"):
            path = tmp_path / "out" / name
            assert path.is_file()
            assert path.read_text(encoding="utf-8").startswith("doc_id,")
