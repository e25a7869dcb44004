import json

import numpy as np
import pytest

from sentiweight.cli import main
from sentiweight.optimizer import read_weights


@pytest.fixture
def paths(fixture_dir):
    return str(fixture_dir / "corpus_fixture.jsonl"), str(fixture_dir / "swn_fixture.txt")


def test_lexicon_validate(fixture_dir, capsys):
    assert main(["lexicon", "validate", str(fixture_dir / "swn_fixture.txt")]) == 0
    out = capsys.readouterr().out
    assert "entries: 45" in out and "violations: 0" in out
    assert main(["lexicon", "validate", str(fixture_dir / "swn_malformed.txt")]) == 2
    assert "violations: 7" in capsys.readouterr().out


def test_usage_errors(capsys, monkeypatch):
    monkeypatch.delenv("SENTIWEIGHT_CORPUS", raising=False)
    monkeypatch.delenv("SENTIWEIGHT_LEXICON", raising=False)
    assert main(["train-eval"]) == 1
    assert "usage" in capsys.readouterr().err
    assert main(["frobnicate"]) == 1
    assert main([]) == 1
    assert main(["lexicon"]) == 1


def test_data_error_exit_code(tmp_path, paths):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "x", "domain": "toys", "label": "positive", "sentences": []}\n')
    assert main(["featurize", str(bad), paths[1]]) == 2
    assert main(["lexicon", "validate", str(tmp_path / "missing.txt")]) == 2


def test_corpus_stats(paths, capsys):
    assert main(["corpus", "stats", paths[0], "--format", "csv"]) == 0
    rows = [l.split(",") for l in capsys.readouterr().out.strip().splitlines()]
    assert rows[0] == ["unit", "polarity", "books", "dvds", "electronics", "music", "videogames", "total"]
    totals = {(r[0], r[1]): int(r[-1]) for r in rows[1:]}
    assert totals == {("documents", "positive"): 4, ("documents", "negative"): 3,
                      ("sentences", "positive"): 9, ("sentences", "negative"): 11}


def test_featurize(paths, tmp_path):
    out = tmp_path / "X.csv"
    assert main(["featurize", *paths, "--level", "sentence", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# manifest: ")
    assert json.loads(lines[0][len("# manifest: "):])["format_version"] == 1
    header = lines[1].split(",")
    assert header[:3] == ["id", "label", "adj_pos_sum"] and len(header) == 34
    assert len(lines) == 2 + 20


def test_baseline(paths, tmp_path, capsys):
    plot = tmp_path / "sweep.png"
    assert main(["baseline", *paths, "--rule", "sum", "--thresholds=-1,0,1", "--format", "csv",
                 "--plot", str(plot)]) == 0
    rows = [l for l in capsys.readouterr().out.splitlines() if not l.startswith("#")]
    assert rows[0] == "rule,level,threshold,accuracy" and len(rows) == 4
    assert plot.stat().st_size > 0


def test_env_paths(paths, monkeypatch, capsys):
    monkeypatch.setenv("SENTIWEIGHT_CORPUS", paths[0])
    monkeypatch.setenv("SENTIWEIGHT_LEXICON", paths[1])
    assert main(["baseline", "--rule", "average"]) == 0


def test_config_file_and_flag_precedence(paths, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text(f"[sentiweight]\ncorpus = {paths[0]}\nlexicon = {paths[1]}\nlevel = sentence\nseed = 5\n")
    out = tmp_path / "X.csv"
    assert main(["featurize", "--config", str(cfg), "--out", str(out)]) == 0
    manifest = json.loads(out.read_text().splitlines()[0][len("# manifest: "):])
    assert manifest["level"] == "sentence" and manifest["seed"] == 5
    assert main(["featurize", "--config", str(cfg), "--seed", "9", "--level", "document",
                 "--out", str(out)]) == 0
    manifest = json.loads(out.read_text().splitlines()[0][len("# manifest: "):])
    assert manifest["level"] == "document" and manifest["seed"] == 9
    bad = tmp_path / "bad.ini"
    bad.write_text("[sentiweight]\nwobble = 3\n")
    assert main(["featurize", *paths, "--config", str(bad)]) == 2


ES_FLAGS = ["--generations", "2", "--mu", "2", "--lambda", "3", "--adapt-every", "1", "--jobs", "1"]


def test_optimize_train_eval_report(paths, tmp_path, capsys):
    w = tmp_path / "weights.txt"
    assert main(["optimize", *paths, "--level", "sentence", "--algorithm", "naive-bayes",
                 "--fitness", "resubstitution", "--seed", "3", "--out", str(w), *ES_FLAGS]) == 0
    weights = read_weights(w.read_text().splitlines())
    assert weights.shape == (32,) and ((weights >= 0) & (weights <= 1)).all()
    trace = tmp_path / "weights.txt.trace.csv"
    assert trace.read_text().splitlines()[1].startswith("# fitness")

    rep = tmp_path / "rep.json"
    args = ["train-eval", *paths, "--level", "sentence", "--k", "3", "--seed", "3",
            "--algorithms", "svm,naive-bayes", "--weights", str(w), "--format", "json", "--out", str(rep)]
    assert main(args) == 0
    first = rep.read_bytes()
    assert main(args) == 0
    assert rep.read_bytes() == first
    data = json.loads(first)
    assert data["reports"][0]["config"]["seed"] == 3
    assert set(data["reports"][0]["rows"]) == {"svm", "naive-bayes"}

    assert main(["train-eval", *paths, "--level", "sentence", "--k", "3", "--algorithms", "svm",
                 "--optimize", *ES_FLAGS]) == 0
    assert "Sentence Level" in capsys.readouterr().out

    figs = tmp_path / "figs"
    assert main(["report", str(rep), "--trace", str(trace), "--out-dir", str(figs)]) == 0
    names = sorted(p.name for p in figs.iterdir())
    assert names == ["metrics_sentence.png", "report.csv", "report.txt", "trace_0.png"]
    assert "Naive Bayes" in (figs / "report.txt").read_text()


def test_unknown_algorithm_is_usage_error(paths):
    assert main(["train-eval", *paths, "--algorithms", "svm,knn"]) == 1


def test_paper_mode_label(paths, capsys):
    assert main(["train-eval", *paths, "--level", "sentence", "--k", "3", "--algorithms", "svm",
                 "--paper-mode", "--format", "json", *ES_FLAGS]) == 0
    data = json.loads(capsys.readouterr().out)
    cfg = data["reports"][0]["config"]
    assert cfg["paper_mode"] is True and cfg["es"]["fitness_mode"] == "resubstitution"
    extras = data["reports"][0]["rows"]["svm"]["with"]["extras"]
    assert extras["mode"] == "paper" and "resubstitution_accuracy" in extras
