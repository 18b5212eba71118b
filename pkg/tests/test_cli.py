import json

import pytest

from conftest import (
    INDONESIA_PROTEST_PREMISE,
    INDONESIA_SOURCE,
    INDONESIA_SUSPEND_PREMISE,
    INDONESIA_TARGET,
    announced_protest_case,
    suspended_protest_case,
)
from zsp.cli import main
from zsp.hypotheses import default_table_path

TOY_DATASET = str(default_table_path().parent / "toy_dataset.jsonl")
TOY_ORACLE = str(default_table_path().parent / "toy_oracle.json")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def paper_fixture(tmp_path, table):
    """Two-instance dataset and oracle for the two demonstration premises."""
    we1, oracle1 = announced_protest_case(table)
    we2, oracle2 = suspended_protest_case(table)
    dataset = tmp_path / "paper.jsonl"
    dataset.write_text(
        json.dumps(
            {
                "id": "t2", "text": INDONESIA_PROTEST_PREMISE,
                "source": INDONESIA_SOURCE, "target": INDONESIA_TARGET,
                "root": "THREATEN",
            }
        )
        + "\n"
        + json.dumps(
            {
                "id": "t3", "text": INDONESIA_SUSPEND_PREMISE,
                "source": INDONESIA_SOURCE, "target": INDONESIA_TARGET,
                "root": "AGREE",
            }
        )
        + "\n",
        encoding="utf-8",
    )
    scores: dict[str, dict[str, float]] = {"t2": {}, "t3": {}}
    for backend in (oracle1, oracle2):
        for (key, hyp), value in backend.scores.items():
            scores[key][hyp] = value
    oracle = tmp_path / "paper_oracle.json"
    oracle.write_text(json.dumps({"default_score": 0.0, "scores": scores}), encoding="utf-8")
    return str(dataset), str(oracle)


def test_validate_table_default(capsys):
    code, out, err = run(capsys, "validate-table")
    assert code == 0
    assert out.splitlines()[0] == "past=76 future=58"
    assert "coverage REQUEST=1" in out


def test_validate_table_dangling_pair(capsys, tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text(
        "Root\tQuad\tPast\tFuture\tTags\n"
        "MOBILIZE\tM-Conf.\t<S> increased forces in <T>.\tNone\tpeace_general=9\n",
        encoding="utf-8",
    )
    code, out, err = run(capsys, "validate-table", "--table", str(bad))
    assert code == 1
    assert "row 1" in err and "peace_general" in err


def test_validate_table_empty_file(capsys, tmp_path):
    empty = tmp_path / "empty.tsv"
    empty.write_text("", encoding="utf-8")
    code, _, err = run(capsys, "validate-table", "--table", str(empty))
    assert code == 1
    assert err


def test_classify_toy(capsys):
    code, out, err = run(capsys, "classify", "--dataset", TOY_DATASET, "--oracle", TOY_ORACLE)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "id\troot\tquad\tbinary\tscore"
    assert len(lines) == 21
    assert lines[1].startswith("t01\tAGREE\t1\tCooperation\t")


def test_classify_is_reproducible(capsys):
    _, first, _ = run(capsys, "classify", "--dataset", TOY_DATASET, "--oracle", TOY_ORACLE)
    _, second, _ = run(capsys, "classify", "--dataset", TOY_DATASET, "--oracle", TOY_ORACLE)
    assert first == second


def test_classify_jobs_match_serial(capsys):
    _, serial, _ = run(capsys, "classify", "--dataset", TOY_DATASET, "--oracle", TOY_ORACLE)
    _, parallel, _ = run(
        capsys, "classify", "--dataset", TOY_DATASET, "--oracle", TOY_ORACLE, "--jobs", "4"
    )
    assert serial == parallel


def test_classify_verbose_appends_traces(capsys):
    code, out, _ = run(
        capsys, "classify", "--dataset", TOY_DATASET, "--oracle", TOY_ORACLE, "--verbose"
    )
    assert code == 0
    assert any(line.startswith("# LEVEL1 ") for line in out.split("\n"))
    assert any(line.startswith("# LEVEL3 SELECT") for line in out.split("\n"))


def test_classify_disable_override_changes_decision(capsys):
    # without the conflict rule, the demand reading outscores the march
    code, out, _ = run(
        capsys, "classify", "--dataset", TOY_DATASET, "--oracle", TOY_ORACLE,
        "--disable-override", "conflict",
    )
    assert code == 0
    row = [line for line in out.split("\n") if line.startswith("t20\t")][0]
    assert row.split("\t")[1] == "REQUEST"


def test_classify_missing_table_path(capsys):
    code, _, err = run(
        capsys, "classify", "--dataset", TOY_DATASET, "--oracle", TOY_ORACLE,
        "--table", "/nonexistent/table.tsv",
    )
    assert code == 2
    assert "/nonexistent/table.tsv" in err


def test_classify_requires_backend(capsys, monkeypatch):
    monkeypatch.delenv("ZSP_ENDPOINT", raising=False)
    code, _, err = run(capsys, "classify", "--dataset", TOY_DATASET)
    assert code == 2
    assert "backend" in err


def test_classify_rejects_two_backends(capsys):
    code, _, err = run(
        capsys, "classify", "--dataset", TOY_DATASET, "--oracle", TOY_ORACLE,
        "--endpoint", "http://127.0.0.1:9",
    )
    assert code == 2
    assert "not both" in err


def test_classify_unreachable_endpoint(capsys, monkeypatch):
    monkeypatch.delenv("ZSP_ENDPOINT", raising=False)
    code, _, err = run(
        capsys, "classify", "--dataset", TOY_DATASET, "--endpoint", "http://127.0.0.1:9",
    )
    assert code == 2
    assert "unreachable" in err


def test_endpoint_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("ZSP_ENDPOINT", "http://127.0.0.1:9")
    code, _, err = run(capsys, "classify", "--dataset", TOY_DATASET)
    assert code == 2
    assert "unreachable" in err  # env endpoint was picked up and then failed


def test_evaluate_paper_fixture_is_perfect(capsys, paper_fixture):
    dataset, oracle = paper_fixture
    code, out, _ = run(
        capsys, "evaluate", "--dataset", dataset, "--oracle", oracle, "--task", "root"
    )
    assert code == 0
    assert "accuracy: 100.0" in out


def test_evaluate_binary_task_two_classes(capsys):
    code, out, _ = run(
        capsys, "evaluate", "--dataset", TOY_DATASET, "--oracle", TOY_ORACLE,
        "--task", "binary",
    )
    assert code == 0
    assert "Cooperation" in out and "Conflict" in out
    assert "AGREE" not in out


def test_evaluate_missing_task_labels(capsys, tmp_path):
    dataset = tmp_path / "binary_only.jsonl"
    dataset.write_text(
        json.dumps(
            {"id": "b1", "text": "t", "source": "A", "target": "B", "binary": "Conflict"}
        )
        + "\n",
        encoding="utf-8",
    )
    code, _, err = run(
        capsys, "evaluate", "--dataset", str(dataset), "--oracle", TOY_ORACLE,
        "--task", "root",
    )
    assert code == 2
    assert "root" in err and "gold" in err


def test_evaluate_writes_report_and_figures(capsys, tmp_path):
    out_file = tmp_path / "report.tsv"
    figures = tmp_path / "figs"
    code, _, _ = run(
        capsys, "evaluate", "--dataset", TOY_DATASET, "--oracle", TOY_ORACLE,
        "--task", "root", "--out", str(out_file), "--figures", str(figures),
    )
    assert code == 0
    assert out_file.read_text(encoding="utf-8").startswith("class\tprecision")
    confusion = figures / "confusion_matrix_root.png"
    bars = figures / "per_class_f1_root.png"
    assert confusion.stat().st_size > 0
    assert bars.stat().st_size > 0


def test_ablate_grid(capsys, tmp_path):
    figures = tmp_path / "figs"
    code, out, _ = run(
        capsys, "ablate", "--dataset", TOY_DATASET, "--oracle", TOY_ORACLE,
        "--tasks", "root", "--figures", str(figures),
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "config\troot"
    labels = [line.split("\t")[0] for line in lines[1:]]
    assert "L3" in labels and "L1-c" in labels and "Flat-Tiny" in labels
    l3 = [line for line in lines if line.startswith("L3\t")][0]
    assert l3 == "L3\t100.0"
    assert (figures / "ablation_grid.png").stat().st_size > 0


def test_config_file_sets_flags_and_cli_wins(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        f"dataset={TOY_DATASET}\noracle={TOY_ORACLE}\nmode=l1\n", encoding="utf-8"
    )
    code, out_l1, _ = run(capsys, "classify", "--config", str(cfg))
    assert code == 0
    # t16's gold needs the modality level; L1 stops at the context root
    row = [line for line in out_l1.split("\n") if line.startswith("t16\t")][0]
    assert row.split("\t")[1] == "THREATEN"  # direct threaten entry wins at L1
    code, out_l3, _ = run(capsys, "classify", "--config", str(cfg), "--mode", "l3")
    assert code == 0
    assert out_l3 != out_l1


def test_config_file_rejects_garbage(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("dataset\n", encoding="utf-8")
    code, _, err = run(capsys, "classify", "--config", str(cfg))
    assert code == 2
    assert "key=value" in err


def test_classify_out_file(capsys, tmp_path):
    out_file = tmp_path / "preds.tsv"
    code, out, _ = run(
        capsys, "classify", "--dataset", TOY_DATASET, "--oracle", TOY_ORACLE,
        "--out", str(out_file),
    )
    assert code == 0
    assert out == ""
    content = out_file.read_text(encoding="utf-8")
    assert content.startswith("id\troot")
    assert len(content.strip().split("\n")) == 21
