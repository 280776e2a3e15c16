from __future__ import annotations

import json

import pytest

from conftest import MEDIA_EDGES, TWO_PATH_RENDERED, UNIFORM_GREEDY_RENDERED
from treedecode import read_jsonl, write_jsonl
from treedecode.cli import main

GOLD_BY_ID = {
    "d1": ["Business", "Company", "Documentary", "Entertainment", "Movie"],
    "d2": ["Entertainment"],
    "d3": ["Business", "Company"],
}


@pytest.fixture
def tax_file(tmp_path):
    path = tmp_path / "media.tsv"
    path.write_text(MEDIA_EDGES)
    return str(path)


@pytest.fixture
def corpus_file(tmp_path):
    path = tmp_path / "corpus.jsonl"
    write_jsonl(
        path,
        [
            {"id": doc_id, "text": f"document {doc_id}", "labels": labels}
            for doc_id, labels in GOLD_BY_ID.items()
        ],
    )
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_ok(tax_file, capsys):
    code, out, _ = run(capsys, "validate", "--taxonomy", tax_file)
    assert code == 0
    assert json.loads(out) == {"ok": True, "issues": []}


def test_validate_cycle(tmp_path, capsys):
    bad = tmp_path / "cycle.tsv"
    bad.write_text("A\tB\nB\tA\n")
    code, out, _ = run(capsys, "validate", "--taxonomy", str(bad))
    assert code == 1
    assert "CYCLE" in {issue["code"] for issue in json.loads(out)["issues"]}


def test_validate_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "validate", "--taxonomy", str(tmp_path / "nope.tsv"))
    assert code == 2
    assert "error" in err


def test_linearize_and_delinearize_round_trip(tax_file, corpus_file, tmp_path, capsys):
    sequences = tmp_path / "sequences.jsonl"
    code, _, _ = run(
        capsys, "linearize", "--taxonomy", tax_file, "--input", corpus_file,
        "--output", str(sequences),
    )
    assert code == 0
    rows = read_jsonl(sequences)
    assert rows[0] == {"id": "d1", "sequence": TWO_PATH_RENDERED}
    assert rows[1] == {"id": "d2", "sequence": "Root Entertainment POP"}

    labels_out = tmp_path / "labels.jsonl"
    code, _, _ = run(
        capsys, "delinearize", "--taxonomy", tax_file, "--input", str(sequences),
        "--output", str(labels_out),
    )
    assert code == 0
    assert {r["id"]: r["labels"] for r in read_jsonl(labels_out)} == GOLD_BY_ID


def test_linearize_inconsistent_requires_closure(tax_file, tmp_path, capsys):
    corpus = tmp_path / "inconsistent.jsonl"
    write_jsonl(corpus, [{"id": "x1", "text": "", "labels": ["Documentary", "Company"]}])
    code, _, err = run(capsys, "linearize", "--taxonomy", tax_file, "--input", str(corpus))
    assert code == 1
    assert "x1" in err

    code, out, err = run(
        capsys, "linearize", "--taxonomy", tax_file, "--input", str(corpus), "--closure",
    )
    assert code == 0
    assert "repaired 1" in err
    assert json.loads(out.splitlines()[0])["sequence"] == TWO_PATH_RENDERED


def test_fit_is_deterministic(tax_file, corpus_file, tmp_path, capsys):
    first = tmp_path / "m1.json"
    second = tmp_path / "m2.json"
    assert run(capsys, "fit", "--taxonomy", tax_file, "--input", corpus_file, "--output", str(first))[0] == 0
    assert run(capsys, "fit", "--taxonomy", tax_file, "--input", corpus_file, "--output", str(second))[0] == 0
    assert first.read_bytes() == second.read_bytes()
    model = json.loads(first.read_text())
    assert set(model) == {"alphabet", "counts"}


def test_fit_empty_corpus(tax_file, tmp_path, capsys):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    code, _, err = run(
        capsys, "fit", "--taxonomy", tax_file, "--input", str(empty),
        "--output", str(tmp_path / "m.json"),
    )
    assert code == 1
    assert json.loads(err.splitlines()[-1])["error"] == "EMPTY_CORPUS"


def test_decode_oracle_recovers_gold(tax_file, corpus_file, tmp_path, capsys):
    # Default beam width (4): oracle-scored decoding must reproduce gold.
    predictions = tmp_path / "pred.jsonl"
    code, _, err = run(
        capsys, "decode", "--taxonomy", tax_file, "--input", corpus_file,
        "--output", str(predictions), "--scorer", "oracle",
    )
    assert code == 0
    rows = read_jsonl(predictions)
    assert {r["id"]: r["labels"] for r in rows} == GOLD_BY_ID
    assert rows[0]["sequence"] == TWO_PATH_RENDERED.split()
    assert all(r["logprob"] <= 0.0 for r in rows)
    summary = json.loads(err.splitlines()[-1])
    assert summary["documents"] == 3
    assert summary["inconsistent"] == 0
    assert summary["overflow"] == []


def test_decode_uniform_golden(tax_file, corpus_file, tmp_path, capsys):
    predictions = tmp_path / "pred.jsonl"
    code, _, _ = run(
        capsys, "decode", "--taxonomy", tax_file, "--input", corpus_file,
        "--output", str(predictions), "--scorer", "uniform", "--beam", "1",
    )
    assert code == 0
    for row in read_jsonl(predictions):
        assert row["sequence"] == UNIFORM_GREEDY_RENDERED.split()


def test_decode_workers_preserve_order(tax_file, corpus_file, tmp_path, capsys):
    serial = tmp_path / "serial.jsonl"
    parallel = tmp_path / "parallel.jsonl"
    run(capsys, "decode", "--taxonomy", tax_file, "--input", corpus_file,
        "--output", str(serial), "--scorer", "oracle")
    run(capsys, "decode", "--taxonomy", tax_file, "--input", corpus_file,
        "--output", str(parallel), "--scorer", "oracle", "--workers", "4")
    assert serial.read_bytes() == parallel.read_bytes()


def test_decode_bigram_pipeline(tax_file, corpus_file, tmp_path, capsys):
    model = tmp_path / "model.json"
    run(capsys, "fit", "--taxonomy", tax_file, "--input", corpus_file, "--output", str(model))
    predictions = tmp_path / "pred.jsonl"
    code, _, err = run(
        capsys, "decode", "--taxonomy", tax_file, "--input", corpus_file,
        "--output", str(predictions), "--scorer", "bigram", "--model", str(model),
    )
    assert code == 0
    assert json.loads(err.splitlines()[-1])["inconsistent"] == 0
    assert len(read_jsonl(predictions)) == 3


def test_decode_bigram_requires_model(tax_file, corpus_file, capsys):
    code, _, err = run(
        capsys, "decode", "--taxonomy", tax_file, "--input", corpus_file, "--scorer", "bigram",
    )
    assert code == 1
    assert "--model" in err


def test_decode_unconstrained_reports_inconsistent(tax_file, corpus_file, tmp_path, capsys):
    predictions = tmp_path / "pred.jsonl"
    code, _, err = run(
        capsys, "decode", "--taxonomy", tax_file, "--input", corpus_file,
        "--output", str(predictions), "--mode", "unconstrained", "--beam", "1",
    )
    assert code == 0
    assert json.loads(err.splitlines()[-1])["inconsistent"] == 3


def test_decode_rejects_zero_beam(tax_file, corpus_file, capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["decode", "--taxonomy", tax_file, "--input", corpus_file, "--beam", "0"])
    assert excinfo.value.code == 2


def test_postprocess_closure_and_idempotence(tax_file, tmp_path, capsys):
    raw = tmp_path / "raw.jsonl"
    write_jsonl(raw, [{"id": "p1", "labels": ["Documentary", "Company"]}])
    closed = tmp_path / "closed.jsonl"
    code, _, _ = run(
        capsys, "postprocess", "--taxonomy", tax_file, "--input", str(raw),
        "--output", str(closed),
    )
    assert code == 0
    assert read_jsonl(closed) == [{"id": "p1", "labels": GOLD_BY_ID["d1"]}]

    again = tmp_path / "again.jsonl"
    code, _, _ = run(
        capsys, "postprocess", "--taxonomy", tax_file, "--input", str(closed),
        "--output", str(again),
    )
    assert code == 0
    assert again.read_bytes() == closed.read_bytes()


def test_postprocess_empty_predictions(tax_file, tmp_path, capsys):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    out = tmp_path / "out.jsonl"
    code, _, _ = run(capsys, "postprocess", "--taxonomy", tax_file, "--input", str(empty),
                     "--output", str(out))
    assert code == 0
    assert out.read_text() == ""


def test_postprocess_unknown_labels(tax_file, tmp_path, capsys):
    raw = tmp_path / "raw.jsonl"
    write_jsonl(raw, [{"id": "p9", "labels": ["Music"]}])
    code, _, err = run(capsys, "postprocess", "--taxonomy", tax_file, "--input", str(raw))
    assert code == 1
    assert "p9" in err and "Music" in err


def test_evaluate_isolated_fixture(tax_file, tmp_path, capsys):
    gold = tmp_path / "gold.jsonl"
    write_jsonl(gold, [{"id": "d1", "text": "", "labels": GOLD_BY_ID["d1"]}])
    predictions = tmp_path / "pred.jsonl"
    write_jsonl(predictions, [{"id": "d1", "labels": ["Entertainment", "Documentary", "Company"]}])
    report_path = tmp_path / "report.json"
    code, out, _ = run(
        capsys, "evaluate", "--taxonomy", tax_file, "--gold", str(gold),
        "--predictions", str(predictions), "--output", str(report_path),
    )
    assert code == 0
    assert "0.7500" in out and "0.2500" in out
    report = json.loads(report_path.read_text())
    assert report["micro_f1"] == 0.75
    assert report["c_micro_f1"] == 0.25
    assert report["inconsistent_docs"] == 1


def test_evaluate_gold_as_predictions(tax_file, corpus_file, tmp_path, capsys):
    predictions = tmp_path / "pred.jsonl"
    write_jsonl(predictions, [{"id": i, "labels": l} for i, l in GOLD_BY_ID.items()])
    code, out, _ = run(
        capsys, "evaluate", "--taxonomy", tax_file, "--gold", corpus_file,
        "--predictions", str(predictions),
    )
    assert code == 0
    assert "1.0000" in out


def test_evaluate_postprocessed_equalizes_constrained(tax_file, tmp_path, capsys):
    gold = tmp_path / "gold.jsonl"
    write_jsonl(gold, [{"id": "d1", "text": "", "labels": GOLD_BY_ID["d1"]}])
    raw = tmp_path / "raw.jsonl"
    write_jsonl(raw, [{"id": "d1", "labels": ["Entertainment", "Documentary", "Company"]}])
    closed = tmp_path / "closed.jsonl"
    run(capsys, "postprocess", "--taxonomy", tax_file, "--input", str(raw), "--output", str(closed))
    report_path = tmp_path / "report.json"
    code, _, _ = run(
        capsys, "evaluate", "--taxonomy", tax_file, "--gold", str(gold),
        "--predictions", str(closed), "--output", str(report_path),
    )
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["c_micro_f1"] == report["micro_f1"]
    assert report["c_macro_f1"] == report["macro_f1"]


def test_evaluate_alignment_error(tax_file, corpus_file, tmp_path, capsys):
    predictions = tmp_path / "pred.jsonl"
    write_jsonl(predictions, [{"id": "d1", "labels": []}, {"id": "ghost", "labels": []}])
    code, _, err = run(
        capsys, "evaluate", "--taxonomy", tax_file, "--gold", corpus_file,
        "--predictions", str(predictions),
    )
    assert code == 1
    payload = json.loads(err.splitlines()[-1])
    assert payload["error"] == "ALIGNMENT_ERROR"
    assert "ghost" in payload["message"]


def test_decode_then_evaluate_reports_zero_inconsistent(tax_file, corpus_file, tmp_path, capsys):
    model = tmp_path / "model.json"
    run(capsys, "fit", "--taxonomy", tax_file, "--input", corpus_file, "--output", str(model))
    predictions = tmp_path / "pred.jsonl"
    run(capsys, "decode", "--taxonomy", tax_file, "--input", corpus_file,
        "--output", str(predictions), "--scorer", "bigram", "--model", str(model))
    report_path = tmp_path / "report.json"
    code, _, _ = run(
        capsys, "evaluate", "--taxonomy", tax_file, "--gold", corpus_file,
        "--predictions", str(predictions), "--output", str(report_path),
    )
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["inconsistent_docs"] == 0
    assert report["c_micro_f1"] == report["micro_f1"]


def test_stats(tax_file, corpus_file, capsys):
    code, out, _ = run(
        capsys, "stats", "--taxonomy", tax_file, "--split", f"train={corpus_file}",
    )
    assert code == 0
    stats = json.loads(out)
    assert stats["label_count"] == 6
    assert stats["depth"] == 3
    assert stats["avg_labels"] == pytest.approx(8 / 3)
    assert stats["split_sizes"] == {"train": 3}


def test_stats_bad_split_argument(tax_file, capsys):
    code, _, err = run(capsys, "stats", "--taxonomy", tax_file, "--split", "train")
    assert code == 1
    assert "NAME=PATH" in err


def test_linearize_delinearize_round_trip_500_docs(tmp_path, capsys):
    # File-level losslessness on a synthetic corpus: label arrays come back
    # byte-identical (order-normalized) after linearize then delinearize.
    import random

    from conftest import random_consistent_labels, random_taxonomy

    rng = random.Random(97)
    tax = random_taxonomy(rng, 60)
    tax_path = tmp_path / "tax.tsv"
    tax_path.write_text(tax.render_edges())
    corpus = tmp_path / "corpus.jsonl"
    write_jsonl(
        corpus,
        [
            {"id": f"d{i}", "text": "", "labels": sorted(random_consistent_labels(rng, tax))}
            for i in range(500)
        ],
    )
    sequences = tmp_path / "sequences.jsonl"
    labels_back = tmp_path / "labels.jsonl"
    assert main(["linearize", "--taxonomy", str(tax_path), "--input", str(corpus),
                 "--output", str(sequences)]) == 0
    assert main(["delinearize", "--taxonomy", str(tax_path), "--input", str(sequences),
                 "--output", str(labels_back)]) == 0
    capsys.readouterr()
    original = [{"id": r["id"], "labels": r["labels"]} for r in read_jsonl(corpus)]
    assert read_jsonl(labels_back) == original
