import json
import subprocess
import sys

import pytest

from fitclams.cli import main
from fitclams.manifest import validate_manifest


@pytest.fixture
def tiny_corpus(tmp_path):
    p = tmp_path / "tiny.txt"
    p.write_text(
        "the cat runs .\nthe cats run .\nthe dog waits .\n"
        "the dogs wait .\nis it a cat ?\nthe cat waits .\n"
        "the dogs run .\nthe cats wait .\nthe dog runs .\n",
        encoding="utf-8")
    return p


def run_main(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_stats_stdout(tiny_corpus, capsys):
    code, out, _ = run_main(capsys, "stats", "--corpus", str(tiny_corpus))
    assert code == 0
    payload = json.loads(out)
    assert payload["token_count"] == 28  # punctuation excluded
    assert payload["interrogative_fraction"] == pytest.approx(1 / 9)


def test_stats_artifact_manifest(tiny_corpus, tmp_path, capsys):
    out_path = tmp_path / "stats.json"
    code, _, _ = run_main(capsys, "stats", "--corpus", str(tiny_corpus),
                          "--out", str(out_path),
                          "--freqs-out", str(tmp_path / "f.tsv"))
    assert code == 0
    payload = json.loads(out_path.read_text())
    assert validate_manifest(payload["manifest"]) == []


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["stats"])  # missing --corpus
    assert exc.value.code == 2


def test_help_everywhere():
    for cmd in ("stats", "train-tokenizer", "train-ngram", "build-lexicon",
                "gen-benchmark", "score", "evaluate", "regress", "correlate",
                "pipeline"):
        with pytest.raises(SystemExit) as exc:
            main([cmd, "--help"])
        assert exc.value.code == 0


def test_runtime_error_names_stage(tmp_path, capsys):
    code, _, err = run_main(capsys, "gen-benchmark",
                            "--lexicon", str(tmp_path / "missing.json"),
                            "--aux", str(tmp_path / "missing_aux.json"),
                            "--out", str(tmp_path / "b.jsonl"))
    assert code == 1
    payload = json.loads(err)
    assert payload["stage"] == "gen-benchmark"
    assert payload["error"]


def test_tokenizer_then_ngram_then_score(tiny_corpus, tmp_path, capsys):
    tok = tmp_path / "tok.json"
    lm = tmp_path / "lm.bin"
    bench = tmp_path / "bench.jsonl"
    results = tmp_path / "results.jsonl"
    report = tmp_path / "report.json"

    assert run_main(capsys, "train-tokenizer", "--corpus", str(tiny_corpus),
                    "--vocab-size", "40", "--out", str(tok))[0] == 0
    assert run_main(capsys, "train-ngram", "--corpus", str(tiny_corpus),
                    "--tokenizer", str(tok), "--out", str(lm))[0] == 0

    pairs = [
        {"pair_id": "x1", "paradigm": "simple_agreement",
         "lexicon_source": "c",
         "grammatical": ["the", "cat", "runs"],
         "ungrammatical": ["the", "cats", "runs"],
         "critical_start": 2, "critical_end": 3,
         "subject_slot": [1, 2], "metadata": {}},
        {"pair_id": "x2", "paradigm": "simple_agreement",
         "lexicon_source": "c",
         "grammatical": ["the", "dogs", "wait"],
         "ungrammatical": ["the", "dog", "wait"],
         "critical_start": 2, "critical_end": 3,
         "subject_slot": [1, 2], "metadata": {}},
    ]
    bench.write_text("\n".join(json.dumps(p) for p in pairs) + "\n")

    assert run_main(capsys, "score", "--benchmark", str(bench),
                    "--ngram", str(lm), "--region", "critical",
                    "--out", str(results))[0] == 0
    lines = [json.loads(l) for l in results.read_text().splitlines()]
    assert len(lines) == 2
    assert all(l["delta_p"] > 0 and l["correct"] for l in lines)

    assert run_main(capsys, "evaluate", "--results", str(results),
                    "--out", str(report))[0] == 0
    payload = json.loads(report.read_text())
    assert payload["overall"] == 1.0
    assert validate_manifest(payload["manifest"]) == []


def test_score_validate_only(tiny_corpus, tmp_path, capsys):
    tok = tmp_path / "tok.json"
    lm = tmp_path / "lm.bin"
    bench = tmp_path / "bench.jsonl"
    scores = tmp_path / "scores.jsonl"
    run_main(capsys, "train-tokenizer", "--corpus", str(tiny_corpus),
             "--vocab-size", "40", "--out", str(tok))
    run_main(capsys, "train-ngram", "--corpus", str(tiny_corpus),
             "--tokenizer", str(tok), "--out", str(lm))
    bench.write_text(json.dumps({
        "pair_id": "x1", "paradigm": "simple_agreement",
        "lexicon_source": "c",
        "grammatical": ["the", "cat", "runs"],
        "ungrammatical": ["the", "cats", "runs"],
        "critical_start": 2, "critical_end": 3,
        "subject_slot": [1, 2], "metadata": {}}) + "\n")

    # export records via the library, then validate via the CLI
    from fitclams.bpe import Encoder
    from fitclams.ngram import load_ngram
    from fitclams.scoring import ngram_score_record, write_score_records

    model = load_ngram(lm)
    enc = Encoder(model.bpe)
    write_score_records([
        ngram_score_record(model, enc, "x1", "gram", ("the", "cat", "runs")),
        ngram_score_record(model, enc, "x1", "ungram", ("the", "cats", "runs")),
    ], scores)
    code, out, _ = run_main(capsys, "score", "--benchmark", str(bench),
                            "--scores", str(scores), "--validate-only")
    assert code == 0
    assert json.loads(out)["problems"] == 0

    # corrupt one record and expect a nonzero exit
    lines = scores.read_text().splitlines()
    broken = json.loads(lines[0])
    broken["word_spans"] = broken["word_spans"][:-1]
    scores.write_text("\n".join([json.dumps(broken)] + lines[1:]) + "\n")
    code, out, err = run_main(capsys, "score", "--benchmark", str(bench),
                              "--scores", str(scores), "--validate-only")
    assert code == 1
    assert json.loads(out)["problems"] > 0


def test_gen_benchmark_shipped_language(tmp_path, capsys):
    out = tmp_path / "b.jsonl"
    code, _, _ = run_main(capsys, "gen-benchmark", "--language", "fr",
                          "--source", "childes-fr",
                          "--paradigms", "simple_agreement",
                          "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 126
    sidecar = json.loads((tmp_path / "b.jsonl.manifest.json").read_text())
    assert sidecar["pair_counts"]["simple_agreement"] == 126


def test_gen_benchmark_rerun_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for out in (a, b):
        assert run_main(capsys, "gen-benchmark", "--language", "en",
                        "--source", "wiki-en",
                        "--paradigms", "agreement_vp_coord",
                        "--out", str(out))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_report_rerun_byte_identical(fixtures_dir, tmp_path, capsys):
    results = tmp_path / "results.jsonl"
    code, _, _ = run_main(capsys, "score",
                          "--benchmark", str(fixtures_dir / "scores" / "benchmark.jsonl"),
                          "--scores", str(fixtures_dir / "scores" / "records.jsonl"),
                          "--out", str(results))
    assert code == 0
    a, b = tmp_path / "r1.json", tmp_path / "r2.json"
    for out in (a, b):
        assert run_main(capsys, "evaluate", "--results", str(results),
                        "--out", str(out))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_entry_point_via_subprocess(tiny_corpus):
    proc = subprocess.run(
        [sys.executable, "-m", "fitclams.cli", "stats",
         "--corpus", str(tiny_corpus)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["token_count"] == 28
