import json

import pytest

from moltext.cli import main
from moltext.dataset import load_corpus, load_split
from moltext.sampledata import make_corpus, rewrite_responder


@pytest.fixture()
def corpus_file(tmp_path, tiny_corpus):
    from moltext.dataset import save_corpus

    path = tmp_path / "corpus.txt"
    save_corpus(tiny_corpus, path)
    return path


def test_unknown_flag_exits_one(capsys):
    assert main(["--definitely-not-a-flag"]) == 1
    assert "usage" in capsys.readouterr().err


def test_missing_subcommand_exits_one():
    assert main([]) == 1


def test_help_available(capsys):
    for sub in ("split", "augment", "validate", "canonicalize", "fingerprint",
                "eval-gen", "eval-cap", "report", "sample-corpus"):
        assert main([sub, "--help"]) == 0
        assert "usage" in capsys.readouterr().out


def test_split_command(tmp_path, corpus_file, tiny_corpus):
    out = tmp_path / "split.json"
    assert main(["split", "--corpus", str(corpus_file), "--seed", "5", "--out", str(out)]) == 0
    split = load_split(out)
    assert sorted(split.all_ids()) == sorted(r.id for r in tiny_corpus)


def test_canonicalize_command(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("OCC\nCCO\n")
    assert main(["canonicalize", "--in", str(src)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == lines[1]


def test_canonicalize_invalid_input_exits_two(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("C1CC\n")
    assert main(["canonicalize", "--in", str(src)]) == 2
    assert "invalid" in capsys.readouterr().err


def test_fingerprint_command(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("c1ccccc1\nc1ccccc1\n")
    assert main(["fingerprint", "--family", "keys", "--in", str(src)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2 and lines[0] == lines[1]
    assert len(lines[0]) == (166 + 3) // 4


def test_validate_command(tmp_path, corpus_file, capsys):
    assert main(["validate", "--corpus", str(corpus_file)]) == 0
    out = capsys.readouterr().out
    assert "valid" in out


def test_eval_gen_ground_truth(tmp_path, corpus_file, tiny_corpus, capsys):
    pred = tmp_path / "pred.tsv"
    pred.write_text("".join(f"{r.id}\t{r.smiles}\n" for r in tiny_corpus))
    assert main(["eval-gen", "--corpus", str(corpus_file), "--pred", str(pred)]) == 0
    out = capsys.readouterr().out
    assert "| 1.000 | 1.000 | 0.000 | 1.000 | 1.000 | 1.000 | — | — | 1.000 |" in out


def test_eval_gen_missing_prediction_exits_two(tmp_path, corpus_file, tiny_corpus, capsys):
    pred = tmp_path / "pred.tsv"
    pred.write_text(f"{tiny_corpus[0].id}\t{tiny_corpus[0].smiles}\n")
    assert main(["eval-gen", "--corpus", str(corpus_file), "--pred", str(pred)]) == 2


def test_eval_cap_report_roundtrip(tmp_path, corpus_file, tiny_corpus):
    pred = tmp_path / "pred.tsv"
    pred.write_text("".join(f"{r.id}\t{r.caption}\n" for r in tiny_corpus))
    report_path = tmp_path / "report.json"
    assert main([
        "eval-cap", "--corpus", str(corpus_file), "--pred", str(pred),
        "--report-format", "json", "--out", str(report_path),
    ]) == 0
    payload = json.loads(report_path.read_text())
    assert payload["task"] == "cap"
    md_path = tmp_path / "report.md"
    assert main([
        "report", "--in", str(report_path), "--report-format", "markdown",
        "--out", str(md_path),
    ]) == 0
    assert "BLEU-2 | BLEU-4" in md_path.read_text()


def test_sample_corpus_command(tmp_path):
    out = tmp_path / "c.txt"
    assert main(["sample-corpus", "--n", "12", "--seed", "2", "--out", str(out)]) == 0
    assert len(load_corpus(out)) == 12


def test_augment_dry_run_and_run(tmp_path, monkeypatch, capsys):
    corpus = make_corpus(6, seed=11)
    from moltext.dataset import save_corpus, save_split, make_split, load_augmented

    corpus_path = tmp_path / "corpus.txt"
    save_corpus(corpus, corpus_path)
    split = make_split(corpus, seed=0)
    split_path = tmp_path / "split.json"
    save_split(split, split_path)

    from moltext.augment import MockProvider

    mock = MockProvider(responder=rewrite_responder(corpus))
    url, server = mock.serve_http()
    try:
        providers_path = tmp_path / "providers.json"
        providers_path.write_text(json.dumps({
            "providers": [{
                "name": "mock", "endpoint": url, "auth_env": "NO_KEY_SET",
                "model": "mock-model", "rounds": 2, "requests_per_minute": 100000,
                "timeout": 10.0,
            }],
        }))
        common = [
            "augment", "--corpus", str(corpus_path), "--split-file", str(split_path),
            "--k", "2", "--providers", str(providers_path),
            "--cache-dir", str(tmp_path / "cache"),
        ]
        assert main(common + ["--dry-run"]) == 0
        dry = capsys.readouterr().out.strip()
        expected = 2 * len(split.train)
        assert dry == str(expected)
        assert len(mock.requests) == 0

        out_path = tmp_path / "augmented.jsonl"
        report_path = tmp_path / "job.json"
        assert main(common + ["--out", str(out_path), "--report", str(report_path)]) == 0
        assert len(mock.requests) == expected
        records = load_augmented(out_path)
        assert len(records) == len(split.train)
        assert all(len(r.rewrites) == 2 for r in records)
        payload = json.loads(report_path.read_text())
        assert payload["fetched"] == expected

        # second dry run reports zero pending requests
        assert main(common + ["--dry-run"]) == 0
        assert capsys.readouterr().out.strip() == "0"
    finally:
        server.close()
