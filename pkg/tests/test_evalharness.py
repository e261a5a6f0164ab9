import json
import random
import stat
import sys

import pytest

from moltext.dataset import CorpusSplit
from moltext.errors import (
    DuplicatePrediction,
    InvalidGroundTruth,
    MalformedScorerOutput,
    MissingPrediction,
    ScorerFailed,
    UnexpectedPrediction,
)
from moltext.evalharness import (
    ExternalScorerSpec,
    eval_captioning,
    eval_generation,
    load_predictions,
    parse_report,
    render_report,
    run_external_scorer,
    save_predictions,
)
from moltext.evalharness.predictions import align_to_test_split


def _full_split(corpus):
    return CorpusSplit((), (), tuple(r.id for r in corpus))


def _perfect_gen(corpus):
    return [(r.id, r.smiles) for r in corpus]


def _perfect_cap(corpus):
    return [(r.id, r.caption) for r in corpus]


# --- prediction files ----------------------------------------------------------

def test_prediction_roundtrip(tmp_path):
    rows = [("a", "CCO"), ("b", ""), ("c", "pred with spaces")]
    save_predictions(rows, tmp_path / "p.tsv")
    assert load_predictions(tmp_path / "p.tsv") == rows


def test_prediction_errors(tmp_path):
    (tmp_path / "dup.tsv").write_text("a\tx\na\ty\n")
    with pytest.raises(DuplicatePrediction):
        load_predictions(tmp_path / "dup.tsv")
    split = CorpusSplit((), (), ("a", "b"))
    with pytest.raises(MissingPrediction):
        align_to_test_split([("a", "x")], split)
    with pytest.raises(UnexpectedPrediction):
        align_to_test_split([("a", "x"), ("b", "y"), ("zzz", "q")], split)


# --- generation -----------------------------------------------------------------

def test_ground_truth_generation_row(tiny_corpus):
    report = eval_generation(_perfect_gen(tiny_corpus), tiny_corpus, _full_split(tiny_corpus))
    assert report.value("BLEU") == pytest.approx(1.0)
    assert report.value("Exact") == 1.0
    assert report.value("Levenshtein") == 0.0
    assert report.value("MACCS FTS") == pytest.approx(1.0)
    assert report.value("RDK FTS") == pytest.approx(1.0)
    assert report.value("Morgan FTS") == pytest.approx(1.0)
    assert report.value("Validity") == 1.0
    assert report.value("FCD") is None
    assert report.versions["key_table"] == "keys-v1"


def test_all_invalid_predictions(tiny_corpus):
    rows = [(r.id, "INVALID(((") for r in tiny_corpus]
    report = eval_generation(rows, tiny_corpus, _full_split(tiny_corpus))
    assert report.value("Validity") == 0.0
    assert report.value("Exact") == 0.0
    assert report.value("MACCS FTS") is None  # zero support
    assert report.value("Levenshtein") > 0


def test_half_exact_half_invalid(tiny_corpus):
    corpus = tiny_corpus[:2]
    rows = [(corpus[0].id, corpus[0].smiles), (corpus[1].id, "NOT_SMILES(((")]
    report = eval_generation(rows, corpus, _full_split(corpus))
    assert report.value("Exact") == 0.5
    assert report.value("Validity") == 0.5


def test_row_order_never_matters(tiny_corpus):
    rng = random.Random(3)
    rows = _perfect_gen(tiny_corpus)
    rows[3] = (rows[3][0], "CCO")  # one wrong prediction for asymmetry
    base = eval_generation(rows, tiny_corpus, _full_split(tiny_corpus))
    for _ in range(3):
        rng.shuffle(rows)
        again = eval_generation(rows, tiny_corpus, _full_split(tiny_corpus))
        assert [m.value for m in again.metrics] == [m.value for m in base.metrics]


def test_corruption_only_degrades(tiny_corpus):
    rows = _perfect_gen(tiny_corpus)
    base = eval_generation(rows, tiny_corpus, _full_split(tiny_corpus))
    corrupted = list(rows)
    corrupted[0] = (corrupted[0][0], corrupted[0][1] + ")")  # break one string
    report = eval_generation(corrupted, tiny_corpus, _full_split(tiny_corpus))
    assert report.value("Exact") <= base.value("Exact")
    assert report.value("Validity") <= base.value("Validity")
    assert report.value("MACCS FTS") <= base.value("MACCS FTS") + 1e-12


def test_invalid_ground_truth_detected(tiny_corpus):
    from moltext.dataset import MoleculeRecord

    bad = MoleculeRecord("BAD", "C1CC", "A caption long enough to count here.")
    corpus = list(tiny_corpus) + [bad]
    rows = _perfect_gen(corpus)
    with pytest.raises(InvalidGroundTruth):
        eval_generation(rows, corpus, _full_split(corpus))


# --- captioning ------------------------------------------------------------------

def test_ground_truth_captioning_row(tiny_corpus):
    report = eval_captioning(_perfect_cap(tiny_corpus), tiny_corpus, _full_split(tiny_corpus))
    assert report.value("BLEU-2") == pytest.approx(1.0)
    assert report.value("BLEU-4") == pytest.approx(1.0)
    assert report.value("ROUGE-1") == pytest.approx(1.0)
    assert report.value("ROUGE-2") == pytest.approx(1.0)
    assert report.value("ROUGE-L") == pytest.approx(1.0)
    assert report.value("METEOR") >= 0.999


def test_empty_caption_predictions(tiny_corpus):
    rows = [(r.id, "") for r in tiny_corpus]
    report = eval_captioning(rows, tiny_corpus, _full_split(tiny_corpus))
    for name in ("BLEU-2", "BLEU-4", "ROUGE-1", "ROUGE-2", "ROUGE-L", "METEOR"):
        assert report.value(name) == 0.0


def test_single_token_recall(tiny_corpus):
    from moltext.textmetrics import word_tokens

    corpus = tiny_corpus[:4]
    rows = [(r.id, word_tokens(r.caption).tokens[0]) for r in corpus]
    report = eval_captioning(rows, corpus, _full_split(corpus))
    # per pair: recall 1/len(ref), precision 1, so F1 = 2/(len(ref)+1)
    expected = sum(
        2.0 / (len(word_tokens(r.caption).tokens) + 1) for r in corpus
    ) / len(corpus)
    assert report.value("ROUGE-1") == pytest.approx(expected)


# --- external scorers ----------------------------------------------------------

def _stub_scorer(tmp_path, payload: str, exit_code: int = 0):
    script = tmp_path / "scorer.py"
    script.write_text(
        "import json, sys\n"
        "rows = [json.loads(l) for l in open(sys.argv[1])]\n"
        f"open(sys.argv[2], 'w').write({payload!r})\n"
        f"sys.exit({exit_code})\n"
    )
    return ExternalScorerSpec("fcd", (sys.executable, str(script)))


def test_stub_scorer_value(tmp_path, tiny_corpus):
    spec = _stub_scorer(tmp_path, json.dumps({"name": "fcd", "value": 0.5}))
    rows = _perfect_gen(tiny_corpus)
    report = eval_generation(
        rows, tiny_corpus, _full_split(tiny_corpus), scorers={"fcd": spec}
    )
    assert report.value("FCD") == 0.5


def test_missing_scorer_skipped(tiny_corpus):
    spec = ExternalScorerSpec("fcd", ("/no/such/binary",))
    report = eval_generation(
        _perfect_gen(tiny_corpus), tiny_corpus, _full_split(tiny_corpus), scorers={"fcd": spec}
    )
    assert report.value("FCD") is None
    assert any("skipped" in note for note in report.notes)
    with pytest.raises(ScorerFailed):
        eval_generation(
            _perfect_gen(tiny_corpus),
            tiny_corpus,
            _full_split(tiny_corpus),
            scorers={"fcd": spec},
            strict_scorers=True,
        )


def test_malformed_scorer_output(tmp_path):
    spec = _stub_scorer(tmp_path, "this is not json")
    with pytest.raises(MalformedScorerOutput):
        run_external_scorer(spec, [("a", "x", "y")], workdir=tmp_path / "w")


def test_failing_scorer(tmp_path):
    spec = _stub_scorer(tmp_path, "{}", exit_code=3)
    with pytest.raises(ScorerFailed):
        run_external_scorer(spec, [("a", "x", "y")], workdir=tmp_path / "w")


def test_scorer_exchange_file_format(tmp_path):
    spec = _stub_scorer(tmp_path, json.dumps({"name": "fcd", "value": 1.25}))
    value = run_external_scorer(spec, [("a", "pred", "ref")], workdir=tmp_path / "w")
    assert value == 1.25
    rows = [
        json.loads(line)
        for line in (tmp_path / "w" / "fcd-pairs.jsonl").read_text().splitlines()
    ]
    assert rows == [{"id": "a", "prediction": "pred", "reference": "ref"}]


# --- rendering --------------------------------------------------------------------

def test_markdown_header_order(tiny_corpus):
    report = eval_generation(_perfect_gen(tiny_corpus), tiny_corpus, _full_split(tiny_corpus))
    text = render_report(report, "markdown").decode()
    assert "BLEU | Exact | Levenshtein | MACCS FTS | RDK FTS | Morgan FTS | FCD | Text2Mol | Validity" in text
    assert "—" in text  # skipped scorers render as em dash cells


def test_json_roundtrip_stable(tiny_corpus):
    report = eval_captioning(_perfect_cap(tiny_corpus), tiny_corpus, _full_split(tiny_corpus))
    raw = render_report(report, "json")
    assert render_report(parse_report(raw), "json") == raw


def test_tsv_rendering(tiny_corpus):
    report = eval_captioning(_perfect_cap(tiny_corpus), tiny_corpus, _full_split(tiny_corpus))
    lines = render_report(report, "tsv").decode().splitlines()
    assert lines[0].split("\t") == [
        "BLEU-2", "BLEU-4", "ROUGE-1", "ROUGE-2", "ROUGE-L", "METEOR", "Text2Mol",
    ]
    assert lines[1].split("\t")[0] == "1.000"
