"""Corpus-level evaluation for generation and captioning predictions.

Generation: character BLEU and mean Levenshtein run over every pair
(string metrics need no molecular graph); Validity and Exact over every
pair; the three fingerprint Tanimoto means run over pairs whose prediction
is valid, with the excluded count disclosed in the report.

Captioning: word-mode corpus BLEU-2/BLEU-4, mean ROUGE-1/2/L F1 and mean
METEOR.
"""

from __future__ import annotations

from .. import __version__
from ..dataset import CorpusSplit, MoleculeRecord
from ..errors import EvalError, InvalidGroundTruth, ScorerFailed
from ..fingerprints import default_table, keys_fp, morgan_fp, path_fp, tanimoto
from ..smiles import canonicalize, is_valid, parse
from ..textmetrics import (
    TOKENIZER_VERSION,
    char_tokens,
    corpus_bleu,
    levenshtein,
    meteor,
    rouge,
    word_tokens,
)
from .external import ExternalScorerSpec, run_external_scorer
from .predictions import align_to_test_split
from .report import MetricReport, MetricValue


def _test_records(corpus, split: CorpusSplit) -> list[MoleculeRecord]:
    by_id = {record.id: record for record in corpus}
    missing = [rid for rid in split.test if rid not in by_id]
    if missing:
        raise EvalError(f"test ids missing from corpus: {missing[:5]}")
    return [by_id[rid] for rid in split.test]


def _versions() -> dict[str, str]:
    return {
        "tool": __version__,
        "key_table": default_table().version,
        "tokenizer": TOKENIZER_VERSION,
        "smiles_bleu_mode": "char",
        "caption_bleu_mode": "word",
    }


def _scorer_metric(
    name: str,
    scorers: dict[str, ExternalScorerSpec] | None,
    rows,
    support: int,
    strict: bool,
    notes: list[str],
) -> MetricValue:
    spec = (scorers or {}).get(name.lower())
    if spec is None:
        return MetricValue(name, None, 0, "not configured")
    if not spec.resolvable():
        if strict:
            raise ScorerFailed(127, f"{name} command not found: {spec.command[0]}")
        notes.append(f"{name} skipped: command {spec.command[0]!r} not found")
        return MetricValue(name, None, 0, "scorer unavailable")
    try:
        value = run_external_scorer(spec, rows)
    except EvalError:
        if strict:
            raise
        notes.append(f"{name} skipped: scorer failed")
        return MetricValue(name, None, 0, "scorer failed")
    return MetricValue(name, value, support, f"external command {spec.command[0]}")


def eval_generation(
    pred_rows,
    corpus,
    split: CorpusSplit,
    scorers: dict[str, ExternalScorerSpec] | None = None,
    strict_scorers: bool = False,
) -> MetricReport:
    records = _test_records(corpus, split)
    predictions = align_to_test_split(pred_rows, split)

    n = len(records)
    exact_hits = 0
    valid_hits = 0
    lev_total = 0
    bleu_pairs = []
    fts_sums = {"keys": 0.0, "path": 0.0, "morgan": 0.0}
    fts_support = 0
    table = default_table()

    for record in records:
        pred = predictions[record.id]
        truth_verdict = is_valid(record.smiles)
        if not truth_verdict.valid:
            raise InvalidGroundTruth(record.id, truth_verdict.reason or "")
        bleu_pairs.append((char_tokens(pred), [char_tokens(record.smiles)]))
        lev_total += levenshtein(pred, record.smiles)
        if not is_valid(pred).valid:
            continue
        valid_hits += 1
        pred_graph = parse(pred)
        truth_graph = parse(record.smiles)
        if canonicalize(pred_graph) == canonicalize(truth_graph):
            exact_hits += 1
        fts_sums["keys"] += tanimoto(keys_fp(pred_graph, table), keys_fp(truth_graph, table))
        fts_sums["path"] += tanimoto(path_fp(pred_graph), path_fp(truth_graph))
        fts_sums["morgan"] += tanimoto(morgan_fp(pred_graph), morgan_fp(truth_graph))
        fts_support += 1

    notes: list[str] = []
    excluded = n - fts_support
    fts_note = f"{excluded} invalid prediction(s) excluded" if excluded else None

    def fts_value(name: str, key: str) -> MetricValue:
        if fts_support == 0:
            return MetricValue(name, None, 0, "no valid predictions")
        return MetricValue(name, fts_sums[key] / fts_support, fts_support, fts_note)

    scorer_rows = [(r.id, predictions[r.id], r.smiles) for r in records]
    metrics = (
        MetricValue("BLEU", corpus_bleu(bleu_pairs, max_n=4), n),
        MetricValue("Exact", exact_hits / n, n),
        MetricValue("Levenshtein", lev_total / n, n, "per-pair mean"),
        fts_value("MACCS FTS", "keys"),
        fts_value("RDK FTS", "path"),
        fts_value("Morgan FTS", "morgan"),
        _scorer_metric("FCD", scorers, scorer_rows, n, strict_scorers, notes),
        _scorer_metric("Text2Mol", scorers, scorer_rows, n, strict_scorers, notes),
        MetricValue("Validity", valid_hits / n, n),
    )
    return MetricReport("gen", metrics, _versions(), tuple(notes))


def eval_captioning(
    pred_rows,
    corpus,
    split: CorpusSplit,
    scorers: dict[str, ExternalScorerSpec] | None = None,
    strict_scorers: bool = False,
) -> MetricReport:
    records = _test_records(corpus, split)
    predictions = align_to_test_split(pred_rows, split)

    n = len(records)
    bleu_pairs = []
    rouge_sums = {"1": 0.0, "2": 0.0, "L": 0.0}
    meteor_sum = 0.0
    for record in records:
        pred_tokens = word_tokens(predictions[record.id])
        ref_tokens = word_tokens(record.caption)
        bleu_pairs.append((pred_tokens, [ref_tokens]))
        for variant in ("1", "2", "L"):
            rouge_sums[variant] += rouge(pred_tokens, ref_tokens, variant).f1
        meteor_sum += meteor(pred_tokens, ref_tokens)

    notes: list[str] = []
    scorer_rows = [(r.id, predictions[r.id], r.caption) for r in records]
    metrics = (
        MetricValue("BLEU-2", corpus_bleu(bleu_pairs, max_n=2), n),
        MetricValue("BLEU-4", corpus_bleu(bleu_pairs, max_n=4), n),
        MetricValue("ROUGE-1", rouge_sums["1"] / n, n),
        MetricValue("ROUGE-2", rouge_sums["2"] / n, n),
        MetricValue("ROUGE-L", rouge_sums["L"] / n, n),
        MetricValue("METEOR", meteor_sum / n, n),
        _scorer_metric("Text2Mol", scorers, scorer_rows, n, strict_scorers, notes),
    )
    return MetricReport("cap", metrics, _versions(), tuple(notes))
