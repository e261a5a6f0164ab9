"""Prediction file handling: TSV of ``id<TAB>prediction`` rows."""

from __future__ import annotations

from pathlib import Path

from ..dataset import CorpusSplit
from ..errors import (
    DuplicatePrediction,
    MalformedRow,
    MissingPrediction,
    UnexpectedPrediction,
)


def load_predictions(path) -> list[tuple[str, str]]:
    rows = []
    seen: set[str] = set()
    text = Path(path).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        if line == "":
            continue
        if "\t" not in line:
            raise MalformedRow(line_no, "expected id<TAB>prediction")
        record_id, prediction = line.split("\t", 1)
        if "\t" in prediction:
            raise MalformedRow(line_no, "too many columns")
        if not record_id:
            raise MalformedRow(line_no, "empty id")
        if record_id in seen:
            raise DuplicatePrediction(record_id)
        seen.add(record_id)
        rows.append((record_id, prediction))
    return rows


def save_predictions(rows, path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as handle:
        for record_id, prediction in rows:
            handle.write(f"{record_id}\t{prediction}\n")


def align_to_test_split(rows, split: CorpusSplit) -> dict[str, str]:
    """Validates coverage: one prediction per test id, nothing else."""
    test_ids = set(split.test)
    predictions: dict[str, str] = {}
    for record_id, prediction in rows:
        if record_id not in test_ids:
            raise UnexpectedPrediction(record_id)
        predictions[record_id] = prediction
    for record_id in split.test:
        if record_id not in predictions:
            raise MissingPrediction(record_id)
    return predictions
