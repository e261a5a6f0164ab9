"""Corpus records, file formats, and the train/valid/test split.

Input corpora are tab-separated with a ``CID\\tSMILES\\tdescription`` header
(or JSONL with id/smiles/caption keys). Augmented corpora are JSONL, one
record per line with a fixed key order, so writes are byte-stable and
reloads reproduce the records exactly. Splits live in a sidecar JSON file
and are never recomputed implicitly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import DuplicateId, EmptyCorpus, EmptyFile, MalformedLine, MalformedRow
from .hashing import stable_hash

TSV_HEADER = ("CID", "SMILES", "description")


@dataclass(frozen=True)
class MoleculeRecord:
    id: str
    smiles: str
    caption: str

    def __post_init__(self):
        if not self.id:
            raise ValueError("record id must be non-empty")
        if not self.smiles or any(ch.isspace() for ch in self.smiles):
            raise ValueError(f"record {self.id}: SMILES must be non-empty without whitespace")
        if not self.caption or "\t" in self.caption or "\n" in self.caption or "\r" in self.caption:
            raise ValueError(f"record {self.id}: caption must be non-empty without tabs/newlines")


@dataclass(frozen=True)
class CaptionRewrite:
    text: str
    provider: str
    round: int
    created_at: datetime

    def __post_init__(self):
        if not self.text:
            raise ValueError("rewrite text must be non-empty")
        if self.round < 1:
            raise ValueError("round numbering starts at 1")


@dataclass(frozen=True)
class AugmentedRecord:
    base: MoleculeRecord
    rewrites: tuple[CaptionRewrite, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for rewrite in self.rewrites:
            if self.base.smiles in rewrite.text:
                raise ValueError(
                    f"record {self.base.id}: rewrite leaks the SMILES string"
                )


@dataclass(frozen=True)
class CorpusSplit:
    train: tuple[str, ...]
    valid: tuple[str, ...]
    test: tuple[str, ...]

    def all_ids(self) -> tuple[str, ...]:
        return self.train + self.valid + self.test


# --- plain corpus ----------------------------------------------------------

def load_corpus(path, format: str = "tsv") -> list[MoleculeRecord]:
    path = Path(path)
    if format == "tsv":
        return _load_tsv(path)
    if format == "jsonl":
        return _load_jsonl(path)
    raise ValueError(f"unknown corpus format {format!r}")


def _load_tsv(path: Path) -> list[MoleculeRecord]:
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise EmptyFile(f"{path} is empty")
    header = tuple(lines[0].split("\t"))
    if header != TSV_HEADER:
        expected = "\t".join(TSV_HEADER)
        raise MalformedRow(1, f"expected header {expected!r}")
    records = []
    seen: set[str] = set()
    for line_no, line in enumerate(lines[1:], start=2):
        if line == "":
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise MalformedRow(line_no, f"expected 3 columns, got {len(fields)}")
        try:
            record = MoleculeRecord(*fields)
        except ValueError as exc:
            raise MalformedRow(line_no, str(exc)) from exc
        if record.id in seen:
            raise DuplicateId(record.id)
        seen.add(record.id)
        records.append(record)
    if not records:
        raise EmptyFile(f"{path} has a header but no rows")
    return records


def _load_jsonl(path: Path) -> list[MoleculeRecord]:
    records = []
    seen: set[str] = set()
    with path.open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                record = MoleculeRecord(obj["id"], obj["smiles"], obj["caption"])
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise MalformedRow(line_no, str(exc)) from exc
            if record.id in seen:
                raise DuplicateId(record.id)
            seen.add(record.id)
            records.append(record)
    if not records:
        raise EmptyFile(f"{path} is empty")
    return records


def save_corpus(records, path) -> None:
    lines = ["\t".join(TSV_HEADER)]
    lines.extend(f"{r.id}\t{r.smiles}\t{r.caption}" for r in records)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# --- split -----------------------------------------------------------------

def make_split(corpus, seed: int) -> CorpusSplit:
    """Deterministic 80/10/10 split: a pure function of (ids, seed)."""
    ids = [r.id for r in corpus]
    if not ids:
        raise EmptyCorpus("cannot split an empty corpus")
    shuffled = sorted(ids, key=lambda rid: (stable_hash("split", seed, rid), rid))
    n = len(shuffled)
    n_train = int(n * 0.8)
    n_valid = int(n * 0.1)
    return CorpusSplit(
        train=tuple(shuffled[:n_train]),
        valid=tuple(shuffled[n_train : n_train + n_valid]),
        test=tuple(shuffled[n_train + n_valid :]),
    )


def save_split(split: CorpusSplit, path) -> None:
    payload = {"train": list(split.train), "valid": list(split.valid), "test": list(split.test)}
    Path(path).write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")


def load_split(path) -> CorpusSplit:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        return CorpusSplit(
            train=tuple(payload["train"]),
            valid=tuple(payload["valid"]),
            test=tuple(payload["test"]),
        )
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise MalformedLine(1, f"bad split file: {exc}") from exc


# --- augmented corpus ------------------------------------------------------

def _rewrite_to_dict(rewrite: CaptionRewrite) -> dict:
    return {
        "text": rewrite.text,
        "provider": rewrite.provider,
        "round": rewrite.round,
        "created_at": rewrite.created_at.astimezone(timezone.utc).isoformat(),
    }


def dumps_augmented_record(record: AugmentedRecord) -> str:
    payload = {
        "id": record.base.id,
        "smiles": record.base.smiles,
        "caption": record.base.caption,
        "rewrites": [_rewrite_to_dict(rw) for rw in record.rewrites],
    }
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def save_augmented(records, path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(dumps_augmented_record(record))
            handle.write("\n")


def load_augmented(path) -> list[AugmentedRecord]:
    records = []
    with Path(path).open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                base = MoleculeRecord(obj["id"], obj["smiles"], obj["caption"])
                rewrites = tuple(
                    CaptionRewrite(
                        text=rw["text"],
                        provider=rw["provider"],
                        round=rw["round"],
                        created_at=datetime.fromisoformat(rw["created_at"]),
                    )
                    for rw in obj["rewrites"]
                )
                records.append(AugmentedRecord(base, rewrites))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise MalformedLine(line_no, str(exc)) from exc
    return records
