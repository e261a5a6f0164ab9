"""Response cache: one JSON file per (record, provider, model, template,
round) key, written atomically so interrupted jobs resume cleanly."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass
from pathlib import Path

from ..errors import CacheCorrupt
from ..hashing import stable_hash_hex


@dataclass(frozen=True)
class CacheKey:
    record_id: str
    provider: str
    model: str
    template_hash: str
    round: int

    def filename(self) -> str:
        digest = stable_hash_hex(
            "cache", self.record_id, self.provider, self.model, self.template_hash, self.round
        )
        return f"{digest}.json"


@dataclass(frozen=True)
class CacheEntry:
    key: CacheKey
    status: str  # ok | failed
    text: str | None
    reason: str | None
    attempts: int
    created_at: str  # ISO-8601 UTC


class ResponseCache:
    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, key: CacheKey) -> Path:
        return self.directory / key.filename()

    def get(self, key: CacheKey) -> CacheEntry | None:
        path = self._path(key)
        if not path.exists():
            return None
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
            return CacheEntry(
                key=CacheKey(**payload["key"]),
                status=payload["status"],
                text=payload["text"],
                reason=payload["reason"],
                attempts=payload["attempts"],
                created_at=payload["created_at"],
            )
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise CacheCorrupt(str(path)) from exc

    def put(self, entry: CacheEntry) -> None:
        path = self._path(entry.key)
        payload = {
            "key": asdict(entry.key),
            "status": entry.status,
            "text": entry.text,
            "reason": entry.reason,
            "attempts": entry.attempts,
            "created_at": entry.created_at,
        }
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, ensure_ascii=False, indent=1), encoding="utf-8")
        os.replace(tmp, path)
