"""Subprocess protocol for neural scorers (FCD, Text2Mol).

The harness writes a JSONL file of {id, prediction, reference} rows,
invokes the configured command with the input and output paths appended,
and reads back a JSON object {"name": ..., "value": ...}. Missing
executables cause the scorer to be skipped with a recorded reason.
"""

from __future__ import annotations

import json
import shutil
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

from ..errors import MalformedScorerOutput, ScorerFailed


@dataclass(frozen=True)
class ExternalScorerSpec:
    name: str  # fcd | text2mol
    command: tuple[str, ...]

    def resolvable(self) -> bool:
        if not self.command:
            return False
        exe = self.command[0]
        return shutil.which(exe) is not None or Path(exe).exists()


def run_external_scorer(spec: ExternalScorerSpec, rows, workdir=None) -> float:
    """rows: iterable of (id, prediction, reference) triples."""
    directory = Path(workdir) if workdir else Path(tempfile.mkdtemp(prefix="scorer-"))
    directory.mkdir(parents=True, exist_ok=True)
    input_path = directory / f"{spec.name}-pairs.jsonl"
    output_path = directory / f"{spec.name}-result.json"
    with input_path.open("w", encoding="utf-8") as handle:
        for record_id, prediction, reference in rows:
            handle.write(
                json.dumps(
                    {"id": record_id, "prediction": prediction, "reference": reference},
                    ensure_ascii=False,
                )
                + "\n"
            )
    result = subprocess.run(
        list(spec.command) + [str(input_path), str(output_path)],
        capture_output=True,
        text=True,
    )
    if result.returncode != 0:
        raise ScorerFailed(result.returncode, result.stderr[-500:])
    try:
        payload = json.loads(output_path.read_text(encoding="utf-8"))
        value = float(payload["value"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise MalformedScorerOutput(f"scorer {spec.name}: {exc}") from exc
    return value
