"""Metric report container and rendering (json / tsv / markdown)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

GEN_COLUMNS = (
    "BLEU",
    "Exact",
    "Levenshtein",
    "MACCS FTS",
    "RDK FTS",
    "Morgan FTS",
    "FCD",
    "Text2Mol",
    "Validity",
)
CAP_COLUMNS = (
    "BLEU-2",
    "BLEU-4",
    "ROUGE-1",
    "ROUGE-2",
    "ROUGE-L",
    "METEOR",
    "Text2Mol",
)


@dataclass(frozen=True)
class MetricValue:
    name: str
    value: float | None  # None means skipped
    support: int
    note: str | None = None


@dataclass(frozen=True)
class MetricReport:
    task: str  # gen | cap
    metrics: tuple[MetricValue, ...]
    versions: dict[str, str] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def value(self, name: str) -> float | None:
        for metric in self.metrics:
            if metric.name == name:
                return metric.value
        raise KeyError(name)

    def columns(self) -> tuple[str, ...]:
        return GEN_COLUMNS if self.task == "gen" else CAP_COLUMNS


def render_report(report: MetricReport, format: str = "markdown") -> bytes:
    if format == "json":
        return _render_json(report)
    if format == "tsv":
        return _render_tsv(report)
    if format == "markdown":
        return _render_markdown(report)
    raise ValueError(f"unknown report format {format!r}")


def parse_report(raw: bytes) -> MetricReport:
    payload = json.loads(raw.decode("utf-8"))
    return MetricReport(
        task=payload["task"],
        metrics=tuple(
            MetricValue(m["name"], m["value"], m["support"], m.get("note"))
            for m in payload["metrics"]
        ),
        versions=dict(payload["versions"]),
        notes=tuple(payload["notes"]),
    )


def _render_json(report: MetricReport) -> bytes:
    payload = {
        "task": report.task,
        "versions": report.versions,
        "notes": list(report.notes),
        "metrics": [
            {"name": m.name, "value": m.value, "support": m.support, "note": m.note}
            for m in report.metrics
        ],
    }
    return (json.dumps(payload, ensure_ascii=False, indent=1) + "\n").encode("utf-8")


def _by_name(report: MetricReport) -> dict[str, MetricValue]:
    return {m.name: m for m in report.metrics}


def _format_value(metric: MetricValue | None) -> str:
    if metric is None or metric.value is None:
        return "—"
    return f"{metric.value:.3f}"


def _render_tsv(report: MetricReport) -> bytes:
    lookup = _by_name(report)
    names = report.columns()
    values = [_format_value(lookup.get(name)) for name in names]
    return ("\t".join(names) + "\n" + "\t".join(values) + "\n").encode("utf-8")


def _render_markdown(report: MetricReport) -> bytes:
    lookup = _by_name(report)
    names = report.columns()
    lines = [
        "| " + " | ".join(names) + " |",
        "| " + " | ".join("---" for _ in names) + " |",
        "| " + " | ".join(_format_value(lookup.get(name)) for name in names) + " |",
    ]
    footnotes = [
        f"- {m.name}: {m.note}" for m in report.metrics if m.note
    ] + [f"- {note}" for note in report.notes]
    if footnotes:
        lines.append("")
        lines.extend(footnotes)
    versions = ", ".join(f"{k}={v}" for k, v in sorted(report.versions.items()))
    if versions:
        lines.append("")
        lines.append(f"versions: {versions}")
    return ("\n".join(lines) + "\n").encode("utf-8")
