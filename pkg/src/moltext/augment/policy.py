"""Validation of rewritten captions before they enter the dataset."""

from __future__ import annotations

from dataclasses import dataclass

from ..dataset import MoleculeRecord

_LINEBREAK_CHARS = ("\n", "\r", "\t")
_LINEBREAK_ESCAPES = ("\\n", "\\t", "\\r")


@dataclass(frozen=True)
class ValidationPolicy:
    forbid_smiles_substring: bool = True
    forbid_linebreaks: bool = True
    min_length: int = 5  # tokens
    max_length: int = 512  # tokens

    def __post_init__(self):
        if self.min_length >= self.max_length:
            raise ValueError("min_length must be below max_length")


@dataclass(frozen=True)
class CaptionVerdict:
    accepted: bool
    text: str | None = None  # cleaned text when accepted
    reason: str | None = None  # smiles_leak | linebreak | empty | too_short | too_long


DEFAULT_POLICY = ValidationPolicy()


def _clean(raw: str) -> str:
    text = raw.strip()
    for quote in ('"', "'"):
        if len(text) >= 2 and text.startswith(quote) and text.endswith(quote):
            text = text[1:-1].strip()
    return text


def validate_caption(
    rewrite: str, record: MoleculeRecord, policy: ValidationPolicy = DEFAULT_POLICY
) -> CaptionVerdict:
    text = _clean(rewrite)
    if not text:
        return CaptionVerdict(False, reason="empty")
    if policy.forbid_linebreaks:
        if any(ch in text for ch in _LINEBREAK_CHARS) or any(
            esc in text for esc in _LINEBREAK_ESCAPES
        ):
            return CaptionVerdict(False, reason="linebreak")
    if policy.forbid_smiles_substring and record.smiles in text:
        return CaptionVerdict(False, reason="smiles_leak")
    token_count = len(text.split())
    if token_count < policy.min_length:
        return CaptionVerdict(False, reason="too_short")
    if token_count > policy.max_length:
        return CaptionVerdict(False, reason="too_long")
    return CaptionVerdict(True, text=text)
