"""ROUGE-1, ROUGE-2 and ROUGE-L (precision, recall, F1 with beta = 1)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import EmptySequence, ModeMismatch
from .tokenize import TokenSeq, ngrams


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float


_ZERO = RougeScore(0.0, 0.0, 0.0)


def rouge(candidate: TokenSeq, reference: TokenSeq, variant) -> RougeScore:
    """variant 1 and 2 use n-gram overlap, variant "L" the longest common
    subsequence. An empty candidate scores zero; an empty reference is an
    error."""
    if candidate.mode != reference.mode:
        raise ModeMismatch(f"{candidate.mode} candidate vs {reference.mode} reference")
    if len(reference) == 0:
        raise EmptySequence("empty reference")
    if len(candidate) == 0:
        return _ZERO

    if variant in (1, 2, "1", "2"):
        n = int(variant)
        cand_counts = ngrams(candidate.tokens, n)
        ref_counts = ngrams(reference.tokens, n)
        overlap = sum(
            min(count, ref_counts.get(gram, 0)) for gram, count in cand_counts.items()
        )
        cand_total = max(len(candidate) - n + 1, 0)
        ref_total = max(len(reference) - n + 1, 0)
        if cand_total == 0 or ref_total == 0:
            return _ZERO
        precision = overlap / cand_total
        recall = overlap / ref_total
    elif variant in ("L", "l"):
        lcs = lcs_length(candidate.tokens, reference.tokens)
        precision = lcs / len(candidate)
        recall = lcs / len(reference)
    else:
        raise ValueError(f"unknown ROUGE variant {variant!r}")

    if precision + recall == 0.0:
        return RougeScore(precision, recall, 0.0)
    f1 = 2.0 * precision * recall / (precision + recall)
    return RougeScore(precision, recall, f1)


def lcs_length(a: tuple[str, ...], b: tuple[str, ...]) -> int:
    vocab: dict[str, int] = {}
    def encode(tokens):
        out = np.empty(len(tokens), dtype=np.int64)
        for i, tok in enumerate(tokens):
            out[i] = vocab.setdefault(tok, len(vocab))
        return out
    return int(kernels.lcs_len_codes(encode(a), encode(b)))
