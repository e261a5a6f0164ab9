"""Corpus-level BLEU with modified n-gram precision and brevity penalty.

Precisions are aggregated over the whole corpus (clipped against the best
reference), weighted uniformly 1/max_n. Any zero aggregate precision gives
score 0 unless epsilon smoothing is requested for tiny corpora. The
effective reference length per pair is the closest to the candidate, ties
resolved toward the shorter reference.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

from ..errors import EmptyCorpus, ModeMismatch
from .tokenize import TokenSeq, ngrams


def corpus_bleu(
    pairs: Sequence[tuple[TokenSeq, Sequence[TokenSeq]]],
    max_n: int,
    smooth_eps: float = 0.0,
) -> float:
    if max_n not in (2, 4):
        raise ValueError("max_n must be 2 or 4")
    if not pairs:
        raise EmptyCorpus("corpus BLEU needs at least one pair")

    matched = [0] * (max_n + 1)
    total = [0] * (max_n + 1)
    cand_len = 0
    ref_len = 0
    for candidate, references in pairs:
        if not references:
            raise EmptyCorpus("every candidate needs at least one reference")
        for ref in references:
            if ref.mode != candidate.mode:
                raise ModeMismatch(f"{ref.mode} reference for {candidate.mode} candidate")
        cand_len += len(candidate)
        ref_len += _effective_ref_len(len(candidate), [len(r) for r in references])
        for n in range(1, max_n + 1):
            cand_counts = ngrams(candidate.tokens, n)
            if not cand_counts:
                continue
            best: dict[tuple[str, ...], int] = {}
            for ref in references:
                for gram, count in ngrams(ref.tokens, n).items():
                    if count > best.get(gram, 0):
                        best[gram] = count
            for gram, count in cand_counts.items():
                total[n] += count
                matched[n] += min(count, best.get(gram, 0))

    if cand_len == 0:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        numerator = matched[n] + smooth_eps
        if numerator <= 0.0 or total[n] == 0:
            return 0.0
        log_sum += math.log(numerator / total[n]) / max_n
    brevity = 1.0 if cand_len > ref_len else math.exp(1.0 - ref_len / cand_len)
    return brevity * math.exp(log_sum)


def _effective_ref_len(cand_len: int, ref_lens: list[int]) -> int:
    return min(ref_lens, key=lambda r: (abs(r - cand_len), r))
