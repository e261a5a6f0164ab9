"""METEOR with exact unigram matching.

The aligner finds a maximum-cardinality exact alignment (per token type the
match count is forced to min(candidate count, reference count)) and then
minimizes the number of chunks over those alignments with branch and bound.
Greedy diagonal-first ordering finds the optimum immediately for mostly
parallel texts; a node cap bounds adversarial inputs, falling back to the
best alignment seen.

Parameters are the classical alpha = 0.9, beta = 3, gamma = 0.5:
F = PR / (alpha P + (1 - alpha) R), penalty = gamma (chunks / matches)^beta,
score = F (1 - penalty).
"""

from __future__ import annotations

from bisect import bisect_left
from collections import Counter, defaultdict

from ..errors import EmptyReference, ModeMismatch
from .tokenize import TokenSeq

ALPHA = 0.9
BETA = 3.0
GAMMA = 0.5
_NODE_CAP = 100_000


def meteor(candidate: TokenSeq, reference: TokenSeq) -> float:
    if candidate.mode != reference.mode:
        raise ModeMismatch(f"{candidate.mode} candidate vs {reference.mode} reference")
    if len(reference) == 0:
        raise EmptyReference("empty reference")
    if len(candidate) == 0:
        return 0.0

    matches, chunks = align_counts(candidate.tokens, reference.tokens)
    if matches == 0:
        return 0.0
    precision = matches / len(candidate)
    recall = matches / len(reference)
    f_mean = precision * recall / (ALPHA * precision + (1.0 - ALPHA) * recall)
    penalty = GAMMA * (chunks / matches) ** BETA
    return f_mean * (1.0 - penalty)


def align_counts(cand: tuple[str, ...], ref: tuple[str, ...]) -> tuple[int, int]:
    """(match count, minimal chunk count) of the best exact alignment."""
    c_counts = Counter(cand)
    r_counts = Counter(ref)
    need = {t: min(c, r_counts[t]) for t, c in c_counts.items() if t in r_counts}
    total_need = sum(need.values())
    if total_need == 0:
        return 0, 0

    m = len(cand)
    cand_positions: dict[str, list[int]] = defaultdict(list)
    for i, tok in enumerate(cand):
        cand_positions[tok].append(i)
    ref_positions: dict[str, list[int]] = defaultdict(list)
    for j, tok in enumerate(ref):
        ref_positions[tok].append(j)

    used = [False] * len(ref)
    best: list[int | None] = [None]
    nodes = [0]

    def remaining_cand(tok: str, start: int) -> int:
        positions = cand_positions[tok]
        return len(positions) - bisect_left(positions, start)

    def search(i: int, chunks: int, last_i: int, last_j: int, left: int):
        nodes[0] += 1
        if best[0] is not None and chunks >= best[0]:
            return
        if nodes[0] > _NODE_CAP and best[0] is not None:
            return
        if left == 0:
            if best[0] is None or chunks < best[0]:
                best[0] = chunks
            return
        if i == m:
            return
        tok = cand[i]
        quota = need.get(tok, 0)

        def try_match(j: int):
            extends = i == last_i + 1 and j == last_j + 1
            need[tok] = quota - 1
            used[j] = True
            search(i + 1, chunks + (0 if extends else 1), i, j, left - 1)
            used[j] = False
            need[tok] = quota

        if quota > 0:
            continuation = last_j + 1
            if (
                i == last_i + 1
                and 0 <= continuation < len(ref)
                and ref[continuation] == tok
                and not used[continuation]
            ):
                try_match(continuation)
        if remaining_cand(tok, i + 1) >= quota:
            search(i + 1, chunks, last_i, last_j, left)
        if quota > 0:
            continuation = last_j + 1 if i == last_i + 1 else -1
            for j in ref_positions[tok]:
                if used[j] or j == continuation:
                    continue
                try_match(j)

    search(0, 0, -2, -2, total_need)
    assert best[0] is not None
    return total_need, best[0]
