"""Tokenization for the two metric modes.

Character mode (for SMILES) yields one token per Unicode scalar. Word mode
(tokenizer "v1", for captions) lowercases, splits on whitespace and splits
punctuation off as separate single-character tokens.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

TOKENIZER_VERSION = "v1"

_WORD_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


@dataclass(frozen=True)
class TokenSeq:
    tokens: tuple[str, ...]
    mode: str  # char | word

    def __len__(self) -> int:
        return len(self.tokens)


def char_tokens(text: str) -> TokenSeq:
    return TokenSeq(tuple(text), "char")


def word_tokens(text: str) -> TokenSeq:
    return TokenSeq(tuple(_WORD_RE.findall(text.lower())), "word")


def ngrams(tokens: tuple[str, ...], n: int) -> dict[tuple[str, ...], int]:
    counts: dict[tuple[str, ...], int] = {}
    for i in range(len(tokens) - n + 1):
        gram = tokens[i : i + n]
        counts[gram] = counts.get(gram, 0) + 1
    return counts
