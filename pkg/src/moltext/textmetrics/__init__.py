"""Sequence metrics: Levenshtein, BLEU, ROUGE, METEOR."""

from .bleu import corpus_bleu
from .levenshtein import levenshtein, levenshtein_recursive
from .meteor import meteor
from .rouge import RougeScore, lcs_length, rouge
from .tokenize import TOKENIZER_VERSION, TokenSeq, char_tokens, ngrams, word_tokens

__all__ = [
    "TOKENIZER_VERSION",
    "TokenSeq",
    "RougeScore",
    "char_tokens",
    "corpus_bleu",
    "lcs_length",
    "levenshtein",
    "levenshtein_recursive",
    "meteor",
    "ngrams",
    "rouge",
    "word_tokens",
]
