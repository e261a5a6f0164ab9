import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moltext.errors import EmptyCorpus, EmptyReference, EmptySequence, ModeMismatch
from moltext.textmetrics import (
    TokenSeq,
    char_tokens,
    corpus_bleu,
    levenshtein,
    levenshtein_recursive,
    meteor,
    rouge,
    word_tokens,
)
from moltext.textmetrics.meteor import align_counts

short_text = st.text(alphabet="abc", max_size=8)


# --- tokenizer ---------------------------------------------------------------

def test_char_tokens():
    assert char_tokens("C1=C").tokens == ("C", "1", "=", "C")


def test_word_tokens_v1():
    seq = word_tokens("The molecule, an Acid; works.")
    assert seq.tokens == ("the", "molecule", ",", "an", "acid", ";", "works", ".")


# --- levenshtein -------------------------------------------------------------

def test_known_pair():
    assert levenshtein("kitten", "sitting") == 3


def test_zero_on_equal():
    assert levenshtein("same", "same") == 0


def test_empty_sides():
    assert levenshtein("", "abc") == 3
    assert levenshtein("abc", "") == 3


def test_matches_exponential_recursion_exhaustively():
    # every pair with combined length <= 6 over {a,b,c}
    by_length = [
        ["".join(p) for p in itertools.product("abc", repeat=length)]
        for length in range(7)
    ]
    for len_a in range(7):
        for len_b in range(7 - len_a):
            for a in by_length[len_a]:
                for b in by_length[len_b]:
                    assert levenshtein(a, b) == levenshtein_recursive(a, b)


@settings(max_examples=300, deadline=None)
@given(short_text, short_text, short_text)
def test_metric_axioms(a, b, c):
    d_ab = levenshtein(a, b)
    assert d_ab >= 0
    assert d_ab == levenshtein(b, a)
    assert (d_ab == 0) == (a == b)
    assert d_ab <= levenshtein(a, c) + levenshtein(c, b)


# --- BLEU ---------------------------------------------------------------------

def test_bleu_identical_is_one():
    pairs = [(word_tokens(t), [word_tokens(t)]) for t in ("a b c d e", "x y z w")]
    assert corpus_bleu(pairs, 4) == pytest.approx(1.0)


def test_bleu_disjoint_is_zero():
    pairs = [(word_tokens("p q r s"), [word_tokens("a b c d")])]
    assert corpus_bleu(pairs, 2) == 0.0


def test_bleu_hand_case():
    pairs = [(word_tokens("a b c d"), [word_tokens("a b c e")])]
    assert corpus_bleu(pairs, 2) == pytest.approx(math.sqrt(0.5), abs=1e-9)


def test_bleu_pair_order_invariant():
    rng = random.Random(1)
    texts = [("a b c d", "a b x d"), ("m n o p q", "m n o p"), ("s t", "s t u")]
    pairs = [(word_tokens(c), [word_tokens(r)]) for c, r in texts]
    base = corpus_bleu(pairs, 2)
    for _ in range(5):
        rng.shuffle(pairs)
        assert corpus_bleu(pairs, 2) == pytest.approx(base)


def test_bleu_brevity_penalty():
    # candidate shorter than reference: BP = exp(1 - r/c)
    pairs = [(word_tokens("a b"), [word_tokens("a b c d")])]
    expected = math.exp(1 - 4 / 2) * 1.0  # unigram/bigram precision are 1
    assert corpus_bleu(pairs, 2) == pytest.approx(expected)


def test_bleu_guards():
    with pytest.raises(EmptyCorpus):
        corpus_bleu([], 2)
    with pytest.raises(ModeMismatch):
        corpus_bleu([(char_tokens("ab"), [word_tokens("a b")])], 2)
    with pytest.raises(ValueError):
        corpus_bleu([(word_tokens("a"), [word_tokens("a")])], 3)


def test_bleu_epsilon_smoothing():
    pairs = [(word_tokens("a x"), [word_tokens("a b")])]
    assert corpus_bleu(pairs, 2) == 0.0
    assert corpus_bleu(pairs, 2, smooth_eps=1e-9) > 0.0


# --- ROUGE ---------------------------------------------------------------------

def test_rouge_identical():
    seq = word_tokens("the cat sat on the mat")
    for variant in (1, 2, "L"):
        assert rouge(seq, seq, variant).f1 == pytest.approx(1.0)


def test_rouge_disjoint():
    a, b = word_tokens("p q r"), word_tokens("x y z")
    for variant in (1, 2, "L"):
        assert rouge(a, b, variant).f1 == 0.0


def test_rouge_l_hand_case():
    score = rouge(word_tokens("the cat sat"), word_tokens("the cat ate"), "L")
    assert score.precision == pytest.approx(2 / 3)
    assert score.recall == pytest.approx(2 / 3)
    assert score.f1 == pytest.approx(2 / 3)


def test_rouge_empty_rules():
    empty = TokenSeq((), "word")
    assert rouge(empty, word_tokens("a b"), 1).f1 == 0.0
    with pytest.raises(EmptySequence):
        rouge(word_tokens("a b"), empty, 1)


def _brute_force_lcs(a, b):
    best = 0
    for mask in range(1 << len(a)):
        sub = [a[i] for i in range(len(a)) if mask >> i & 1]
        it = iter(b)
        if all(tok in it for tok in sub):
            best = max(best, len(sub))
    return best


def test_rouge_l_equals_bruteforce_lcs():
    rng = random.Random(12)
    vocab = list("abcdef")
    for _ in range(200):
        a = tuple(rng.choice(vocab) for _ in range(rng.randint(0, 10)))
        b = tuple(rng.choice(vocab) for _ in range(rng.randint(1, 10)))
        got = rouge(TokenSeq(a, "word"), TokenSeq(b, "word"), "L")
        expected = _brute_force_lcs(a, b)
        if a:
            assert got.precision == pytest.approx(expected / len(a))
        assert got.recall == pytest.approx(expected / len(b))


# --- METEOR ---------------------------------------------------------------------

def test_meteor_identical_long():
    seq = word_tokens("the molecule is an aromatic acid with a long tail of atoms")
    m = len(seq.tokens)
    assert meteor(seq, seq) == pytest.approx(1.0 - 0.5 / m**3)


def test_meteor_swap_hand_case():
    assert meteor(word_tokens("a b"), word_tokens("b a")) == pytest.approx(0.5)


def test_meteor_disjoint():
    assert meteor(word_tokens("x y"), word_tokens("a b")) == 0.0


def test_meteor_empty_rules():
    with pytest.raises(EmptyReference):
        meteor(word_tokens("a"), TokenSeq((), "word"))
    assert meteor(TokenSeq((), "word"), word_tokens("a")) == 0.0


def test_align_counts_minimal_chunks():
    # "a b c" against "c a b": matching a,b as one chunk beats three singles
    matches, chunks = align_counts(("a", "b", "c"), ("c", "a", "b"))
    assert matches == 3
    assert chunks == 2
    matches, chunks = align_counts(("a", "a"), ("a", "a"))
    assert matches == 2
    assert chunks == 1
    matches, chunks = align_counts(("a", "x", "a"), ("a", "a"))
    assert matches == 2
    assert chunks == 2
