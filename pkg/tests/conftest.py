import pytest

from moltext.sampledata import make_corpus


@pytest.fixture(scope="session")
def small_corpus():
    return make_corpus(100, seed=7)


@pytest.fixture(scope="session")
def tiny_corpus():
    return make_corpus(20, seed=3)
