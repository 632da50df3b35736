import pytest

from treesep.corpus import word_finitely_b, word_infinitely_b


@pytest.fixture
def inf_b_word():
    return word_infinitely_b()


@pytest.fixture
def fin_b_word():
    return word_finitely_b()
