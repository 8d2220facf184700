import itertools

import pytest

from braidlab.errors import GeneratorOutOfRange, MalformedToken
from braidlab.words import (
    BraidWord,
    RelationKind,
    free_reduce,
    parse_word,
    relation_instances,
    relations_involving,
    words_up_to,
)


def test_parse_basic():
    assert parse_word("1 -2 1", 3).letters == (1, -2, 1)


def test_parse_empty_is_identity():
    w = parse_word("", 5)
    assert w.letters == () and w == BraidWord.identity(5)


@pytest.mark.parametrize("text,n,exc", [("5", 4, GeneratorOutOfRange), ("0", 4, MalformedToken),
                                        ("x", 3, MalformedToken), ("1 -3", 3, GeneratorOutOfRange)])
def test_parse_errors(text, n, exc):
    with pytest.raises(exc):
        parse_word(text, n)


@pytest.mark.parametrize("letters,expected", [((1, -1, 2), (2,)), ((1, 2, -2, -1), ()), ((1, 2, 1), (1, 2, 1))])
def test_free_reduce(letters, expected):
    assert free_reduce(BraidWord(letters, 4)).letters == expected


def _brute_far_pairs(n):
    return sum(1 for i, j in itertools.combinations(range(1, n), 2) if abs(i - j) >= 2)


@pytest.mark.parametrize("n,yb,far", [(3, 1, 0), (4, 2, 1), (6, 4, 6)])
def test_relation_counts(n, yb, far):
    rels = relation_instances(n)
    assert sum(r.kind is RelationKind.YANG_BAXTER for r in rels) == yb
    assert sum(r.kind is RelationKind.FAR_COMMUTATION for r in rels) == far == _brute_far_pairs(n)


def test_relation_shapes():
    for r in relation_instances(6):
        if r.kind is RelationKind.YANG_BAXTER:
            i = r.lhs.letters[0]
            assert r.lhs.letters == (i, i + 1, i) and r.rhs.letters == (i + 1, i, i + 1)
        else:
            i, j = r.lhs.letters
            assert abs(i - j) >= 2 and r.rhs.letters == (j, i)


@pytest.mark.parametrize("n", range(3, 9))
def test_every_generator_in_some_relation(n):
    for g in range(1, n):
        assert relations_involving(n, g)


def test_word_inverse_and_concat():
    w = BraidWord((1, -2, 3), 4)
    assert (w * w.inverse()).letters == (1, -2, 3, -3, 2, -1)
    assert free_reduce(w * w.inverse()).letters == ()
    assert w.uses(3) and w.uses(2) and not w.uses(1 + 3)


def test_concat_strand_mismatch():
    with pytest.raises(ValueError):
        BraidWord((1,), 3) * BraidWord((1,), 4)


def test_words_up_to_counts():
    # freely reduced words over 2k letters: 1 + 2k * sum (2k-1)^(l-1)
    n, k = 3, 2
    words = list(words_up_to(n, 3))
    expected = 1 + sum(2 * k * (2 * k - 1) ** (length - 1) for length in range(1, 4))
    assert len(words) == expected
    assert all(free_reduce(w) == w for w in words)
