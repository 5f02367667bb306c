import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weldmag.words import (
    Word,
    WordError,
    commutator,
    conjugate,
    empty,
    exponent_sum,
    format_word,
    generator,
    invert,
    linear_commutator,
    multiply,
    parse_word,
    power,
    reduce,
    word_from_letters,
)


def rand_word(rng, rank, maxlen):
    letters = [rng.choice([s * g for g in range(1, rank + 1) for s in (1, -1)])
               for _ in range(rng.randint(0, maxlen))]
    return word_from_letters(rank, letters)


def test_reduce_examples():
    w = word_from_letters(2, [1, -1])
    assert w.is_identity
    w = word_from_letters(2, [1, 2, -2, -1, 2])
    assert list(w.letters()) == [2]
    # runs merge: a1 a1 A1 a2 -> a1 a2
    w = word_from_letters(2, [1, 1, -1, 2])
    assert list(w.letters()) == [1, 2]


def test_word_validation():
    with pytest.raises(WordError):
        Word(2, ((3, 1),))
    with pytest.raises(WordError):
        Word(2, ((1, 0),))
    with pytest.raises(WordError):
        Word(0, ())


def test_parse_and_format():
    w = parse_word("a1 A2 a1", 3)
    assert list(w.letters()) == [1, -2, 1]
    assert format_word(w) == "a1 A2 a1"
    assert parse_word("", 2) == empty(2)
    assert format_word(empty(2)) == ""
    # round trip on random words
    rng = random.Random(0)
    for _ in range(50):
        w = rand_word(rng, 4, 10)
        assert parse_word(format_word(w), 4) == w


def test_parse_errors_name_token():
    with pytest.raises(WordError) as e:
        parse_word("a1 b2", 3)
    assert "b2" in str(e.value)
    with pytest.raises(WordError):
        parse_word("a9", 3)
    with pytest.raises(WordError):
        parse_word("a0", 3)


def test_multiply_reduce_invert():
    a = parse_word("a1 a2", 2)
    b = parse_word("A2 A1", 2)
    assert multiply(a, b).is_identity
    assert invert(a) == b
    assert multiply(a, invert(a), a) == a
    with pytest.raises(WordError):
        multiply(a, empty(3))


def test_power():
    a = parse_word("a1", 2)
    assert power(a, 3) == parse_word("a1 a1 a1", 2)
    assert power(a, -2) == parse_word("A1 A1", 2)
    assert power(a, 0).is_identity


def test_conjugate_commutator_conventions():
    """x^y = inv(y) x y and [x,y] = x inv(y) inv(x) y."""
    a, b = generator(2, 1), generator(2, 2)
    assert format_word(conjugate(a, b)) == "A2 a1 a2"
    assert format_word(commutator(a, b)) == "a1 A2 A1 a2"


def test_commutator_identities_spot():
    rng = random.Random(42)
    for _ in range(100):
        r = rng.randint(2, 4)
        a, b, c = (rand_word(rng, r, 8) for _ in range(3))
        assert invert(commutator(a, b)) == commutator(invert(b), invert(a))
        assert commutator(a, b) == multiply(conjugate(invert(b), invert(a)), b)
        assert conjugate(commutator(a, b), c) == commutator(conjugate(a, c), conjugate(b, c))


def test_linear_commutator():
    a, b, c = (generator(3, i) for i in (1, 2, 3))
    assert linear_commutator([a, b]) == commutator(a, b)
    assert linear_commutator([a, b, c]) == commutator(a, commutator(b, c))
    assert linear_commutator([a]) == a
    with pytest.raises(WordError):
        linear_commutator([])


def test_exponent_sum():
    w = parse_word("a1 a2 A1 a2 a2", 2)
    assert exponent_sum(w, 1) == 0
    assert exponent_sum(w, 2) == 3
    with pytest.raises(WordError):
        exponent_sum(w, 3)


@given(st.lists(st.integers(min_value=-3, max_value=3).filter(lambda x: x != 0), max_size=20))
@settings(max_examples=200, deadline=None)
def test_reduce_is_retraction(letters):
    w = word_from_letters(3, letters)
    assert reduce(w) == w
    assert word_from_letters(3, list(w.letters())) == w


@given(st.lists(st.integers(min_value=-3, max_value=3).filter(lambda x: x != 0), max_size=16),
       st.lists(st.integers(min_value=-3, max_value=3).filter(lambda x: x != 0), max_size=16))
@settings(max_examples=200, deadline=None)
def test_invert_antihomomorphism(ls1, ls2):
    u = word_from_letters(3, ls1)
    v = word_from_letters(3, ls2)
    assert invert(multiply(u, v)) == multiply(invert(v), invert(u))
    assert invert(invert(u)) == u
