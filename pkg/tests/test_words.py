import pytest
from hypothesis import given

from residua.errors import WordSyntaxError, ZeroExponentWarning
from residua.words import F, Fi, S, Si, comm, conj, free_reduce, inverse, parse_word, to_text

from conftest import words


def test_conjugation_convention():
    assert parse_word("F^(s^3)") == (S, S, S, F, Si, Si, Si)


def test_commutator_expands_to_eight_letters():
    w = parse_word("[F,F^s]")
    assert w == (F, S, F, Si, Fi, S, Fi, Si)


def test_negative_power():
    assert parse_word("s^-2") == (Si, Si)
    assert parse_word("s^(-2)") == (Si, Si)


def test_nested_brackets_and_groups():
    assert parse_word("(Fs)^2") == (F, S, F, S)
    assert parse_word("[F^(s^5),[F,F^(s^3)]]") == comm(conj((F,), (S,) * 5),
                                                        comm((F,), conj((F,), (S,) * 3)))


def test_empty_word():
    assert parse_word("") == ()
    assert parse_word("  ") == ()


def test_zero_exponent_warns():
    with pytest.warns(ZeroExponentWarning):
        assert parse_word("F^0") == ()


@pytest.mark.parametrize("text,pos", [("F((", 3), ("x", 0), ("[F F]", 4), ("F^", 2)])
def test_syntax_error_position(text, pos):
    with pytest.raises(WordSyntaxError) as info:
        parse_word(text)
    assert info.value.position == pos


@given(words(12))
def test_text_round_trip(w):
    assert parse_word(to_text(w)) == w


@given(words(12))
def test_inverse_cancels(w):
    assert free_reduce(w + inverse(w)) == ()
