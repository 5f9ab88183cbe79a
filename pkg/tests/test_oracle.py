import pytest
from hypothesis import given, settings, strategies as st

from residua.abelian import expand_a, is_trivial, power as apower
from residua.engine import f_n_power, is_identity, reduce
from residua.oracle import (
    Distinguished, Equal, TestGrid as Grid, bar, eval_at, fmn, h_equal, hcomm, hpow, is_equal,
    oracle_compare, tilde, word_hvalue, zgen,
)
from residua.words import F, S, comm, conj, s_shift

from conftest import words

PROBES = [{}, {0: 1}, {1: 1}, {-2: 1}, {3: -2}, {0: 1, 2: 1}, {-1: 2, 4: 1}]


def test_eval_f_at_zero(uni):
    for z in PROBES:
        zp, a = eval_at(uni, "F", 0, z)
        assert zp == {0: 1} and is_trivial(a)


def test_eval_f_at_one(sp7):
    zp, a = eval_at(sp7, "F", 1, {2: 1})
    assert zp == {} and a == expand_a(sp7, 1)
    zp, a = eval_at(sp7, "F", 3, {0: 1})
    assert a == expand_a(sp7, 3)


def test_eval_commutator(sp7):
    for z in PROBES:
        zp, a = eval_at(sp7, "[F,F^s]", 0, z)
        assert zp == {} and a == expand_a(sp7, 1)


def test_compare_examples(uni):
    assert isinstance(oracle_compare(uni, "Fs", "sF"), Distinguished)
    assert isinstance(oracle_compare(uni, "[F,F^(s^2)]", ""), Equal)
    assert is_equal(oracle_compare(uni, "[F,F^s]", f_n_power(uni, 1, 1)[1]))


def test_s_part_is_compared(uni):
    assert not is_equal(oracle_compare(uni, "", "s^-2"))


def test_exhaustive_agrees_with_fast_path(sp7):
    pairs = [("[F,F^(s^3)]", "[F,F^(s^5)]"), ("[F,F^(s^3)]^3", ""), ("F^(s^2)F", "F F^(s^2)"),
             ("[F,F^s]", "[F^s,F]^-1")]
    for a, b in pairs:
        fast = is_equal(oracle_compare(sp7, a, b))
        slow = is_equal(oracle_compare(sp7, a, b, exhaustive=True))
        assert fast == slow


def test_default_grid_shape():
    # 5 letters, prefix shift up to 2: radius 7
    g = Grid.default("F^(s^2)", "")
    assert g.ks == tuple(range(-7, 8))
    assert {} in g.probes and {7: -2} in g.probes and {-7: 1, 7: 1} in g.probes


# Properties 1-3 of the model

@pytest.mark.parametrize("k", range(-4, 5))
@pytest.mark.parametrize("m", range(-4, 5))
def test_property_one(sp7, k, m):
    for n in (-3, 1, 4):
        for p in (-2, 1, 2):
            for q in (-1, 2):
                lhs = hcomm(hpow(zgen(k), p), hpow(fmn(m, n), q))
                rhs = tilde(n, p * q) if k == m else hpow(tilde(n), 0)
                assert h_equal(sp7, lhs, rhs, PROBES)


@pytest.mark.parametrize("m", range(-4, 5))
@pytest.mark.parametrize("n", range(-5, 6, 2))
def test_property_two(sp7, m, n):
    assert h_equal(sp7, hcomm(zgen(m), bar(n)), tilde(n - m), PROBES)
    assert h_equal(sp7, hcomm(zgen(m), tilde(n)), hpow(tilde(n), 0), PROBES)


@pytest.mark.parametrize("n", range(-6, 7))
@pytest.mark.parametrize("k", range(-6, 7))
def test_property_three(sp7, n, k):
    sn = (S,) * n if n >= 0 else (-S,) * -n
    w = comm((F,), conj((F,), sn))
    for z in PROBES:
        zp, a = eval_at(sp7, w, k, z)
        assert zp == {}
        if n % 2:
            assert a == apower(expand_a(sp7, n), (-1) ** (k % 2))
        else:
            assert is_trivial(a)


@given(words(6), words(6), st.integers(-4, 4))
@settings(max_examples=200)
def test_homomorphism(w1, w2, k):
    x1 = s_shift(w1)[0]
    lhs = word_hvalue(w1 + w2, k)
    rhs = word_hvalue(w1, k) * word_hvalue(w2, k + x1)
    assert h_equal(CFG, lhs, rhs, PROBES)


@given(words(8))
@settings(max_examples=300)
def test_engine_oracle_agree(w):
    assert is_identity(reduce(CFG, w)) == is_equal(oracle_compare(CFG, w, ()))


@given(words(6), words(6))
@settings(max_examples=200)
def test_equal_reduce_means_oracle_equal(w1, w2):
    same = reduce(CFG, w1) == reduce(CFG, w2)
    assert same == is_equal(oracle_compare(CFG, w1, w2))


def _cfg():
    from residua.presets import spectra7
    return spectra7()


CFG = _cfg()
