import random

import pytest
from hypothesis import given, settings

from residua.abelian import GenSpec, GroupConfig, expand_a, normalize
from residua.conjugacy import (
    RE, base_word, certificate_holds, check_gaps, conj_config, conjugator_witness, nk_parameters,
    special_conjugacy_decide, squares_decompose, top_conjugacy,
)
from residua.engine import f_n, f_n_power, identity, invert, multiply, reduce
from residua.errors import ConfigError, ConfigTooShort, HorizonExceeded, OutOfFamily
from residua.presets import conj9
from residua.words import F, S, Si, parse_word

from conftest import words


def test_witness_first_index(c9):
    wit = conjugator_witness(c9, 1)
    assert wit.n == 3 and wit.p == 7
    assert wit.commutator.fprime == normalize(c9, {4: 2, 5: 2})
    assert wit.commutator.fprime == normalize(c9, {3: 1})
    assert wit.target == f_n_power(c9, 7, 1)[0]
    assert wit.witness == parse_word("F^(s^13)")


@pytest.mark.parametrize("i", [1, 2, 3])
def test_witness_conjugates(c9, i):
    wit = conjugator_witness(c9, i)
    g = reduce(c9, base_word(2))
    w = reduce(c9, wit.witness)
    assert multiply(multiply(w, g), invert(w)) == multiply(g, f_n(c9, wit.p, -1))


def test_witness_unconfigured(c9):
    with pytest.raises(HorizonExceeded):
        conjugator_witness(c9, 4)


def test_odd_gap_rejected():
    with pytest.raises(ConfigError):
        conj9(K=3)


def test_gap_check(c9):
    cc = conj_config(c9)
    check_gaps(cc)
    bad = cc.__class__(cc.P[:4] + (cc.P[4] + 2,) + cc.P[5:], cc.N, cc.K)
    with pytest.raises(ConfigError):
        check_gaps(bad)


def test_conj_config_needs_meta(uni):
    with pytest.raises(OutOfFamily):
        conj_config(uni)


# squares

def test_squares_examples(c9):
    res = squares_decompose(c9, expand_a(c9, 7))
    assert res.is_square and res.root == normalize(c9, {4: 1, 5: 1})
    res = squares_decompose(c9, normalize(c9, {4: 1}))
    assert not res.is_square and certificate_holds(c9, normalize(c9, {4: 1}), res.certificate)
    assert squares_decompose(c9, c9.identity).is_square


def test_squares_sound_both_ways(c9):
    rng = random.Random(3)
    gens = [g.index for g in c9.gens]
    for _ in range(300):
        e = normalize(c9, {rng.choice(gens): rng.randint(-5, 5) for _ in range(3)})
        res = squares_decompose(c9, e)
        if res.is_square:
            assert normalize(c9, {j: 2 * c for j, c in res.root.exps}) == e
        else:
            assert certificate_holds(c9, e, res.certificate)


def test_squares_of_everything_are_squares(c9):
    rng = random.Random(5)
    gens = [g.index for g in c9.gens]
    for _ in range(200):
        y = {rng.choice(gens): rng.randint(-5, 5) for _ in range(3)}
        e = normalize(c9, {j: 2 * c for j, c in y.items()})
        assert squares_decompose(c9, e).is_square


def _random_config(rng):
    gens = []
    for i in range(1, rng.randint(2, 7)):
        order = rng.choice([None, 2, 3, 4, 6, 8])
        sub = ()
        if i > 1 and rng.random() < 0.4:
            ts = rng.sample(range(1, i), rng.randint(1, min(2, i - 1)))
            sub = tuple((t, rng.choice([-3, -2, -1, 1, 2, 3])) for t in sorted(ts))
        gens.append(GenSpec(i, order, sub))
    return GroupConfig(tuple(gens), (), "nu", 64, "random")


def test_squares_random_presentations():
    rng = random.Random(11)
    built = 0
    while built < 150:
        try:
            cfg = _random_config(rng)
        except ConfigError:
            continue                    # declared order not implied by the rules
        built += 1
        idx = [g.index for g in cfg.gens]
        for _ in range(10):
            e = normalize(cfg, {rng.choice(idx): rng.randint(-6, 6) for _ in range(3)})
            res = squares_decompose(cfg, e)
            if res.is_square:
                assert normalize(cfg, {j: 2 * c for j, c in res.root.exps}) == e
            else:
                assert certificate_holds(cfg, e, res.certificate)
            y = {rng.choice(idx): rng.randint(-6, 6) for _ in range(3)}
            assert squares_decompose(cfg, normalize(cfg, {j: 2 * c for j, c in y.items()})).is_square


# the decision

def test_decide_members(c9):
    for n in (3, 6, 12):
        d = special_conjugacy_decide(c9, n)
        assert d.conjugate is True
    d = special_conjugacy_decide(c9, 3)
    assert d.witness == parse_word("F^(s^13)")


@pytest.mark.parametrize("n", [9, 15])
def test_decide_non_members(c9, n):
    d = special_conjugacy_decide(c9, n)
    assert d.conjugate is False and d.witness is None


def test_decide_re_mode_is_budget_relative(c9):
    assert special_conjugacy_decide(c9, 12, mode=RE, budget=2).conjugate is None
    assert special_conjugacy_decide(c9, 12, mode=RE, budget=3).conjugate is True
    d = special_conjugacy_decide(c9, 9, mode=RE, budget=50)
    assert d.conjugate is None and d.budget == 50


def test_decide_out_of_family(c9):
    with pytest.raises(OutOfFamily):
        special_conjugacy_decide(c9, 4)


# Z wr Z

def test_top_examples(c9):
    r = lambda t: reduce(c9, t)
    assert top_conjugacy(r("F"), r("F^(s^7)"))
    assert not top_conjugacy(r("F"), r("F^2"))
    assert top_conjugacy(r("s F F^(s^3)"), r("s F F^(s^3)"))
    assert not top_conjugacy(r("s"), r("s^2"))
    # x = 2: class sums mod 2 are (F at 0, F at 1) up to rotation
    assert top_conjugacy(r("s^2 F^(s^1)"), r("s^2 F^(s^4)"))
    assert not top_conjugacy(r("s^2 F F^(s^2)"), r("s^2 F F^(s^1)^-1"))


@given(words(8), words(4), words(4))
@settings(max_examples=300)
def test_top_conjugacy_invariant(w, h1, h2):
    g = reduce(CFG, w)
    a, b = reduce(CFG, h1), reduce(CFG, h2)
    g1 = multiply(multiply(a, g), invert(a))
    g2 = multiply(multiply(b, g), invert(b))
    assert top_conjugacy(g1, g2)
    assert top_conjugacy(g, g1)


@given(words(6), words(6))
@settings(max_examples=200)
def test_top_conjugacy_symmetric(w1, w2):
    a, b = reduce(CFG, w1), reduce(CFG, w2)
    assert top_conjugacy(a, b) == top_conjugacy(b, a)


CFG = conj9()


# N_k parameters

def test_nk_parameters(c9):
    g1 = reduce(c9, "F")
    g2 = multiply(g1, f_n(c9, 11))
    k, T = nk_parameters(c9, g1, g2)
    P = c9.meta_get("P")
    prod = 1
    for p in P[:k]:
        prod *= p
    assert T == 4 ** k * prod
    assert P[k] > T                         # p_{k+1} > T_k
    # minimality: every smaller k fails a condition; here the growth one
    for j in range(1, k):
        Tj = 4 ** j
        for p in P[:j]:
            Tj *= p
        assert P[j] <= Tj


def test_nk_parameters_with_shift(c9):
    g1 = reduce(c9, "s^2 F")
    g2 = multiply(g1, f_n(c9, 13))
    k, T = nk_parameters(c9, g1, g2)
    assert (T // __import__("math").gcd(T, 2)) % 4 == 0


def test_nk_parameters_requires_shared_top(c9):
    with pytest.raises(OutOfFamily):
        nk_parameters(c9, reduce(c9, "F"), reduce(c9, "F^2"))
    with pytest.raises(OutOfFamily):
        nk_parameters(c9, reduce(c9, "F"), reduce(c9, "F"))


def test_nk_parameters_config_too_short():
    cfg = conj9(jump_at=None)
    g1 = reduce(cfg, "F")
    with pytest.raises(ConfigTooShort):
        nk_parameters(cfg, g1, multiply(g1, f_n(cfg, 11)))
