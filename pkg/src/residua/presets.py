"""Named configurations."""

import warnings

from sympy import isprime, nextprime, prime

from .abelian import GenSpec, GroupConfig, PeriodRule, make_meta
from .errors import ConfigError


def odd_primes(count, start=3):
    out, p = [], start - 1
    while len(out) < count:
        p = nextprime(p)
        out.append(p)
    return out


def uniform(order=3, n_max=10**6):
    """One generator b_1 with a_n = b_1 for every odd n."""
    return GroupConfig(
        (GenSpec(1, order),),
        (PeriodRule(1, 2, 1, 1),),
        "nu",
        n_max,
        "uniform",
    )


def spectra7(ps=None, qs=None, count=10):
    """a_{p_i} = b_i of order q_i, a_odd = product over prime divisors in P."""
    if ps is None:
        ps = odd_primes(count)
    if qs is None:
        qs = list(ps)
    if len(ps) != len(qs):
        raise ConfigError("p and q lists must have the same length")
    gens = tuple(GenSpec(i + 1, q) for i, q in enumerate(qs))
    periods = tuple(PeriodRule(i + 1, 2 * p, p, 1) for i, p in enumerate(ps))
    # every odd n below the next prime after p_last factors over known data;
    # with consecutive primes that is exact, otherwise it is a truncation
    n_max = nextprime(max(ps)) - 1
    return GroupConfig(gens, periods, "nu", n_max, "spectra7",
                       make_meta({"P": list(ps), "Q": list(qs)}))


def conj_primes(pairs=4, K=2, jump_at=None):
    """Primes with p_{3k+2} - p_{3k+1} = K, increasing, optionally with one big jump.

    Positions are 1-based.  Unpaired positions take the next prime; paired
    positions take the next prime p with p + K also prime.  With ``jump_at``
    the prime at that position is pushed above 4^k p_1 ... p_k for
    k = jump_at - 1.
    """
    if K % 2:
        raise ConfigError("the gap K must be even")
    P = []
    total = 3 * pairs + 2
    pos = 1
    last = 2
    while pos <= total:
        if jump_at is not None and pos == jump_at:
            T = 4 ** (pos - 1)
            for p in P:
                T *= p
            last = max(last, T)
        if pos >= 4 and pos % 3 == 1:
            p = nextprime(last)
            while not isprime(p + K):
                p = nextprime(p)
            P += [p, p + K]
            last = p + K
            pos += 2
        else:
            p = nextprime(last)
            P.append(p)
            last = p
            pos += 1
    return P


def conj9(N=(3, 6, 12), K=2, pairs=5, jump_at=15):
    """Orders 4 / 2 and relators b_{n_i} = b_{3i+1}^2 b_{3i+2}^2."""
    N = sorted(N)
    if K % 2:
        raise ConfigError("the gap K must be even")
    if any(n % 3 for n in N):
        raise ConfigError("N must consist of multiples of 3")
    P = conj_primes(max(pairs, len(N) + 1), K, jump_at)
    if jump_at is not None and jump_at - 1 <= 3 * len(N) + 2:
        raise ConfigError("the jump must come after the paired positions used by N")
    count = len(P)
    if max(N) > count:
        raise ConfigError("N references primes beyond the configured list")
    subs = {n: ((3 * i + 1, 2), (3 * i + 2, 2)) for i, n in enumerate(N, 1)}
    gens = []
    for i in range(1, count + 1):
        order = 2 if i % 3 == 0 else 4
        gens.append(GenSpec(i, order, subs.get(i, ())))
    periods = tuple(PeriodRule(i + 1, 2 * p, p, 1) for i, p in enumerate(P))
    return GroupConfig(tuple(gens), periods, "nu", max(P), "conj9",
                       make_meta({"P": P, "N": N, "K": K}))


def inseparable_a1(count=9):
    """Orders 2^i on n_i = 3i-1 and 3^i on m_i = 3i, infinite elsewhere."""
    ps = odd_primes(count)
    gens = []
    for n in range(1, count + 1):
        if n % 3 == 2:
            order = 2 ** ((n + 1) // 3)
        elif n % 3 == 0:
            order = 3 ** (n // 3)
        else:
            order = None
        gens.append(GenSpec(n, order))
    periods = tuple(PeriodRule(i + 1, 2 * p, p, 1) for i, p in enumerate(ps))
    return GroupConfig(tuple(gens), periods, "nu", nextprime(ps[-1]) - 1,
                       "inseparableA1", make_meta({"P": ps}))


def nies_a2(count=10):
    """Generator b_i has its order revealed by toy machine i."""
    ps = odd_primes(count)
    gens = tuple(GenSpec(i, None, (), i) for i in range(1, count + 1))
    periods = tuple(PeriodRule(i + 1, 2 * p, p, 1) for i, p in enumerate(ps))
    return GroupConfig(gens, periods, "nu", nextprime(ps[-1]) - 1, "niesA2",
                       make_meta({"P": ps}))


def wp8(**kw):
    from .spectra import wp8_config
    return wp8_config(**kw)


def rauzy_pair(count=6, toy_set=(1, 3, 4)):
    """Two spectra configs differing only in the q rule.

    G_A1 takes q_i = p_i for i in the toy set and p_{i+1} otherwise; G_A2
    takes q_i = p_i throughout.  The toy set stands in for a set that is
    not computable; that property cannot be realized here.
    """
    warnings.warn("rauzy_pair uses a finite toy set; non-computability is not modelled",
                  stacklevel=2)
    ps = odd_primes(count + 1)
    q1 = [ps[i] if (i + 1) in toy_set else ps[i + 1] for i in range(count)]
    q2 = ps[:count]
    return spectra7(ps[:count], q1), spectra7(ps[:count], q2)


PRESETS = {
    "uniform": uniform,
    "spectra7": spectra7,
    "wp8": wp8,
    "conj9": conj9,
    "inseparableA1": inseparable_a1,
    "niesA2": nies_a2,
}


def preset(name, **params):
    try:
        fn = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}") from None
    cfg = fn(**params)
    return cfg


__all__ = [
    "preset", "PRESETS", "odd_primes", "rauzy_pair", "conj_primes", "uniform", "spectra7",
    "conj9", "inseparable_a1", "nies_a2", "wp8",
]
