"""Quantitative constructions: prime and order selection, growth checks,
relators of the decidable-word-problem group, dominant growth.

All verdicts are exact integer comparisons.  Floating point only appears
in reported ratios.
"""

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from mpmath import iv
from sympy import isprime, nextprime

from .abelian import GenSpec, GroupConfig, PeriodRule, make_meta
from .errors import EnumeratorBudget, RangeExceeded, SearchExhausted


@dataclass(frozen=True)
class GrowthSpec:
    name: str
    fn: object = field(compare=False, repr=False)
    max_n: int = 10**7

    def __call__(self, n):
        if n < 1 or n > self.max_n:
            raise RangeExceeded(f"{self.name} is evaluated on 1..{self.max_n} only")
        return gmpy2.mpz(self.fn(n))


def n_pow_cn(c):
    return GrowthSpec("n^n" if c == 1 else f"n^{c}n", lambda n: gmpy2.mpz(n) ** (c * n))


def pow2_g(g, label="g"):
    """f(n) = 2^(2 n g(n)) with a pluggable g."""
    return GrowthSpec(f"2^(2n*{label}(n))", lambda n: gmpy2.mpz(2) ** (2 * n * g(n)))


def table_growth(values, name="table"):
    vals = dict(values)
    return GrowthSpec(name, lambda n: vals[n], max_n=max(vals))


def growth(name):
    """Parse a growth name: 'n^n', 'n^3n', 'n^(2n+2)', 'n', '1'."""
    s = name.replace(" ", "")
    if s == "n^n":
        return n_pow_cn(1)
    m = re.fullmatch(r"n\^\(?(\d+)\*?n\)?", s)
    if m:
        return n_pow_cn(int(m.group(1)))
    m = re.fullmatch(r"n\^\((\d+)\*?n\+(\d+)\)", s)
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        return GrowthSpec(s, lambda n: gmpy2.mpz(n) ** (a * n + b))
    if s == "n":
        return GrowthSpec("n", lambda n: n)
    if s == "1":
        return GrowthSpec("1", lambda n: 1)
    raise ValueError(f"unknown growth function {name!r}")


# ---------------------------------------------------------------------------
# section 7 selection

def eta7(f, n):
    """(lo, hi) with lo <= (f(n)/n)^(1/(2n+1)) < hi, hi = lo + 1."""
    e = 2 * n + 1
    fn = f(n)
    lo = int(gmpy2.iroot(fn // n, e)[0])
    # lo^e <= floor(f/n) <= f/n and (lo+1)^e > floor(f/n) imply the bracket
    assert gmpy2.mpz(lo) ** e * n <= fn < gmpy2.mpz(lo + 1) ** e * n
    return lo, lo + 1


def _as_fraction(lam):
    fr = Fraction(str(lam)) if not isinstance(lam, Fraction) else lam
    if not 0 < fr <= 1:
        raise ValueError("lambda must lie in (0, 1]")
    return fr


def select_primes_p(lam, count):
    """p_1 = 3 and 16^(1/lam) < p_{i+1}/p_i < 32^(1/lam), smallest choice each step."""
    fr = _as_fraction(lam)
    a, b = fr.numerator, fr.denominator      # lam = a/b, 1/lam = b/a
    ps = [3]
    while len(ps) < count:
        prev = ps[-1]
        low = gmpy2.mpz(16) ** b * gmpy2.mpz(prev) ** a      # p^a must exceed this
        high = gmpy2.mpz(32) ** b * gmpy2.mpz(prev) ** a     # and stay below this
        c = int(gmpy2.iroot(low, a)[0])
        p = nextprime(c - 1) if c > 2 else 2
        while gmpy2.mpz(p) ** a <= low:
            p = nextprime(p)
        if gmpy2.mpz(p) ** a >= high:
            raise SearchExhausted(f"no prime in the ratio interval after {prev}")
        ps.append(int(p))
    return ps


def _ln_big(x, prec):
    """Interval enclosure of ln(x) for a huge positive integer."""
    x = gmpy2.mpz(x)
    bl = x.bit_length()
    sh = max(0, bl - prec - 20)
    top = int(x >> sh)
    lo = iv.log(iv.mpf(top))
    hi = iv.log(iv.mpf(top + 1))
    return iv.mpf([lo.a, hi.b]) + sh * iv.log(2)


def mu_interval():
    return iv.log(3) / iv.log(16) + iv.mpf("0.6")


def _q_upper_ok(f, p, q):
    """Decide q <= eta + eta^mu with eta = (f(p)/p)^(1/(2p+1)), refining precision."""
    e = 2 * p + 1
    fp = f(p)
    saved = iv.prec
    try:
        for prec in (64, 128, 256, 1024):
            iv.prec = prec
            ln_eta = (_ln_big(fp, prec) - iv.log(p)) / e
            eta = iv.exp(ln_eta)
            ub = eta + iv.exp(mu_interval() * ln_eta)
            if q < ub.a:
                return True
            if q > ub.b:
                return False
    finally:
        iv.prec = saved
    raise SearchExhausted("upper q-bound undecided at maximal precision")


def select_primes_q(f, ps):
    """Smallest unused prime q_m with eta(p_m) <= q_m <= eta + eta^mu."""
    used, qs = set(), []
    for p in ps:
        e = 2 * p + 1
        fp = f(p)
        lo, _ = eta7(f, p)
        q = lo if lo >= 2 and isprime(lo) else nextprime(lo)
        while True:
            if gmpy2.mpz(q) ** e * p >= fp and q not in used:
                break
            q = nextprime(q)
        if not _q_upper_ok(f, p, q):
            raise SearchExhausted(f"no admissible prime q for p={p}")
        used.add(q)
        qs.append(int(q))
    return qs


@dataclass
class RfReport:
    i: int
    p: int
    q: int
    R: object
    fp: object
    holds: bool
    ln_ratio: float
    ln_bound: float

    @property
    def ratio(self):
        return math.exp(self.ln_ratio) if self.ln_ratio < 700 else float("inf")


def _ln_float(x):
    x = gmpy2.mpz(x)
    sh = max(0, x.bit_length() - 64)
    return math.log(int(x >> sh)) + sh * math.log(2)


def rf_formula_check(f, ps, qs, i, lam=Fraction(1, 2)):
    """R_i = 2 p_i q_i^(2 p_i + 1) against f(p_i); i is 1-based."""
    if not 1 <= i <= min(len(ps), len(qs)):
        raise RangeExceeded(f"index {i} outside the selected range")
    p, q = ps[i - 1], qs[i - 1]
    R = 2 * p * gmpy2.mpz(q) ** (2 * p + 1)
    fp = f(p)
    mu = float(mu_interval().mid)
    lamf = float(_as_fraction(lam))
    bound = math.log(2) + 3 / (lamf * (1 - mu))
    return RfReport(i, p, q, R, fp, bool(fp <= R), _ln_float(R) - _ln_float(fp), bound)


def spectra_table(f, lam, count):
    ps = select_primes_p(lam, count)
    qs = select_primes_q(f, ps)
    return [rf_formula_check(f, ps, qs, i, lam) for i in range(1, count + 1)]


def big_str(x, full=False, limit=4000):
    """Decimal text; huge values are abbreviated unless full is set."""
    x = gmpy2.mpz(x)
    if full or x.bit_length() <= limit * 3.32:
        return x.digits(10)
    digits = int(x.bit_length() * math.log10(2)) + 1
    head = int(x >> (x.bit_length() - 60))
    return f"~{_sci(head, x.bit_length() - 60)} ({digits} digits)"


def _sci(m, sh):
    lg = math.log10(m) + sh * math.log10(2)
    e = int(lg)
    return f"{10 ** (lg - e):.6f}e+{e}"


# ---------------------------------------------------------------------------
# section 8: decidable word problem group

def eta8(f, n):
    """Smallest k >= 1 with n^(k n 3^k) > f(n)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    fn = f(n)
    fb = fn.bit_length()
    lb = gmpy2.mpz(n).bit_length()
    k = 1
    while True:
        E = k * n * 3 ** k
        if E * (lb - 1) >= fb:
            return k                      # n^E >= 2^(E(lb-1)) >= 2^fb > f(n)
        if E * lb >= fb and gmpy2.mpz(n) ** E > fn:
            return k                      # otherwise n^E < 2^(E lb) <= 2^(fb-1) <= f(n)
        k += 1


class Enumerator:
    """Dovetailed listing of pairs (n, k) with f(n) > k.

    Stage t checks the pairs (n, t - n) for n = 1..t.  Each check is one
    step; T_i is the step count when the i-th pair is emitted, padded to
    exceed n_i^k_i.
    """

    def __init__(self, f):
        self.f = f
        self.pairs = []
        self.T = []
        self._steps = 0
        self._t = 1
        self._n = 1

    def run(self, count, max_steps=10**6):
        while len(self.pairs) < count:
            if self._steps >= max_steps:
                raise EnumeratorBudget(f"only {len(self.pairs)} pairs within {max_steps} steps")
            n, k = self._n, self._t - self._n
            self._steps += 1
            if self.f(n) > k:
                self.pairs.append((n, k))
                self.T.append(max(self._steps, n ** k + 1))
            self._n += 1
            if self._n > self._t:
                self._t += 1
                self._n = 1
        return list(zip(self.pairs, self.T))


def odd_primes_by_parity(bound):
    """P = odd primes with odd index, Q = odd primes with even index."""
    P, Q = [], []
    p, idx = 2, 0
    while True:
        p = nextprime(p)
        if p > bound:
            break
        idx += 1
        (P if idx % 2 else Q).append(p)
    return P, Q


def nth_q(m):
    """m-th element of Q (1-based)."""
    p, idx, count = 2, 0, 0
    while True:
        p = nextprime(p)
        idx += 1
        if idx % 2 == 0:
            count += 1
            if count == m:
                return p


@dataclass
class WPRelators:
    bound: int
    orders: dict                 # (1), (2), and (4)-implied orders
    trivial: list                # (3)
    rel4: list                   # (p, u, c, q): b_p = b_u^c b_q^c
    skipped: list                # pairs not turned into relators, with reasons

    def to_config(self, normal_form="nu1", f_name=""):
        subs = {p: ((u, c), (q, c)) for p, u, c, q in self.rel4}
        gens, periods = [], []
        for m in sorted(self.orders):
            gens.append(GenSpec(m, self.orders[m], subs.get(m, ())))
            periods.append(PeriodRule(m, 2 * m, m, 1))
        meta = {"rel4": [list(r) for r in self.rel4], "skipped": self.skipped}
        if f_name:
            meta["f"] = f_name
        return GroupConfig(tuple(gens), tuple(periods), normal_form, self.bound,
                           "wp8", make_meta(meta))


def _p3k(m, Pset):
    """(p, k) when m = p 3^k with p in P, else None."""
    a = 0
    r = m
    while r % 3 == 0:
        r //= 3
        a += 1
    if r == 1 and a >= 1:
        return (3, a - 1) if 3 in Pset else None
    if r in Pset:
        return r, a
    return None


def relators_wp(f, enum, bound, pairs=12):
    listing = enum.run(pairs)
    P, Q = odd_primes_by_parity(bound)
    Pset, Qset = set(P), set(Q)
    best = {}
    skipped = []
    for i, ((n, l), T) in enumerate(listing, 1):
        if n not in Pset:
            continue
        if l < 2:
            skipped.append([n, l, "eta undefined below 2"])
            continue
        prev = best.get(n)
        if prev is not None:
            skipped.append([n, prev[0], "smaller l for the same p"])
        if prev is None or l > prev[0]:
            best[n] = (l, T)
        else:
            skipped.append([n, l, "smaller l for the same p"])
    rel4 = []
    qorder = {}
    for p in sorted(best):
        l, T = best[p]
        k = eta8(f, l)
        u = p * 3 ** k
        q = nth_q(T)
        if u > bound or q > bound:
            skipped.append([p, l, f"indices {u}, {q} beyond bound"])
            continue
        rel4.append((p, u, p ** (k - 1), q))
        qorder[q] = p ** k
    orders, trivial = {}, []
    for m in range(1, bound + 1):
        pk = _p3k(m, Pset)
        if pk is not None:
            p, k = pk
            orders[m] = p ** k if k else p
        elif m in Qset:
            orders[m] = qorder.get(m)       # None: free generator
        else:
            trivial.append(m)
    return WPRelators(bound, orders, trivial, rel4, skipped)


def wp8_config(f="n^3n", pairs=12, bound=400, normal_form="nu1"):
    fs = growth(f) if isinstance(f, str) else f
    rels = relators_wp(fs, Enumerator(fs), bound, pairs)
    return rels.to_config(normal_form, fs.name)


# ---------------------------------------------------------------------------
# dominant growth

def dominant_growth(enumeration, n, budget):
    """(max{i : n_i <= n} over the first `budget` outputs, may_grow).

    may_grow is True when the enumeration was cut off by the budget, so a
    later element could still raise the value.
    """
    best = 0
    it = iter(enumeration)
    for i in range(1, budget + 1):
        try:
            x = next(it)
        except StopIteration:
            return best, False
        if x <= n:
            best = i
    return best, True


def primes_enumeration():
    p = 1
    while True:
        p = nextprime(p)
        yield p
