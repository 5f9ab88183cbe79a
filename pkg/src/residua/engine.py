"""Reduced forms in G_A = <F, s>.

Every element is written uniquely as

    g = s^x * prod_i (F^{s^{n_i}})^{k_i} * f,     n_1 > n_2 > ... , k_i != 0,

with f in F' stored as an AbelianElement through F_n <-> a_n.  Products are
assembled from the fact that F' is central in the subgroup generated by the
F^{s^n}: swapping two adjacent factors X Y = Y X [X, Y] costs the central
correction [(F^{s^m})^k, (F^{s^n})^l] = F_{|m-n|}^{(-1)^m k l}.
"""

import math
import os
from dataclasses import dataclass

from .abelian import (
    AbelianElement,
    Verdict,
    expand_a,
    expand_a_raw,
    normalize,
    is_trivial,
    probe_trivial,
    power as apower,
)
from .errors import CapExceeded, HorizonExceeded
from .words import F, Fi, S, Si, as_word, comm, conj, free_reduce, power as wpower


@dataclass(frozen=True)
class ReducedForm:
    x: int
    factors: tuple                    # ((n, k), ...) with n strictly decreasing
    fprime: AbelianElement

    @property
    def cfg(self):
        return self.fprime.cfg

    def key(self):
        return (self.x, self.factors, self.fprime.exps)

    def __str__(self):
        fs = " ".join(f"(F^s^{n})^{k}" for n, k in self.factors)
        return f"s^{self.x} {fs} [{self.fprime}]".replace("  ", " ")


@dataclass(frozen=True)
class TNormalForm:
    x: int
    factors: tuple
    fprime: AbelianElement
    T: int


def identity(cfg):
    return ReducedForm(0, (), cfg.identity)


def f_n(cfg, n, k=1):
    """The F'-element F_n^k as a reduced form."""
    return ReducedForm(0, (), apower(expand_a(cfg, n), k))


def _add_a(raw, n, c, cfg):
    if c and n % 2:
        for i, d in expand_a_raw(cfg, n).items():
            raw[i] = raw.get(i, 0) + c * d


def assemble(cfg, x, seq, base):
    """Reduced form of s^x * prod(seq) * base, with base a raw b-exponent map."""
    raw = dict(base)
    corr = {}
    m = len(seq)
    for i in range(m):
        ni, ki = seq[i]
        sgn = ki if ni % 2 == 0 else -ki
        for j in range(i + 1, m):
            nj, kj = seq[j]
            if ni < nj:
                d = nj - ni
                if d % 2:
                    corr[d] = corr.get(d, 0) + sgn * kj
    for d, c in corr.items():
        _add_a(raw, d, c, cfg)
    merged = {}
    for n, k in seq:
        merged[n] = merged.get(n, 0) + k
    factors = tuple((n, merged[n]) for n in sorted(merged, reverse=True) if merged[n])
    return ReducedForm(x, factors, normalize(cfg, raw))


def _signed(f, sign):
    return {i: sign * e for i, e in f.exps}


def reduce(cfg, w):
    w = as_word(w)
    seq = []
    x = 0
    for a in w:
        if a == S:
            x += 1
        elif a == Si:
            x -= 1
        elif seq and seq[-1][0] == x:
            seq[-1] = (x, seq[-1][1] + a)
        else:
            seq.append((x, a))
    seq = [(n - x, k) for n, k in seq if k]
    return assemble(cfg, x, seq, {})


def multiply(r1, r2):
    cfg = r1.cfg
    if r2.cfg is not cfg and r2.cfg != cfg:
        from .errors import ConfigMismatch
        raise ConfigMismatch("reduced forms belong to different configs")
    x2 = r2.x
    seq = [(n - x2, k) for n, k in r1.factors] + list(r2.factors)
    base = _signed(r1.fprime, -1 if x2 % 2 else 1)
    for i, e in r2.fprime.exps:
        base[i] = base.get(i, 0) + e
    return assemble(cfg, r1.x + x2, seq, base)


def invert(r):
    x = r.x
    seq = [(n + x, -k) for n, k in reversed(r.factors)]
    base = _signed(r.fprime, 1 if x % 2 else -1)
    return assemble(r.cfg, -x, seq, base)


def mul_gen(r, a):
    """Right multiplication by a single letter; the BFS hot path."""
    cfg = r.cfg
    if a == S or a == Si:
        d = 1 if a == S else -1
        fac = tuple((n - d, k) for n, k in r.factors)
        return ReducedForm(r.x + d, fac, normalize(cfg, _signed(r.fprime, -1)))
    e = 1 if a == F else -1
    raw = None
    out = []
    placed = False
    for n, k in r.factors:
        if n < 0 and not placed:
            placed = True
            out.append((0, e))
        if n == 0:
            k += e
            placed = True
            if k:
                out.append((0, k))
            continue
        if n < 0 and (-n) % 2:
            # F^{s^n}^k moves past F^e: correction F_{-n}^{(-1)^n k e}
            if raw is None:
                raw = dict(r.fprime.exps)
            _add_a(raw, -n, -k * e, cfg)
        out.append((n, k))
    if not placed:
        out.append((0, e))
    fp = r.fprime if raw is None else normalize(cfg, raw)
    return ReducedForm(r.x, tuple(out), fp)


def is_identity(r):
    return r.x == 0 and not r.factors and is_trivial(r.fprime)


def probe_identity(r, budget):
    """Co-semi-decidable identity test for lazily ordered configs."""
    if r.x or r.factors:
        return Verdict.NOT_IDENTITY
    return probe_trivial(r.cfg, r.fprime, budget)


def t_normal_form(r, T):
    if T <= 0 or T % 2:
        raise ValueError("T must be a positive even integer")
    cfg = r.cfg
    fac = r.factors
    order = sorted(range(len(fac)), key=lambda i: -(fac[i][0] % T))
    raw = dict(r.fprime.exps)
    corr = {}
    for i in range(len(fac)):
        ni, ki = fac[i]
        ri = ni % T
        for j in range(i + 1, len(fac)):
            nj, kj = fac[j]
            if ri < nj % T:
                d = ni - nj
                if d % 2:
                    c = ki * kj if ni % 2 == 0 else -ki * kj
                    corr[d] = corr.get(d, 0) + c
    for d, c in corr.items():
        _add_a(raw, d, c, cfg)
    return TNormalForm(r.x, tuple(fac[i] for i in order), normalize(cfg, raw), T)


def from_t_normal(t):
    """Multiply a T-normal form back out into a reduced form."""
    return assemble(t.fprime.cfg, t.x, list(t.factors), dict(t.fprime.exps))


def f_n_power(cfg, n, k):
    """F_n^k together with a short witness word.

    F_n^{l^2} F_n^{m} = [F^l, (F^{s^n})^l] [F^m, F^{s^n}] with l = isqrt|k|
    and m = k - sign(k) l^2.
    """
    if n % 2 == 0:
        raise ValueError("n must be odd")
    target = f_n(cfg, n, k)
    an = abs(n)
    sn = (S,) * an
    sg = 1 if k >= 0 else -1
    l = math.isqrt(abs(k))
    m = k - sg * l * l
    w = ()
    if l:
        w += comm(wpower((F,), sg * l), conj(wpower((F,), l), sn))
    if m:
        w += comm(wpower((F,), m), conj((F,), sn))
    w = free_reduce(w)
    return target, w


def word_of(r):
    """A (not necessarily short) word representing a reduced form."""
    w = (S,) * r.x if r.x >= 0 else (Si,) * (-r.x)
    for n, k in r.factors:
        sn = (S,) * n if n >= 0 else (Si,) * (-n)
        w += conj(wpower((F,), k), sn)
    for i, e in r.fprime.exps:
        w += _basis_word(r.cfg, i, e)
    return free_reduce(w)


def _basis_word(cfg, i, e):
    """Word for b_i^e, available when some a_n equals b_i exactly."""
    key = ("bword", i)
    n = cfg._cache.get(key)
    if n is None:
        for pr in cfg.periods:
            if pr.index == i and pr.r % 2 == 1 and pr.d == 1:
                cand = pr.r
                try:
                    if expand_a(cfg, cand).exps == ((i, 1),):
                        n = cand
                        break
                except HorizonExceeded:
                    pass
        if n is None:
            raise HorizonExceeded(f"no a_n equal to b_{i} within the horizon")
        cfg._cache[key] = n
    return f_n_power(cfg, n, e)[1]


def state_cap(default=200000):
    v = os.environ.get("RESIDUA_STATE_CAP")
    return int(v) if v else default


def ball(cfg, radius, cap=12):
    """All elements of word length <= radius, mapped to their length."""
    if radius > cap:
        raise CapExceeded(f"radius {radius} exceeds ball cap {cap}")
    start = identity(cfg)
    dist = {start: 0}
    frontier = [start]
    for d in range(1, radius + 1):
        nxt = []
        for r in frontier:
            for a in (F, Fi, S, Si):
                g = mul_gen(r, a)
                if g not in dist:
                    dist[g] = d
                    nxt.append(g)
        frontier = nxt
    return dist


def ball_words(cfg, radius, cap=12):
    """Like ball, but also returns one geodesic word per element."""
    if radius > cap:
        raise CapExceeded(f"radius {radius} exceeds ball cap {cap}")
    start = identity(cfg)
    words = {start: ()}
    frontier = [start]
    for _ in range(radius):
        nxt = []
        for r in frontier:
            w = words[r]
            for a in (F, Fi, S, Si):
                g = mul_gen(r, a)
                if g not in words:
                    words[g] = w + (a,)
                    nxt.append(g)
        frontier = nxt
    return words


def form_to_json(r):
    return {"x": r.x, "factors": [[n, k] for n, k in r.factors],
            "fprime": [[i, e] for i, e in r.fprime.exps]}


def form_from_json(cfg, d):
    fac = tuple((int(n), int(k)) for n, k in d.get("factors", []))
    for a, b in zip(fac, fac[1:]):
        if a[0] <= b[0]:
            raise ValueError("factor indices must be strictly decreasing")
    if any(k == 0 for _, k in fac):
        raise ValueError("factor exponents must be nonzero")
    fp = normalize(cfg, {int(i): int(e) for i, e in d.get("fprime", [])})
    return ReducedForm(int(d.get("x", 0)), fac, fp)
