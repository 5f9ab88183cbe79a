"""Bounded refutation of morphisms from G_A onto small finite groups.

Every group of order d generated by two elements acts regularly on itself,
so candidate quotients of order <= k are pairs of permutations of d points
generating a regular group.  A candidate is refuted when some relator of
G_A has a nontrivial image.
"""

import itertools
from dataclasses import dataclass, field

from .abelian import expand_a, is_trivial
from .engine import is_identity, reduce
from .errors import CapExceeded, HorizonExceeded, IdentityInput
from .words import F, Fi, S, Si, as_word, comm, conj, inverse, power, to_text

DEFAULT_CAP = 6


@dataclass(frozen=True)
class FiniteCandidate:
    degree: int
    sf: tuple                   # image of F as a permutation of range(degree)
    ss: tuple                   # image of s
    order: int

    def describe(self):
        return {"degree": self.degree, "F": list(self.sf), "s": list(self.ss), "order": self.order}


@dataclass(frozen=True)
class Violated:
    relator: str
    word: tuple = field(repr=False, default=())


@dataclass(frozen=True)
class Unrefuted:
    checked: int


@dataclass(frozen=True)
class Confirmed:
    certificates: tuple          # ((candidate, Violated | "kills w"), ...)


@dataclass(frozen=True)
class Inconclusive:
    survivors: tuple             # ((candidate, checked relators), ...)


# ---------------------------------------------------------------------------
# permutations

def compose(p, q):
    """Apply p, then q."""
    return tuple(q[i] for i in p)


def pinv(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def evaluate(word, sf, ss):
    d = len(sf)
    imgs = {F: sf, Fi: pinv(sf), S: ss, Si: pinv(ss)}
    cur = tuple(range(d))
    for a in word:
        cur = compose(cur, imgs[a])
    return cur


def perm_order(p):
    cur, n, e = p, 1, tuple(range(len(p)))
    while cur != e:
        cur = compose(cur, p)
        n += 1
    return n


def group_order(gens, limit):
    e = tuple(range(len(gens[0])))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                x = compose(g, h)
                if x not in seen:
                    seen.add(x)
                    if len(seen) > limit:
                        return len(seen)
                    nxt.append(x)
        frontier = nxt
    return len(seen)


def _semiregular(p):
    d = len(p)
    seen = [False] * d
    lens = set()
    for i in range(d):
        if not seen[i]:
            n, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                n += 1
            lens.add(n)
    return len(lens) == 1


def _canonical(sf, ss):
    """Relabel points in BFS order from 0 along (F, s); a marked-group signature."""
    d = len(sf)
    order = [0]
    pos = {0: 0}
    i = 0
    while i < len(order):
        x = order[i]
        for g in (sf, ss):
            y = g[x]
            if y not in pos:
                pos[y] = len(order)
                order.append(y)
        i += 1
    if len(order) != d:
        return None
    cf = tuple(pos[sf[order[j]]] for j in range(d))
    cs = tuple(pos[ss[order[j]]] for j in range(d))
    return cf, cs


def enumerate_candidates(k, cap=DEFAULT_CAP):
    if k > cap:
        raise CapExceeded(f"k={k} exceeds the candidate cap {cap}")
    out = []
    seen = set()
    for d in range(1, k + 1):
        perms = [p for p in itertools.permutations(range(d)) if _semiregular(p)]
        for sf in perms:
            for ss in perms:
                sig = _canonical(sf, ss)
                if sig is None or sig in seen:
                    continue
                if group_order([sf, ss], d) != d:
                    continue
                seen.add(sig)
                out.append(FiniteCandidate(d, sig[0], sig[1], d))
    return out


# ---------------------------------------------------------------------------
# relators

def _s(n):
    return (S,) * n if n >= 0 else (Si,) * (-n)


def f_word(n):
    """F_n as the word [F, F^{s^n}]."""
    return comm((F,), conj((F,), _s(n)))


def relator_stream(cfg, ds):
    """(name, word) pairs: R1-R3 over n, m in [0, ds), then A-relators."""
    for n in range(ds):
        fn = f_word(n)
        yield f"R2 F_{n}^s F_{n}", conj(fn, (S,)) + fn
        for m in range(ds):
            yield f"R1 [F_{n}, F^(s^{m})]", comm(fn, conj((F,), _s(m)))
        yield f"R3 [F^-1, F^(s^{n})] F_{n}", comm((Fi,), conj((F,), _s(n))) + fn
    yield from a_relator_stream(cfg)


def a_relator_stream(cfg):
    """Relators coming from the presentation of A, in order of increasing index."""
    seen = {}
    n = 1
    while True:
        if n % 2 == 0:
            yield f"RA F_{n}", f_word(n)
            yield f"RA F_{n} F_-{n}^-1", f_word(n) + inverse(f_word(-n))
            n += 1
            continue
        try:
            a = expand_a(cfg, n)
        except HorizonExceeded:
            return
        yield f"RA F_{n} F_-{n}^-1", f_word(n) + inverse(f_word(-n))
        if is_trivial(a):
            yield f"RA F_{n}", f_word(n)
        else:
            if len(a.exps) == 1:
                i, e = a.exps[0]
                g = cfg.gen(i)
                if g.order is not None and not g.lazy:
                    yield f"RA F_{n}^{g.order}", power(f_word(n), g.order)
            prev = seen.get(a.exps)
            if prev is not None:
                yield f"RA F_{n} F_{prev}^-1", f_word(n) + inverse(f_word(prev))
            else:
                seen[a.exps] = n
            for m, l in itertools.combinations(sorted(set(seen.values())), 2):
                if m >= n or l >= n:
                    continue
                prod = _mul_exps(cfg, m, l)
                if prod == a.exps:
                    yield (f"RA F_{n} (F_{m} F_{l})^-1",
                           f_word(n) + inverse(f_word(m) + f_word(l)))
        n += 1


def _mul_exps(cfg, m, l):
    from .abelian import combine
    return combine(expand_a(cfg, m), expand_a(cfg, l)).exps


def refute_morphism(cfg, cand, budget):
    ds = perm_order(cand.ss)
    e = tuple(range(cand.degree))
    checked = 0
    for name, w in relator_stream(cfg, ds):
        if checked >= budget:
            break
        checked += 1
        if evaluate(w, cand.sf, cand.ss) != e:
            return Violated(name, w)
    return Unrefuted(checked)


def verify_depth_exceeds(cfg, w, k, budget=200, cap=DEFAULT_CAP):
    w = as_word(w)
    if is_identity(reduce(cfg, w)):
        raise IdentityInput("the word is trivial in G_A")
    certs, survivors = [], []
    for cand in enumerate_candidates(k, cap):
        e = tuple(range(cand.degree))
        if evaluate(w, cand.sf, cand.ss) == e:
            certs.append((cand, "kills w"))
            continue
        res = refute_morphism(cfg, cand, budget)
        if isinstance(res, Violated):
            certs.append((cand, res))
        else:
            survivors.append((cand, res.checked))
    if survivors:
        return Inconclusive(tuple(survivors))
    return Confirmed(tuple(certs))
