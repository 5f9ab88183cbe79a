"""Finite quotients of G_A.

N_{q,T,b_r} collects the elements g with T | x(g), every residue-class sum
of factor exponents divisible by q, and the b_r-coordinate of the T-normal
F'-part divisible by q.  Its cosets are labelled by the triple
(x mod T, phi-vector, coordinate mod q).
"""

import math
from collections import deque
from dataclasses import dataclass

from sympy import isprime, nextprime

from .abelian import (
    coord,
    effective_periods,
    expand_a,
    lcm_list,
    order_probe,
    Known,
)
from .engine import (
    ReducedForm,
    TNormalForm,
    ball_words,
    identity,
    is_identity,
    mul_gen,
    state_cap,
    t_normal_form,
    f_n_power,
    f_n,
    multiply,
    reduce,
)
from .errors import (
    ConfigError,
    HorizonExceeded,
    IdentityInput,
    OutOfFamily,
    SearchExhausted,
    StateCapExceeded,
)
from .words import F, Fi, S, Si, as_word

GENS = (F, Fi, S, Si)


@dataclass(frozen=True)
class QuotientSpec:
    q: int
    T: int
    r: int

    def describe(self):
        return {"kind": "N", "q": self.q, "T": self.T, "r": self.r}


@dataclass(frozen=True)
class GeneralSpec:
    """(q, T) phi-constraint plus coordinate constraints on a block of generators."""
    q: int
    T: int
    constraints: tuple          # ((index, modulus), ...)

    def describe(self):
        return {"kind": "general", "q": self.q, "T": self.T,
                "constraints": [list(c) for c in self.constraints]}


@dataclass(frozen=True)
class CyclicSpec:
    m: int

    def describe(self):
        return {"kind": "cyclic", "m": self.m}


@dataclass(frozen=True)
class LamplighterSpec:
    p: int
    m: int

    def describe(self):
        return {"kind": "lamplighter", "p": self.p, "m": self.m}


@dataclass(frozen=True)
class CosetLabel:
    xmodT: int
    phi: tuple
    c: object                   # int, or tuple for general specs

    def __str__(self):
        c = ",".join(map(str, self.c)) if isinstance(self.c, tuple) else str(self.c)
        return f"{self.xmodT}|{','.join(map(str, self.phi))}|{c}"


# ---------------------------------------------------------------------------
# labels

def phi_vector(r, q, T):
    v = [0] * T
    for n, k in r.factors:
        v[n % T] += k
    return tuple(x % q for x in v)


def check_spec(cfg, spec):
    """Raise ConfigError unless the spec defines a normal subgroup for cfg."""
    if spec.T <= 0 or spec.T % 2:
        raise ConfigError("T must be a positive even integer")
    if spec.q < 2:
        raise ConfigError("q must be at least 2")
    idx = [spec.r] if isinstance(spec, QuotientSpec) else [i for i, _ in spec.constraints]
    for i in idx:
        g = cfg.gen(i)
        if g is None:
            raise ConfigError(f"b_{i} is not a generator")
        per = effective_periods(cfg, i)
        if spec.T % lcm_list(per):
            raise ConfigError(f"T={spec.T} is not a multiple of the periods {per} of b_{i}")
    if isinstance(spec, QuotientSpec):
        g = cfg.gen(spec.r)
        if g.lazy:
            raise ConfigError("the order of a lazily ordered generator is not known")
        if g.order is not None and g.order % spec.q:
            raise ConfigError(f"q={spec.q} must divide the order {g.order} of b_{spec.r}")
    else:
        for i, mod in spec.constraints:
            if spec.q % mod:
                raise ConfigError("q must be a multiple of every block modulus")


def coset_label(r, spec):
    tn = t_normal_form(r, spec.T)
    phi = phi_vector(r, spec.q, spec.T)
    if isinstance(spec, QuotientSpec):
        c = coord(tn.fprime, spec.r) % spec.q
    else:
        c = tuple(coord(tn.fprime, i) % mod for i, mod in spec.constraints)
    return CosetLabel(r.x % spec.T, phi, c)


def zero_label(spec):
    c = 0 if isinstance(spec, QuotientSpec) else tuple(0 for _ in spec.constraints)
    return CosetLabel(0, (0,) * spec.T, c)


def in_subgroup(r, spec):
    if isinstance(spec, CyclicSpec):
        return r.x % spec.m == 0
    if isinstance(spec, LamplighterSpec):
        return lamplighter_image(r, spec) == (0, ())
    return coset_label(r, spec) == zero_label(spec)


def lamplighter_image(r, spec):
    """Image in Z_p wr Z_m as (shift mod m, sorted nonzero lamps)."""
    lamps = {}
    for n, k in r.factors:
        lamps[n % spec.m] = (lamps.get(n % spec.m, 0) + k) % spec.p
    return r.x % spec.m, tuple(sorted((i, v) for i, v in lamps.items() if v))


def quotient_index(cfg, spec):
    """(index bound, exact?)."""
    if isinstance(spec, CyclicSpec):
        return spec.m, True
    if isinstance(spec, LamplighterSpec):
        return spec.m * spec.p ** spec.m, True
    if isinstance(spec, QuotientSpec):
        g = cfg.gen(spec.r)
        exact = g is not None and (g.order is None or g.order == spec.q) and not g.lazy
        return spec.T * spec.q ** (spec.T + 1), exact
    size = 1
    for _, mod in spec.constraints:
        size *= mod
    return spec.T * spec.q ** spec.T * size, False


# ---------------------------------------------------------------------------
# coset automaton

def _unit_index(cfg, spec):
    """Odd n whose a_n has b_r-coordinate invertible mod q, with that inverse."""
    key = ("unit", spec)
    hit = cfg._cache.get(key)
    if hit is None:
        n = 1
        while True:
            try:
                c = coord(expand_a(cfg, n), spec.r)
            except HorizonExceeded:
                raise SearchExhausted("no a_n with invertible coordinate in range") from None
            if math.gcd(c, spec.q) == 1:
                hit = (n, pow(c, -1, spec.q))
                break
            n += 2
        cfg._cache[key] = hit
    return hit


def canonical_rep(cfg, spec, label):
    """s^x * prod over residues (F^{s^res})^{phi_res} * a_{n0}^{c u}."""
    if not isinstance(spec, QuotientSpec):
        raise NotImplementedError("canonical representatives exist for N-specs only")
    fac = tuple((res, label.phi[res]) for res in range(spec.T - 1, -1, -1) if label.phi[res])
    n0, u = _unit_index(cfg, spec)
    fp = f_n(cfg, n0, (label.c * u) % spec.q).fprime
    return ReducedForm(label.xmodT, fac, fp)


@dataclass
class Automaton:
    spec: object
    labels: list                # state -> CosetLabel
    delta: list                 # state -> [target per generator F, F^-1, s, s^-1]
    start: int = 0

    def __len__(self):
        return len(self.labels)

    def trace(self, w):
        st = self.start
        col = {F: 0, Fi: 1, S: 2, Si: 3}
        for a in as_word(w):
            st = self.delta[st][col[a]]
        return st

    def to_dot(self):
        names = ["F", "F^-1", "s", "s^-1"]
        out = ["digraph coset_automaton {"]
        for i, lab in enumerate(self.labels):
            out.append(f'  n{i} [label="{lab}"];')
        for i, row in enumerate(self.delta):
            for g, j in enumerate(row):
                out.append(f'  n{i} -> n{j} [label="{names[g]}"];')
        out.append("}")
        return "\n".join(out) + "\n"


def build_automaton(cfg, spec, cap=None):
    """Reachable coset labels from the identity under right multiplication."""
    if cap is None:
        cap = state_cap()
    check_spec(cfg, spec)
    bound, _ = quotient_index(cfg, spec)
    if bound > cap:
        raise StateCapExceeded(f"index bound {bound} exceeds state cap {cap}")
    use_canon = isinstance(spec, QuotientSpec)
    start = zero_label(spec)
    index = {start: 0}
    labels = [start]
    reps = [identity(cfg)]
    delta = []
    i = 0
    while i < len(labels):
        rep = canonical_rep(cfg, spec, labels[i]) if use_canon else reps[i]
        if use_canon and i < 64 and coset_label(rep, spec) != labels[i]:
            raise AssertionError(f"canonical representative mislabelled for {labels[i]}")
        row = []
        for a in GENS:
            g = mul_gen(rep, a)
            lab = coset_label(g, spec)
            j = index.get(lab)
            if j is None:
                j = len(labels)
                if j >= cap:
                    raise StateCapExceeded(f"more than {cap} states")
                index[lab] = j
                labels.append(lab)
                reps.append(None if use_canon else g)
            row.append(j)
        delta.append(row)
        i += 1
    return Automaton(spec, labels, delta)


# ---------------------------------------------------------------------------
# separators

def _min_nondivisor(x):
    m = 2
    while x % m == 0:
        m += 1
    return m


def _block(cfg, r):
    """Connected component of b_r in the rewriting-rule graph."""
    rules = cfg._cache["rules"]
    adj = {}
    for i, (_, rhs) in rules.items():
        for t in rhs:
            adj.setdefault(i, set()).add(t)
            adj.setdefault(t, set()).add(i)
    seen, stack = {r}, [r]
    while stack:
        j = stack.pop()
        for t in adj.get(j, ()):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return sorted(seen)


def _lazy_order(cfg, i, budget=10**4):
    res = order_probe(cfg, i, budget)
    if isinstance(res, Known):
        return res.order
    raise SearchExhausted(f"order of b_{i} not revealed within {budget} steps")


def _fprime_spec(cfg, r):
    best = None
    for i, d in r.fprime.exps:
        block = _block(cfg, i)
        rules = cfg._cache["rules"]
        per = effective_periods(cfg, i)
        if not per:
            continue
        if len(block) == 1:
            g = cfg.gen(i)
            order = _lazy_order(cfg, i) if g.lazy else g.order
            if order is None:
                q = _min_nondivisor(d)
            else:
                q = next((q for q in range(2, order + 1) if order % q == 0 and d % q), None)
                if q is None:
                    continue
            T = lcm_list(per)
            cand = QuotientSpec(q, T, i)
        else:
            cons = []
            for j in block:
                rule = rules.get(j)
                if rule is None or rule[0] == 1 and rule[1]:
                    if rule is None:
                        raise OutOfFamily(f"b_{j} in a relator block has infinite order")
                    continue
                cons.append((j, rule[0]))
            q = lcm_list([m for _, m in cons])
            T = lcm_list(sorted({t for j, _ in cons for t in effective_periods(cfg, j)}))
            cand = GeneralSpec(q, T, tuple(cons))
        size = quotient_index(cfg, cand)[0]
        if best is None or size < best[0]:
            best = (size, cand)
    if best is None:
        raise OutOfFamily("no basis coordinate separates this element")
    return best[1]


def separator_for(cfg, r):
    if is_identity(r):
        raise IdentityInput("the identity has no separating quotient")
    if r.x:
        spec = CyclicSpec(_min_nondivisor(r.x))
    elif r.factors:
        k = max(abs(k) for _, k in r.factors)
        p = nextprime(k)               # k < p <= 2k by Bertrand
        lo = min(n for n, _ in r.factors)
        hi = max(n for n, _ in r.factors)
        m = 1
        while True:
            spec = LamplighterSpec(p, m)
            if lamplighter_image(r, spec) != (0, ()):
                break
            m += 1
            if m > hi - lo + 1:
                break
    else:
        spec = _fprime_spec(cfg, r)
    if in_subgroup(r, spec):
        raise AssertionError(f"separator {spec} does not exclude the element")
    return spec


# ---------------------------------------------------------------------------
# depth

def _seven_exact(cfg, r):
    """T q^{T+1} when r = a_p^d with a_p = b_r of prime order in a divisor-type config."""
    if r.x or r.factors or len(r.fprime.exps) != 1:
        return None
    i, d = r.fprime.exps[0]
    orders = []
    for g in cfg.gens:
        if g.substitution or g.lazy or g.order is None or not isprime(g.order):
            return None
        orders.append(g.order)
    if len(set(orders)) != len(orders):
        return None
    rules = [pr for pr in cfg.periods if pr.index == i]
    if len(rules) != 1:
        return None
    pr = rules[0]
    if pr.T != 2 * pr.r or pr.r % 2 == 0 or pr.d != 1:
        return None
    if any(p.T != 2 * p.r or p.d != 1 for p in cfg.periods):
        return None
    q = cfg.gen(i).order
    if d % q == 0:
        return None
    T = pr.T
    return T * q ** (T + 1)


@dataclass(frozen=True)
class Depth:
    lower: int
    upper: int | None
    exact: bool = False
    separator: object = None

    def as_json(self):
        if self.exact:
            return {"exact": str(self.lower)}
        return {"lower": str(self.lower), "upper": None if self.upper is None else str(self.upper)}


def depth_of(cfg, r, length=None):
    if is_identity(r):
        raise IdentityInput("depth is defined for nontrivial elements")
    ksum = sum(k for _, k in r.factors)
    if r.x % 2 or ksum % 2:
        spec = CyclicSpec(2) if r.x % 2 else LamplighterSpec(2, 1)
        return Depth(2, 2, True, spec)
    v = _seven_exact(cfg, r)
    spec = separator_for(cfg, r)
    if v is not None:
        return Depth(v, v, True, spec)
    upper = quotient_index(cfg, spec)[0]
    if length is not None and (r.x or r.factors):
        upper = min(upper, 16 * length ** 4)
    return Depth(2, upper, False, spec)


# ---------------------------------------------------------------------------
# profiles

def seed_elements(cfg, max_len):
    """Elements with known short witnesses: F_p^1 for odd p, via f_n_power."""
    out = []
    n = 1
    while 4 * n + 4 <= max_len:
        try:
            g, w = f_n_power(cfg, n, 1)
        except HorizonExceeded:
            break
        if not is_identity(g):
            out.append((g, len(w)))
        n += 2
    return out


def rfg_profile(cfg, radius, ball_cap=7, seeds=True):
    """n -> (lower, upper) for n = 1..radius.

    Elements of the ball up to ``ball_cap`` are enumerated completely, so
    the upper column is a true bound there.  Beyond the ball only seeded
    elements feed the lower column and the upper column is None.
    """
    R = min(radius, ball_cap)
    words = ball_words(cfg, R, cap=max(ball_cap, R))
    per = {}
    for g, w in words.items():
        if is_identity(g):
            continue
        d = depth_of(cfg, g, len(w))
        lo, hi = per.get(len(w), (1, 1))
        per[len(w)] = (max(lo, d.lower), max(hi, d.upper))
    extra = {}
    if seeds:
        for g, L in seed_elements(cfg, radius):
            d = depth_of(cfg, g, L)
            extra[L] = max(extra.get(L, 1), d.lower)
    table = {}
    lo = hi = 1
    for n in range(1, radius + 1):
        a, b = per.get(n, (1, 1))
        lo = max(lo, a, extra.get(n, 1))
        hi = max(hi, b)
        table[n] = (lo, hi if n <= R else None)
    return table


def product_profile(*tables):
    out = {}
    for n in sorted(set().union(*tables)):
        lo = max(t[n][0] for t in tables if n in t)
        ups = [t[n][1] for t in tables if n in t]
        out[n] = (lo, None if any(u is None for u in ups) else max(ups))
    return out


def profile_csv(table):
    lines = ["n,lower,upper"]
    for n, (lo, hi) in sorted(table.items()):
        lines.append(f"{n},{lo},{'' if hi is None else hi}")
    return "\n".join(lines) + "\n"
