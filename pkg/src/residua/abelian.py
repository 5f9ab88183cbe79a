"""Abelian groups B = <b_1, b_2, ...> and A = <a_n> <= B.

A GroupConfig is a finite truncation of an infinitely presented abelian
group: generator orders, acyclic substitution relators, and period rules
that say which b_i occur in which a_n.  AbelianElement values are always
stored in normal form.
"""

import json
import math
from dataclasses import dataclass, field
from functools import reduce as _fold

from sympy import divisors

from .errors import (
    ConfigError,
    ConfigMismatch,
    CyclicSubstitution,
    HorizonExceeded,
    SubstitutedGenerator,
)
from .machines import HALTS

NORMAL_FORMS = ("nu", "nu1", "nu2")


@dataclass(frozen=True)
class GenSpec:
    index: int
    order: int | None = None          # None means infinite order
    substitution: tuple = ()          # ((target, exp), ...); empty if none
    machine: int | None = None        # lazy order source

    @property
    def lazy(self):
        return self.machine is not None


@dataclass(frozen=True)
class PeriodRule:
    index: int
    T: int
    r: int
    d: int = 1


@dataclass(frozen=True)
class Known:
    order: int


@dataclass(frozen=True)
class Provisional:
    order: int = 3


class Verdict:
    IDENTITY = "Identity"
    NOT_IDENTITY = "NotIdentity"
    UNKNOWN = "Unknown"


@dataclass(frozen=True, eq=False)
class GroupConfig:
    gens: tuple                       # tuple of GenSpec sorted by index
    periods: tuple                    # tuple of PeriodRule
    normal_form: str = "nu"
    n_max: int = 64
    name: str = ""
    meta: tuple = ()                  # sorted (key, json-text) pairs
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        _validate(self)
        rules, order = _build_rules(self)
        self._cache["rules"] = rules
        self._cache["topo"] = order
        div, other = {}, []
        for pr in self.periods:
            if pr.T == 2 * pr.r and pr.r % 2 == 1:
                div.setdefault(pr.r, []).append((pr.index, pr.d))
            else:
                other.append(pr)
        self._cache["div"] = div
        self._cache["other"] = tuple(other)
        self._cache["a"] = {}
        self._cache["gen"] = {g.index: g for g in self.gens}
        # a declared order must be implied by the rewriting rules, otherwise
        # normal forms would live in a larger group than the presentation
        for g in self.gens:
            if g.order is not None and not g.lazy and normalize(self, {g.index: g.order}).exps:
                raise ConfigError(f"b_{g.index}^{g.order} is not trivial under the substitution rules")

    # equality is structural, not by cache
    def _key(self):
        return (self.gens, self.periods, self.normal_form, self.n_max, self.name, self.meta)

    def __eq__(self, other):
        return isinstance(other, GroupConfig) and (self is other or self._key() == other._key())

    def __hash__(self):
        return hash(self._key())

    def gen(self, i):
        return self._cache["gen"].get(i)

    def meta_get(self, key, default=None):
        for k, v in self.meta:
            if k == key:
                return json.loads(v)
        return default

    @property
    def identity(self):
        return AbelianElement((), self)

    def b(self, i, e=1):
        return normalize(self, {i: e})


def make_meta(d):
    return tuple(sorted((k, json.dumps(v, sort_keys=True)) for k, v in d.items()))


def _validate(cfg):
    if cfg.normal_form not in NORMAL_FORMS:
        raise ConfigError(f"unknown normal form {cfg.normal_form!r}")
    seen = set()
    for g in cfg.gens:
        if g.index in seen:
            raise ConfigError(f"duplicate generator {g.index}")
        seen.add(g.index)
        if g.index < 1 or g.index > cfg.n_max:
            raise ConfigError(f"generator index {g.index} outside 1..n_max")
        if g.order is not None and g.order < 1:
            raise ConfigError(f"generator {g.index}: order must be positive")
        for t, _ in g.substitution:
            if t == g.index:
                raise ConfigError(f"generator {g.index} substitutes itself")
            if t not in seen and t not in {h.index for h in cfg.gens}:
                raise ConfigError(f"substitution target {t} is not a generator")
    for pr in cfg.periods:
        if pr.T <= 0 or pr.T % 2:
            raise ConfigError(f"period rule for b_{pr.index}: T must be even")
        if not 0 <= pr.r <= pr.T // 2:
            raise ConfigError(f"period rule for b_{pr.index}: need 0 <= r <= T/2")
        if pr.index not in seen:
            raise ConfigError(f"period rule references unknown generator {pr.index}")


def _two_target(g):
    """Return (u, v, c) when the substitution has the shape b_u^c b_v^c."""
    s = g.substitution
    if len(s) == 2 and s[0][1] == s[1][1] and s[0][1] > 0:
        return s[0][0], s[1][0], s[0][1]
    return None


def _build_rules(cfg):
    """Rewriting rules b_i^m -> rhs and a processing order.

    Every rule lowers the exponent of b_i into [0, m) and pushes the
    quotient onto the right hand side.  Rules are applied sources first,
    so the dependency graph has to be acyclic.
    """
    rules = {}
    for g in cfg.gens:
        if g.substitution:
            tt = _two_target(g)
            if cfg.normal_form in ("nu1", "nu2") and tt is not None:
                u, v, c = tt
                capped, other = (u, v) if cfg.normal_form == "nu1" else (v, u)
                # keep b_j; capped^c = b_j * other^-c
                rules[capped] = (c, {g.index: 1, other: -c})
                if g.order is not None:
                    rules.setdefault(g.index, (g.order, {}))
                continue
            rules[g.index] = (1, dict(g.substitution))
        elif g.order is not None and not g.lazy:
            rules.setdefault(g.index, (g.order, {}))
    # generators capped by a two-target rule still need their own order
    # applied after the cap has pushed everything outwards; that happens
    # naturally because the cap rule replaced the plain order rule.
    # Kahn's algorithm over edges i -> targets.
    indeg = {i: 0 for i in rules}
    for i, (_, rhs) in rules.items():
        for t in rhs:
            if t in indeg:
                indeg[t] += 1
    ready = sorted(i for i, d in indeg.items() if d == 0)
    topo = []
    while ready:
        i = ready.pop(0)
        topo.append(i)
        for t in sorted(rules[i][1]):
            if t in indeg:
                indeg[t] -= 1
                if indeg[t] == 0:
                    ready.append(t)
        ready.sort()
    if len(topo) != len(rules):
        stuck = sorted(i for i, d in indeg.items() if d > 0)
        raise CyclicSubstitution(f"substitution cycle among generators {stuck}")
    return rules, tuple(topo)


@dataclass(frozen=True)
class AbelianElement:
    exps: tuple                       # sorted ((index, exp), ...), exp != 0
    cfg: GroupConfig = field(compare=False, hash=False, repr=False)

    def as_dict(self):
        return dict(self.exps)

    def __bool__(self):
        return bool(self.exps)

    def __str__(self):
        if not self.exps:
            return "1"
        return "*".join(f"b{i}" if e == 1 else f"b{i}^{e}" for i, e in self.exps)


def normalize(cfg, raw):
    """Normal form of the product of b_i^{raw[i]}."""
    m = {i: e for i, e in raw.items() if e}
    for i in m:
        if i < 1 or i > cfg.n_max:
            raise HorizonExceeded(f"basis index {i} beyond n_max={cfg.n_max}")
        if cfg.gen(i) is None:
            raise ConfigError(f"b_{i} is not a generator of this config")
    rules = cfg._cache["rules"]
    if m:
        for i in cfg._cache["topo"]:
            e = m.get(i)
            if not e:
                continue
            mod, rhs = rules[i]
            qt, rem = divmod(e, mod)
            if rem:
                m[i] = rem
            else:
                del m[i]
            if qt:
                for t, c in rhs.items():
                    m[t] = m.get(t, 0) + qt * c
    return AbelianElement(tuple(sorted((i, e) for i, e in m.items() if e)), cfg)


def combine(e1, e2, sign=1):
    if e1.cfg is not e2.cfg and e1.cfg != e2.cfg:
        raise ConfigMismatch("elements belong to different configs")
    m = dict(e1.exps)
    for i, e in e2.exps:
        m[i] = m.get(i, 0) + sign * e
    return normalize(e1.cfg, m)


def power(e, k):
    return normalize(e.cfg, {i: k * x for i, x in e.exps})


def invert(e):
    return combine(e.cfg.identity, e, -1)


def coord(e, r):
    g = e.cfg.gen(r)
    rule = e.cfg._cache["rules"].get(r)
    if g is not None and rule is not None and rule[0] == 1 and rule[1]:
        raise SubstitutedGenerator(f"b_{r} is eliminated by substitution")
    if g is None and r > e.cfg.n_max:
        raise HorizonExceeded(f"basis index {r} beyond n_max")
    return dict(e.exps).get(r, 0)


def is_trivial(e):
    return not e.exps


def expand_a_raw(cfg, n):
    """Exponent map of a_n before normalization (cached)."""
    n = abs(n)
    cache = cfg._cache["a"]
    hit = cache.get(n)
    if hit is not None:
        return hit
    if n % 2 == 0:
        return {}                 # a_{2i} = 1 needs no period data
    if n > cfg.n_max:
        raise HorizonExceeded(f"a_{n} needs period data beyond n_max={cfg.n_max}")
    raw = {}
    if n % 2:
        div = cfg._cache["div"]
        if len(div) < 64:
            cands = [r for r in div if n % r == 0]
        else:
            cands = [r for r in divisors(n) if r in div]
        for r in cands:
            for i, d in div[r]:
                raw[i] = raw.get(i, 0) + d
        for pr in cfg._cache["other"]:
            t = n % pr.T
            if t == pr.r % pr.T or t == (-pr.r) % pr.T:
                raw[pr.index] = raw.get(pr.index, 0) + pr.d
    raw = {i: e for i, e in raw.items() if e}
    cache[n] = raw
    return raw


def expand_a(cfg, n):
    key = ("an", abs(n))
    hit = cfg._cache.get(key)
    if hit is None:
        hit = normalize(cfg, expand_a_raw(cfg, n))
        cfg._cache[key] = hit
    return hit


def a_product(cfg, amap):
    """Normalized product of a_n^{amap[n]}."""
    raw = {}
    for n, k in amap.items():
        if not k:
            continue
        for i, d in expand_a_raw(cfg, n).items():
            raw[i] = raw.get(i, 0) + k * d
    return normalize(cfg, raw)


# ---------------------------------------------------------------------------
# lazy orders

def _smallest_prime_at_least(n):
    from sympy import nextprime, isprime
    return n if isprime(n) else nextprime(n)


def order_probe(cfg, i, budget, cache=HALTS):
    g = cfg.gen(i)
    if g is None or not g.lazy:
        from .errors import UnknownMachine
        raise UnknownMachine(f"b_{i} has no lazy order source")
    t = cache.halting_time(g.machine, budget)
    if t is None:
        return Provisional(3)
    return Known(_smallest_prime_at_least(max(t, 3)))


def probe_term(cfg, i, n, budget, cache=HALTS):
    """Decide whether b_i^n is trivial, co-semi-decidably for lazy b_i."""
    if n == 0:
        return Verdict.IDENTITY
    g = cfg.gen(i)
    if not g.lazy:
        e = normalize(cfg, {i: n})
        return Verdict.IDENTITY if is_trivial(e) else Verdict.NOT_IDENTITY
    if n % 3 == 0:
        t = cache.halting_time(g.machine, budget)
        if t is None:
            # the real procedure keeps running; within budget we cannot tell
            return Verdict.UNKNOWN
    else:
        steps = abs(n)
        t = cache.halting_time(g.machine, min(steps, budget))
        if t is None:
            if steps <= budget:
                # order is 3 or a prime above |n|: neither divides n
                return Verdict.NOT_IDENTITY
            return Verdict.UNKNOWN
    p = _smallest_prime_at_least(max(t, 3))
    return Verdict.IDENTITY if n % p == 0 else Verdict.NOT_IDENTITY


def probe_trivial(cfg, e, budget, cache=HALTS):
    """Co-semi-decision for an element given as an exponent map or AbelianElement."""
    items = e.exps if isinstance(e, AbelianElement) else sorted(e.items())
    verdicts = [probe_term(cfg, i, n, budget, cache) for i, n in items]
    if Verdict.NOT_IDENTITY in verdicts:
        return Verdict.NOT_IDENTITY
    if Verdict.UNKNOWN in verdicts:
        return Verdict.UNKNOWN
    return Verdict.IDENTITY


# ---------------------------------------------------------------------------
# derived data used by the quotient code

def effective_periods(cfg, r):
    """Periods T_i of all rules whose generator reaches coordinate r."""
    out = set()
    for pr in cfg.periods:
        reach = _reach(cfg, pr.index)
        if r in reach:
            out.add(pr.T)
    return sorted(out)


def _reach(cfg, i):
    key = ("reach", i)
    hit = cfg._cache.get(key)
    if hit is None:
        rules = cfg._cache["rules"]
        seen, stack = {i}, [i]
        while stack:
            j = stack.pop()
            if j in rules:
                for t in rules[j][1]:
                    if t not in seen:
                        seen.add(t)
                        stack.append(t)
        hit = frozenset(seen)
        cfg._cache[key] = hit
    return hit


def lcm_list(xs):
    return _fold(lambda a, b: a * b // math.gcd(a, b), xs, 1)


# ---------------------------------------------------------------------------
# JSON

def config_to_json(cfg):
    gens = []
    for g in cfg.gens:
        d = {"index": g.index, "order": "inf" if g.order is None else g.order}
        if g.substitution:
            d["substitution"] = [[t, e] for t, e in g.substitution]
        if g.machine is not None:
            d["machine"] = g.machine
        gens.append(d)
    out = {
        "generators": gens,
        "periods": [{"index": p.index, "T": p.T, "r": p.r, "d": p.d} for p in cfg.periods],
        "normal_form": cfg.normal_form,
        "n_max": cfg.n_max,
    }
    if cfg.name:
        out["name"] = cfg.name
    if cfg.meta:
        out["meta"] = {k: json.loads(v) for k, v in cfg.meta}
    return out


def config_from_json(data):
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    if "preset" in data:
        from .presets import preset
        return preset(data["preset"], **data.get("params", {}))
    try:
        gens = []
        for g in data["generators"]:
            order = g.get("order", "inf")
            if order == "inf":
                order = None
            elif isinstance(order, str) and order.isdigit():
                order = int(order)            # decimal strings as written by the CLI
            elif not isinstance(order, int) or isinstance(order, bool):
                raise ConfigError(f"bad order {order!r}")
            sub = tuple((int(t), int(e)) for t, e in g.get("substitution", []) or [])
            machine = g.get("machine")
            gens.append(GenSpec(int(g["index"]), order, sub, None if machine is None else int(machine)))
        periods = tuple(
            PeriodRule(int(p["index"]), int(p["T"]), int(p["r"]), int(p.get("d", 1)))
            for p in data.get("periods", [])
        )
        return GroupConfig(
            tuple(sorted(gens, key=lambda g: g.index)),
            periods,
            data.get("normal_form", "nu"),
            int(data["n_max"]),
            data.get("name", ""),
            make_meta(data.get("meta", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config: {exc}") from None


def load_config(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from None
    return config_from_json(data)


def element_to_json(e):
    return [[i, x] for i, x in e.exps]


def element_from_json(cfg, data):
    return normalize(cfg, {int(i): int(x) for i, x in data})
