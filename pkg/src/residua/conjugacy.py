"""Conjugacy in the conj9 family and in the top quotient Z wr Z.

The config carries a prime list P (1-based positions), an even gap K with
p_{3i+2} - p_{3i+1} = K at every paired position, and a toy set N of
multiples of 3 with b_{n_i} = b_{3i+1}^2 b_{3i+2}^2.  With
g = F^2 (F^{s^K})^2 and w = F^{s^{p_{3i+2}}} one has [g, w] = F_{p_{n_i}},
so w g w^-1 = g F_{p_{n_i}}^-1.
"""

import math
from dataclasses import dataclass

from .abelian import AbelianElement, expand_a, normalize
from .engine import f_n, f_n_power, invert, is_identity, multiply, reduce, word_of
from .errors import (
    ConfigError,
    ConfigTooShort,
    HorizonExceeded,
    IdentityAssertFailed,
    OutOfFamily,
)
from .words import F, S, as_word, comm, conj, to_text

RECURSIVE, RE = "recursive", "re"


# ---------------------------------------------------------------------------
# config access

@dataclass(frozen=True)
class ConjConfig:
    P: tuple
    N: tuple
    K: int

    def p(self, j):
        """The prime at 1-based position j."""
        if not 1 <= j <= len(self.P):
            raise HorizonExceeded(f"prime position {j} outside 1..{len(self.P)}")
        return self.P[j - 1]


def conj_config(cfg):
    P, N, K = cfg.meta_get("P"), cfg.meta_get("N"), cfg.meta_get("K")
    if P is None or N is None or K is None:
        raise OutOfFamily("config does not carry P, N and K")
    # meta written by the command line carries decimal strings
    cc = ConjConfig(tuple(int(p) for p in P), tuple(sorted(int(n) for n in N)), int(K))
    check_gaps(cc)
    return cc


def check_gaps(cc):
    if cc.K % 2:
        raise ConfigError("the gap K must be even")
    if any(n % 3 for n in cc.N):
        raise ConfigError("N must consist of multiples of 3")
    for i in range(1, len(cc.N) + 1):
        a, b = 3 * i + 1, 3 * i + 2
        if b > len(cc.P):
            raise ConfigError(f"pair ({a}, {b}) lies beyond the prime list")
        if cc.p(b) - cc.p(a) != cc.K:
            raise ConfigError(f"p_{b} - p_{a} = {cc.p(b) - cc.p(a)} differs from K = {cc.K}")


def _s(n):
    return (S,) * n


def base_word(K):
    """F^2 (F^{s^K})^2."""
    return (F, F) + conj((F, F), _s(K))


# ---------------------------------------------------------------------------
# the commutator identity

@dataclass(frozen=True)
class Witness:
    commutator: object        # ReducedForm of [g, w]
    target: object            # ReducedForm of F_{p_{n_i}}
    witness: tuple            # the word w
    n: int
    p: int


def conjugator_witness(cfg, i):
    cc = conj_config(cfg)
    if not 1 <= i <= len(cc.N):
        raise HorizonExceeded(f"i = {i} is not a configured index (1..{len(cc.N)})")
    n = cc.N[i - 1]
    p = cc.p(n)
    w = conj((F,), _s(cc.p(3 * i + 2)))
    g = base_word(cc.K)
    commutator = reduce(cfg, comm(g, w))
    target = f_n_power(cfg, p, 1)[0]
    if commutator != target:
        raise IdentityAssertFailed(f"[g, w] = {commutator} but F_{p} = {target}")
    G, W = reduce(cfg, g), reduce(cfg, w)
    lhs = multiply(multiply(W, G), invert(W))
    rhs = multiply(G, f_n(cfg, p, -1))
    if lhs != rhs:
        raise IdentityAssertFailed("w g w^-1 differs from g F_p^-1")
    return Witness(commutator, target, w, n, p)


# ---------------------------------------------------------------------------
# squares in A

@dataclass(frozen=True)
class SquaresResult:
    is_square: bool
    root: AbelianElement | None = None       # root^2 == e
    certificate: dict | None = None           # F_2-functional, 0 on 2A, 1 on e


def _relation_rows(cfg):
    """Relations m e_i - rhs of the rewriting rules that define normal forms."""
    if any(g.lazy for g in cfg.gens):
        raise OutOfFamily("the config has lazily determined orders")
    rows = []
    for i, (m, rhs) in sorted(cfg._cache["rules"].items()):
        row = {i: m}
        for t, c in rhs.items():
            row[t] = row.get(t, 0) - c
        rows.append(row)
    return rows


def squares_decompose(cfg, e):
    """Decide e in 2A.

    A = Z^gens / L with L spanned by the rewriting relations, so
    e is a square iff e mod 2 lies in the F_2-span of L mod 2.  On success
    the root is (e - l) / 2 for the matching l in L; on failure the
    certificate is a functional on F_2^gens vanishing on L but not on e.
    """
    if not isinstance(e, AbelianElement):
        e = normalize(cfg, dict(e))
    idx = sorted(g.index for g in cfg.gens)
    pos = {j: t for t, j in enumerate(idx)}
    rows = _relation_rows(cfg)

    def bits(v):
        out = 0
        for j, c in v.items():
            if c % 2:
                out |= 1 << pos[j]
        return out

    # elimination, tracking which relation rows were combined
    basis = {}                                  # pivot bit -> (vector, combo)
    for t, row in enumerate(rows):
        v, combo = bits(row), 1 << t
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = (v, combo)
                break
            bv, bc = basis[top]
            v, combo = v ^ bv, combo ^ bc
    v, combo = bits(dict(e.exps)), 0
    while v:
        top = v.bit_length() - 1
        if top not in basis:
            break
        bv, bc = basis[top]
        v, combo = v ^ bv, combo ^ bc
    if v:
        return SquaresResult(False, None, _dual(basis, v, idx))
    raw = dict(e.exps)
    for t, row in enumerate(rows):
        if combo >> t & 1:
            for j, c in row.items():
                raw[j] = raw.get(j, 0) - c
    half = {}
    for j, c in raw.items():
        assert c % 2 == 0
        if c:
            half[j] = c // 2
    root = normalize(cfg, half)
    if normalize(cfg, {j: 2 * c for j, c in root.exps}) != e:
        raise IdentityAssertFailed("square root check failed")
    return SquaresResult(True, root, None)


def _dual(basis, residue, idx):
    """A functional u with u(row) = 0 for all rows and u(e) = 1.

    Reduce the row space to reduced echelon form and clear every pivot bit
    from the residue of e; any bit j left over is a non-pivot, and u is the
    dual vector of j corrected on pivots.
    """
    piv = sorted(basis, reverse=True)
    vecs = {b: basis[b][0] for b in piv}
    for b in piv:
        for c in piv:
            if c != b and vecs[c] >> b & 1:
                vecs[c] ^= vecs[b]
    for b in piv:
        if residue >> b & 1:
            residue ^= vecs[b]
    j = residue.bit_length() - 1
    u = 1 << j
    for b in piv:
        if vecs[b] >> j & 1:
            u |= 1 << b
    return {idx[t]: 1 for t in range(len(idx)) if u >> t & 1}


def certificate_holds(cfg, e, cert):
    """Check a squares certificate: even on every relation, odd on e."""
    def ev(v):
        return sum(c for j, c in v.items() if cert.get(j)) % 2
    return all(ev(r) == 0 for r in _relation_rows(cfg)) and ev(dict(e.exps)) == 1


# ---------------------------------------------------------------------------
# the special conjugacy question

@dataclass(frozen=True)
class Decision:
    conjugate: bool | None        # None: pending in r.e. mode
    witness: tuple | None = None
    budget: int | None = None
    reason: str = ""


def _enumerate_n(cc, budget):
    """r.e. mode: one element of N per step, up to the budget."""
    for step, n in enumerate(cc.N):
        if step >= budget:
            return
        yield n


def special_conjugacy_decide(cfg, n, mode=RECURSIVE, budget=100):
    """Is g = F^2 (F^{s^K})^2 conjugate to g F_{p_n}^-1?"""
    cc = conj_config(cfg)
    if n % 3 or n <= 0:
        raise OutOfFamily(f"n = {n} is not a positive multiple of 3")
    p = cc.p(n)
    if mode == RE:
        members = list(_enumerate_n(cc, budget))
    elif mode == RECURSIVE:
        members = list(cc.N)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if n in members:
        i = cc.N.index(n) + 1
        wit = conjugator_witness(cfg, i)
        G = reduce(cfg, base_word(cc.K))
        W = reduce(cfg, wit.witness)
        if multiply(multiply(W, G), invert(W)) != multiply(G, f_n(cfg, p, -1)):
            raise IdentityAssertFailed("returned witness does not conjugate")
        return Decision(True, wit.witness, budget if mode == RE else None, f"n in N (i = {i})")
    sq = squares_decompose(cfg, expand_a(cfg, p))
    if mode == RE:
        return Decision(None, None, budget, "not enumerated within budget")
    if sq.is_square:
        # outside the shape the criterion covers; do not guess
        return Decision(None, None, None, "a_p is a square but n is not in N")
    return Decision(False, None, None, "a_p is not a product of squares")


# ---------------------------------------------------------------------------
# Z wr Z

def top_conjugacy(r1, r2):
    """Conjugacy of the images in Z wr Z."""
    if r1.x != r2.x:
        return False
    f1, f2 = dict(r1.factors), dict(r2.factors)
    if sum(f1.values()) != sum(f2.values()):
        return False
    x = abs(r1.x)
    if x == 0:
        if not f1 and not f2:
            return True
        if len(f1) != len(f2):
            return False
        t = min(f1) - min(f2)
        return all(f1.get(n + t) == k for n, k in f2.items())
    s1, s2 = _class_sums(f1, x), _class_sums(f2, x)
    return any(s1[t:] + s1[:t] == s2 for t in range(x))


def _class_sums(f, x):
    out = [0] * x
    for n, k in f.items():
        out[n % x] += k
    return out


# ---------------------------------------------------------------------------
# separability parameters

def _word_len(r, given):
    if given is not None:
        return given
    return len(word_of(r))


def nk_parameters(cfg, g1, g2, len1=None, len2=None):
    """Least k meeting the four conditions, with T_k = 4^k p_1 ... p_k.

    len1 / len2 are word lengths of g1 / g2; without them the length of
    a representing word is used, which only strengthens the condition.
    """
    cc = conj_config(cfg)
    if g1.x != g2.x or g1.factors != g2.factors:
        raise OutOfFamily("g1 and g2 must share s-part and F-part")
    if g1 == g2:
        raise OutOfFamily("g1 and g2 coincide")
    x = g1.x
    support = {j for j, _ in g1.fprime.exps} | {j for j, _ in g2.fprime.exps}
    r = 0
    for j in sorted(support):
        if x == 0 or all(x % cc.p(l) for l in range(1, min(j, len(cc.P)) + 1)):
            r = j
    ns = cc.N[:r]
    spread = 0
    if g1.factors:
        idx = [n for n, _ in g1.factors]
        spread = max(idx) - min(idx)
    lo = max([r, spread, *ns])
    L = max(_word_len(g1, len1), _word_len(g2, len2))
    T = 1
    for k in range(1, len(cc.P)):
        T = T * 4 * cc.p(k)
        if k <= lo or T <= L:
            continue
        if cc.p(k + 1) <= T:
            continue
        if x != 0 and (T // math.gcd(T, x)) % 4:
            continue
        return k, T
    raise ConfigTooShort(f"no k < {len(cc.P)} satisfies all conditions")


def describe_witness(wit):
    return {
        "n": str(wit.n),
        "p": str(wit.p),
        "witness": to_text(wit.witness),
        "commutator": str(wit.commutator),
        "target": str(wit.target),
        "verified": True,
    }


__all__ = [
    "ConjConfig", "conj_config", "check_gaps", "base_word", "Witness",
    "conjugator_witness", "SquaresResult", "squares_decompose",
    "certificate_holds", "Decision", "special_conjugacy_decide",
    "top_conjugacy", "nk_parameters", "describe_witness", "RECURSIVE", "RE",
]
