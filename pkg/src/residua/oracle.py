"""Pointwise model of G_A inside H wr <s>, with H = A Wr Z.

This module never touches the reduced-form engine.  A word is multiplied
out symbolically: its value at s^k is an element of H, i.e. a Z-part (a
finitely supported vector over the free basis z_m) and an ordered list of
function atoms.  Atom values at a probe z are expanded into A through
abelian-base only.

Conventions:
  (phi1, s^x1)(phi2, s^x2) = (phi1 * (s^x1 . phi2), s^(x1+x2)),
  (s^x . phi)(s^k) = phi(s^(k+x));
  in H, (f1, z1)(f2, z2) = (f1 * (z1 . f2), z1 + z2) with (t . f)(w) = f(w + t);
  F(s^n) = z_n for even n and bar f_n for odd n,
  bar f_n(z) = prod_i a_{n-i}^{z_i}, tilde f_n(z) = a_n, f_{m,n}(z) = a_n^{z_m}.
"""

from dataclasses import dataclass, field

from .abelian import a_product, is_trivial
from .words import F, Fi, S, Si, as_word, s_shift

BAR, TILDE, FMN = "bar", "tilde", "fmn"


def _vadd(a, b, sign=1):
    out = dict(a)
    for i, e in b.items():
        v = out.get(i, 0) + sign * e
        if v:
            out[i] = v
        else:
            out.pop(i, None)
    return out


@dataclass(frozen=True)
class Atom:
    kind: str                 # BAR(n), TILDE(n) or FMN(m, n)
    n: int
    m: int = 0
    translation: tuple = ()   # sorted ((index, exp), ...)
    exponent: int = 1

    def amap_at(self, z):
        """Exponent map {a-index: exp} of this atom evaluated at probe z."""
        w = _vadd(z, dict(self.translation))
        e = self.exponent
        if self.kind == TILDE:
            return {self.n: e}
        if self.kind == FMN:
            c = w.get(self.m, 0)
            return {self.n: e * c} if c else {}
        out = {}
        for i, c in w.items():
            j = self.n - i
            out[j] = out.get(j, 0) + e * c
        return out


@dataclass(frozen=True)
class HValue:
    zpart: tuple = ()                     # sorted ((m, exp), ...)
    atoms: tuple = ()                     # application order

    def z(self):
        return dict(self.zpart)

    def __mul__(self, other):
        z1 = self.z()
        moved = tuple(
            Atom(a.kind, a.n, a.m, tuple(sorted(_vadd(z1, dict(a.translation)).items())), a.exponent)
            for a in other.atoms
        )
        return HValue(tuple(sorted(_vadd(z1, other.z()).items())), self.atoms + moved)

    def inv(self):
        # (f, z)^-1 = ((-z) . f^-1, -z)
        mz = {i: -e for i, e in self.zpart}
        atoms = tuple(
            Atom(a.kind, a.n, a.m, tuple(sorted(_vadd(mz, dict(a.translation)).items())), -a.exponent)
            for a in reversed(self.atoms)
        )
        return HValue(tuple(sorted(mz.items())), atoms)

    def amap_at(self, z):
        out = {}
        for a in self.atoms:
            for j, e in a.amap_at(z).items():
                out[j] = out.get(j, 0) + e
        return {j: e for j, e in out.items() if e}

    def value_at(self, cfg, z):
        return self.z(), a_product(cfg, self.amap_at(z))


def zgen(m, e=1):
    return HValue(((m, e),) if e else ())


def bar(n, e=1):
    return HValue((), (Atom(BAR, n, 0, (), e),))


def tilde(n, e=1):
    return HValue((), (Atom(TILDE, n, 0, (), e),))


def fmn(m, n, e=1):
    return HValue((), (Atom(FMN, n, m, (), e),))


def hpow(h, k):
    out = HValue()
    base = h if k >= 0 else h.inv()
    for _ in range(abs(k)):
        out = out * base
    return out


def hcomm(a, b):
    return a * b * a.inv() * b.inv()


def h_equal(cfg, h1, h2, probes):
    """Pointwise equality of two H values on a set of probes."""
    if h1.zpart != h2.zpart:
        return False
    for z in probes:
        diff = _vadd(h1.amap_at(z), h2.amap_at(z), -1)
        if not is_trivial(a_product(cfg, diff)):
            return False
    return True


def word_at(w, k):
    """H-value of the word at s^k as (zpart dict, atoms [(n, translation dict, e)]).

    Letters are applied left to right; a letter at prefix s-shift x reads
    F at s^(k + x).
    """
    z = {}
    atoms = []
    x = 0
    for a in w:
        if a == S:
            x += 1
        elif a == Si:
            x -= 1
        else:
            e = 1 if a == F else -1
            n = k + x
            if n % 2 == 0:
                v = z.get(n, 0) + e
                if v:
                    z[n] = v
                else:
                    del z[n]
            else:
                if atoms and atoms[-1][0] == n and atoms[-1][1] == z:
                    atoms[-1] = (n, atoms[-1][1], atoms[-1][2] + e)
                else:
                    atoms.append((n, dict(z), e))
    return z, atoms


def word_hvalue(w, k):
    z, atoms = word_at(as_word(w), k)
    return HValue(tuple(sorted(z.items())),
                  tuple(Atom(BAR, n, 0, tuple(sorted(t.items())), e) for n, t, e in atoms if e))


def eval_at(cfg, w, k, z=None):
    """(Z-part, A-value at probe z) of the H-value of w at s^k."""
    w = as_word(w)
    zp, atoms = word_at(w, k)
    probe = dict(z or {})
    amap = {}
    for n, t, e in atoms:
        for i, c in _vadd(probe, t).items():
            j = n - i
            amap[j] = amap.get(j, 0) + e * c
    return zp, a_product(cfg, {j: e for j, e in amap.items() if e})


def s_exponent(w):
    return s_shift(as_word(w))[0]


class TestGrid:
    """Shifts ks and probes z; the default probe set is built on first use."""

    def __init__(self, ks, probes=None, reach=None):
        self.ks = tuple(ks)
        self._probes = None if probes is None else tuple(probes)
        if reach is None:
            reach = max((abs(m) for z in self.probes for m in z), default=0)
        self.reach = reach                # largest |m| over probe supports

    @property
    def probes(self):
        if self._probes is None:
            R = self.reach
            probes = [{}]
            for m in range(-R, R + 1):
                for e in (-2, -1, 1, 2):
                    probes.append({m: e})
            for m in range(-R, R + 1):
                for m2 in range(m + 1, R + 1):
                    probes.append({m: 1, m2: 1})
            self._probes = tuple(probes)
        return self._probes

    @staticmethod
    def default(w1, w2):
        w1, w2 = as_word(w1), as_word(w2)
        L = max(len(w1), len(w2))
        S_ = max(s_shift(w1)[1], s_shift(w2)[1])
        R = L + S_
        return TestGrid(range(-R, R + 1), reach=R)

    @property
    def radius(self):
        return max(abs(k) for k in self.ks)


@dataclass(frozen=True)
class Equal:
    checked: int = 0


@dataclass(frozen=True)
class Distinguished:
    k: int
    z: dict = field(hash=False)
    reason: str = ""


def _affine_parts(atoms):
    """V(0) map and the base map D of an atom list.

    The value at probe z is V(0) + sum_m z_m D_m, where D_m is D shifted by
    -m (a bar atom at n contributes a_{n-m} to D_m).
    """
    v0 = {}
    d = {}
    for n, t, e in atoms:
        d[n] = d.get(n, 0) + e
        for i, c in t.items():
            j = n - i
            v0[j] = v0.get(j, 0) + e * c
    return v0, d


def _raw_diff(m1, m2):
    diff = dict(m1)
    for j, e in m2.items():
        diff[j] = diff.get(j, 0) - e
    return {j: e for j, e in diff.items() if e}


def _trivial_diff(cfg, m1, m2):
    diff = dict(m1)
    for j, e in m2.items():
        diff[j] = diff.get(j, 0) - e
    return is_trivial(a_product(cfg, {j: e for j, e in diff.items() if e}))


def _probe_value_map(atoms, z):
    amap = {}
    for n, t, e in atoms:
        for i, c in _vadd(z, t).items():
            j = n - i
            amap[j] = amap.get(j, 0) + e * c
    return amap


def oracle_compare(cfg, w1, w2, grid=None, exhaustive=False, cache=None):
    """Compare two words pointwise on a grid.

    The A-value at probe z is additive in z: V(z) = V(0) + sum_m z_m D_m.
    The fast path therefore checks V(0) and every D_m with |m| within the
    probe radius, which decides agreement on the whole probe set at once.
    ``exhaustive`` evaluates every probe literally instead.  ``cache`` may
    be a dict used to memoize the second word's per-k evaluation.
    """
    w1, w2 = as_word(w1), as_word(w2)
    if grid is None:
        grid = TestGrid.default(w1, w2)
    R = grid.reach
    ms = range(-R, R + 1)
    if s_shift(w1)[0] != s_shift(w2)[0]:
        return Distinguished(0, {}, "s-part")
    checked = 1
    for k in grid.ks:
        z1, at1 = word_at(w1, k)
        key = (w2, k)
        if cache is not None and key in cache:
            z2, at2, aff2 = cache[key]
        else:
            z2, at2 = word_at(w2, k)
            aff2 = _affine_parts(at2)
            if cache is not None:
                cache[key] = (z2, at2, aff2)
        if z1 != z2:
            return Distinguished(k, {}, "z-part")
        if exhaustive:
            for z in grid.probes:
                checked += 1
                if not _trivial_diff(cfg, _probe_value_map(at1, z), _probe_value_map(at2, z)):
                    return Distinguished(k, dict(z), "a-value")
            continue
        v1, d1 = _affine_parts(at1)
        v2, d2 = aff2
        checked += 1
        if not _trivial_diff(cfg, v1, v2):
            return Distinguished(k, {}, "a-value")
        delta = _raw_diff(d1, d2)
        if not delta:
            checked += len(ms)
            continue
        for m in ms:
            checked += 1
            shifted = {n - m: e for n, e in delta.items()}
            if not is_trivial(a_product(cfg, shifted)):
                # given V(0) agrees, the probe z_m separates the words
                return Distinguished(k, {m: 1}, "a-value")
    return Equal(checked)


def is_equal(result):
    return isinstance(result, Equal)
