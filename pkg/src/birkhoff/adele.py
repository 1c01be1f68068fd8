"""Adelic reduction over F = F_q(t).

An adele is stored by its finitely many non-identity components, one per
degree-1 place (t - a, or infinity).  Finite places are peeled off one at a
time with the local reduction, pushing the correction into the remaining
components, and the last step is the local reduction at infinity with
Gamma = GL(n, F_q[t]).  All arithmetic is exact in F_q(t).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bundle import closed_form_h0, rank_mod_p
from .errors import ConfigError, FieldMismatch, SingularInput, SizeMismatch, WitnessCheckFailed
from .ff import FieldSpec
from .matgl import (
    RATIONAL,
    Cocharacter,
    MatG,
    adjugate,
    det,
    identity,
    mat_mul,
    random_k,
)
from .reduce import local_reduce
from .series import LaurentPoly, Place, RatFun, _poly_divmod

__all__ = [
    "Place",
    "AdeleMat",
    "GlobalWitness",
    "peel_place",
    "global_reduce",
    "verify_global_witness",
    "global_h0",
    "random_adele",
]


def _rational_identity(n: int, f: FieldSpec) -> MatG:
    return identity(n, f, RATIONAL)


def _rational_inverse(A: MatG) -> MatG:
    d = det(A)
    if d.is_zero():
        raise SingularInput("matrix is singular")
    dinv = d.inverse()
    return adjugate(A).map(lambda x: x * dinv)


def _pi_power_matrix(eta: Sequence[int], place: Place, f: FieldSpec) -> MatG:
    pi = place.uniformizer(f)
    n = len(eta)
    zero = RatFun.zero(f)
    return MatG([[pi ** eta[i] if i == j else zero for j in range(n)] for i in range(n)], f)


def _integral_at(A: MatG, place: Place) -> bool:
    return all(x.is_zero() or x.val_at(place) >= 0 for x in A.entries())


def _in_K_at(A: MatG, place: Place) -> bool:
    if not _integral_at(A, place):
        return False
    d = det(A)
    return not d.is_zero() and d.val_at(place) == 0


@dataclass
class AdeleMat:
    """(g_v)_v with g_v = identity outside ``components``."""

    field: FieldSpec
    n: int
    components: dict[Place, MatG] = field(default_factory=dict)

    def __post_init__(self):
        comps = {}
        for v, g in self.components.items():
            if not isinstance(v, Place):
                raise ConfigError(f"not a place: {v!r}")
            if v.a is not None and v.a.field != self.field:
                raise FieldMismatch("place lives over another field")
            if g.n != self.n:
                raise SizeMismatch(f"component at {v} is {g.n}x{g.n}, expected {self.n}")
            if g.flavor != RATIONAL:
                g = g.map(lambda x: RatFun(x) if isinstance(x, LaurentPoly) else x)
            if g.field != self.field:
                raise FieldMismatch("component lives over another field")
            if det(g).is_zero():
                raise SingularInput(f"component at {v} is singular")
            comps[v] = MatG(g.rows, self.field, RATIONAL)
        self.components = comps

    @property
    def support(self) -> list[Place]:
        return sorted(self.components, key=Place.sort_key)

    @property
    def finite_support(self) -> list[Place]:
        return [v for v in self.support if not v.is_infinite]

    def component(self, v: Place) -> MatG:
        return self.components.get(v, _rational_identity(self.n, self.field))

    def left_multiply(self, L: MatG, places: Iterable[Place]) -> "AdeleMat":
        comps = dict(self.components)
        for v in places:
            comps[v] = mat_mul(L, self.component(v))
        return AdeleMat(self.field, self.n, comps)


def peel_place(A: AdeleMat, v: Place, *, _record: list | None = None) -> AdeleMat:
    """Clear the component at the finite place v.

    Reduces g_v = gamma pi_v^eta k, then multiplies every remaining component
    (infinity included) on the left by pi_v^-eta gamma^-1, an element of
    GL(n, F) that is integral at every other finite place.
    """
    if v.is_infinite:
        raise ConfigError("peel_place takes a finite place; infinity is reduced last")
    if v not in A.components:
        raise ConfigError(f"place {v} is not in the support")
    g = A.components[v]
    w = local_reduce(g, place=v)
    L = mat_mul(_pi_power_matrix([-e for e in w.eta], v, A.field), _rational_inverse(w.gamma))
    new_v = mat_mul(L, g)
    if not _in_K_at(new_v, v):
        raise WitnessCheckFailed(f"peeling did not make the component at {v} integral")
    others = [u for u in A.components if u != v]
    if Place.infinity() not in others:
        others.append(Place.infinity())
    out = A.left_multiply(L, others)
    del out.components[v]
    if _record is not None:
        _record.append((v, L, new_v))
    return out


@dataclass
class GlobalWitness:
    """g_v = gamma * rep_v * k_v with rep_inf = (1/t)^eta and rep_v = 1 elsewhere."""

    gamma: MatG
    eta: Cocharacter
    k: dict[Place, MatG]


def global_reduce(A: AdeleMat, order: Sequence[Place] | None = None, witness: bool = False):
    """Antidominant eta with A in GL(n, F) (1/t)^eta K.

    Finite places are peeled in ascending order of a unless ``order`` is
    given.  With ``witness=True`` returns (eta, GlobalWitness).
    """
    fin = A.finite_support
    if order is None:
        order = fin
    elif sorted(order, key=Place.sort_key) != fin:
        raise ConfigError("peel order must list each finite support place once")
    record: list = []
    cur = A
    for v in order:
        cur = peel_place(cur, v, _record=record)
    inf = Place.infinity()
    w = local_reduce(cur.component(inf), place=inf)
    if not witness:
        return w.eta
    f, n = A.field, A.n
    Ltot = _rational_identity(n, f)
    for _, L, _ in record:
        Ltot = mat_mul(L, Ltot)
    gamma = mat_mul(_rational_inverse(Ltot), w.gamma)
    ginv = _rational_inverse(gamma)
    ks = {v: mat_mul(ginv, A.components[v]) for v in fin}
    ks[inf] = w.k
    gw = GlobalWitness(gamma, w.eta, ks)
    if not verify_global_witness(A, gw):
        raise WitnessCheckFailed("global witness failed its exact check")
    return w.eta, gw


def _strip_places(p: LaurentPoly, places: Sequence[Place]) -> LaurentPoly:
    """Remove every factor (t - a) for a in ``places``."""
    f = p.field
    for v in places:
        lin = LaurentPoly.from_terms(f, {0: -v.a, 1: 1})
        while p.degree >= 1:
            q, r = _poly_divmod(p, lin)
            if not r.is_zero():
                break
            p = q
    return p


def _unit_outside(x: RatFun, places: Sequence[Place]) -> bool:
    return _strip_places(x.num, places).is_constant() and _strip_places(x.den, places).is_constant()


def _integral_outside(x: RatFun, places: Sequence[Place]) -> bool:
    return x.is_zero() or _strip_places(x.den, places).is_constant()


def verify_global_witness(A: AdeleMat, w: GlobalWitness) -> bool:
    """Exact check of A = gamma * rep * k over all places."""
    f, n = A.field, A.n
    inf = Place.infinity()
    fin = A.finite_support
    if not w.eta.is_antidominant() or len(w.eta) != n:
        return False
    dg = det(w.gamma)
    if dg.is_zero():
        return False
    # at unlisted finite places the component is 1, so gamma must lie in K_v there
    ginv = _rational_inverse(w.gamma)
    if not all(_integral_outside(x, fin) for x in ginv.entries()) or not _unit_outside(dg, fin):
        return False
    for v in fin:
        k = w.k.get(v)
        if k is None or not _in_K_at(k, v) or mat_mul(w.gamma, k) != A.component(v):
            return False
    k = w.k.get(inf)
    if k is None or not _in_K_at(k, inf):
        return False
    rep = _pi_power_matrix(list(w.eta), inf, f)
    return mat_mul(mat_mul(w.gamma, rep), k) == A.component(inf)


# --- global sections oracle ---------------------------------------------------

def _coeff_window(x: RatFun, v: Place, lo: int, hi: int, m: int) -> np.ndarray:
    """Coefficients of the expansion of x at v for exponents lo..hi-1."""
    out = np.zeros((max(0, hi - lo), m), dtype=np.int64)
    if x.is_zero() or hi <= lo:
        return out
    s = x.expand(v, hi)
    for e in range(max(lo, s.start), min(hi, s.start + len(s.coeffs))):
        out[e - lo] = s.coeffs[e - s.start]
    return out


def _neg_exp(A: MatG, v: Place) -> int:
    return int(max(-x.val_at(v) for x in A.entries() if not x.is_zero()))


def global_h0(A: AdeleMat, m: int) -> int:
    """dim_Fq {f in F^n : f g_v integral at finite v, val_inf(f g_inf) >= -m}."""
    f, n = A.field, A.n
    inf = Place.infinity()
    fin = A.finite_support
    # pole orders of f at each finite support place: f = (f g_v) g_v^-1
    d_at = {v: max(0, _neg_exp(_rational_inverse(A.components[v]), v)) for v in fin}
    D = RatFun.one(f)
    for v in fin:
        D = D * (RatFun.t(f) - RatFun.constant(f, v.a)) ** d_at[v]
    degD = int(D.num.degree)
    ginf = A.component(inf)
    deg_h = m + _neg_exp(_rational_inverse(ginf), inf) + degD
    if deg_h < 0:
        return 0
    unknowns = [(i, d) for i in range(n) for d in range(deg_h + 1)]
    tpow = [RatFun.t(f) ** d / D for d in range(deg_h + 1)]
    blocks = []
    for v in fin + [inf]:
        g = A.component(v)
        if v.is_infinite:
            hi = -m
            lo = min(int(tp.val_at(v)) for tp in tpow) + min(int(x.val_at(v)) for x in g.entries() if not x.is_zero())
        else:
            hi = 0
            lo = -d_at[v] + min(int(x.val_at(v)) for x in g.entries() if not x.is_zero())
        if hi <= lo:
            continue
        rows = []
        for i, d in unknowns:
            rows.append(np.concatenate([_coeff_window(tpow[d] * g.rows[i][j], v, lo, hi, f.m) for j in range(n)]))
        blocks.append(np.stack(rows))
    if not blocks:
        return len(unknowns)
    M = np.concatenate(blocks, axis=1)  # (unknowns, constraints, m)
    if f.m == 1:
        return len(unknowns) - rank_mod_p(M[:, :, 0], f.p)
    big = f.mul_matrices(M).transpose(0, 2, 1, 3).reshape(len(unknowns) * f.m, -1)
    return len(unknowns) - rank_mod_p(big, f.p) // f.m


def global_h0_closed_form(eta: Iterable[int], m: int) -> int:
    return closed_form_h0(eta, m)


# --- seeded instances ----------------------------------------------------------

def _random_global_gamma(n: int, f: FieldSpec, places: Sequence[Place], rng: random.Random, factors: int) -> MatG:
    """Product of elementary, permutation and diagonal factors in GL(n, F_q[t, 1/(t-a)])."""
    t = RatFun.t(f)
    units = [RatFun.one(f) / (t - RatFun.constant(f, v.a)) for v in places]
    gens = [t] + units + [t - RatFun.constant(f, v.a) for v in places]
    zero, one = RatFun.zero(f), RatFun.one(f)
    G = _rational_identity(n, f)
    for _ in range(factors):
        kind = rng.randrange(3)
        if n == 1:
            kind = 2
        if kind == 0:
            i, j = rng.sample(range(n), 2)
            x = RatFun.constant(f, f.random(rng))
            for _ in range(rng.randint(1, 2)):
                x = x * rng.choice(gens) + RatFun.constant(f, f.random(rng))
            E = [[one if r == c else (x if (r, c) == (i, j) else zero) for c in range(n)] for r in range(n)]
        elif kind == 1:
            perm = list(range(n))
            rng.shuffle(perm)
            E = [[one if perm[r] == c else zero for c in range(n)] for r in range(n)]
        else:
            d = []
            for _ in range(n):
                c = RatFun.constant(f, f.random(rng, nonzero=True))
                if places and rng.random() < 0.5:
                    v = rng.choice(places)
                    c = c * (t - RatFun.constant(f, v.a)) ** rng.choice([-1, 1])
                d.append(c)
            E = [[d[r] if r == c else zero for c in range(n)] for r in range(n)]
        G = mat_mul(G, MatG(E, f))
    return G


def random_adele(
    n: int,
    f: FieldSpec,
    eta: Sequence[int],
    places: Sequence[Place],
    seed,
    degree_bound: int = 2,
    factors: int = 4,
) -> AdeleMat:
    """gamma_F * (1/t)^eta * k with gamma_F in GL(n, F) and k in K, seeded.

    ``places`` are the finite support places; infinity is always present.
    """
    rng = random.Random(seed)
    gamma = _random_global_gamma(n, f, list(places), rng, factors)
    comps = {}
    for v in list(places) + [Place.infinity()]:
        kv = random_k(n, f, rng.randrange(2**32), degree_bound, factors).map(v.lift)
        g = mat_mul(gamma, kv)
        if v.is_infinite:
            g = mat_mul(mat_mul(gamma, _pi_power_matrix(eta, v, f)), kv)
        comps[v] = g
    return AdeleMat(f, n, comps)
