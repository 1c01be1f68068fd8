import random

import pytest

from birkhoff.adele import (
    AdeleMat,
    _random_global_gamma,
    global_h0,
    global_reduce,
    peel_place,
    random_adele,
    verify_global_witness,
)
from birkhoff.bundle import fit_profile
from birkhoff.errors import ConfigError, SingularInput
from birkhoff.ff import FieldSpec
from birkhoff.matgl import Cocharacter, MatG, det, exact_inverse, mat_mul, random_k
from birkhoff.reduce import local_reduce
from birkhoff.series import LaurentPoly, Place, RatFun
from birkhoff.suites import global_suite

F = FieldSpec(3)
t, one, zero = RatFun.t(F), RatFun.one(F), RatFun.zero(F)
INF = Place.infinity()
V0 = Place(F(0))


def rdiag(*xs):
    return MatG([[x if i == j else zero for j in range(len(xs))] for i, x in enumerate(xs)], F)


def in_K(A, v):
    return all(x.is_zero() or x.val_at(v) >= 0 for x in A.entries()) and det(A).val_at(v) == 0


def test_peel_example():
    A = AdeleMat(F, 2, {V0: rdiag(t, one), INF: rdiag(one, one)})
    B = peel_place(A, V0)
    assert list(B.components) == [INF]
    assert in_K(mat_mul(exact_inverse(rdiag(one, one / t)), B.components[INF]), INF)


def test_peel_identity_component():
    A = AdeleMat(F, 2, {V0: rdiag(one, one), INF: rdiag(t, one)})
    B = peel_place(A, V0)
    assert in_K(mat_mul(exact_inverse(A.components[INF]), B.components[INF]), INF)


def test_peel_requires_support():
    A = AdeleMat(F, 2, {INF: rdiag(t, one)})
    with pytest.raises(ConfigError):
        peel_place(A, V0)
    with pytest.raises(ConfigError):
        peel_place(A, INF)


def test_singular_component_rejected():
    with pytest.raises(SingularInput):
        AdeleMat(F, 2, {V0: rdiag(t, zero)})


def test_global_examples():
    assert global_reduce(AdeleMat(F, 3, {})) == Cocharacter((0, 0, 0))
    assert global_reduce(AdeleMat(F, 2, {INF: rdiag(t, one)})) == Cocharacter((-1, 0))
    A = AdeleMat(F, 2, {V0: rdiag(t, one)})
    eta, w = global_reduce(A, witness=True)
    assert eta == Cocharacter((0, 1))
    assert verify_global_witness(A, w)
    prof = {m: global_h0(A, m) for m in range(-4, 4)}
    assert fit_profile(prof, 2) == eta


def test_witness_rejects_wrong_eta():
    A = random_adele(2, F, (-1, 2), [V0, Place(F(2))], 5)
    eta, w = global_reduce(A, witness=True)
    w.eta = Cocharacter((-2, 3))
    assert not verify_global_witness(A, w)


def test_global_invariance():
    rng = random.Random(3)
    for c in range(12):
        f = FieldSpec(rng.choice([3, 5]))
        n = rng.randint(1, 3)
        places = [Place(a) for a in rng.sample(list(f.elements()), rng.randint(1, 2))]
        eta = sorted(rng.randint(-3, 3) for _ in range(n))
        A = random_adele(n, f, eta, places, c)
        M = _random_global_gamma(n, f, places, rng, 3)
        left = A.left_multiply(M, list(A.components))
        comps = {v: mat_mul(g, random_k(n, f, rng.getrandbits(32), 2, 3).map(v.lift)) for v, g in left.components.items()}
        B = AdeleMat(f, n, comps)
        assert global_reduce(B) == global_reduce(A) == Cocharacter(eta)


def test_global_section_oracle():
    rng = random.Random(4)
    for c in range(6):
        n = rng.randint(1, 2)
        places = [Place(a) for a in rng.sample(list(F.elements()), rng.randint(1, 2))]
        eta = sorted(rng.randint(-2, 2) for _ in range(n))
        A = random_adele(n, F, eta, places, c, degree_bound=1, factors=2)
        prof = {m: global_h0(A, m) for m in range(-4, 4)}
        assert fit_profile(prof, n, sum(eta)) == Cocharacter(eta)


def test_local_component_reduction_at_finite_place():
    g = MatG([[t * t, one], [zero, one / t]], F)
    w = local_reduce(g, place=V0)
    # at a = 0 the uniformizer is t itself, so the Laurent twin has the same eta
    x = lambda e: LaurentPoly.monomial(F, e)
    twin = MatG([[x(2), x(0)], [LaurentPoly.zero(F), x(-1)]], F)
    assert w.eta == local_reduce(twin).eta
    assert sum(w.eta) == 1


def test_global_round_trip_small():
    rep = global_suite(12, seed=9)
    assert rep.ok, rep.examples
