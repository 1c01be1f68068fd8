import random

import pytest

from birkhoff.errors import SingularInput
from birkhoff.ff import FieldSpec
from birkhoff.iwasawa import (
    ParabolicSpec,
    iwasawa_decompose,
    omega_member,
    phi_project,
    phi_torus,
)
from birkhoff.matgl import MatG, det, identity, is_exact_zero, make_pi_eta, mat_mul, random_k
from birkhoff.series import LaurentPoly
from birkhoff.suites import phi_suite, random_exact_matrix

F = FieldSpec(5)
Z = LaurentPoly.zero(F)
PREC = 40


def X(e, c=1):
    return LaurentPoly.monomial(F, e, c)


def close(a, b) -> bool:
    d = a - b
    return is_exact_zero(d) or d.is_zero_to_precision()


def reassembles(g_series, iw) -> bool:
    bk = mat_mul(MatG(iw.b, F if g_series.field is None else g_series.field, "series"), iw.k)
    return all(close(x, y) for x, y in zip(bk.entries(), g_series.entries()))


def test_triangular_example():
    g = MatG([[X(1), X(0)], [Z, X(-1)]], F).to_series(PREC)
    iw = iwasawa_decompose(g, want_k=True)
    assert iw.t_vals == (1, -1)
    n = iw.n_part
    assert close(n[0, 1], X(-1)) and close(n[0, 0], X(0))
    assert iw.k == identity(2, F)


def test_lower_example():
    g = MatG([[X(-1), Z], [X(0), X(1)]], F).to_series(PREC)
    iw = iwasawa_decompose(g, want_k=True)
    assert iw.t_vals == (0, 0)
    assert reassembles(g, iw)
    k = iw.k
    assert all(is_exact_zero(x) or x.val >= 0 for x in k.entries())
    assert det(k).val == 0


def test_integral_unit_has_zero_torus():
    for s in range(20):
        k = random_k(3, F, s)
        assert iwasawa_decompose(k.to_series(PREC)).t_vals == (0, 0, 0)


def test_singular_rejected():
    g = MatG([[X(0), X(1)], [Z, Z]], F).to_series(PREC)
    with pytest.raises(SingularInput):
        iwasawa_decompose(g)


def test_omega_examples():
    assert omega_member(make_pi_eta((-2, 0, 0, 3), F).to_series(PREC))
    assert not omega_member(MatG([[X(1), X(0)], [Z, X(-1)]], F).to_series(PREC))
    assert omega_member(identity(3, F).to_series(PREC))


def test_parabolic_blocks():
    assert ParabolicSpec(4, {1, 3}).blocks() == [range(0, 2), range(2, 4)]
    assert ParabolicSpec(3, ()).blocks() == [range(0, 1), range(1, 2), range(2, 3)]
    assert ParabolicSpec(3, {1, 2}).blocks() == [range(0, 3)]
    with pytest.raises(ValueError):
        ParabolicSpec(3, {3})


def test_phi_examples():
    eta = (2, -1, 0)
    blocks = phi_project(make_pi_eta(eta, F).to_series(PREC), ())
    assert tuple(iwasawa_decompose(b).t_vals[0] for b in blocks) == eta
    assert phi_torus(make_pi_eta(eta, F).to_series(PREC)) == eta
    g = random_exact_matrix(3, F, random.Random(1)).to_series(PREC)
    (whole,) = phi_project(g, {1, 2})
    assert iwasawa_decompose(whole).t_vals == phi_torus(g)
    # block upper triangular: the Levi part is the top block up to L(O)
    A = [[X(-1) + X(2), X(1)], [X(0, 3), X(-2)]]
    g = MatG([A[0] + [X(-3)], A[1] + [X(4)], [Z, Z, X(-1, 2)]], F).to_series(PREC)
    top, last = phi_project(g, {1})
    two_step = iwasawa_decompose(top).t_vals + iwasawa_decompose(last).t_vals
    assert iwasawa_decompose(MatG(A, F).to_series(PREC)).t_vals == two_step[:2]
    assert two_step == phi_torus(g)


def test_randomized_properties():
    rng = random.Random(7)
    for c in range(300):
        n = rng.randint(2, 4)
        f = FieldSpec.from_q(rng.choice([2, 3, 4, 5, 9]))
        g = random_exact_matrix(n, f, rng)
        gs = g.to_series(PREC)
        iw = iwasawa_decompose(gs, want_k=True)
        assert sum(iw.t_vals) == det(g).val
        bk = mat_mul(MatG(iw.b, f, "series"), iw.k)
        assert all(close(x, y) for x, y in zip(bk.entries(), gs.entries()))
        k = random_k(n, f, rng.getrandbits(32))
        assert phi_torus(mat_mul(g, k).to_series(PREC)) == iw.t_vals


def test_phi_transitivity_small():
    rep = phi_suite(60, seed=3)
    assert rep.ok, rep.examples
