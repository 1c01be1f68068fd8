import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from birkhoff.errors import ConfigError, DivisionByZero, FieldMismatch
from birkhoff.ff import DEFAULT_MODULI, FieldSpec, ff_arith, ff_inv, ff_validate

from .conftest import elements, fields


def naive_mul(f, x, y):
    """Schoolbook product in F_p[a] reduced by the modulus, independent of the field tables."""
    p, m, mod = f.p, f.m, list(f.modulus)
    prod = [0] * (2 * m - 1)
    for i, a in enumerate(x.coeffs):
        for j, b in enumerate(y.coeffs):
            prod[i + j] = (prod[i + j] + a * b) % p
    for d in range(len(prod) - 1, m - 1, -1):
        c = prod[d]
        if c:
            for k in range(m + 1):
                prod[d - m + k] = (prod[d - m + k] - c * mod[k]) % p
    return tuple(prod[:m])


def test_prime_field_examples():
    F = FieldSpec(5)
    assert ff_arith("add", F(3), F(4)) == F(2)
    assert ff_inv(F(2)) == F(3)
    assert ff_arith("mul", F(3), F.zero) == F.zero
    assert ff_inv(F.one) == F.one


def test_f4_examples():
    F = FieldSpec(2, 2, [1, 1, 1])
    a = F.gen()
    assert a * a == a + 1
    assert ff_inv(a) == a + 1


def test_inverse_of_zero():
    with pytest.raises(DivisionByZero):
        ff_inv(FieldSpec(7).zero)


def test_validate():
    ff_validate(FieldSpec(5))
    ff_validate(FieldSpec(2, 2, [1, 1, 1]))
    with pytest.raises(ConfigError):
        FieldSpec(2, 2, [1, 0, 1])
    with pytest.raises(ConfigError):
        FieldSpec(6)
    with pytest.raises(ConfigError):
        FieldSpec(3, 9)
    with pytest.raises(ConfigError):
        FieldSpec(65537)  # prime above the supported bound


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        FieldSpec(5)(1) + FieldSpec(7)(1)


@pytest.mark.parametrize("q", sorted(DEFAULT_MODULI))
def test_default_table_moduli_valid(q):
    F = FieldSpec.from_q(q)
    assert F.q == q
    ff_validate(F)


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27])
def test_mul_matches_schoolbook(q):
    F = FieldSpec.from_q(q)
    els = list(F.elements())
    for x, y in itertools.product(els, els):
        assert (x * y).coeffs == naive_mul(F, x, y)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9, 16])
def test_group_order(q):
    F = FieldSpec.from_q(q)
    for x in F.elements():
        if x:
            assert x ** (q - 1) == F.one
            assert x * x.inverse() == F.one


@given(st.data())
def test_field_axioms(data):
    F = data.draw(fields())
    x, y, z = (data.draw(elements(F)) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == F.zero
    assert x - y == -(y - x)
    if x:
        assert x / x == F.one


def test_field_axioms_bulk():
    rng = random.Random(11)
    bad = 0
    for _ in range(10_000):
        F = FieldSpec.from_q(rng.choice([2, 3, 4, 5, 7, 8, 9, 16, 25, 27]))
        x, y, z = (F.random(rng) for _ in range(3))
        ok = (x * y) * z == x * (y * z) and x * (y + z) == x * y + x * z
        if x:
            ok = ok and x * x.inverse() == F.one
        bad += not ok
    assert bad == 0


def test_vectorised_kernels_agree_with_scalars():
    import numpy as np

    rng = random.Random(3)
    for q in (5, 9, 16):
        F = FieldSpec.from_q(q)
        a = [F.random(rng) for _ in range(6)]
        b = [F.random(rng) for _ in range(4)]
        conv = F.convolve(np.array([x.coeffs for x in a]), np.array([x.coeffs for x in b]))
        for k in range(len(a) + len(b) - 1):
            want = F.zero
            for i in range(len(a)):
                if 0 <= k - i < len(b):
                    want = want + a[i] * b[k - i]
            assert tuple(int(c) for c in conv[k]) == want.coeffs
        M = F.mul_matrices(np.array(a[0].coeffs))
        assert tuple(int(c) for c in np.array(a[1].coeffs) @ M % F.p) == (a[1] * a[0]).coeffs
