import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from birkhoff.errors import DivisionByZero, PrecisionExhausted
from birkhoff.ff import FieldSpec
from birkhoff.series import (
    INF,
    LaurentPoly,
    LaurentSeries,
    Place,
    RatFun,
    expand_at_place,
    series_arith,
    split_integral,
    val_of,
)

from .conftest import elements, fields, laurent

F5 = FieldSpec(5)


def X(e, c=1, f=F5):
    return LaurentPoly.monomial(f, e, c)


def test_val_examples():
    assert val_of(X(-3, 2) + X(0) + X(2)) == -3
    assert val_of(LaurentPoly.zero(F5)) == INF
    with pytest.raises(PrecisionExhausted):
        val_of(LaurentSeries.zero(F5, 6))


def test_split_examples():
    P, h = split_integral(X(-3, 2) + X(0) + X(2) + X(5))
    assert P == X(-3, 2) + X(0) and h == X(2) + X(5)
    P, h = split_integral(X(4))
    assert P.is_zero() and h == X(4)
    P, h = split_integral(X(-1, 3))
    assert P == X(-1, 3) and h.is_zero()


def test_split_needs_precision():
    s = (X(-2) + X(0)).to_series(0)
    with pytest.raises(PrecisionExhausted):
        split_integral(s)


def test_series_examples():
    a = (X(0) + X(1)).to_series(5)
    b = (X(0) - X(1)).to_series(5)
    prod = a * b
    assert prod.prec == 5 and prod.truncated() == X(0) - X(2)
    inv = series_arith("inv", (X(0) + X(1)).to_series(3))
    assert inv.prec == 3 and inv.truncated() == X(0) - X(1) + X(2)
    # multiply back
    assert ((X(0) + X(1)) * inv).truncated() == X(0)
    u = X(2) * (X(0) + X(1) + X(3, 2))
    inv2 = u.to_series(8).inverse()
    assert inv2.val == -2 and inv2.prec == 4


def test_inverse_of_exact_zero():
    with pytest.raises(DivisionByZero):
        LaurentPoly.zero(F5).inverse()


def test_expand_examples():
    t = RatFun.t(F5)
    s = expand_at_place(t, Place.infinity(), 4)
    assert s.val == -1 and s.truncated() == X(-1)
    one = RatFun.one(F5)
    s = expand_at_place(one / (t - RatFun.constant(F5, 1)), Place(F5(0)), 3)
    assert s.prec == 3 and s.truncated() == X(0, 4) + X(1, 4) + X(2, 4)
    # multiply back by (t - 1) = pi - 1 at a = 0
    assert ((X(1) - X(0)) * s).truncated().truncate(hi=3) == X(0)
    a = F5(3)
    sq = (t - RatFun.constant(F5, a)) ** 2
    assert expand_at_place(sq, Place(a), 5).val == 2


@given(st.data())
def test_valuation_laws(data):
    f = data.draw(fields())
    x, y = data.draw(laurent(f)), data.draw(laurent(f))
    s = x + y
    if not s.is_zero():
        assert s.val >= min(x.val, y.val)
        if x.val != y.val:
            assert s.val == min(x.val, y.val)
    assert (x * y).val == x.val + y.val


@given(st.data())
def test_split_round_trip(data):
    f = data.draw(fields())
    x = data.draw(laurent(f, -6, 6))
    P, h = split_integral(x)
    assert P + h == x and P.in_R() and h.in_O()
    assert h.is_zero() or h.val >= 1
    Ps, hs = split_integral(x.to_series(3))
    assert Ps == P


@given(st.data())
def test_series_mul_matches_exact(data):
    f = data.draw(fields())
    x, y = data.draw(laurent(f, nonzero=True)), data.draw(laurent(f, nonzero=True))
    px, py = data.draw(st.integers(5, 12)), data.draw(st.integers(5, 12))
    sx, sy = x.to_series(px), y.to_series(py)
    prod = sx * sy
    assert prod.prec == min(sx.val + py, sy.val + px)
    assert prod.agrees_with(x * y)


@given(st.data())
def test_series_inverse_multiplies_back(data):
    f = data.draw(fields())
    x = data.draw(laurent(f, nonzero=True))
    s = x.to_series(10)
    inv = s.inverse()
    assert inv.prec == 10 - 2 * x.val
    one = x * inv
    assert one.agrees_with(LaurentPoly.one(f))


@st.composite
def ratfuns(draw, f):
    num = draw(laurent(f, 0, 3, nonzero=True))
    den = draw(laurent(f, 0, 3, nonzero=True))
    return RatFun(num, den)


@given(st.data())
def test_expand_is_ring_morphism(data):
    f = data.draw(fields((3, 5, 9)))
    x, y = data.draw(ratfuns(f)), data.draw(ratfuns(f))
    a = data.draw(st.one_of(st.none(), elements(f)))
    v = Place(a)
    prec = 8
    ex, ey = expand_at_place(x, v, prec), expand_at_place(y, v, prec)
    exy = expand_at_place(x * y, v, prec + 10)
    assert (ex * ey).agrees_with(exy.truncated())
    assert (ex + ey).agrees_with(expand_at_place(x + y, v, prec + 10).truncated())
    assert ex.val == x.val_at(v)


def test_lift_inverts_expansion():
    rng = random.Random(2)
    f = FieldSpec(7)
    for _ in range(50):
        p = LaurentPoly.from_terms(f, {e: f.random(rng) for e in range(-3, 4)})
        for v in (Place.infinity(), Place(f(rng.randrange(7)))):
            lifted = v.lift(p)
            assert lifted.expand(v, 10).agrees_with(p)


def test_ratfun_canonical_form():
    f = FieldSpec(5)
    t = RatFun.t(f)
    one = RatFun.one(f)
    x = (t * t - one) / (RatFun.constant(f, 2) * (t - one))
    assert x == (t + one) * RatFun.constant(f, 3)
    assert x.den == LaurentPoly.one(f)
    assert hash(x) == hash((t + one) * RatFun.constant(f, 3))
