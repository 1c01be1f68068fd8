import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from birkhoff.adele import AdeleMat, random_adele
from birkhoff.errors import ConfigError, ParseError, SingularInput
from birkhoff.ff import FieldSpec
from birkhoff.matgl import MatG
from birkhoff.series import LaurentPoly, Place
from birkhoff.suites import round_trip_instance
from birkhoff.textio import parse_entry, parse_instance, serialize_adele, serialize_matrix

from .conftest import fields, laurent


def test_pair_instance():
    f, g = parse_instance("field p=5 m=1\nn=2\nx; 1\n0; x^-1")
    X = lambda e: LaurentPoly.monomial(f, e)
    assert f == FieldSpec(5)
    assert g == MatG([[X(1), X(0)], [LaurentPoly.zero(f), X(-1)]], f)


def test_default_modulus_header():
    f, g = parse_instance("field p=2 m=2\nn=1\na")
    assert f.q == 4 and f.modulus == FieldSpec.from_q(4).modulus


def test_normalisation_then_singular():
    text = "field p=2 m=1\nn=2\nx + x; 0\n1; 1"
    _, g = parse_instance(text, check_singular=False)
    assert g.rows[0][0].is_zero()
    with pytest.raises(SingularInput):
        parse_instance(text)


def test_entry_syntax():
    f = FieldSpec.from_q(4)
    a = f.gen()
    p = parse_entry("2*x^-3 + 1 + a*x^2", f)
    assert p == LaurentPoly.from_terms(f, {-3: 2, 0: 1, 2: a})
    assert parse_entry("(1 + x)^2", FieldSpec(3)) == parse_entry("1 + 2*x + x^2", FieldSpec(3))
    assert parse_entry("x^-2 / x", FieldSpec(3)) == LaurentPoly.monomial(FieldSpec(3), -3)
    r = parse_entry("(t^2 + 1)/(t - 1)", FieldSpec(5), var="t")
    assert r.num.degree == 2 and r.den.degree == 1


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("field p=5 m=1\nn=2\nx; 1\n0; x^^2", 4, 6),
        ("field p=5 m=1\nn=2\nx; 1 ?\n0; 1", 3, 6),
        ("field p=5 m=1\nn=2\nx; 1\n0; t", 4, 4),
        ("field p=5 m=1\nn=2\nx; 1; 1\n0; 1", 3, 1),
        ("field p=5 m=1\nn=2\nx; 1", 4, 1),
        ("field p=5 m=1\nn=2\nx; a\n0; 1", 3, 4),
        ("fld p=5\nn=1\n1", 1, 1),
        ("field p=5 m=1\nn=2\nx; (1 + x\n0; 1", 3, None),
    ],
)
def test_parse_errors_have_locations(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    assert info.value.line == line
    if col is not None:
        assert info.value.column == col


def test_config_errors_pass_through():
    with pytest.raises(ConfigError):
        parse_instance("field p=2 m=2 modulus=1,0,1\nn=1\n1")


def test_comments_and_whitespace():
    text = "# header comment\n\nfield  p = 3  m = 1   # trailing\n n = 1 \n  2*x^3 ;\n"
    with pytest.raises(ParseError):
        parse_instance(text)  # empty second entry on a 1x1 row
    f, g = parse_instance("field p = 3 m = 1\n\n n=1\n   2 * x ^ 3   # c\n")
    assert g.rows[0][0] == LaurentPoly.monomial(f, 3, 2)


def test_adele_file():
    text = "field p=3 m=1\nn=2\nplace a=0\nt; 0\n0; 1\nplace inf\n(t^2+1)/(t-1); 1\n0; 1\n"
    f, A = parse_instance(text)
    assert isinstance(A, AdeleMat)
    assert set(A.components) == {Place(f(0)), Place.infinity()}
    with pytest.raises(ParseError):
        parse_instance(text + "place a=0\n1;0\n0;1\n")


@given(st.data())
def test_matrix_round_trip(data):
    f = data.draw(fields((2, 3, 4, 8, 9, 25)))
    n = data.draw(st.integers(1, 3))
    g = MatG([[data.draw(laurent(f)) for _ in range(n)] for _ in range(n)], f)
    f2, g2 = parse_instance(serialize_matrix(g, ["round trip"]), check_singular=False)
    assert f2 == f and g2 == g


def test_generated_round_trips():
    rng = random.Random(0)
    for q in (2, 4, 9, 27):
        f = FieldSpec.from_q(q)
        _, g = round_trip_instance(3, f, rng)
        assert parse_instance(serialize_matrix(g))[1] == g
    for q in (3, 5):
        f = FieldSpec(q)
        A = random_adele(2, f, (-1, 1), [Place(f(1)), Place(f(2))], 1)
        B = parse_instance(serialize_adele(A))[1]
        assert B.components == A.components
