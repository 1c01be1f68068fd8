import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from birkhoff.ff import FieldSpec
from birkhoff.series import LaurentPoly

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

QS = (2, 3, 4, 5, 7, 8, 9, 16, 25)


@pytest.fixture(params=(2, 3, 4, 5, 9))
def field(request):
    return FieldSpec.from_q(request.param)


@st.composite
def fields(draw, qs=QS):
    return FieldSpec.from_q(draw(st.sampled_from(qs)))


@st.composite
def elements(draw, f, nonzero=False):
    return f.from_index(draw(st.integers(1 if nonzero else 0, f.q - 1)))


@st.composite
def laurent(draw, f, lo=-4, hi=4, nonzero=False):
    terms = draw(st.dictionaries(st.integers(lo, hi), st.integers(0, f.q - 1), max_size=hi - lo + 1))
    p = LaurentPoly.from_terms(f, {e: f.from_index(c) for e, c in terms.items()})
    if nonzero and p.is_zero():
        p = LaurentPoly.monomial(f, draw(st.integers(lo, hi)))
    return p
