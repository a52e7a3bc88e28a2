import os
import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ffgcd import RationalFunction

settings.register_profile("ffgcd", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=600, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("FFGCD_HYPOTHESIS", "ffgcd"))


@st.composite
def tpolys(draw, max_deg=4, box=4):
    coeffs = draw(st.lists(st.integers(-box, box), min_size=1, max_size=max_deg + 1))
    if not any(coeffs):
        coeffs[0] = 1
    out = RationalFunction(0)
    for e, c in enumerate(coeffs):
        if c:
            out = out + RationalFunction.parse(f"t^{e}") * c
    return out


@st.composite
def rfs(draw, max_deg=4):
    return draw(tpolys(max_deg)) / draw(tpolys(max_deg))


@pytest.fixture
def K():
    return RationalFunction.parse


#: a seeded random.Random; cheaper for hypothesis than st.randoms with rejection loops
seeds = st.integers(0, 2**32).map(random.Random)
