import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from divtower.gf2 import BitMatrix

settings.register_profile("default", deadline=None, max_examples=150,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

STEANE_ROWS = ["1010101", "0110011", "0001111"]


@pytest.fixture
def steane_s():
    return BitMatrix.from_rows(STEANE_ROWS)


@st.composite
def bit_matrices(draw, max_rows=5, max_cols=8, min_rows=0, min_cols=1):
    r = draw(st.integers(min_rows, max_rows))
    c = draw(st.integers(min_cols, max_cols))
    rows = draw(st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r))
    return BitMatrix(tuple(rows), c)


def span(a: BitMatrix) -> set:
    out = {0}
    for r in a.rows:
        out |= {x ^ r for x in out}
    return out


def brute_rank(a: BitMatrix) -> int:
    return len(span(a)).bit_length() - 1


def rng(seed):
    return random.Random(seed)
