import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from oscchain.exact import MultiPoly, random_rational
from oscchain.model import Params


def draw_fraction(rng: random.Random, lo: int = 1, hi: int = 6) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(lo, hi))


def draw_params(rng: random.Random, **fixed) -> Params:
    kwargs = dict(
        m1=draw_fraction(rng), m2=draw_fraction(rng), m3=draw_fraction(rng),
        a=draw_fraction(rng), b=draw_fraction(rng), c=draw_fraction(rng),
        omega=draw_fraction(rng), d=rng.choice([2, 3, 4, 5]),
    )
    kwargs.update(fixed)
    return Params(**kwargs)


def draw_poly(rng: random.Random, variables, max_degree: int = 3,
              n_terms: int = 4) -> MultiPoly:
    terms = {}
    for _ in range(n_terms):
        exps = tuple(rng.randint(0, max_degree) for _ in variables)
        terms[exps] = random_rational(rng)
    return MultiPoly(variables, terms)


fractions_st = st.fractions(
    min_value=-100, max_value=100, max_denominator=50)


@st.composite
def polys_st(draw, variables=("x", "y"), max_degree=3, max_terms=4):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        exps = tuple(draw(st.integers(0, max_degree)) for _ in variables)
        terms[exps] = draw(fractions_st)
    return MultiPoly(variables, terms)


@pytest.fixture
def rng():
    return random.Random(20260823)


# one pass/fail line per acceptance criterion, echoed after the run
# (terminal-summary output is never swallowed by capture)
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
