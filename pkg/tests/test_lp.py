from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellframe.lp import Feasible, Infeasible, solve_feasibility


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


@st.composite
def systems(draw):
    m = draw(st.integers(1, 5))
    n = draw(st.integers(1, 6))
    entry = st.integers(-3, 3)
    A = [draw(st.lists(entry, min_size=n, max_size=n)) for _ in range(m)]
    b = draw(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6),
                      min_size=m, max_size=m))
    return A, b


@settings(max_examples=500)
@given(systems())
def test_answers_are_self_certifying(system):
    A, b = system
    res = solve_feasibility(A, b)
    if isinstance(res, Feasible):
        assert all(x >= 0 for x in res.x)
        assert all(dot(row, res.x) == bi for row, bi in zip(A, b))
    else:
        y = res.certificate
        cols = list(zip(*A))
        assert all(dot(y, col) >= 0 for col in cols)
        assert dot(y, b) < 0


def test_simple_cases():
    assert solve_feasibility([[1, 1]], [1]) == Feasible((Fraction(1), Fraction(0)))
    res = solve_feasibility([[1, 1]], [-1])
    assert isinstance(res, Infeasible)
    # degenerate: x1 = x2 and x1 + x2 = 0
    assert solve_feasibility([[1, -1], [1, 1]], [0, 0]) == Feasible((0, 0))


def test_dimension_check():
    with pytest.raises(ValueError):
        solve_feasibility([[1, 2], [1]], [0, 0])
