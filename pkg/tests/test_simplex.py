from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tinpower.simplex import (
    InfeasibleError,
    LpProblem,
    UnboundedError,
    simplex_max_leq,
    simplex_solve,
)


def test_max_leq_basic():
    # max 3x + 2y  s.t.  x + y <= 4,  x <= 2
    sol = simplex_max_leq((3, 2), (((1, 1), 4), ((1, 0), 2)))
    assert sol.value == 10
    assert sol.x == (Fraction(2), Fraction(2))


def test_max_leq_degenerate_origin():
    sol = simplex_max_leq((-1, -1), (((1, 0), 0), ((0, 1), 0)))
    assert sol.value == 0


def test_max_leq_unbounded():
    with pytest.raises(UnboundedError):
        simplex_max_leq((1,), (((0,), 1),))


def test_general_free_variables():
    # max x  s.t.  x <= -3  (x free): pushes x negative
    p = LpProblem(objective=(1,), rows=(((1,), "<=", -3),))
    sol = simplex_solve(p)
    assert sol.value == -3
    assert sol.x == (Fraction(-3),)


def test_general_equality_and_geq():
    # max x + y  s.t.  x + y = 5,  x >= 1,  y >= 1
    p = LpProblem(
        objective=(1, 1),
        rows=(
            ((1, 1), "=", 5),
            ((1, 0), ">=", 1),
            ((0, 1), ">=", 1),
        ),
    )
    sol = simplex_solve(p)
    assert sol.value == 5
    assert sol.x[0] + sol.x[1] == 5
    assert sol.x[0] >= 1 and sol.x[1] >= 1


def test_general_infeasible():
    p = LpProblem(
        objective=(1,),
        rows=(((1,), ">=", 2), ((1,), "<=", 1)),
    )
    with pytest.raises(InfeasibleError):
        simplex_solve(p)


def test_general_unbounded():
    p = LpProblem(objective=(1,), rows=(((1,), ">=", 0),))
    with pytest.raises(UnboundedError):
        simplex_solve(p)


def test_redundant_equalities():
    p = LpProblem(
        objective=(1, 0),
        rows=(
            ((1, 1), "=", 2),
            ((2, 2), "=", 4),
            ((1, 0), "<=", 1),
        ),
    )
    sol = simplex_solve(p)
    assert sol.value == 1


def test_exact_fractions_survive():
    p = LpProblem(
        objective=(Fraction(1, 3), Fraction(1, 7)),
        rows=(
            ((1, 0), "<=", Fraction(1, 2)),
            ((0, 1), "<=", Fraction(2, 5)),
            ((1, 0), ">=", 0),
            ((0, 1), ">=", 0),
        ),
    )
    sol = simplex_solve(p)
    assert sol.value == Fraction(1, 6) + Fraction(2, 35)


def test_rejects_malformed_rows():
    with pytest.raises(ValueError):
        LpProblem(objective=(1, 2), rows=(((1,), "<=", 0),))
    with pytest.raises(ValueError):
        LpProblem(objective=(1,), rows=(((1,), "<", 0),))


coeff = st.integers(-4, 4).map(Fraction)


@given(
    st.lists(coeff, min_size=2, max_size=3),
    st.lists(
        st.tuples(st.lists(coeff, min_size=2, max_size=3), st.integers(0, 6)),
        min_size=1,
        max_size=4,
    ),
)
@settings(max_examples=150, deadline=None)
def test_max_leq_solutions_are_feasible_vertices(obj, raw_rows):
    n = len(obj)
    rows = tuple(
        (tuple(cs[:n]) + (Fraction(0),) * (n - len(cs)), Fraction(b))
        for cs, b in raw_rows
    )
    try:
        sol = simplex_max_leq(tuple(obj), rows)
    except UnboundedError:
        return
    assert all(v >= 0 for v in sol.x)
    for coeffs, b in rows:
        assert sum(c * v for c, v in zip(coeffs, sol.x)) <= b
    assert sum(c * v for c, v in zip(obj, sol.x)) == sol.value
    # origin is always feasible here, so the optimum cannot be negative
    assert sol.value >= 0
