from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, strategies as st

from potgame import numeric as nm
from potgame.bimatrix import EquilibriumTuple, enumerate_extreme_equilibria, verify_equilibrium_tuple
from potgame.errors import DimensionMismatch

from conftest import separating, games
from oracles import support_enumeration


def test_separating_three_tuples():
    g = separating()
    tuples = enumerate_extreme_equilibria(g.U, g.V)
    assert [(t.a, t.lam, t.x) for t in tuples] == [
        ((1, 0), (1, 0), 1),
        ((0, 1), (0, 1), F(1, 2)),
        ((F(1, 3), F(2, 3)), (1, 0), F(1, 3)),
    ]
    assert [t.y for t in tuples] == [1, 2, F(1, 3) + F(2, 3)]


def test_matching_game_unique_mixed():
    tuples = enumerate_extreme_equilibria(((2, 0), (0, 2)), ((0, 2), (2, 0)))
    assert len(tuples) == 1
    t = tuples[0]
    assert t.a == (F(1, 2), F(1, 2)) and t.lam == (F(1, 2), F(1, 2))
    assert t.x == 1 and t.y == 1


def test_degenerate_game_keeps_all_vertices():
    # U constant: the belief player is indifferent everywhere
    U = ((1, 1), (1, 1))
    V = ((1, 0), (0, 1))
    tuples = enumerate_extreme_equilibria(U, V)
    pairs = {(t.a, t.lam) for t in tuples}
    assert ((1, 0), (F(1, 2), F(1, 2))) in pairs
    assert ((1, 0), (1, 0)) in pairs
    assert ((0, 1), (0, 1)) in pairs
    assert ((0, 1), (F(1, 2), F(1, 2))) in pairs
    assert support_enumeration(U, V) < pairs


def test_single_state():
    tuples = enumerate_extreme_equilibria(((3,), (5,)), ((1,), (2,)))
    assert [(t.a, t.lam, t.x) for t in tuples] == [((0, 1), (1,), 5)]


def test_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        enumerate_extreme_equilibria(((1, 0),), ((1,), (0,)))


def test_verify_examples():
    g = separating()
    good = EquilibriumTuple((1, 0), (1, 0), F(1), F(1))
    assert verify_equilibrium_tuple(g.U, g.V, good)
    # receiver should switch to action 2 at belief (0, 1)
    bad = EquilibriumTuple((1, 0), (0, 1), F(0), F(0))
    check = verify_equilibrium_tuple(g.U, g.V, bad)
    assert not check and check.violations
    wrong_x = EquilibriumTuple((1, 0), (1, 0), F(2), F(1))
    assert not verify_equilibrium_tuple(g.U, g.V, wrong_x)


def _is_vertex(rows, point, level):
    """Rank test: tight rows of {s >= 0, rows·s <= t, sum s = 1} pin down (s, t)."""
    n = len(point)
    tight = []
    for i in range(n):
        if point[i] == 0:
            tight.append([int(j == i) for j in range(n)] + [0])
    for r in rows:
        if nm.dot(r, point) == level:
            tight.append(list(r) + [-1])
    tight.append([1] * n + [0])
    return sympy.Matrix(tight).rank() == n + 1


@given(games())
def test_tuples_verified_unique_sorted_extreme(g):
    tuples = enumerate_extreme_equilibria(g.U, g.V)
    assert tuples, "every finite game has an equilibrium"
    assert len({(t.a, t.lam) for t in tuples}) == len(tuples)
    assert [t.sort_key() for t in tuples] == sorted(t.sort_key() for t in tuples)
    for t in tuples:
        assert verify_equilibrium_tuple(g.U, g.V, t)
        assert _is_vertex(nm.transpose(g.U), t.a, t.x)
        assert _is_vertex(g.V, t.lam, t.y)


@given(games())
def test_contains_support_enumeration(g):
    ours = {(t.a, t.lam) for t in enumerate_extreme_equilibria(g.U, g.V)}
    assert support_enumeration(g.U, g.V) <= ours


@given(games(), st.integers(-3, 3), st.integers(1, 3))
def test_affine_invariance(g, shift, scale):
    U2 = tuple(tuple(scale * x + shift for x in row) for row in g.U)
    V2 = tuple(tuple(x - shift for x in row) for row in g.V)
    before = {(t.a, t.lam) for t in enumerate_extreme_equilibria(g.U, g.V)}
    after = {(t.a, t.lam) for t in enumerate_extreme_equilibria(U2, V2)}
    assert before == after
