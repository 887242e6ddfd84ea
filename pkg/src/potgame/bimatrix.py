"""Stage one: extreme equilibria of the belief game.

Role convention (fixed everywhere in this package): the *belief player*
picks ``lam`` in the state simplex to maximize ``a·U·lam``, the *receiver*
picks ``a`` in the action simplex to maximize ``a·V·lam``.

Extreme equilibria are pairs of vertices of the two best-response polyhedra

    P = {(a, x) : a >= 0, sum(a) = 1, Uᵀa <= x}
    Q = {(lam, y) : lam >= 0, sum(lam) = 1, V lam <= y}

whose labels cover every action and every state.  Vertices are found by
making each possible set of K (resp. M) inequalities tight, i.e. support
enumeration where each support pair is a choice of zero entries and
indifference rows.  Unlike square-support enumeration this also reaches the
vertices of degenerate games, where equilibrium components are not points.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction

from . import numeric as nm
from .errors import DimensionMismatch
from .game import is_simplex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EquilibriumTuple:
    a: tuple  # receiver mixed action, length K
    lam: tuple  # belief, length M
    x: Fraction  # a·U·lam
    y: Fraction  # a·V·lam

    def sort_key(self):
        return (-self.x, self.a, self.lam)


@dataclass(frozen=True)
class _Vertex:
    point: tuple
    level: Fraction
    best: frozenset  # indices where the payoff constraint is tight

    @property
    def support(self):
        return frozenset(i for i, v in enumerate(self.point) if v != 0)


def _check_shapes(U, V):
    U, V = nm.as_matrix(U), nm.as_matrix(V)
    if not U or not U[0]:
        raise DimensionMismatch("payoff matrices must be nonempty")
    if nm.shape(U) != nm.shape(V):
        raise DimensionMismatch(f"payoff shapes differ: {nm.shape(U)} vs {nm.shape(V)}")
    return U, V


def _polyhedron_vertices(payoff_rows):
    """Vertices of {(s, t): s >= 0, sum(s) = 1, payoff_rows · s <= t}.

    ``payoff_rows`` has one row per opponent pure strategy and one column per
    own pure strategy.
    """
    n = len(payoff_rows[0])
    ineqs = []  # (coefficients over s, coefficient of t)
    for i in range(n):
        ineqs.append(([Fraction(-int(j == i)) for j in range(n)], Fraction(0)))
    for row in payoff_rows:
        ineqs.append((list(row), Fraction(-1)))
    simplex_row = [Fraction(1)] * n + [Fraction(0)]

    seen = {}
    for tight in itertools.combinations(range(len(ineqs)), n):
        system = [ineqs[i][0] + [ineqs[i][1]] for i in tight] + [simplex_row]
        rhs = [Fraction(0)] * n + [Fraction(1)]
        sol = nm.solve_linear_system(system, rhs)
        if not sol.unique:
            continue
        point, level = sol.x[:n], sol.x[n]
        if any(v < 0 for v in point):
            continue
        values = [nm.dot(row, point) for row in payoff_rows]
        if any(v > level for v in values):
            continue
        if point not in seen:
            best = frozenset(i for i, v in enumerate(values) if v == level)
            seen[point] = _Vertex(point, level, best)
    return list(seen.values())


def enumerate_extreme_equilibria(U, V) -> list:
    """All extreme equilibria of the belief game, each exactly once.

    Sorted by sender value ``x`` descending, then lexicographically by
    ``(a, lam)``.
    """
    U, V = _check_shapes(U, V)
    # Receiver side: columns of U are the belief player's pure options.
    a_vertices = _polyhedron_vertices(nm.transpose(U))
    lam_vertices = _polyhedron_vertices(V)
    out = []
    for av in a_vertices:
        for lv in lam_vertices:
            if lv.support <= av.best and av.support <= lv.best:
                a, lam = av.point, lv.point
                x = nm.dot(a, nm.matvec(U, lam))
                y = nm.dot(a, nm.matvec(V, lam))
                out.append(EquilibriumTuple(a, lam, x, y))
    out.sort(key=EquilibriumTuple.sort_key)
    logger.debug("%d extreme equilibria from %d x %d vertices", len(out), len(a_vertices), len(lam_vertices))
    return out


@dataclass(frozen=True)
class TupleCheck:
    ok: bool
    violations: tuple = ()

    def __bool__(self):
        return self.ok


def verify_equilibrium_tuple(U, V, t: EquilibriumTuple) -> TupleCheck:
    """Check both best-response conditions of ``t`` against pure deviations."""
    U, V = _check_shapes(U, V)
    K, M = nm.shape(U)
    if len(t.a) != K or len(t.lam) != M:
        raise DimensionMismatch("tuple does not match payoff shape")
    problems = []
    a, lam = tuple(t.a), tuple(t.lam)
    if not is_simplex(a):
        problems.append("a is not a probability vector")
    if not is_simplex(lam):
        problems.append("lam is not a probability vector")
    belief_payoffs = nm.vecmat(a, U)
    current = nm.dot(belief_payoffs, lam)
    for m, v in enumerate(belief_payoffs):
        if v > current:
            problems.append(f"belief deviation to state {m} gains {v - current}")
    receiver_payoffs = nm.matvec(V, lam)
    current_r = nm.dot(a, receiver_payoffs)
    for k, v in enumerate(receiver_payoffs):
        if v > current_r:
            problems.append(f"receiver deviation to action {k} gains {v - current_r}")
    if t.x != current:
        problems.append(f"x = {t.x} but a·U·lam = {current}")
    if t.y != current_r:
        problems.append(f"y = {t.y} but a·V·lam = {current_r}")
    return TupleCheck(not problems, tuple(problems))
