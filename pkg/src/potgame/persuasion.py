"""Overt persuasion: the sender commits to the information structure.

The sender-preferred SPE value comes from the revelation-principle LP over
joint probabilities ``z[m][k]`` of state m and recommended action k:

    max  sum z[m][k] U[k][m]
    s.t. sum_k z[m][k] = p[m]
         sum_m z[m][k] (V[k][m] - V[k'][m]) >= 0     for all k != k'
         z >= 0

``concavify_binary`` recomputes the same value for two-state games from
the concave envelope of the indirect utility, as an independent check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import numeric as nm
from .errors import NotBinary
from .game import CommGame


@dataclass(frozen=True)
class PersuasionSolution:
    z: tuple  # M x K joint distribution of (state, recommendation)
    value: Fraction
    signals: tuple  # recommended actions that are actually sent
    pi: tuple  # M x len(signals)
    a: tuple  # len(signals) x K, obedient receiver
    receiver_value: Fraction

    def obedient(self, game: CommGame) -> bool:
        M, K = game.num_states, game.num_actions
        for k in range(K):
            for k2 in range(K):
                gain = sum((self.z[m][k] * (game.V[k][m] - game.V[k2][m]) for m in range(M)), Fraction(0))
                if gain < 0:
                    return False
        return True


def solve_op(game: CommGame) -> PersuasionSolution:
    M, K = game.num_states, game.num_actions
    U, V, p = game.U, game.V, game.prior

    def idx(m, k):
        return m * K + k

    nvar = M * K
    objective = [Fraction(0)] * nvar
    for m in range(M):
        for k in range(K):
            objective[idx(m, k)] = U[k][m]
    a_eq, b_eq = [], []
    for m in range(M):
        row = [Fraction(0)] * nvar
        for k in range(K):
            row[idx(m, k)] = Fraction(1)
        a_eq.append(row)
        b_eq.append(p[m])
    a_ub = []
    for k, k2 in itertools.permutations(range(K), 2):
        row = [Fraction(0)] * nvar
        for m in range(M):
            row[idx(m, k)] = V[k2][m] - V[k][m]
        a_ub.append(row)
    out = nm.lp_solve(nm.LpProblem(objective, a_eq, b_eq, a_ub, [Fraction(0)] * len(a_ub)))
    # Always feasible (recommend a best response to the prior) and bounded.
    assert out.optimal, out.status
    z = tuple(tuple(out.x[idx(m, k)] for k in range(K)) for m in range(M))
    signals = tuple(k for k in range(K) if any(z[m][k] > 0 for m in range(M)))
    pi = tuple(tuple(z[m][k] / p[m] for k in signals) for m in range(M))
    a = tuple(tuple(Fraction(int(j == k)) for j in range(K)) for k in signals)
    rv = sum((z[m][k] * V[k][m] for m in range(M) for k in range(K)), Fraction(0))
    return PersuasionSolution(z, out.value, signals, pi, a, rv)


def u_hat(game: CommGame, lam) -> tuple:
    """Sender value and receiver action at belief ``lam``, ties broken for the sender.

    Returns ``(value, action_index)``.
    """
    lam = nm.as_vector(lam)
    vl = nm.matvec(game.V, lam)
    ul = nm.matvec(game.U, lam)
    k = max(range(game.num_actions), key=lambda k: (vl[k], ul[k], -k))
    return ul[k], k


def concavify_binary(game: CommGame) -> Fraction:
    """Concave envelope of ``u_hat`` at the prior, for two-state games.

    A belief is parametrized by ``t`` = probability of the second state.
    ``u_hat`` is piecewise linear between points where two receiver payoff
    lines cross and upper semicontinuous there, so the envelope is attained
    by mixing at most two of those breakpoints.
    """
    if game.num_states != 2:
        raise NotBinary(f"concavification needs exactly two states, got {game.num_states}")
    V = game.V
    points = {Fraction(0), Fraction(1), game.prior[1]}
    for k, k2 in itertools.combinations(range(game.num_actions), 2):
        # (1-t) V[k][0] + t V[k][1] == (1-t) V[k2][0] + t V[k2][1]
        slope = (V[k][1] - V[k][0]) - (V[k2][1] - V[k2][0])
        if slope != 0:
            t = (V[k2][0] - V[k][0]) / slope
            if 0 <= t <= 1:
                points.add(t)
    values = {t: u_hat(game, (1 - t, t))[0] for t in points}
    target = game.prior[1]
    best = values[target]
    left = [t for t in points if t < target]
    right = [t for t in points if t > target]
    for lo in left:
        for hi in right:
            w = (target - lo) / (hi - lo)
            best = max(best, (1 - w) * values[lo] + w * values[hi])
    return best
