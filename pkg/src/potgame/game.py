"""Finite communication games: data model, JSON format, payoffs and Bayes updates.

Matrix conventions (rows first):

* ``U``, ``V`` are K x M, ``U[k][m] = u(a_k, omega_m)`` (action-major).
* ``pi`` is M x N and row-stochastic, ``pi[m][n] = P(signal n | state m)``.
* ``A`` is N x K and row-stochastic, ``A[n][k] = P(action k | signal n)``.
* ``lam`` is M x N and column-stochastic: column n is the posterior after signal n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import numeric as nm
from .errors import DegenerateSignal, DimensionMismatch, ParseError, PlausibilityViolation, ValidationError


def is_simplex(v: Sequence[Fraction]) -> bool:
    return len(v) > 0 and all(x >= 0 for x in v) and sum(v) == 1


def is_row_stochastic(mat) -> bool:
    return len(mat) > 0 and all(is_simplex(row) for row in mat)


def is_column_stochastic(mat) -> bool:
    return len(mat) > 0 and is_row_stochastic(nm.transpose(mat))


def columns(mat):
    return nm.transpose(mat)


def from_columns(cols):
    return nm.transpose(tuple(tuple(c) for c in cols))


@dataclass(frozen=True)
class CommGame:
    prior: tuple
    sender_payoff: tuple  # U, K x M
    receiver_payoff: tuple  # V, K x M
    states: tuple = ()
    actions: tuple = ()
    nonnegative_sender: bool = field(init=False)

    def __post_init__(self):
        try:
            prior = nm.as_vector(self.prior)
            U = nm.as_matrix(self.sender_payoff)
            V = nm.as_matrix(self.receiver_payoff)
        except DimensionMismatch as exc:
            raise ValidationError(str(exc)) from exc
        M = len(prior)
        if M == 0:
            raise ValidationError("game needs at least one state")
        if not U or not V:
            raise ValidationError("game needs at least one action")
        if nm.shape(U) != nm.shape(V):
            raise ValidationError(f"payoff shapes differ: {nm.shape(U)} vs {nm.shape(V)}")
        if nm.shape(U)[1] != M:
            raise ValidationError(f"payoffs have {nm.shape(U)[1]} state columns but prior has {M} entries")
        if sum(prior) != 1 or any(p <= 0 for p in prior):
            raise ValidationError("prior must be a strictly positive probability vector")
        K = len(U)
        states = tuple(self.states) or tuple(f"w{m + 1}" for m in range(M))
        actions = tuple(self.actions) or tuple(f"a{k + 1}" for k in range(K))
        if len(states) != M or len(actions) != K:
            raise ValidationError("label counts do not match payoff shape")
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "sender_payoff", U)
        object.__setattr__(self, "receiver_payoff", V)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "nonnegative_sender", all(x >= 0 for row in U for x in row))

    @property
    def U(self):
        return self.sender_payoff

    @property
    def V(self):
        return self.receiver_payoff

    @property
    def num_states(self) -> int:
        return len(self.prior)

    @property
    def num_actions(self) -> int:
        return len(self.sender_payoff)


@dataclass(frozen=True)
class BeliefOutcome:
    """Posterior beliefs (columns of ``lam``) and the signal distribution ``gamma``."""

    lam: tuple
    gamma: tuple

    def plausible_for(self, prior) -> bool:
        return nm.matvec(self.lam, self.gamma) == tuple(prior)


def parse_game(document) -> CommGame:
    """Load a game from its JSON document (bytes or str)."""
    if isinstance(document, (bytes, bytearray)):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"game document is not UTF-8: {exc}") from exc
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("game document must be a JSON object")
    missing = [k for k in ("prior", "sender_payoff", "receiver_payoff") if k not in doc]
    if missing:
        raise ParseError(f"missing keys: {', '.join(missing)}")
    for key in ("sender_payoff", "receiver_payoff"):
        if not isinstance(doc[key], list) or not all(isinstance(r, list) for r in doc[key]):
            raise ParseError(f"{key} must be a list of rows")
    if not isinstance(doc["prior"], list):
        raise ParseError("prior must be a list")
    prior = nm.as_vector(doc["prior"])
    U = [nm.as_vector(r) for r in doc["sender_payoff"]]
    V = [nm.as_vector(r) for r in doc["receiver_payoff"]]
    return CommGame(
        prior=prior,
        sender_payoff=U,
        receiver_payoff=V,
        states=tuple(doc.get("states", ())),
        actions=tuple(doc.get("actions", ())),
    )


def game_to_dict(game: CommGame) -> dict:
    fmt = nm.format_rational
    return {
        "states": list(game.states),
        "actions": list(game.actions),
        "prior": [fmt(p) for p in game.prior],
        "sender_payoff": [[fmt(x) for x in row] for row in game.U],
        "receiver_payoff": [[fmt(x) for x in row] for row in game.V],
    }


def dump_game(game: CommGame) -> str:
    return json.dumps(game_to_dict(game), indent=2)


def _check_strategies(game: CommGame, pi, a):
    M, K = game.num_states, game.num_actions
    if len(pi) != M:
        raise DimensionMismatch(f"information structure has {len(pi)} rows, game has {M} states")
    N = len(pi[0]) if pi else 0
    if any(len(row) != N for row in pi):
        raise DimensionMismatch("ragged information structure")
    if len(a) != N:
        raise DimensionMismatch(f"receiver strategy has {len(a)} rows, expected {N} signals")
    if any(len(row) != K for row in a):
        raise DimensionMismatch(f"receiver strategy rows must have {K} entries")


def _expected_payoff(game, payoff, pi, a) -> Fraction:
    pi = nm.as_matrix(pi)
    a = nm.as_matrix(a)
    _check_strategies(game, pi, a)
    # Tr(P Pi A W)
    p_pi = tuple(tuple(p * x for x in row) for p, row in zip(game.prior, pi))
    return nm.trace(nm.matmul(nm.matmul(p_pi, a), payoff))


def expected_sender_payoff(game: CommGame, pi, a) -> Fraction:
    return _expected_payoff(game, game.U, pi, a)


def expected_receiver_payoff(game: CommGame, pi, a) -> Fraction:
    return _expected_payoff(game, game.V, pi, a)


def signal_probabilities(game: CommGame, pi) -> tuple:
    pi = nm.as_matrix(pi)
    return nm.vecmat(game.prior, pi)


def posterior_from_structure(game: CommGame, pi) -> BeliefOutcome:
    """Bayes update of the prior through ``pi``, one posterior column per signal."""
    pi = nm.as_matrix(pi)
    if len(pi) != game.num_states:
        raise DimensionMismatch(f"information structure has {len(pi)} rows, game has {game.num_states} states")
    gamma = signal_probabilities(game, pi)
    for n, g in enumerate(gamma):
        if g == 0:
            raise DegenerateSignal(n)
    lam = tuple(tuple(p * x / g for x, g in zip(row, gamma)) for p, row in zip(game.prior, pi))
    out = BeliefOutcome(lam, gamma)
    assert out.plausible_for(game.prior)
    return out


def structure_from_posterior(game: CommGame, beliefs: BeliefOutcome):
    """Invert the Bayes update: ``pi[m][n] = lam[m][n] * gamma[n] / p[m]``."""
    lam = nm.as_matrix(beliefs.lam)
    gamma = nm.as_vector(beliefs.gamma)
    if len(lam) != game.num_states or any(len(row) != len(gamma) for row in lam):
        raise DimensionMismatch("belief matrix shape does not match prior and gamma")
    if any(g <= 0 for g in gamma):
        raise PlausibilityViolation("signal probabilities must be strictly positive")
    if not is_column_stochastic(lam):
        raise PlausibilityViolation("belief columns must be probability vectors")
    if nm.matvec(lam, gamma) != game.prior:
        raise PlausibilityViolation("posterior beliefs do not average to the prior")
    assert sum(gamma) == 1
    return tuple(tuple(x * g / p for x, g in zip(row, gamma)) for p, row in zip(game.prior, lam))
