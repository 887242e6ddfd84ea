"""Stage two: mix equilibrium beliefs into a Bayes-plausible signaling equilibrium.

Given the stage-one tuples ``(a_j, lam_j, x_j, y_j)``, the selection LP is

    max / min  sum_j gamma_j x_j   s.t.  sum_j gamma_j lam_j = p,  gamma >= 0

and each tuple with positive weight becomes one signal.  Also here: the
babbling equilibrium, an exact PBE checker, and the ``solve_cs`` driver.
"""

from __future__ import annotations

import enum
import itertools
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from . import numeric as nm
from .bimatrix import enumerate_extreme_equilibria
from .errors import DimensionMismatch, NoBeliefDominantPbe, ParseError
from .game import (
    BeliefOutcome,
    CommGame,
    expected_receiver_payoff,
    expected_sender_payoff,
    from_columns,
    signal_probabilities,
    structure_from_posterior,
)

logger = logging.getLogger(__name__)


class Sense(enum.Enum):
    MAX = "max"
    MIN = "min"


@dataclass(frozen=True)
class TsbSolution:
    tuples: tuple  # chosen EquilibriumTuple per signal
    gamma: tuple
    value: Fraction
    sense: Sense = Sense.MAX

    @property
    def lam(self):
        """M x N belief matrix, one column per chosen tuple."""
        return from_columns(t.lam for t in self.tuples)

    @property
    def a(self):
        """N x K receiver strategy, one row per chosen tuple."""
        return tuple(t.a for t in self.tuples)

    @property
    def receiver_value(self) -> Fraction:
        return sum((g * t.y for g, t in zip(self.gamma, self.tuples)), Fraction(0))


class PbeTriple(NamedTuple):
    pi: tuple
    a: tuple
    lam: tuple


def _candidates_for(game, candidates):
    if candidates is None:
        return enumerate_extreme_equilibria(game.U, game.V)
    return list(candidates)


def solve_tsb(game: CommGame, candidates=None, sense: Sense = Sense.MAX) -> TsbSolution:
    """Select a Bayes-plausible mixture of equilibrium beliefs.

    Raises NoBeliefDominantPbe when the prior is not a convex combination
    of the candidate beliefs.
    """
    cands = _candidates_for(game, candidates)
    if not cands:
        raise NoBeliefDominantPbe("no stage-one equilibria")
    M = game.num_states
    for t in cands:
        if len(t.lam) != M or len(t.a) != game.num_actions:
            raise DimensionMismatch("candidate tuple does not match game shape")
    sign = 1 if sense is Sense.MAX else -1
    a_eq = [[t.lam[m] for t in cands] for m in range(M)]
    problem = nm.LpProblem(objective=[sign * t.x for t in cands], a_eq=a_eq, b_eq=game.prior)
    out = nm.lp_solve(problem)
    if not out.optimal:
        raise NoBeliefDominantPbe(f"prior {[str(p) for p in game.prior]} is outside the hull of equilibrium beliefs")
    chosen = [(g, t) for g, t in zip(out.x, cands) if g > 0]
    gamma = tuple(g for g, _ in chosen)
    assert sum(gamma) == 1
    assert len(chosen) <= M
    return TsbSolution(tuple(t for _, t in chosen), gamma, sign * out.value, sense)


def search_verified_pbe(game: CommGame, candidates=None, sense: Sense = Sense.MAX) -> TsbSolution:
    """Best stage-two selection whose assembled triple also passes ``check_pbe``.

    The selection LP alone does not enforce the sender's best response
    across signals, so this scans every basic support (linearly independent
    beliefs with strictly positive weights) and keeps the passing ones.
    """
    cands = _candidates_for(game, candidates)
    M = game.num_states
    best = None
    for r in range(1, M + 1):
        for combo in itertools.combinations(range(len(cands)), r):
            chosen = [cands[i] for i in combo]
            system = [[t.lam[m] for t in chosen] for m in range(M)]
            sol = nm.solve_linear_system(system, game.prior)
            if not sol.unique or any(g <= 0 for g in sol.x):
                continue
            value = sum((g * t.x for g, t in zip(sol.x, chosen)), Fraction(0))
            if best is not None and (value <= best.value if sense is Sense.MAX else value >= best.value):
                continue
            cand = TsbSolution(tuple(chosen), sol.x, value, sense)
            if check_pbe(game, *assemble_pbe(game, cand)).ok:
                best = cand
    if best is None:
        raise NoBeliefDominantPbe("no stage-two selection passes the PBE check")
    return best


def assemble_pbe(game: CommGame, sol: TsbSolution) -> PbeTriple:
    lam = sol.lam
    pi = structure_from_posterior(game, BeliefOutcome(lam, sol.gamma))
    return PbeTriple(pi, sol.a, lam)


@dataclass(frozen=True)
class BabblingPbe:
    pi: tuple
    a: tuple
    lam: tuple
    action: int  # sender-preferred receiver best response to the prior
    sender_value: Fraction
    sender_worst: Fraction
    receiver_value: Fraction


def babbling_pbe(game: CommGame, signal_count: int = 1) -> BabblingPbe:
    """Uninformative equilibrium: beliefs stay at the prior, receiver ignores signals."""
    if signal_count < 1:
        raise ValueError("signal_count must be positive")
    N, K = signal_count, game.num_actions
    vp = nm.matvec(game.V, game.prior)
    up = nm.matvec(game.U, game.prior)
    top = max(vp)
    ties = [k for k in range(K) if vp[k] == top]
    best_k = max(ties, key=lambda k: (up[k], -k))
    worst = min(up[k] for k in ties)
    pi = tuple((Fraction(1, N),) * N for _ in range(game.num_states))
    row = tuple(Fraction(int(k == best_k)) for k in range(K))
    a = (row,) * N
    lam = tuple((p,) * N for p in game.prior)
    return BabblingPbe(pi, a, lam, best_k, up[best_k], worst, top)


@dataclass(frozen=True)
class PbeCheckReport:
    sender_br: bool
    receiver_br: bool
    consistency: bool
    signals_realizable: bool
    # (state, signal used, better signal, gain)
    sender_witness: Optional[tuple] = None
    # (signal, action played, better action, gain)
    receiver_witness: Optional[tuple] = None

    @property
    def ok(self) -> bool:
        return self.sender_br and self.receiver_br and self.consistency and self.signals_realizable

    def to_dict(self) -> dict:
        def wit(w):
            return None if w is None else [w[0], w[1], w[2], str(w[3])]

        return {
            "sender_br": self.sender_br,
            "receiver_br": self.receiver_br,
            "consistency": self.consistency,
            "signals_realizable": self.signals_realizable,
            "all_ok": self.ok,
            "sender_witness": wit(self.sender_witness),
            "receiver_witness": wit(self.receiver_witness),
        }


def check_pbe(game: CommGame, pi, a, lam) -> PbeCheckReport:
    """Exact check of the three PBE conditions for a finite triple.

    Sender optimality reduces, by linearity in ``pi``, to: every signal a
    state uses must maximize that state's column of ``A U``.  Receiver
    optimality: every action used after signal n maximizes column n of
    ``V lam``.  Consistency is exact Bayes on realizable signals.
    """
    pi, a, lam = nm.as_matrix(pi), nm.as_matrix(a), nm.as_matrix(lam)
    M, K = game.num_states, game.num_actions
    if len(pi) != M or not pi:
        raise DimensionMismatch("information structure must have one row per state")
    N = len(pi[0])
    if any(len(r) != N for r in pi) or len(a) != N or any(len(r) != K for r in a):
        raise DimensionMismatch("receiver strategy must be N x K with N signals")
    if len(lam) != M or any(len(r) != N for r in lam):
        raise DimensionMismatch("belief system must be M x N")

    au = nm.matmul(a, game.U)  # N x M
    sender_witness = None
    for m in range(M):
        col = [au[n][m] for n in range(N)]
        top = max(col)
        for n in range(N):
            if pi[m][n] > 0 and col[n] < top:
                sender_witness = (m, n, col.index(top), top - col[n])
                break
        if sender_witness:
            break

    vl = nm.matmul(game.V, lam)  # K x N
    receiver_witness = None
    for n in range(N):
        col = [vl[k][n] for k in range(K)]
        top = max(col)
        for k in range(K):
            if a[n][k] > 0 and col[k] < top:
                receiver_witness = (n, k, col.index(top), top - col[k])
                break
        if receiver_witness:
            break

    gamma = signal_probabilities(game, pi)
    realizable = all(g > 0 for g in gamma)
    consistent = True
    for n, g in enumerate(gamma):
        if g == 0:
            continue
        for m in range(M):
            if lam[m][n] * g != game.prior[m] * pi[m][n]:
                consistent = False
    return PbeCheckReport(
        sender_br=sender_witness is None,
        receiver_br=receiver_witness is None,
        consistency=consistent,
        signals_realizable=realizable,
        sender_witness=sender_witness,
        receiver_witness=receiver_witness,
    )


def check_belief_dominance(game: CommGame, a, lam) -> list:
    """Signals whose belief column does not maximize ``a_n·U·lam``; empty when dominant."""
    a, lam = nm.as_matrix(a), nm.as_matrix(lam)
    bad = []
    for n, (row, belief) in enumerate(zip(a, nm.transpose(lam))):
        payoffs = nm.vecmat(row, game.U)
        if nm.dot(payoffs, belief) < max(payoffs):
            bad.append(n)
    return bad


@dataclass
class CsResult:
    """Everything ``solve_cs`` learned about covert-signaling equilibria."""

    candidates: list
    babbling: BabblingPbe
    tsb_max: Optional[TsbSolution] = None
    tsb_min: Optional[TsbSolution] = None
    pbe_max: Optional[TsbSolution] = None
    pbe_min: Optional[TsbSolution] = None
    checks: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)

    @property
    def tsb_feasible(self) -> bool:
        return self.tsb_max is not None

    def values(self) -> dict:
        """Sender values of every equilibrium candidate that exists."""
        out = {}
        for name in ("tsb_max", "tsb_min", "pbe_max", "pbe_min"):
            sol = getattr(self, name)
            if sol is not None:
                out[name] = sol.value
        out["babbling_pref"] = self.babbling.sender_value
        out["babbling_worst"] = self.babbling.sender_worst
        return out


def solve_cs(game: CommGame) -> CsResult:
    """Run stage one, both stage-two senses, the verified search, and babbling."""
    cands = enumerate_extreme_equilibria(game.U, game.V)
    result = CsResult(candidates=cands, babbling=babbling_pbe(game))
    for name, solver, sense in (
        ("tsb_max", solve_tsb, Sense.MAX),
        ("tsb_min", solve_tsb, Sense.MIN),
        ("pbe_max", search_verified_pbe, Sense.MAX),
        ("pbe_min", search_verified_pbe, Sense.MIN),
    ):
        try:
            sol = solver(game, cands, sense)
        except NoBeliefDominantPbe as exc:
            result.failures[name] = str(exc)
            continue
        setattr(result, name, sol)
        result.checks[name] = check_pbe(game, *assemble_pbe(game, sol))
    if result.tsb_max is not None and result.tsb_min is not None:
        assert result.tsb_min.value <= result.tsb_max.value
    return result


# ---------------------------------------------------------------------------
# Equilibrium documents
# ---------------------------------------------------------------------------


def equilibrium_to_dict(game: CommGame, pi, a, lam, gamma=None) -> dict:
    fmt = nm.format_rational
    if gamma is None:
        gamma = signal_probabilities(game, pi)
    return {
        "pi": [[fmt(x) for x in row] for row in pi],
        "a": [[fmt(x) for x in row] for row in a],
        "lambda": [[fmt(x) for x in row] for row in lam],
        "gamma": [fmt(g) for g in gamma],
        "sender_value": fmt(expected_sender_payoff(game, pi, a)),
        "receiver_value": fmt(expected_receiver_payoff(game, pi, a)),
    }


def parse_equilibrium(document) -> PbeTriple:
    """Read ``pi``, ``a`` and ``lambda`` from an equilibrium document."""
    if isinstance(document, (bytes, bytearray)):
        document = document.decode("utf-8")
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("equilibrium document must be a JSON object")
    try:
        return PbeTriple(nm.as_matrix(doc["pi"]), nm.as_matrix(doc["a"]), nm.as_matrix(doc["lambda"]))
    except KeyError as exc:
        raise ParseError(f"missing key {exc}") from exc
    except (TypeError, DimensionMismatch) as exc:
        raise ParseError(str(exc)) from exc

