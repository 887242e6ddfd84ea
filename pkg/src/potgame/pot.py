"""Price of Transparency: covert-signaling payoff over overt-persuasion payoff."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import numeric as nm
from .bimatrix import enumerate_extreme_equilibria
from .errors import BoundaryPrior, DimensionMismatch, RatioUndefined, ValidationError, ZeroOpValue
from .game import CommGame
from .persuasion import PersuasionSolution, solve_op
from .tsb import CsResult, solve_cs

logger = logging.getLogger(__name__)

HEADLINE = "tsb_max"
CANDIDATES = ("tsb_max", "tsb_min", "pbe_max", "pbe_min", "babbling_pref", "babbling_worst")


@dataclass(frozen=True)
class CompetitiveCertificate:
    """Scalars with ``c U + d J = -e V + f J``, ``c > 0``, ``e > 0``."""

    c: Fraction
    d: Fraction
    e: Fraction
    f: Fraction

    def as_tuple(self):
        return (self.c, self.d, self.e, self.f)


@dataclass
class PotReport:
    uop: Fraction
    cs_values: dict
    ratios: dict = field(default_factory=dict)
    ratio_note: Optional[str] = None
    competitive: Optional[CompetitiveCertificate] = None
    # For competitive games: which closed form reproduces U^CS.
    competitive_identities: dict = field(default_factory=dict)
    op: Optional[PersuasionSolution] = field(default=None, repr=False)
    cs: Optional[CsResult] = field(default=None, repr=False)

    def ratio(self, name: str = HEADLINE) -> Fraction:
        if name not in CANDIDATES:
            raise KeyError(f"no covert-signaling value named {name!r}")
        if name not in self.cs_values:
            raise RatioUndefined(f"{name} does not exist for this game")
        if name not in self.ratios:
            if self.uop == 0:
                raise ZeroOpValue("U^OP is zero; the ratio is undefined")
            raise RatioUndefined(self.ratio_note or "ratio undefined")
        return self.ratios[name]


def compute_pot(game: CommGame) -> PotReport:
    """Solve both information structures and form every available ratio."""
    op = solve_op(game)
    cs = solve_cs(game)
    values = cs.values()
    report = PotReport(uop=op.value, cs_values=values, op=op, cs=cs)
    if not game.nonnegative_sender:
        report.ratio_note = "sender payoffs have negative entries; ratios are not meaningful"
    elif op.value == 0:
        report.ratio_note = "U^OP is zero"
    else:
        report.ratios = {name: v / op.value for name, v in values.items()}
        for name, r in report.ratios.items():
            assert 0 <= r <= 1, (name, r)

    cert = check_strict_competitive(game.U, game.V)
    report.competitive = cert
    if cert is not None and "tsb_max" in values:
        up = nm.matvec(game.U, game.prior)
        ucs = values["tsb_max"]
        _, _, saddle = solve_matrix_game(game.U)
        report.competitive_identities = {
            "value(U)": saddle == ucs,
            "min_k (Up)_k": min(up) == ucs,
            "max_k (Up)_k": max(up) == ucs,
        }
        logger.info("competitive game: U^CS=%s value(U)=%s min(Up)=%s max(Up)=%s", ucs, saddle, min(up), max(up))
    return report


def check_strict_competitive(U, V) -> Optional[CompetitiveCertificate]:
    """Certificate ``(1, 0, e, g)`` with ``U + e V = g J`` and ``e > 0``, or None."""
    U, V = nm.as_matrix(U), nm.as_matrix(V)
    if nm.shape(U) != nm.shape(V):
        raise DimensionMismatch(f"payoff shapes differ: {nm.shape(U)} vs {nm.shape(V)}")
    u = [x for row in U for x in row]
    v = [x for row in V for x in row]
    u_const = all(x == u[0] for x in u)
    v_const = all(x == v[0] for x in v)
    if v_const:
        if not u_const:
            return None
        e = Fraction(1)
    else:
        if u_const:
            return None
        j = next(i for i in range(len(v)) if v[i] != v[0])
        e = -(u[j] - u[0]) / (v[j] - v[0])
        if e <= 0:
            return None
    g = u[0] + e * v[0]
    if any(ui + e * vi != g for ui, vi in zip(u, v)):
        return None
    return CompetitiveCertificate(Fraction(1), Fraction(0), e, g)


def solve_matrix_game(U) -> tuple:
    """Saddle point of ``U`` with ``a`` minimizing and ``lam`` maximizing ``a·U·lam``.

    Returns ``(a, lam, value)``.
    """
    U = nm.as_matrix(U)
    K, M = nm.shape(U)
    if K == 0 or M == 0:
        raise DimensionMismatch("empty payoff matrix")
    shift = 1 - min(x for row in U for x in row)
    W = tuple(tuple(x + shift for x in row) for row in U)  # all entries >= 1

    # lam side: max v  s.t.  (W lam)_k >= v,  sum lam = 1.  Variables (lam, v).
    lam_lp = nm.LpProblem(
        objective=[0] * M + [1],
        a_eq=[[1] * M + [0]],
        b_eq=[1],
        a_ub=[[-w for w in row] + [1] for row in W],
        b_ub=[0] * K,
    )
    # a side: min w  s.t.  (Wᵀ a)_m <= w,  sum a = 1.  Variables (a, w).
    a_lp = nm.LpProblem(
        objective=[0] * K + [-1],
        a_eq=[[1] * K + [0]],
        b_eq=[1],
        a_ub=[[W[k][m] for k in range(K)] + [-1] for m in range(M)],
        b_ub=[0] * M,
    )
    lam_out, a_out = nm.lp_solve(lam_lp), nm.lp_solve(a_lp)
    assert lam_out.optimal and a_out.optimal
    lower, upper = lam_out.value, -a_out.value
    assert lower == upper, (lower, upper)
    return a_out.x[:K], lam_out.x[:M], lower - shift


def construct_competitive_instance(U, states=(), actions=()) -> CommGame:
    """Zero-sum-like game on ``U`` whose prior is a saddle belief.

    ``V = max(U) J - U`` keeps receiver payoffs nonnegative.  If the LP's
    saddle belief touches the boundary, the barycenter of all extreme saddle
    beliefs is tried before giving up.
    """
    U = nm.as_matrix(U)
    if not U or not U[0]:
        raise DimensionMismatch("empty payoff matrix")
    if any(x < 0 for row in U for x in row):
        raise ValidationError("sender payoffs must be nonnegative")
    top = max(x for row in U for x in row)
    V = tuple(tuple(top - x for x in row) for row in U)
    _, lam, _ = solve_matrix_game(U)
    if any(x == 0 for x in lam):
        beliefs = sorted({t.lam for t in enumerate_extreme_equilibria(U, V)})
        M = len(U[0])
        lam = tuple(sum((b[m] for b in beliefs), Fraction(0)) / len(beliefs) for m in range(M))
        if any(x == 0 for x in lam):
            raise BoundaryPrior(f"every saddle belief puts zero mass on some state: {[str(x) for x in lam]}")
    return CommGame(prior=lam, sender_payoff=U, receiver_payoff=V, states=states, actions=actions)
