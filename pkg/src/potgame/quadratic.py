"""Quadratic communication game on [0, 1] with uniform prior and sender bias ``b``.

Payoffs are ``u = -(a - w - b)^2`` for the sender and ``v = -(a - w)^2`` for
the receiver.  Covert signaling equilibria are partitions of [0, 1]; overt
persuasion reveals the state and earns ``-b^2``.  All values here are
64-bit floats.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import GridTooSmall, NonPositiveBias, PartitionTooFine

logger = logging.getLogger(__name__)

TOL = 1e-12
_CHUNK = 1 << 16


def _check_bias(b):
    if not b > 0 or not math.isfinite(b):
        raise NonPositiveBias(f"bias must be a positive finite number, got {b!r}")


def _ceiling_formula(b: float) -> int:
    # Shave rounding noise so exact-integer cases (e.g. b = 1/12) stay put.
    return max(1, math.ceil(-0.5 + 0.5 * math.sqrt(1 + 2 / b) - 1e-9))


def n_of_b(b: float) -> int:
    """Largest partition size whose boundaries are strictly increasing.

    That is the largest N with ``2 b N (N - 1) < 1``; products within
    ``TOL`` of 1 count as the degenerate boundary case.
    """
    _check_bias(b)
    n = 1
    while 2 * b * (n + 1) * n < 1 - TOL:
        n += 1
    closed = _ceiling_formula(b)
    if closed != n:
        logger.warning("N(b) mismatch at b=%r: monotonicity gives %d, ceiling formula gives %d", b, n, closed)
    return n


def _check_n(b, n):
    _check_bias(b)
    if n < 1:
        raise PartitionTooFine(f"partition size must be at least 1, got {n}")
    limit = n_of_b(b)
    if n > limit:
        raise PartitionTooFine(f"N={n} exceeds N(b)={limit} for b={b}")


def partition(b: float, n: int) -> np.ndarray:
    """Equilibrium boundaries ``k_i = i/N + 2 b i (i - N)``, i = 0..N."""
    _check_n(b, n)
    i = np.arange(n + 1, dtype=float)
    k = i / n + 2 * b * i * (i - n)
    k[0], k[-1] = 0.0, 1.0
    if np.any(np.diff(k) <= 0):
        raise PartitionTooFine(f"boundaries not strictly increasing for b={b}, N={n}")
    return k


def weighted_variance_payoff(boundaries, b: float) -> float:
    """Sender payoff as ``-sum_i d_i * d_i^2 / 12 - b^2`` for interval widths ``d_i``."""
    d = np.diff(np.asarray(boundaries, dtype=float))
    return float(-np.sum(d**3) / 12 - b * b)


def ucs_quadratic(b: float, n: int) -> float:
    boundaries = partition(b, n)
    closed = -1 / (12 * n * n) - b * b * (n * n - 1) / 3 - b * b
    geometric = weighted_variance_payoff(boundaries, b)
    if abs(closed - geometric) > TOL:
        raise ArithmeticError(f"closed form {closed} disagrees with interval variances {geometric}")
    return closed


def uop_quadratic(b: float) -> float:
    _check_bias(b)
    return -b * b


def verify_partition_indifference(b: float, n: int, boundaries=None) -> np.ndarray:
    """Sender indifference residual at each interior boundary.

    At ``k_i`` the sender (ideal point ``k_i + b``) must be indifferent
    between the receiver's replies to the two adjacent intervals, which are
    the interval midpoints.
    """
    _check_n(b, n)
    k = partition(b, n) if boundaries is None else np.asarray(boundaries, dtype=float)
    mids = (k[:-1] + k[1:]) / 2
    inner = k[1:-1]
    return (mids[:-1] - inner - b) ** 2 - (mids[1:] - inner - b) ** 2


@dataclass(frozen=True)
class SimulationResult:
    sender_mean: float
    receiver_mean: float
    sender_se: float
    receiver_se: float
    trials: int


def simulate_quadratic(b: float, n: int, trials: int, seed: int) -> SimulationResult:
    """Monte Carlo play of the partition equilibrium.

    The state is uniform, the sender draws its signal uniformly inside the
    state's interval, and the receiver answers with that interval's
    midpoint.  Each fixed-size chunk gets its own child seed, so results
    depend only on ``(seed, trials)``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    k = partition(b, n)
    mids = (k[:-1] + k[1:]) / 2
    n_chunks = -(-trials // _CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    s_sum = s_sq = r_sum = r_sq = 0.0
    for c, child in enumerate(children):
        size = min(_CHUNK, trials - c * _CHUNK)
        rng = np.random.default_rng(child)
        state = rng.random(size)
        cell = np.clip(np.searchsorted(k, state, side="right") - 1, 0, n - 1)
        signal = k[cell] + rng.random(size) * (k[cell + 1] - k[cell])
        heard = np.clip(np.searchsorted(k, signal, side="right") - 1, 0, n - 1)
        action = mids[heard]
        su = -((action - state - b) ** 2)
        rv = -((action - state) ** 2)
        s_sum += su.sum()
        s_sq += (su * su).sum()
        r_sum += rv.sum()
        r_sq += (rv * rv).sum()

    def moments(total, sq):
        mean = total / trials
        if trials < 2:
            return mean, math.inf
        var = max(sq - trials * mean * mean, 0.0) / (trials - 1)
        return mean, math.sqrt(var / trials)

    sm, sse = moments(s_sum, s_sq)
    rm, rse = moments(r_sum, r_sq)
    return SimulationResult(float(sm), float(rm), float(sse), float(rse), trials)


@dataclass(frozen=True)
class QuadraticReport:
    b: float
    n: int
    boundaries: tuple
    ucs: float
    uop: float
    n_max: int

    @property
    def ratio_abs(self) -> float:
        # Payoffs are negative here, so this is |U^CS| / |U^OP| and grows as b -> 0.
        return abs(self.ucs) / abs(self.uop)

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "N": self.n,
            "N_max": self.n_max,
            "boundaries": list(self.boundaries),
            "ucs": self.ucs,
            "uop": self.uop,
            "ratio_abs": self.ratio_abs,
        }


def quadratic_report(b: float, n=None) -> QuadraticReport:
    n_max = n_of_b(b)
    n = n_max if n is None else n
    return QuadraticReport(b, n, tuple(float(x) for x in partition(b, n)), ucs_quadratic(b, n), uop_quadratic(b), n_max)


@dataclass(frozen=True)
class ConvergenceResult:
    slope_cs: float
    slope_op: float
    table: tuple  # QuadraticReport per grid point


def convergence_order(b_grid) -> ConvergenceResult:
    """Log-log slopes of |U^CS(b, N(b))| and |U^OP(b)| against b."""
    grid = sorted(float(b) for b in b_grid)
    if len(grid) < 3:
        raise GridTooSmall(f"need at least 3 biases, got {len(grid)}")
    for b in grid:
        _check_bias(b)
    if math.log10(grid[-1] / grid[0]) < 2 - TOL:
        raise GridTooSmall("grid must span at least two decades")
    rows = tuple(quadratic_report(b) for b in grid)
    x = np.log([r.b for r in rows])
    slope_cs = float(np.polyfit(x, np.log([abs(r.ucs) for r in rows]), 1)[0])
    slope_op = float(np.polyfit(x, np.log([abs(r.uop) for r in rows]), 1)[0])
    return ConvergenceResult(slope_cs, slope_op, rows)
