"""Exact rational linear algebra and a two-phase simplex solver.

Everything here works on :class:`fractions.Fraction`, which already keeps
numerator/denominator in lowest terms with a positive denominator, so
structural equality of values is mathematical equality.  Vectors are tuples
of Fractions and matrices are tuples of row tuples.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DimensionMismatch, ParseError

Vector = tuple  # tuple[Fraction, ...]
Matrix = tuple  # tuple[tuple[Fraction, ...], ...]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(value) -> Fraction:
    """Parse ``"p"``, ``"p/q"`` or a Python int into a Fraction.

    Floats and decimal strings like ``"0.5"`` are refused so no binary
    rounding can leak into the exact path.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParseError(f"boolean is not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise ParseError(f"expected rational string, got {type(value).__name__}: {value!r}")
    m = _RATIONAL_RE.match(value)
    if m is None:
        raise ParseError(f"malformed rational: {value!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator: {value!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def as_vector(values) -> Vector:
    return tuple(parse_rational(v) for v in values)


def as_matrix(rows) -> Matrix:
    out = tuple(as_vector(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise DimensionMismatch("ragged matrix")
    return out


def shape(mat: Matrix) -> tuple:
    return (len(mat), len(mat[0]) if mat else 0)


def transpose(mat: Matrix) -> Matrix:
    if not mat:
        return ()
    return tuple(zip(*mat))


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise DimensionMismatch(f"dot of lengths {len(u)} and {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def matvec(mat: Matrix, v: Sequence[Fraction]) -> Vector:
    return tuple(dot(row, v) for row in mat)


def vecmat(v: Sequence[Fraction], mat: Matrix) -> Vector:
    """Row vector times matrix, ``vᵀ M``."""
    if len(v) != len(mat):
        raise DimensionMismatch(f"vector of length {len(v)} times {len(mat)}-row matrix")
    return matvec(transpose(mat), v)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if shape(a)[1] != len(b):
        raise DimensionMismatch(f"cannot multiply {shape(a)} by {shape(b)}")
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def trace(mat: Matrix) -> Fraction:
    return sum((mat[i][i] for i in range(len(mat))), Fraction(0))


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# Dense linear systems
# ---------------------------------------------------------------------------


class SystemKind(enum.Enum):
    UNIQUE = "unique"
    UNDERDETERMINED = "underdetermined"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class LinearSolution:
    kind: SystemKind
    x: Optional[Vector] = None

    @property
    def unique(self) -> bool:
        return self.kind is SystemKind.UNIQUE


def _row_reduce(rows: list, ncols: int) -> list:
    """Reduced row echelon form in place; returns pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [vi - f * vr for vi, vr in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return pivots


def solve_linear_system(a, b) -> LinearSolution:
    """Solve ``A x = b`` exactly and classify the system by rank."""
    a = as_matrix(a)
    b = as_vector(b)
    if not a or not a[0]:
        raise DimensionMismatch("empty coefficient matrix")
    if len(a) != len(b):
        raise DimensionMismatch(f"{len(a)} rows but rhs of length {len(b)}")
    n = len(a[0])
    rows = [list(row) + [rhs] for row, rhs in zip(a, b)]
    pivots = _row_reduce(rows, n)
    rank = len(pivots)
    if any(all(v == 0 for v in row[:n]) and row[n] != 0 for row in rows[rank:]):
        return LinearSolution(SystemKind.INCONSISTENT)
    if rank < n:
        return LinearSolution(SystemKind.UNDERDETERMINED)
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = rows[i][n]
    return LinearSolution(SystemKind.UNIQUE, tuple(x))


def matrix_rank(a) -> int:
    a = as_matrix(a)
    if not a:
        return 0
    rows = [list(r) for r in a]
    return len(_row_reduce(rows, len(a[0])))


# ---------------------------------------------------------------------------
# Linear programming
# ---------------------------------------------------------------------------


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpProblem:
    """``maximize c·x`` subject to ``A_eq x = b_eq``, ``A_ub x <= b_ub``, ``x >= lower``."""

    objective: Vector
    a_eq: Matrix = ()
    b_eq: Vector = ()
    a_ub: Matrix = ()
    b_ub: Vector = ()
    lower: Optional[Vector] = None

    def __post_init__(self):
        for name in ("objective", "b_eq", "b_ub"):
            object.__setattr__(self, name, as_vector(getattr(self, name)))
        for name in ("a_eq", "a_ub"):
            object.__setattr__(self, name, as_matrix(getattr(self, name)))
        n = len(self.objective)
        if self.lower is None:
            object.__setattr__(self, "lower", (Fraction(0),) * n)
        else:
            object.__setattr__(self, "lower", as_vector(self.lower))
        if len(self.lower) != n:
            raise DimensionMismatch("lower bounds do not match number of variables")
        for mat, rhs, label in ((self.a_eq, self.b_eq, "equality"), (self.a_ub, self.b_ub, "inequality")):
            if len(mat) != len(rhs):
                raise DimensionMismatch(f"{label} matrix has {len(mat)} rows, rhs has {len(rhs)}")
            if any(len(row) != n for row in mat):
                raise DimensionMismatch(f"{label} row width differs from {n} variables")

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    x: Optional[Vector] = None
    value: Optional[Fraction] = None
    # Dual prices for the equality and inequality rows (present iff optimal).
    duals_eq: Optional[Vector] = field(default=None, compare=False)
    duals_ub: Optional[Vector] = field(default=None, compare=False)

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.a = rows
        self.b = rhs
        self.basis = basis
        self.d = None  # reduced costs
        self.z = Fraction(0)  # objective value of the current basis

    def set_objective(self, cost):
        self.d = list(cost)
        self.z = Fraction(0)
        for i, j in enumerate(self.basis):
            cj = cost[j]
            if cj != 0:
                self.d = [dk - cj * ak for dk, ak in zip(self.d, self.a[i])]
                self.z += cj * self.b[i]

    def pivot(self, r, c):
        row = self.a[r]
        piv = row[c]
        if piv != 1:
            row = [v / piv for v in row]
            self.a[r] = row
            self.b[r] /= piv
        for i in range(len(self.a)):
            if i != r:
                f = self.a[i][c]
                if f != 0:
                    self.a[i] = [vi - f * vr for vi, vr in zip(self.a[i], row)]
                    self.b[i] -= f * self.b[r]
        f = self.d[c]
        if f != 0:
            self.d = [di - f * vr for di, vr in zip(self.d, row)]
            self.z += f * self.b[r]
        self.basis[r] = c

    def run(self, allowed: int) -> bool:
        """Bland's rule simplex over columns ``< allowed``; False if unbounded."""
        while True:
            enter = next((j for j in range(allowed) if self.d[j] > 0), None)
            if enter is None:
                return True
            best = None
            for i, row in enumerate(self.a):
                if row[enter] > 0:
                    ratio = self.b[i] / row[enter]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], enter)


def lp_solve(problem: LpProblem) -> LpOutcome:
    """Solve a small LP exactly with a two-phase simplex and Bland's rule.

    Optimal answers are basic: at most one nonzero structural variable per
    constraint row.  Dual prices are recovered from the final basis.
    """
    n = problem.num_vars
    lower = problem.lower
    n_eq, n_ub = len(problem.a_eq), len(problem.a_ub)

    # Shift x = x' + lower so every variable is nonnegative; add slacks.
    rows, rhs = [], []
    for row, bi in zip(problem.a_eq, problem.b_eq):
        rows.append(list(row) + [Fraction(0)] * n_ub)
        rhs.append(bi - dot(row, lower))
    for s, (row, bi) in enumerate(zip(problem.a_ub, problem.b_ub)):
        slack = [Fraction(0)] * n_ub
        slack[s] = Fraction(1)
        rows.append(list(row) + slack)
        rhs.append(bi - dot(row, lower))
    n_std = n + n_ub
    m = len(rows)
    sign = [1] * m
    for i in range(m):
        if rhs[i] < 0:
            sign[i] = -1
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    std_rows = [list(r) for r in rows]
    cost = list(problem.objective) + [Fraction(0)] * n_ub

    if m == 0:
        if any(c > 0 for c in problem.objective):
            return LpOutcome(LpStatus.UNBOUNDED)
        x = tuple(lower)
        return LpOutcome(LpStatus.OPTIMAL, x, dot(problem.objective, x), (), ())

    # Phase 1: one artificial per row.
    tab_rows = [r + [Fraction(int(i == k)) for k in range(m)] for i, r in enumerate(rows)]
    tab = _Tableau(tab_rows, list(rhs), [n_std + i for i in range(m)])
    tab.set_objective([Fraction(0)] * n_std + [Fraction(-1)] * m)
    tab.run(n_std + m)
    if tab.z != 0:
        return LpOutcome(LpStatus.INFEASIBLE)

    # Drive artificials out of the basis; rows where that is impossible are redundant.
    keep = []
    for i in range(m):
        if tab.basis[i] >= n_std:
            c = next((j for j in range(n_std) if tab.a[i][j] != 0), None)
            if c is None:
                continue
            tab.pivot(i, c)
        keep.append(i)
    orig_rows = keep[:]  # positions refer to original row order at this point
    tab.a = [tab.a[i][:n_std] for i in keep]
    tab.b = [tab.b[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]

    # Phase 2.
    tab.set_objective(cost)
    if not tab.run(n_std):
        return LpOutcome(LpStatus.UNBOUNDED)

    xs = [Fraction(0)] * n_std
    for i, j in enumerate(tab.basis):
        xs[j] = tab.b[i]
    x = tuple(xs[j] + lower[j] for j in range(n))

    duals = [Fraction(0)] * m
    if orig_rows:
        basis_t = [[std_rows[i][j] for i in orig_rows] for j in tab.basis]
        sol = solve_linear_system(basis_t, [cost[j] for j in tab.basis])
        if sol.unique:
            for pos, i in enumerate(orig_rows):
                duals[i] = sol.x[pos] * sign[i]
    return LpOutcome(
        LpStatus.OPTIMAL,
        x,
        dot(problem.objective, x),
        tuple(duals[:n_eq]),
        tuple(duals[n_eq:]),
    )
