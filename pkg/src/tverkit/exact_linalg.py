"""Exact rational linear algebra and linear feasibility.

Everything here works over :class:`fractions.Fraction`, which is already
canonical (positive denominator, reduced).  The feasibility solver is a
phase-1 simplex with Bland's rule run on an integer tableau using
fraction-free (Bareiss/Edmonds) pivoting, so no gcd work happens inside the
pivot loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Rational = Fraction
Vector = tuple[Fraction, ...]
RatMatrix = list[list[Fraction]]

__all__ = [
    "Rational",
    "InputError",
    "to_rational",
    "to_vector",
    "FeasibilitySystem",
    "solve_linear",
    "lp_feasible",
    "rank",
    "affine_dim",
    "fmt_rational",
]


class InputError(ValueError):
    """Malformed input to one of the library operations."""


def to_rational(value) -> Fraction:
    """Parse ints, Fractions, ``"p/q"`` and decimal strings exactly.

    Floats are rejected: they carry binary rounding that would leak into
    certificates.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {value!r}") from exc
    raise InputError(f"not a rational: {value!r}")


def to_vector(values: Iterable) -> Vector:
    return tuple(to_rational(v) for v in values)


def fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class FeasibilitySystem:
    """``A x = b`` with ``x_i >= 0`` for ``i in nonnegative``.

    ``nonnegative=None`` means every variable is sign-constrained.
    """

    A: Sequence[Sequence[Fraction]]
    b: Sequence[Fraction]
    nonnegative: frozenset[int] | None = None
    # needed only when A has no rows
    num_vars: int | None = None


def _check_shape(A, b) -> int:
    if len(A) != len(b):
        raise InputError(f"dimension mismatch: {len(A)} rows but {len(b)} right-hand sides")
    n = len(A[0]) if A else 0
    for row in A:
        if len(row) != n:
            raise InputError("matrix is not rectangular")
    return n


def solve_linear(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Solve ``A x = b`` exactly.

    Gauss-Jordan with the first nonzero entry of each column as pivot;
    free variables are set to zero.  Returns ``None`` iff inconsistent.
    """
    n = _check_shape(A, b)
    M = [[to_rational(v) for v in row] + [to_rational(bi)] for row, bi in zip(A, b)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [vi - f * vr for vi, vr in zip(M[i], M[r])]
        pivots.append((r, c))
        r += 1
    if any(M[i][n] != 0 for i in range(r, len(M))):
        return None
    x = [Fraction(0)] * n
    for i, c in pivots:
        x[c] = M[i][n]
    return x


def rank(A: Sequence[Sequence]) -> int:
    if not A:
        return 0
    rows = _integer_rows([[to_rational(v) for v in row] for row in A])
    return len(_gauss_jordan(rows, len(rows[0]))[0])


def affine_dim(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull; 0 for a single point."""
    if not points:
        raise InputError("affine_dim of an empty point list")
    base = [to_rational(v) for v in points[0]]
    diffs = [[to_rational(v) - b0 for v, b0 in zip(p, base)] for p in points[1:]]
    return rank(diffs) if diffs else 0


# ---------------------------------------------------------------------------
# integer tableau machinery


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        L = lcm(*(v.denominator for v in row)) if row else 1
        out.append([v.numerator * (L // v.denominator) for v in row])
    return out


def _pivot(M: list[list[int]], r: int, s: int, D: int) -> int:
    """Fraction-free pivot on ``M[r][s]``; returns the new common divisor.

    The represented rational tableau is ``M / D`` before and ``M / M[r][s]``
    after.  Divisions are exact because every entry is a minor of the
    starting integer matrix.
    """
    p = M[r][s]
    pivot_row = M[r]
    for i, row in enumerate(M):
        if i == r:
            continue
        f = row[s]
        if f == 0:
            if p != D:
                M[i] = [(v * p) // D for v in row]
            continue
        M[i] = [(v * p - f * w) // D for v, w in zip(row, pivot_row)]
    return p


def _gauss_jordan(M: list[list[int]], ncols: int) -> tuple[list[tuple[int, int]], int]:
    """Reduce ``M`` in place on its first ``ncols`` columns.

    Returns (pivot positions, final divisor).  Pivot rows end up at the top.
    """
    D = 1
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        D = _pivot(M, r, c, D)
        pivots.append((r, c))
        r += 1
        if r == len(M):
            break
    return pivots, D


def _unique_solution(rows: list[list[int]], n: int):
    """Classify ``[A | b]``: ('inconsistent', None), ('unique', x) or ('many', None)."""
    M = [list(row) for row in rows]
    pivots, D = _gauss_jordan(M, n)
    if any(M[i][n] != 0 for i in range(len(pivots), len(M))):
        return "inconsistent", None
    if len(pivots) < n:
        return "many", None
    x = [Fraction(0)] * n
    for i, c in pivots:
        x[c] = Fraction(M[i][n], M[i][c])
    return "unique", x


def lp_feasible(system: FeasibilitySystem) -> list[Fraction] | None:
    """Exact feasibility of ``A x = b, x_i >= 0 (i in nonnegative)``.

    Returns a witness or ``None`` iff infeasible.  When the equalities pin
    down a unique point that point is the witness; otherwise the witness is
    the basic solution reached by phase-1 simplex with Bland's rule.
    """
    A, b = system.A, system.b
    n = _check_shape(A, b) if A else (system.num_vars or 0)
    nonneg = frozenset(range(n)) if system.nonnegative is None else frozenset(system.nonnegative)
    if any(not 0 <= j < n for j in nonneg):
        raise InputError("nonnegative index out of range")

    rows = _integer_rows([[to_rational(v) for v in row] + [to_rational(bi)] for row, bi in zip(A, b)])
    kept = []
    for row in rows:
        if any(row[:n]):
            kept.append(row)
        elif row[n] != 0:
            return None
    rows = kept
    if not rows:
        return [Fraction(0)] * n

    kind, x = _unique_solution(rows, n)
    if kind == "inconsistent":
        return None
    if kind == "unique":
        return x if all(x[j] >= 0 for j in nonneg) else None
    return _phase_one(rows, n, nonneg)


def _phase_one(rows: list[list[int]], n: int, nonneg: frozenset[int]) -> list[Fraction] | None:
    free = [j for j in range(n) if j not in nonneg]
    # structural columns: x_0..x_{n-1}, then -x_j for each free j
    m = len(rows)
    nstruct = n + len(free)
    ncols = nstruct + m
    rhs = ncols
    M = []
    for i, row in enumerate(rows):
        sgn = -1 if row[n] < 0 else 1
        line = [sgn * v for v in row[:n]]
        line += [-sgn * row[j] for j in free]
        art = [0] * m
        art[i] = 1
        M.append(line + art + [sgn * row[n]])
    obj = [-sum(M[i][j] for i in range(m)) for j in range(nstruct)] + [0] * m
    obj.append(-sum(M[i][rhs] for i in range(m)))
    M.append(obj)
    basis = [nstruct + i for i in range(m)]
    D = 1

    while True:
        z = M[m]
        s = next((j for j in range(nstruct) if z[j] < 0), None)
        if s is None:
            break
        best = None
        for i in range(m):
            a = M[i][s]
            if a <= 0:
                continue
            if best is None:
                best = i
                continue
            # compare M[i][rhs]/a with M[best][rhs]/M[best][s]
            lhs = M[i][rhs] * M[best][s]
            cur = M[best][rhs] * a
            if lhs < cur or (lhs == cur and basis[i] < basis[best]):
                best = i
        # phase one is bounded below, so a positive entry always exists
        D = _pivot(M, best, s, D)
        basis[best] = s

    if M[m][rhs] != 0:
        return None
    vals = [Fraction(0)] * ncols
    for i, col in enumerate(basis):
        vals[col] = Fraction(M[i][rhs], D)
    x = vals[:n]
    for k, j in enumerate(free):
        x[j] -= vals[n + k]
    return x
