"""Exact dense linear algebra: reduced row echelon form and linear solves.

Over the rationals the forward elimination is fraction-free (Bareiss) on
denominator-cleared integer rows, which keeps intermediate entries bounded
by minors; fractions reappear only in the final normalisation.  Over a
prime field a plain Gauss-Jordan sweep is used.  Pivoting is deterministic:
first nonzero entry in the current column.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import List, Sequence, Tuple, Union

from .errors import UsageError
from .fields import Field, Scalar


class Matrix:
    """Immutable-by-convention dense matrix of exact scalars."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: Sequence[Sequence]):
        self.field = field
        self.data = [[field.of(x) for x in row] for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(row) != self.cols for row in self.data):
            raise UsageError("ragged rows in matrix")

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero()
        return cls(field, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero(), field.one()
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    def entry(self, i: int, j: int) -> Scalar:
        return self.data[i][j]

    def row(self, i: int) -> Tuple[Scalar, ...]:
        return tuple(self.data[i])

    def column(self, j: int) -> Tuple[Scalar, ...]:
        return tuple(r[j] for r in self.data)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [[self.data[i][j] for i in range(self.rows)]
                                   for j in range(self.cols)])

    def mul_vector(self, x: Sequence) -> Tuple[Scalar, ...]:
        if len(x) != self.cols:
            raise UsageError(f"vector length {len(x)} != column count {self.cols}")
        xs = [self.field.of(v) for v in x]
        return tuple(sum((r[j] * xs[j] for j in range(self.cols)), self.field.zero())
                     for r in self.data)

    def augment(self, other: "Matrix") -> "Matrix":
        if other.rows != self.rows:
            raise UsageError("row count mismatch in augment")
        return Matrix(self.field, [self.data[i] + other.data[i] for i in range(self.rows)])

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.data == other.data)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"Matrix({self.rows}x{self.cols}: {body})"


@dataclass(frozen=True)
class RrefResult:
    matrix: Matrix
    pivot_columns: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivot_columns)


def _rref_rational(data: List[List[Fraction]], cols: int, pivot_limit: int):
    # Clear denominators row by row, then Bareiss fraction-free echelon.
    rows = []
    for r in data:
        m = lcm(*(x.denominator for x in r)) if r else 1
        rows.append([int(x * m) for x in r])
    nrows = len(rows)
    prev = 1
    rank = 0
    pivots = []
    for c in range(pivot_limit):
        piv = next((i for i in range(rank, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][c]
        for i in range(rank + 1, nrows):
            ri = rows[i]
            f = ri[c]
            rp = rows[rank]
            for j in range(c + 1, cols):
                ri[j] = (p * ri[j] - f * rp[j]) // prev
            ri[c] = 0
        prev = p
        pivots.append(c)
        rank += 1
        if rank == nrows:
            break
    # Normalise pivots to 1 and eliminate above (exact divisions, fractions
    # may reappear here only).
    out = [[Fraction(x) for x in r] for r in rows]
    for k in range(rank - 1, -1, -1):
        c = pivots[k]
        pk = out[k][c]
        out[k] = [x / pk for x in out[k]]
        for i in range(k):
            f = out[i][c]
            if f:
                out[i] = [a - f * b for a, b in zip(out[i], out[k])]
    return out, pivots


def _rref_prime(data, cols: int, pivot_limit: int, field: Field):
    rows = [list(r) for r in data]
    nrows = len(rows)
    rank = 0
    pivots = []
    for c in range(pivot_limit):
        piv = next((i for i in range(rank, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][c].inverse()
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(nrows):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(c)
        rank += 1
        if rank == nrows:
            break
    return rows, pivots


def rref(m: Matrix, pivot_limit: int | None = None) -> RrefResult:
    """Unique reduced row echelon form; pivots restricted to the first
    ``pivot_limit`` columns (all columns by default)."""
    limit = m.cols if pivot_limit is None else pivot_limit
    if m.rows == 0 or m.cols == 0:
        return RrefResult(m, ())
    if m.field.is_rational:
        rows, pivots = _rref_rational(m.data, m.cols, limit)
    else:
        rows, pivots = _rref_prime(m.data, m.cols, limit, m.field)
    return RrefResult(Matrix(m.field, rows), tuple(pivots))


@dataclass(frozen=True)
class LinearSolution:
    """A particular solution together with a basis of the homogeneous kernel."""

    particular: Tuple[Scalar, ...]
    kernel: Tuple[Tuple[Scalar, ...], ...]


@dataclass(frozen=True)
class LinearObstruction:
    """Inconsistency certificate: row of the reduced augmented system whose
    coefficient part vanishes while its right side does not."""

    row: int


SolveOutcome = Union[LinearSolution, LinearObstruction]


def kernel_basis(m: Matrix) -> Tuple[Tuple[Scalar, ...], ...]:
    res = rref(m)
    return _kernel_from_rref(m.field, res.matrix, res.pivot_columns, m.cols)


def _kernel_from_rref(field, red: Matrix, pivots, ncols) -> Tuple[Tuple[Scalar, ...], ...]:
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [field.zero()] * ncols
        v[f] = field.one()
        for r, c in enumerate(pivots):
            v[c] = -red.entry(r, f)
        basis.append(tuple(v))
    return tuple(basis)


def solve(m: Matrix, b: Sequence) -> SolveOutcome:
    """Solve M x = b exactly, or return a checkable inconsistency witness."""
    return solve_many(m, [b])[0]


def solve_many(m: Matrix, bs: Sequence[Sequence]) -> List[SolveOutcome]:
    """Solve M x = b for several right-hand sides with one elimination."""
    field = m.field
    for b in bs:
        if len(b) != m.rows:
            raise UsageError(f"right side length {len(b)} != row count {m.rows}")
    aug = Matrix(field, [list(m.data[i]) + [field.of(b[i]) for b in bs]
                         for i in range(m.rows)])
    res = rref(aug, pivot_limit=m.cols)
    red, pivots = res.matrix, res.pivot_columns
    rank = len(pivots)
    kernel = _kernel_from_rref(field, red, pivots, m.cols)
    out: List[SolveOutcome] = []
    for k in range(len(bs)):
        col = m.cols + k
        bad = next((r for r in range(rank, m.rows) if red.entry(r, col)), None)
        if bad is not None:
            out.append(LinearObstruction(row=bad))
            continue
        x = [field.zero()] * m.cols
        for r, c in enumerate(pivots):
            x[c] = red.entry(r, col)
        out.append(LinearSolution(particular=tuple(x), kernel=kernel))
    return out
