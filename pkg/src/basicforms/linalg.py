"""Exact linear algebra over the scalar field.

Elimination is fraction-free in the Bareiss style: each row is first scaled
to clear parameter denominators, then the two-term update divides by the
previous pivot, which is an exact division.  This keeps intermediate entries
polynomial in the parameter instead of letting numerators and denominators
balloon.  Pivoting always takes the first nonzero entry in column order, so
every routine here is deterministic.

Kernel bases are canonical: they come from the reduced row echelon form
(one basis vector per free column, in column order) and each vector is
scaled so its first nonzero coordinate has positive leading coefficient.
"""

from __future__ import annotations

from typing import Sequence

from .scalars import Scalar, ScalarLike

Vector = tuple[Scalar, ...]


class Matrix:
    """Immutable dense matrix of Scalars, row-major."""

    __slots__ = ("_rows", "_cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[ScalarLike]):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(entries) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries for {rows}x{cols}, got {len(entries)}"
            )
        self._rows = rows
        self._cols = cols
        self._entries = tuple(Scalar.of(e) for e in entries)

    @staticmethod
    def from_rows(rows: Sequence[Sequence[ScalarLike]]) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        flat: list[ScalarLike] = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            flat.extend(r)
        return Matrix(nrows, ncols, flat)

    @staticmethod
    def from_columns(cols: Sequence[Sequence[ScalarLike]]) -> "Matrix":
        ncols = len(cols)
        nrows = len(cols[0]) if ncols else 0
        rows = [[cols[j][i] for j in range(ncols)] for i in range(nrows)]
        return Matrix(nrows, ncols, [e for row in rows for e in row])

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @staticmethod
    def zero(rows: int, cols: int) -> "Matrix":
        return Matrix(rows, cols, [0] * (rows * cols))

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    def entry(self, i: int, j: int) -> Scalar:
        return self._entries[i * self._cols + j]

    def row(self, i: int) -> Vector:
        return self._entries[i * self._cols : (i + 1) * self._cols]

    def column(self, j: int) -> Vector:
        return tuple(self._entries[i * self._cols + j] for i in range(self._rows))

    def row_lists(self) -> list[list[Scalar]]:
        return [list(self.row(i)) for i in range(self._rows)]

    def stack_below(self, other: "Matrix") -> "Matrix":
        if self._cols != other._cols:
            raise ValueError("column count mismatch in vertical stack")
        return Matrix(
            self._rows + other._rows, self._cols, self._entries + other._entries
        )

    def stack_right(self, other: "Matrix") -> "Matrix":
        if self._rows != other._rows:
            raise ValueError("row count mismatch in horizontal stack")
        flat: list[Scalar] = []
        for i in range(self._rows):
            flat.extend(self.row(i))
            flat.extend(other.row(i))
        return Matrix(self._rows, self._cols + other._cols, flat)

    def apply(self, vector: Sequence[ScalarLike]) -> Vector:
        if len(vector) != self._cols:
            raise ValueError("vector length mismatch")
        vec = [Scalar.of(v) for v in vector]
        out = []
        for i in range(self._rows):
            acc = Scalar.of(0)
            for j, v in enumerate(vec):
                acc = acc + self.entry(i, j) * v
            out.append(acc)
        return tuple(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self._rows == other._rows
            and self._cols == other._cols
            and self._entries == other._entries
        )

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(str(e) for e in self.row(i)) for i in range(self._rows)
        )
        return f"Matrix({self._rows}x{self._cols}: {body})"


def stack(blocks: Sequence[Matrix]) -> Matrix:
    """Stack blocks vertically; requires at least one block for the width."""
    if not blocks:
        raise ValueError("no blocks to stack")
    out = blocks[0]
    for b in blocks[1:]:
        out = out.stack_below(b)
    return out


def _clear_row_denominators(row: list[Scalar]) -> None:
    """Scale a row in place so every entry is polynomial in the parameter.

    Row scaling by a nonzero scalar never changes rank or kernel.
    """
    for j in range(len(row)):
        e = row[j]
        if e.is_zero:
            continue
        den = e.denominator()
        if den.is_one:
            continue
        for i in range(len(row)):
            row[i] = row[i] * den


def _forward_eliminate(work: list[list[Scalar]], cols: int) -> list[int]:
    """Bareiss forward elimination in place; returns pivot column indices.

    Zero and duplicate rows are dropped first (neither changes the row
    space, hence neither changes rank, RREF, or the kernel); constraint
    matrices from stacked generator blocks are full of both.
    """
    kept: list[list[Scalar]] = []
    seen_rows: set[tuple[Scalar, ...]] = set()
    for row in work:
        if all(e.is_zero for e in row):
            continue
        _clear_row_denominators(row)
        key = tuple(row)
        if key in seen_rows:
            continue
        seen_rows.add(key)
        kept.append(row)
    work[:] = kept
    pivots: list[int] = []
    prev = Scalar.of(1)
    r = 0
    nrows = len(work)
    for c in range(cols):
        pivot_row = None
        for i in range(r, nrows):
            if not work[i][c].is_zero:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            work[r], work[pivot_row] = work[pivot_row], work[r]
        p = work[r][c]
        prev_is_one = prev.is_one
        for i in range(r + 1, nrows):
            q = work[i][c]
            if q.is_zero:
                if p == prev:
                    continue
                if prev_is_one:
                    work[i] = [p * e for e in work[i]]
                else:
                    work[i] = [(p * e) / prev for e in work[i]]
                continue
            row_i = work[i]
            row_r = work[r]
            if prev_is_one:
                work[i] = [p * a - q * b for a, b in zip(row_i, row_r)]
            else:
                work[i] = [(p * a - q * b) / prev for a, b in zip(row_i, row_r)]
        prev = p
        pivots.append(c)
        r += 1
    return pivots


def rank(matrix: Matrix) -> int:
    work = matrix.row_lists()
    return len(_forward_eliminate(work, matrix.cols))


def rref(matrix: Matrix) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form (unit pivots, zeros above and below)."""
    work = matrix.row_lists()
    pivots = _forward_eliminate(work, matrix.cols)
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        p = work[r][c]
        if not p.is_one:
            work[r] = [e / p for e in work[r]]
        for i in range(r):
            f = work[i][c]
            if f.is_zero:
                continue
            work[i] = [a - f * b for a, b in zip(work[i], work[r])]
    return work[: len(pivots)], pivots


def _sign_normalize(vector: list[Scalar]) -> tuple[Scalar, ...]:
    for e in vector:
        s = e.sign()
        if s < 0:
            return tuple(-v for v in vector)
        if s > 0:
            break
    return tuple(vector)


def kernel_basis(matrix: Matrix) -> list[Vector]:
    """Canonical basis of the right null space.

    One vector per free column, in increasing column order; dimension is
    always ``cols - rank``.  Each vector is sign-normalized so its first
    nonzero coordinate is positive (leading numerator coefficient).
    """
    reduced, pivots = rref(matrix)
    pivot_set = set(pivots)
    basis: list[Vector] = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        vec = [Scalar.of(0)] * matrix.cols
        vec[free] = Scalar.of(1)
        for r, c in enumerate(pivots):
            vec[c] = -reduced[r][free]
        basis.append(_sign_normalize(vec))
    return basis


def column_span_contains(container: Matrix, candidates: Matrix) -> bool:
    """True when every column of ``candidates`` lies in the span of ``container``."""
    if container.rows != candidates.rows:
        raise ValueError("column spaces live in different dimensions")
    return rank(container) == rank(container.stack_right(candidates))


def column_span_equal(first: Matrix, second: Matrix) -> bool:
    """Exact equality of column spans via three rank computations."""
    if first.rows != second.rows:
        raise ValueError("column spaces live in different dimensions")
    r1 = rank(first)
    r2 = rank(second)
    if r1 != r2:
        return False
    return rank(first.stack_right(second)) == r1


def determinant(matrix: Matrix) -> Scalar:
    """Exact determinant by field elimination with row-swap sign tracking."""
    if matrix.rows != matrix.cols:
        raise ValueError("determinant of a non-square matrix")
    n = matrix.rows
    work = matrix.row_lists()
    det = Scalar.of(1)
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if not work[i][c].is_zero:
                pivot_row = i
                break
        if pivot_row is None:
            return Scalar.of(0)
        if pivot_row != c:
            work[c], work[pivot_row] = work[pivot_row], work[c]
            det = -det
        p = work[c][c]
        det = det * p
        for i in range(c + 1, n):
            f = work[i][c] / p
            if f.is_zero:
                continue
            work[i] = [a - f * b for a, b in zip(work[i], work[c])]
    return det


def invert(matrix: Matrix) -> Matrix:
    """Exact inverse; raises ValueError on singular input."""
    if matrix.rows != matrix.cols:
        raise ValueError("inverse of a non-square matrix")
    n = matrix.rows
    augmented = matrix.stack_right(Matrix.identity(n))
    reduced, pivots = rref(augmented)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return Matrix.from_rows([reduced[i][n:] for i in range(n)])
