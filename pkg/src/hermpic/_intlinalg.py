"""Exact integer linear algebra: Smith normal form, lattice solving, nullspaces.

Matrices here are immutable ``IMat`` values with an explicit column count, so
degenerate shapes (0 x n, n x 0) compose without ambiguity.  All arithmetic is
over Python ints, so there is no overflow to worry about.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IMat:
    """Immutable integer matrix: ``rows`` is a tuple of row tuples."""

    rows: tuple
    ncols: int

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @staticmethod
    def from_rows(rows: Iterable[Sequence[int]], ncols: int | None = None) -> "IMat":
        rs = tuple(tuple(int(x) for x in row) for row in rows)
        if ncols is None:
            if not rs:
                raise ValueError("column count is ambiguous for a 0-row matrix")
            ncols = len(rs[0])
        for row in rs:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
        return IMat(rs, ncols)

    @staticmethod
    def identity(n: int) -> "IMat":
        return IMat(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), n)

    @staticmethod
    def zeros(nrows: int, ncols: int) -> "IMat":
        return IMat(tuple((0,) * ncols for _ in range(nrows)), ncols)

    def col(self, j: int) -> tuple:
        return tuple(row[j] for row in self.rows)

    def cols(self) -> list:
        return [self.col(j) for j in range(self.ncols)]

    def transpose(self) -> "IMat":
        return IMat(tuple(self.col(j) for j in range(self.ncols)), self.nrows)

    def mul(self, other: "IMat") -> "IMat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch: {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        out = []
        for row in self.rows:
            out.append(tuple(
                sum(row[k] * other.rows[k][j] for k in range(self.ncols))
                for j in range(other.ncols)
            ))
        return IMat(tuple(out), other.ncols)

    def mul_vec(self, vec: Sequence[int]) -> tuple:
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(row[k] * vec[k] for k in range(self.ncols)) for row in self.rows)

    def hstack(self, other: "IMat") -> "IMat":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch in hstack")
        return IMat(tuple(a + b for a, b in zip(self.rows, other.rows)),
                    self.ncols + other.ncols)

    def submatrix_cols(self, js: Sequence[int]) -> "IMat":
        return IMat(tuple(tuple(row[j] for j in js) for row in self.rows), len(js))

    def submatrix_rows(self, idx: Sequence[int]) -> "IMat":
        return IMat(tuple(self.rows[i] for i in idx), self.ncols)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def to_lists(self) -> list:
        return [list(row) for row in self.rows]


@dataclass(frozen=True)
class SmithDecomposition:
    """``left @ matrix @ right == diag`` with ``left``/``right`` unimodular.

    ``diag_entries`` holds the diagonal of ``diag`` (length min(nrows, ncols)),
    nonnegative, and each entry divides the next (with 0 trailing).  The
    inverses of the transforms are tracked alongside, since callers routinely
    need to move between old and new coordinates in both directions.
    """

    diag_entries: tuple
    left: IMat
    left_inv: IMat
    right: IMat
    right_inv: IMat
    nrows: int
    ncols: int

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag_entries if d != 0)

    def diag_matrix(self) -> IMat:
        rows = []
        for i in range(self.nrows):
            row = [0] * self.ncols
            if i < len(self.diag_entries):
                row[i] = self.diag_entries[i]
            rows.append(tuple(row))
        return IMat(tuple(rows), self.ncols)


class _Worker:
    """Mutable scratch state for the SNF elimination."""

    def __init__(self, mat: IMat):
        self.a = [list(row) for row in mat.rows]
        self.nr = mat.nrows
        self.nc = mat.ncols
        self.left = [list(row) for row in IMat.identity(self.nr).rows]
        self.left_inv = [list(row) for row in IMat.identity(self.nr).rows]
        self.right = [list(row) for row in IMat.identity(self.nc).rows]
        self.right_inv = [list(row) for row in IMat.identity(self.nc).rows]

    # Row ops update left as E @ left; left_inv picks up the inverse op on columns.
    def row_swap(self, i, j):
        if i == j:
            return
        self.a[i], self.a[j] = self.a[j], self.a[i]
        self.left[i], self.left[j] = self.left[j], self.left[i]
        for row in self.left_inv:
            row[i], row[j] = row[j], row[i]

    def row_add(self, i, j, c):
        # row i += c * row j
        if c == 0:
            return
        self.a[i] = [x + c * y for x, y in zip(self.a[i], self.a[j])]
        self.left[i] = [x + c * y for x, y in zip(self.left[i], self.left[j])]
        for row in self.left_inv:
            row[j] -= c * row[i]

    def row_negate(self, i):
        self.a[i] = [-x for x in self.a[i]]
        self.left[i] = [-x for x in self.left[i]]
        for row in self.left_inv:
            row[i] = -row[i]

    def col_swap(self, i, j):
        if i == j:
            return
        for row in self.a:
            row[i], row[j] = row[j], row[i]
        for row in self.right:
            row[i], row[j] = row[j], row[i]
        self.right_inv[i], self.right_inv[j] = self.right_inv[j], self.right_inv[i]

    def col_add(self, j, k, c):
        # col j += c * col k
        if c == 0:
            return
        for row in self.a:
            row[j] += c * row[k]
        for row in self.right:
            row[j] += c * row[k]
        self.right_inv[k] = [x - c * y for x, y in zip(self.right_inv[k], self.right_inv[j])]

    def col_negate(self, j):
        for row in self.a:
            row[j] = -row[j]
        for row in self.right:
            row[j] = -row[j]
        self.right_inv[j] = [-x for x in self.right_inv[j]]


def smith_decompose(mat: IMat) -> SmithDecomposition:
    """Full Smith decomposition with unimodular transforms and their inverses."""
    w = _Worker(mat)
    nr, nc = w.nr, w.nc
    t = 0
    while t < min(nr, nc):
        # Find the entry of least nonzero magnitude in the remaining block.
        pivot = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = abs(w.a[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        w.row_swap(t, pivot[0])
        w.col_swap(t, pivot[1])
        if w.a[t][t] < 0:
            w.row_negate(t)
        while True:
            # Clear column t; a nonzero remainder becomes the smaller new pivot.
            restart = False
            for i in range(t + 1, nr):
                if w.a[i][t] == 0:
                    continue
                q = w.a[i][t] // w.a[t][t]
                w.row_add(i, t, -q)
                if w.a[i][t] != 0:
                    w.row_swap(t, i)
                    restart = True
                    break
            if restart:
                continue
            for j in range(t + 1, nc):
                if w.a[t][j] == 0:
                    continue
                q = w.a[t][j] // w.a[t][t]
                w.col_add(j, t, -q)
                if w.a[t][j] != 0:
                    w.col_swap(t, j)
                    restart = True
                    break
            if restart:
                continue
            # Enforce that the pivot divides the rest of the block, so the
            # final diagonal forms a divisibility chain.
            offender = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if w.a[i][j] % w.a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            w.row_add(t, offender, 1)
        t += 1
    diag = tuple(w.a[i][i] for i in range(min(nr, nc)))
    return SmithDecomposition(
        diag_entries=diag,
        left=IMat.from_rows(w.left, nr),
        left_inv=IMat.from_rows(w.left_inv, nr),
        right=IMat.from_rows(w.right, nc),
        right_inv=IMat.from_rows(w.right_inv, nc),
        nrows=nr,
        ncols=nc,
    )


def solve_integer(a: IMat, b: Sequence[int]) -> tuple | None:
    """One integer solution x of ``a @ x == b``, or None if there is none."""
    if len(b) != a.nrows:
        raise ValueError("right-hand side length mismatch")
    dec = smith_decompose(a)
    lb = dec.left.mul_vec(b)
    y = [0] * a.ncols
    for i in range(a.nrows):
        d = dec.diag_entries[i] if i < len(dec.diag_entries) else 0
        if d == 0:
            if lb[i] != 0:
                return None
        else:
            if lb[i] % d != 0:
                return None
            y[i] = lb[i] // d
    return dec.right.mul_vec(y)


def solve_integer_many(a: IMat, b: IMat) -> IMat | None:
    """Solve ``a @ X == b`` columnwise; None if any column is unsolvable."""
    if b.nrows != a.nrows:
        raise ValueError("shape mismatch")
    dec = smith_decompose(a)
    out_cols = []
    for j in range(b.ncols):
        lb = dec.left.mul_vec(b.col(j))
        y = [0] * a.ncols
        ok = True
        for i in range(a.nrows):
            d = dec.diag_entries[i] if i < len(dec.diag_entries) else 0
            if d == 0:
                if lb[i] != 0:
                    ok = False
                    break
            else:
                if lb[i] % d != 0:
                    ok = False
                    break
                y[i] = lb[i] // d
        if not ok:
            return None
        out_cols.append(dec.right.mul_vec(y))
    rows = tuple(tuple(col[i] for col in out_cols) for i in range(a.ncols))
    return IMat(rows, b.ncols)


def nullspace(a: IMat) -> IMat:
    """Basis of the integer kernel of ``a`` as columns of the result."""
    dec = smith_decompose(a)
    free = [j for j in range(a.ncols)
            if j >= len(dec.diag_entries) or dec.diag_entries[j] == 0]
    return dec.right.submatrix_cols(free)


def column_lattice_basis(gens: IMat) -> IMat:
    """Independent basis (as columns) of the lattice spanned by the columns."""
    dec = smith_decompose(gens)
    # gens = left_inv @ D @ right_inv, so the column lattice is spanned by the
    # nonzero columns of left_inv @ D.
    cols = []
    for i, d in enumerate(dec.diag_entries):
        if d != 0:
            cols.append(tuple(d * x for x in dec.left_inv.col(i)))
    rows = tuple(tuple(col[i] for col in cols) for i in range(gens.nrows))
    return IMat(rows, len(cols))


def lattice_contains(basis: IMat, vec: Sequence[int]) -> bool:
    """Membership of ``vec`` in the column lattice of ``basis``."""
    return solve_integer(basis, vec) is not None


def lattice_subset(inner: IMat, outer: IMat) -> bool:
    """Whether every column of ``inner`` lies in the column lattice of ``outer``."""
    return solve_integer_many(outer, inner) is not None


def lattice_equal(a: IMat, b: IMat) -> bool:
    return lattice_subset(a, b) and lattice_subset(b, a)
