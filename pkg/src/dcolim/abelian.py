"""Exact integer linear algebra and finitely generated abelian groups.

Conventions: a homomorphism acts on column vectors from the left, so its
matrix has one row per target generator. A group is the cokernel of its
relation matrix (one row per generator, one column per relation).

Everything is Python ``int``; there is no floating point anywhere.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "SparseMatrix",
    "SNF",
    "smith_normal_form",
    "invariant_factors",
    "column_echelon",
    "kernel_basis",
    "image_basis",
    "solve",
    "Solver",
    "lattice_intersection",
    "FgAbGroup",
    "AbHom",
    "Exactness",
    "exactness_defect",
    "homology_at",
    "CompositionNonzero",
    "ShapeError",
    "MatrixTooLarge",
]


class ShapeError(ValueError):
    pass


class CompositionNonzero(ArithmeticError):
    """Raised when a pair of differentials does not compose to zero."""


class MatrixTooLarge(RuntimeError):
    pass


def _dim_guard(*dims: int) -> None:
    limit = os.environ.get("DCOLIM_MAX_MATRIX_DIM")
    if limit is None:
        return
    if max(dims, default=0) > int(limit):
        raise MatrixTooLarge(
            f"matrix dimension {max(dims)} exceeds DCOLIM_MAX_MATRIX_DIM={limit}"
        )


def _dense_guard(nrows: int, ncols: int) -> None:
    """Refuse dense matrices beyond ``DCOLIM_MAX_DENSE_ENTRIES`` entries (default 5·10⁷)."""
    limit = int(os.environ.get("DCOLIM_MAX_DENSE_ENTRIES", 5 * 10**7))
    if nrows * ncols > limit:
        raise MatrixTooLarge(f"dense {nrows}×{ncols} matrix exceeds DCOLIM_MAX_DENSE_ENTRIES={limit}")


class IntMatrix:
    """Immutable dense integer matrix."""

    __slots__ = ("nrows", "ncols", "rows", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]] = (), ncols: int | None = None):
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise ShapeError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        for row in data:
            if len(row) != ncols:
                raise ShapeError(f"ragged row of length {len(row)}, expected {ncols}")
        self.nrows = len(data)
        self.ncols = ncols
        self.rows = data
        self._hash = None

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntMatrix:
        return cls(([0] * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(([int(i == j) for j in range(n)] for i in range(n)), n)

    @classmethod
    def diagonal(cls, entries: Sequence[int], nrows: int | None = None, ncols: int | None = None) -> IntMatrix:
        nrows = len(entries) if nrows is None else nrows
        ncols = len(entries) if ncols is None else ncols
        out = [[0] * ncols for _ in range(nrows)]
        for i, e in enumerate(entries):
            out[i][i] = e
        return cls(out, ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> IntMatrix:
        return cls(([col[i] for col in columns] for i in range(nrows)), len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self.rows[i][j]

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.rows]

    def columns(self) -> list[list[int]]:
        return [list(c) for c in zip(*self.rows)] if self.nrows else [[] for _ in range(self.ncols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(zip(*self.rows), self.nrows) if self.nrows and self.ncols else IntMatrix.zeros(self.ncols, self.nrows)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        orows = other.rows
        out = []
        for row in self.rows:
            acc = [0] * other.ncols
            for k, a in enumerate(row):
                if a:
                    for j, b in enumerate(orows[k]):
                        if b:
                            acc[j] += a * b
            out.append(acc)
        return IntMatrix(out, other.ncols)

    def apply(self, vector: Sequence[int]) -> list[int]:
        if len(vector) != self.ncols:
            raise ShapeError("vector length mismatch")
        return [sum(a * b for a, b in zip(row, vector) if a) for row in self.rows]

    def _check_same(self, other: IntMatrix) -> None:
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: IntMatrix) -> IntMatrix:
        self._check_same(other)
        return IntMatrix(([a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        self._check_same(other)
        return IntMatrix(([a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self) -> IntMatrix:
        return IntMatrix(([-a for a in r] for r in self.rows), self.ncols)

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(([k * a for a in r] for r in self.rows), self.ncols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, self.rows))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, ncols={self.ncols})"

    def is_zero(self) -> bool:
        return all(not a for r in self.rows for a in r)

    def hstack(self, *others: IntMatrix) -> IntMatrix:
        rows = [list(r) for r in self.rows]
        ncols = self.ncols
        for o in others:
            if o.nrows != self.nrows:
                raise ShapeError("hstack row mismatch")
            for r, s in zip(rows, o.rows):
                r.extend(s)
            ncols += o.ncols
        return IntMatrix(rows, ncols)

    def vstack(self, *others: IntMatrix) -> IntMatrix:
        rows = list(self.rows)
        for o in others:
            if o.ncols != self.ncols:
                raise ShapeError("vstack column mismatch")
            rows.extend(o.rows)
        return IntMatrix(rows, self.ncols)

    @staticmethod
    def block_diag(blocks: Sequence[IntMatrix]) -> IntMatrix:
        nrows = sum(b.nrows for b in blocks)
        ncols = sum(b.ncols for b in blocks)
        out = [[0] * ncols for _ in range(nrows)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b.rows):
                out[r0 + i][c0:c0 + b.ncols] = row
            r0 += b.nrows
            c0 += b.ncols
        return IntMatrix(out, ncols)

    def select(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> IntMatrix:
        rows = range(self.nrows) if rows is None else rows
        cols = range(self.ncols) if cols is None else cols
        cols = list(cols)
        return IntMatrix(([self.rows[i][j] for j in cols] for i in rows), len(cols))

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        if self.nrows != self.ncols:
            raise ShapeError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return 1
        a = [list(r) for r in self.rows]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def to_sparse(self) -> SparseMatrix:
        cols: list[dict[int, int]] = [dict() for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for j, a in enumerate(row):
                if a:
                    cols[j][i] = a
        return SparseMatrix(self.nrows, self.ncols, cols)


class SparseMatrix:
    """Column-major sparse integer matrix; each column is a ``{row: value}`` dict.

    Used for chain complex differentials, which have a handful of nonzero
    entries per column.
    """

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: list[dict[int, int]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [dict() for _ in range(ncols)]
        if len(cols) != ncols:
            raise ShapeError("column count mismatch")
        self.cols = cols

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> SparseMatrix:
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> SparseMatrix:
        return cls(n, n, [{i: 1} for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def add_entry(self, i: int, j: int, value: int) -> None:
        col = self.cols[j]
        v = col.get(i, 0) + value
        if v:
            col[i] = v
        else:
            col.pop(i, None)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def to_dense(self) -> IntMatrix:
        _dense_guard(self.nrows, self.ncols)
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, a in col.items():
                out[i][j] = a
        return IntMatrix(out, self.ncols)

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        mine = self.cols
        out = []
        for ocol in other.cols:
            acc: dict[int, int] = {}
            for k, b in ocol.items():
                for i, a in mine[k].items():
                    acc[i] = acc.get(i, 0) + a * b
            out.append({i: v for i, v in acc.items() if v})
        return SparseMatrix(self.nrows, other.ncols, out)

    def __neg__(self) -> SparseMatrix:
        return SparseMatrix(self.nrows, self.ncols, [{i: -a for i, a in c.items()} for c in self.cols])

    def __sub__(self, other: SparseMatrix) -> SparseMatrix:
        return self + (-other)

    def __add__(self, other: SparseMatrix) -> SparseMatrix:
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        out = []
        for a, b in zip(self.cols, other.cols):
            c = dict(a)
            for i, v in b.items():
                w = c.get(i, 0) + v
                if w:
                    c[i] = w
                else:
                    c.pop(i, None)
            out.append(c)
        return SparseMatrix(self.nrows, self.ncols, out)

    def transpose(self) -> SparseMatrix:
        out: list[dict[int, int]] = [dict() for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, a in col.items():
                out[i][j] = a
        return SparseMatrix(self.ncols, self.nrows, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    @staticmethod
    def blocks(row_sizes: Sequence[int], col_sizes: Sequence[int],
               parts: dict[tuple[int, int], SparseMatrix]) -> SparseMatrix:
        """Assemble a block matrix; missing blocks are zero."""
        roff = [0]
        for s in row_sizes:
            roff.append(roff[-1] + s)
        coff = [0]
        for s in col_sizes:
            coff.append(coff[-1] + s)
        cols: list[dict[int, int]] = [dict() for _ in range(coff[-1])]
        for (bi, bj), m in parts.items():
            if m.shape != (row_sizes[bi], col_sizes[bj]):
                raise ShapeError(f"block {(bi, bj)} has shape {m.shape}")
            for j, col in enumerate(m.cols):
                target = cols[coff[bj] + j]
                for i, a in col.items():
                    target[roff[bi] + i] = target.get(roff[bi] + i, 0) + a
        for c in cols:
            for i in [i for i, a in c.items() if not a]:
                del c[i]
        return SparseMatrix(roff[-1], coff[-1], cols)


def _as_rows(a: IntMatrix | SparseMatrix) -> tuple[list[list[int]], int, int]:
    if isinstance(a, SparseMatrix):
        a = a.to_dense()
    return [list(r) for r in a.rows], a.nrows, a.ncols


@dataclass(frozen=True)
class SNF:
    """``U @ A @ V == S`` with ``U``, ``V`` unimodular and ``S`` diagonal."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i, i] for i in range(min(self.S.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _min_pivot(a: list[list[int]], t: int, m: int, n: int) -> tuple[int, int] | None:
    best = None
    best_val = 0
    for i in range(t, m):
        row = a[i]
        for j in range(t, n):
            v = row[j]
            if v:
                av = v if v > 0 else -v
                if best is None or av < best_val:
                    best, best_val = (i, j), av
                    if av == 1:
                        return best
    return best


def _snf_core(a: list[list[int]], m: int, n: int, track: bool):
    """Diagonalize ``a`` in place; optionally record U, U^-1 and V."""
    if track:
        U = [[int(i == j) for j in range(m)] for i in range(m)]
        Ui = [[int(i == j) for j in range(m)] for i in range(m)]
        V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        if track:
            U[i], U[k] = U[k], U[i]
            for r in Ui:
                r[i], r[k] = r[k], r[i]

    def swap_cols(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]
        if track:
            for r in V:
                r[j], r[k] = r[k], r[j]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        ra, rs = a[dst], a[src]
        for j in range(n):
            if rs[j]:
                ra[j] += q * rs[j]
        if track:
            ud, us = U[dst], U[src]
            for j in range(m):
                if us[j]:
                    ud[j] += q * us[j]
            for r in Ui:
                if r[dst]:
                    r[src] -= q * r[dst]

    def add_col(dst, src, q):
        for r in a:
            if r[src]:
                r[dst] += q * r[src]
        if track:
            for r in V:
                if r[src]:
                    r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        piv = _min_pivot(a, t, m, n)
        if piv is None:
            break
        while True:
            i, j = piv
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        done = False
            if done:
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
            piv = _min_pivot(a, t, m, n)
        if a[t][t] < 0:
            a[t][t] = -a[t][t]
            if track:
                U[t] = [-x for x in U[t]]
                for r in Ui:
                    r[t] = -r[t]
        t += 1
    if track:
        return U, Ui, V
    return None


def smith_normal_form(A: IntMatrix | SparseMatrix) -> SNF:
    """Smith normal form with transforms.

    Pivot is the entry of least absolute value in the active submatrix,
    ties broken by lowest row then lowest column, so the output is a
    deterministic function of the input.
    """
    a, m, n = _as_rows(A)
    _dim_guard(m, n)
    U, Ui, V = _snf_core(a, m, n, track=True)
    return SNF(IntMatrix(U, m), IntMatrix(a, n), IntMatrix(V, n), IntMatrix(Ui, m))


def _sparse_unit_reduce(A: SparseMatrix) -> tuple[int, list[list[int]], int, int]:
    """Eliminate unit pivots; returns (#units, dense remainder, rows, cols)."""
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, dict[int, int]] = {}
    for j, col in enumerate(A.cols):
        if col:
            cols[j] = dict(col)
            for i, a in col.items():
                rows.setdefault(i, {})[j] = a
    units = 0
    progress = True
    while progress:
        progress = False
        for j in sorted(cols):
            col = cols.get(j)
            if not col:
                continue
            best = None
            for i, a in col.items():
                if a == 1 or a == -1:
                    key = (len(rows[i]), i)
                    if best is None or key < best[0]:
                        best = (key, i, a)
            if best is None:
                continue
            _, pi, pv = best
            prow = rows[pi]
            for i, a in list(col.items()):
                if i == pi:
                    continue
                q = a * pv  # pv = +-1, so a / pv == a * pv
                r = rows[i]
                for jj, b in prow.items():
                    v = r.get(jj, 0) - q * b
                    c = cols[jj]
                    if v:
                        r[jj] = v
                        c[i] = v
                    else:
                        r.pop(jj, None)
                        c.pop(i, None)
                if not r:
                    del rows[i]
            for jj in prow:
                cols[jj].pop(pi, None)
            del rows[pi]
            del cols[j]
            units += 1
            progress = True
    live_rows = sorted(rows)
    live_cols = sorted(j for j, c in cols.items() if c)
    rindex = {i: k for k, i in enumerate(live_rows)}
    dense = [[0] * len(live_cols) for _ in live_rows]
    for k, j in enumerate(live_cols):
        for i, a in cols[j].items():
            dense[rindex[i]][k] = a
    return units, dense, len(live_rows), len(live_cols)


def invariant_factors(A: IntMatrix | SparseMatrix) -> list[int]:
    """Nonzero diagonal of the Smith form, in divisibility order (1s included)."""
    if isinstance(A, IntMatrix):
        A = A.to_sparse()
    units, rest, m, n = _sparse_unit_reduce(A)
    _dim_guard(m, n)
    _snf_core(rest, m, n, track=False)
    diag = [abs(rest[i][i]) for i in range(min(m, n)) if rest[i][i]]
    return [1] * units + diag


def column_echelon(A: IntMatrix, track: bool = True) -> tuple[IntMatrix, IntMatrix | None, list[int]]:
    """Integer column echelon form ``H = A @ V`` with ``V`` unimodular.

    The first ``r`` columns of ``H`` are a basis of the column lattice with
    pivots in strictly increasing rows (returned); the trailing columns of
    ``V`` are a basis of the kernel. ``V`` is skipped (``None``) unless ``track``.
    """
    a, m, n = _as_rows(A)
    _dim_guard(m, n)
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track else []

    def add_col(dst, src, q):
        for r in a:
            if r[src]:
                r[dst] += q * r[src]
        for r in V:
            if r[src]:
                r[dst] += q * r[src]

    def swap_cols(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    pivots = []
    k = 0
    for i in range(m):
        if k == n:
            break
        row = a[i]
        while True:
            nz = [j for j in range(k, n) if row[j]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: (abs(row[j]), j))
            if j0 != k:
                swap_cols(j0, k)
            if len(nz) == 1:
                break
            p = row[k]
            for j in range(k + 1, n):
                if row[j]:
                    add_col(j, k, -(row[j] // p))
        if row[k]:
            if row[k] < 0:
                for r in a:
                    r[k] = -r[k]
                for r in V:
                    r[k] = -r[k]
            pivots.append(i)
            k += 1
    return IntMatrix(a, n), (IntMatrix(V, n) if track else None), pivots


class Solver:
    """Reusable integer solver for ``A x = b`` (one echelon form, many right sides)."""

    def __init__(self, A: IntMatrix):
        self.A = A
        self.H, self.V, self.pivots = column_echelon(A)
        self.rank = len(self.pivots)
        # sparse pivot columns of H and leading columns of V
        self._hcols = [[(t, x) for t, x in enumerate(self.H.column(k)) if x] for k in range(self.rank)]
        self._vcols = [[(j, x) for j, x in enumerate(self.V.column(k)) if x] for k in range(self.rank)]

    def solve_vector(self, b: Sequence[int]) -> list[int] | None:
        if len(b) != self.A.nrows:
            raise ShapeError("right-hand side has wrong length")
        rest = list(b)
        x = [0] * self.A.ncols
        for k, i in enumerate(self.pivots):
            h = self._hcols[k]
            q, r = divmod(rest[i], h[0][1])
            if r:
                return None
            if q:
                for t, v in h:
                    rest[t] -= q * v
                for j, v in self._vcols[k]:
                    x[j] += q * v
        if any(rest):
            return None
        return x

    def solve(self, B: IntMatrix) -> IntMatrix | None:
        out = []
        for col in B.columns():
            x = self.solve_vector(col)
            if x is None:
                return None
            out.append(x)
        return IntMatrix.from_columns(out, self.A.ncols)

    def contains(self, b: Sequence[int]) -> bool:
        return self.solve_vector(b) is not None

    def kernel(self) -> IntMatrix:
        return self.V.select(cols=range(self.rank, self.A.ncols))

    def image(self) -> IntMatrix:
        return self.H.select(cols=range(self.rank))


def kernel_basis(A: IntMatrix) -> IntMatrix:
    return Solver(A).kernel()


def image_basis(A: IntMatrix) -> IntMatrix:
    H, _, pivots = column_echelon(A, track=False)
    return H.select(cols=range(len(pivots)))


def solve(A: IntMatrix, B: IntMatrix) -> IntMatrix | None:
    """Integer solution ``X`` of ``A X = B``, or ``None`` when there is none."""
    return Solver(A).solve(B)


def lattice_intersection(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    """Basis of the intersection of the column lattices of ``A`` and ``B``."""
    K = kernel_basis(A.hstack(-B))
    return image_basis(A @ K.select(rows=range(A.ncols)))


def _subscript(n: int) -> str:
    return str(n).translate(str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉"))


def _superscript(n: int) -> str:
    return str(n).translate(str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹"))


class FgAbGroup:
    """Finitely generated abelian group presented as ``coker(relations)``.

    The normal form (free rank plus torsion coefficients ``t1 | t2 | ...``,
    each at least 2) is computed once and cached.
    """

    __slots__ = ("ngens", "relations", "__dict__")

    def __init__(self, relations: IntMatrix | None = None, ngens: int | None = None):
        if relations is None:
            if ngens is None:
                raise ValueError("need relations or ngens")
            relations = IntMatrix.zeros(ngens, 0)
        if ngens is not None and ngens != relations.nrows:
            raise ShapeError(f"relation matrix has {relations.nrows} rows, expected {ngens}")
        self.ngens = relations.nrows
        self.relations = relations

    @classmethod
    def free(cls, rank: int) -> FgAbGroup:
        return cls(ngens=rank)

    @classmethod
    def cyclic(cls, order: int) -> FgAbGroup:
        """``Z/order``; order 0 gives ``Z``."""
        return cls(IntMatrix([[order]], 1) if order else IntMatrix.zeros(1, 0))

    @classmethod
    def trivial(cls) -> FgAbGroup:
        return cls(ngens=0)

    @classmethod
    def from_invariants(cls, rank: int, torsion: Sequence[int] = ()) -> FgAbGroup:
        torsion = list(torsion)
        rel = IntMatrix.zeros(rank, len(torsion)).vstack(IntMatrix.diagonal(torsion))
        return cls(rel)

    @classmethod
    def direct_sum(cls, groups: Sequence[FgAbGroup]) -> FgAbGroup:
        return cls(IntMatrix.block_diag([g.relations for g in groups]) if groups else IntMatrix.zeros(0, 0))

    @cached_property
    def invariants(self) -> tuple[int, tuple[int, ...]]:
        """``(free rank, torsion coefficients)``."""
        diag = invariant_factors(self.relations)
        torsion = tuple(d for d in diag if d > 1)
        return self.ngens - len(diag), torsion

    @property
    def rank(self) -> int:
        return self.invariants[0]

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.invariants[1]

    def is_trivial(self) -> bool:
        return self.invariants == (0, ())

    def is_free(self) -> bool:
        return not self.torsion

    def isomorphic(self, other: FgAbGroup) -> bool:
        return self.invariants == other.invariants

    @cached_property
    def _solver(self) -> Solver:
        return Solver(self.relations)

    def is_zero_element(self, vector: Sequence[int]) -> bool:
        return self._solver.contains(vector)

    @cached_property
    def injective_relations(self) -> IntMatrix:
        """A relation matrix with the same column lattice and trivial kernel."""
        return self._solver.image()

    def __repr__(self) -> str:
        return f"FgAbGroup({self})"

    def __str__(self) -> str:
        return format_invariants(*self.invariants)

    def to_dict(self) -> dict:
        r, t = self.invariants
        return {"rank": r, "torsion": list(t)}

    def normal_form(self) -> tuple[FgAbGroup, AbHom, AbHom]:
        """Return ``(G', phi, phi_inv)`` with ``G'`` the diagonal presentation.

        ``G'`` lists its free generators first, then the torsion ones.
        """
        snf = smith_normal_form(self.relations)
        diag = snf.diagonal
        nonzero = sum(1 for d in diag if d)
        tors = [i for i in range(nonzero) if diag[i] > 1]
        free = list(range(nonzero, self.ngens))
        target = FgAbGroup.from_invariants(len(free), [diag[i] for i in tors])
        order = free + tors
        phi = AbHom(self, target, snf.U.select(rows=order), check=False)
        phi_inv = AbHom(target, self, snf.U_inv.select(cols=order), check=False)
        return target, phi, phi_inv


def format_invariants(rank: int, torsion: Sequence[int]) -> str:
    parts = []
    if rank == 1:
        parts.append("ℤ")
    elif rank > 1:
        parts.append(f"ℤ{_superscript(rank)}")
    parts.extend(f"ℤ/{t}" for t in torsion)
    return " ⊕ ".join(parts) if parts else "0"


class AbHom:
    """Homomorphism between presented groups, given on generators."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix, check: bool = True):
        if matrix.shape != (target.ngens, source.ngens):
            raise ShapeError(
                f"matrix shape {matrix.shape} does not fit {source.ngens} -> {target.ngens} generators"
            )
        self.source = source
        self.target = target
        self.matrix = matrix
        if check and not self.is_well_defined():
            raise ValueError("matrix does not send source relations into target relations")

    def is_well_defined(self) -> bool:
        images = self.matrix @ self.source.relations
        return all(self.target.is_zero_element(col) for col in images.columns())

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup) -> AbHom:
        return cls(source, target, IntMatrix.zeros(target.ngens, source.ngens), check=False)

    @classmethod
    def identity(cls, group: FgAbGroup) -> AbHom:
        return cls(group, group, IntMatrix.identity(group.ngens), check=False)

    def __matmul__(self, other: AbHom) -> AbHom:
        """``self @ other`` is the composite ``self ∘ other``."""
        if other.target.ngens != self.source.ngens:
            raise ShapeError("composition of incompatible homomorphisms")
        return AbHom(other.source, self.target, self.matrix @ other.matrix, check=False)

    def __add__(self, other: AbHom) -> AbHom:
        return AbHom(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other: AbHom) -> AbHom:
        return AbHom(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self) -> AbHom:
        return AbHom(self.source, self.target, -self.matrix, check=False)

    def is_zero(self) -> bool:
        return all(self.target.is_zero_element(col) for col in self.matrix.columns())

    def equals(self, other: AbHom) -> bool:
        """Equality as homomorphisms (matrices may differ by relations)."""
        return (self - other).is_zero()

    def _kernel_lattice(self) -> IntMatrix:
        # x with f(x) in im(R_target): kernel of [F | -R_t], projected
        F, Rt = self.matrix, self.target.relations
        K = kernel_basis(F.hstack(-Rt))
        return image_basis(K.select(rows=range(F.ncols)))

    def kernel(self) -> FgAbGroup:
        K = self._kernel_lattice()
        rel = Solver(K).solve(self.source.relations)
        assert rel is not None
        return FgAbGroup(rel)

    def image(self) -> FgAbGroup:
        Rt = self.target.relations
        L = image_basis(self.matrix.hstack(Rt))
        return FgAbGroup(Solver(L).solve(Rt))

    def cokernel(self) -> FgAbGroup:
        return FgAbGroup(self.target.relations.hstack(self.matrix))

    def is_injective(self) -> bool:
        return self.kernel().is_trivial()

    def is_surjective(self) -> bool:
        return self.cokernel().is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def in_normal_form(self) -> AbHom:
        """The same map between the diagonal presentations of source and target.

        Rows belonging to torsion generators of the target are reduced into
        ``[0, t)``, so equal maps on equal presentations give equal matrices.
        """
        S, _, s_inv = self.source.normal_form()
        T, t_phi, _ = self.target.normal_form()
        rows = (t_phi.matrix @ self.matrix @ s_inv.matrix).tolist()
        r = T.rank
        for k, t in enumerate(T.torsion):
            rows[r + k] = [x % t for x in rows[r + k]]
        return AbHom(S, T, IntMatrix(rows, S.ngens), check=False)

    @staticmethod
    def direct_sum(maps: Sequence[AbHom]) -> AbHom:
        return AbHom(
            FgAbGroup.direct_sum([f.source for f in maps]),
            FgAbGroup.direct_sum([f.target for f in maps]),
            IntMatrix.block_diag([f.matrix for f in maps]),
            check=False,
        )

    @staticmethod
    def stack(maps: Sequence[AbHom], target: FgAbGroup | None = None) -> AbHom:
        """``x ↦ (f1 x, f2 x, ...)`` into the direct sum of the targets."""
        src = maps[0].source
        tgt = target or FgAbGroup.direct_sum([f.target for f in maps])
        mat = maps[0].matrix.vstack(*[f.matrix for f in maps[1:]])
        return AbHom(src, tgt, mat, check=False)

    @staticmethod
    def join(maps: Sequence[AbHom], source: FgAbGroup | None = None) -> AbHom:
        """``(x1, x2, ...) ↦ f1 x1 + f2 x2 + ...`` out of the direct sum."""
        src = source or FgAbGroup.direct_sum([f.source for f in maps])
        mat = maps[0].matrix.hstack(*[f.matrix for f in maps[1:]])
        return AbHom(src, maps[0].target, mat, check=False)

    def __repr__(self) -> str:
        return f"AbHom({self.source} -> {self.target}, {self.matrix.tolist()})"


@dataclass(frozen=True)
class Exactness:
    """Outcome of an exactness check at the middle group of ``A -f-> B -g-> C``."""

    defect: FgAbGroup
    composition_zero: bool

    @property
    def exact(self) -> bool:
        return self.composition_zero and self.defect.is_trivial()


def exactness_defect(f: AbHom, g: AbHom) -> Exactness:
    """``ker(g) / (im(f) ∩ ker(g))`` computed on lifts to free covers."""
    if f.target.ngens != g.source.ngens:
        raise ShapeError("target of f is not the source of g")
    B = f.target
    Kg = g._kernel_lattice()
    imf = image_basis(f.matrix.hstack(B.relations))
    composition_zero = all(g.target.is_zero_element(c) for c in (g.matrix @ f.matrix).columns())
    inter = imf if composition_zero else lattice_intersection(Kg, imf)
    if Kg.ncols == 0:
        return Exactness(FgAbGroup.trivial(), composition_zero)
    rel = Solver(Kg).solve(inter)
    assert rel is not None
    return Exactness(FgAbGroup(rel), composition_zero)


def homology_at(d_in: AbHom, d_out: AbHom) -> FgAbGroup:
    """``ker(d_out) / im(d_in)``; raises if the composite is nonzero."""
    result = exactness_defect(d_in, d_out)
    if not result.composition_zero:
        raise CompositionNonzero("d_out ∘ d_in ≠ 0")
    return result.defect
