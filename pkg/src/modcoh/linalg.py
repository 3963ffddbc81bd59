"""Exact dense linear algebra over a fixed finite field.

Matrices are immutable, stored row-major as integer-encoded field elements.
Elimination uses deterministic pivoting (first nonzero entry, scanning
columns left to right and rows top to bottom), so echelon forms, kernels,
solutions and inconsistency certificates are byte-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .errors import MixedContexts, ModcohError, ShapeMismatch, Singular
from .gf import FieldCtx, FieldElement, element_from_json


class Matrix:
    """Dense matrix over one :class:`FieldCtx`."""

    __slots__ = ("ctx", "rows", "cols", "_d")

    def __init__(self, ctx: FieldCtx, rows: int, cols: int, data: list[int]):
        if rows < 0 or cols < 0 or len(data) != rows * cols:
            raise ShapeMismatch(f"{rows}x{cols} grid with {len(data)} entries")
        self.ctx = ctx
        self.rows = rows
        self.cols = cols
        self._d = data

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, ctx: FieldCtx, rows: int, cols: int) -> "Matrix":
        return cls(ctx, rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "Matrix":
        data = [0] * (n * n)
        for i in range(n):
            data[i * n + i] = 1
        return cls(ctx, n, n, data)

    @classmethod
    def from_rows(
        cls, ctx: FieldCtx, rows: Sequence[Sequence[Union[FieldElement, int]]]
    ) -> "Matrix":
        """Build from nested sequences; plain ints are taken mod p."""
        r = len(rows)
        c = len(rows[0]) if r else 0
        data = []
        for row in rows:
            if len(row) != c:
                raise ShapeMismatch("ragged rows")
            for x in row:
                if isinstance(x, FieldElement):
                    if x.ctx is not ctx:
                        raise MixedContexts("entry from a different field")
                    data.append(x.val)
                else:
                    data.append(x % ctx.p)
        return cls(ctx, r, c, data)

    @classmethod
    def column(cls, ctx: FieldCtx, entries: Sequence[Union[FieldElement, int]]) -> "Matrix":
        return cls.from_rows(ctx, [[x] for x in entries])

    @classmethod
    def basis_column(cls, ctx: FieldCtx, dim: int, i: int) -> "Matrix":
        data = [0] * dim
        data[i] = 1
        return cls(ctx, dim, 1, data)

    # -- access ---------------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> FieldElement:
        i, j = ij
        return FieldElement(self.ctx, self._d[i * self.cols + j])

    def raw(self, i: int, j: int) -> int:
        return self._d[i * self.cols + j]

    def row_list(self, i: int) -> list[int]:
        return self._d[i * self.cols : (i + 1) * self.cols]

    @property
    def is_zero(self) -> bool:
        return not any(self._d)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Matrix)
            and other.ctx is self.ctx
            and other.rows == self.rows
            and other.cols == self.cols
            and other._d == self._d
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, tuple(self._d)))

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(repr(self[i, j]) for j in range(self.cols)) for i in range(self.rows)
        )
        return f"[{body}]"

    # -- arithmetic -------------------------------------------------------------

    def _check(self, other: "Matrix") -> None:
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.ctx is not self.ctx:
            raise MixedContexts("matrices over different fields")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch(f"{self.rows}x{self.cols} + {other.rows}x{other.cols}")
        add = self.ctx.add_i
        return Matrix(
            self.ctx, self.rows, self.cols, [add(a, b) for a, b in zip(self._d, other._d)]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        neg = self.ctx.neg_i
        return Matrix(self.ctx, self.rows, self.cols, [neg(a) for a in self._d])

    def scale(self, c: FieldElement) -> "Matrix":
        if c.ctx is not self.ctx:
            raise MixedContexts("scalar from a different field")
        mul = self.ctx.mul_i
        return Matrix(self.ctx, self.rows, self.cols, [mul(c.val, a) for a in self._d])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        mul, add = self.ctx.mul_i, self.ctx.add_i
        n, m, k = self.rows, other.cols, self.cols
        a, b = self._d, other._d
        out = [0] * (n * m)
        for i in range(n):
            arow = i * k
            orow = i * m
            for t in range(k):
                av = a[arow + t]
                if av:
                    brow = t * m
                    for j in range(m):
                        bv = b[brow + j]
                        if bv:
                            out[orow + j] = add(out[orow + j], mul(av, bv))
        return Matrix(self.ctx, n, m, out)

    def transpose(self) -> "Matrix":
        r, c, d = self.rows, self.cols, self._d
        return Matrix(self.ctx, c, r, [d[i * c + j] for j in range(c) for i in range(r)])

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        data = []
        for i in range(r0, r1):
            data.extend(self._d[i * self.cols + c0 : i * self.cols + c1])
        return Matrix(self.ctx, r1 - r0, c1 - c0, data)

    def column_vector(self, j: int) -> "Matrix":
        return self.submatrix(0, self.rows, j, j + 1)

    def flatten(self) -> "Matrix":
        """Row-major flattening into a column vector."""
        return Matrix(self.ctx, self.rows * self.cols, 1, list(self._d))

    def reshape(self, rows: int, cols: int) -> "Matrix":
        if rows * cols != len(self._d):
            raise ShapeMismatch(f"cannot reshape {self.rows}x{self.cols} to {rows}x{cols}")
        return Matrix(self.ctx, rows, cols, list(self._d))


# ---------------------------------------------------------------------------
# free functions (the operation surface)
# ---------------------------------------------------------------------------


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return a @ b


def hstack(a: Matrix, b: Matrix) -> Matrix:
    a._check(b)
    if a.rows != b.rows:
        raise ShapeMismatch("hstack row mismatch")
    data = []
    for i in range(a.rows):
        data.extend(a.row_list(i))
        data.extend(b.row_list(i))
    return Matrix(a.ctx, a.rows, a.cols + b.cols, data)


def vstack(blocks: Iterable[Matrix]) -> Matrix:
    blocks = list(blocks)
    if not blocks:
        raise ShapeMismatch("vstack of nothing")
    ctx, cols = blocks[0].ctx, blocks[0].cols
    data: list[int] = []
    rows = 0
    for blk in blocks:
        blocks[0]._check(blk)
        if blk.cols != cols:
            raise ShapeMismatch("vstack column mismatch")
        data.extend(blk._d)
        rows += blk.rows
    return Matrix(ctx, rows, cols, data)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product with block layout a_ij * b."""
    a._check(b)
    mul = a.ctx.mul_i
    R, C = a.rows * b.rows, a.cols * b.cols
    out = [0] * (R * C)
    for i in range(a.rows):
        for j in range(a.cols):
            av = a._d[i * a.cols + j]
            if not av:
                continue
            base = i * b.rows * C + j * b.cols
            for r in range(b.rows):
                off = base + r * C
                brow = r * b.cols
                for c in range(b.cols):
                    bv = b._d[brow + c]
                    if bv:
                        out[off + c] = mul(av, bv)
    return Matrix(a.ctx, R, C, out)


def direct_sum(a: Matrix, b: Matrix) -> Matrix:
    a._check(b)
    R, C = a.rows + b.rows, a.cols + b.cols
    out = [0] * (R * C)
    for i in range(a.rows):
        out[i * C : i * C + a.cols] = a.row_list(i)
    for i in range(b.rows):
        off = (a.rows + i) * C + a.cols
        out[off : off + b.cols] = b.row_list(i)
    return Matrix(a.ctx, R, C, out)


def _eliminate(
    ctx: FieldCtx, work: list[list[int]], pivot_cols_range: int
) -> list[tuple[int, int]]:
    """In-place reduced row echelon over the first `pivot_cols_range` columns.

    Returns the pivot list as (row, col) pairs, in order.
    """
    if ctx.k == 1:
        p = ctx.p

        def scale_row(row, pv):
            pinv = pow(pv, p - 2, p)
            return [(pinv * x) % p for x in row]

        def axpy(row, piv, f):
            return [(x - f * y) % p for x, y in zip(row, piv)]

    else:
        mul, sub, inv = ctx.mul_i, ctx.sub_i, ctx.inv_i

        def scale_row(row, pv):
            pinv = inv(pv)
            return [mul(pinv, x) for x in row]

        def axpy(row, piv, f):
            return [sub(x, mul(f, y)) for x, y in zip(row, piv)]

    nrows = len(work)
    pivots: list[tuple[int, int]] = []
    prow = 0
    for col in range(pivot_cols_range):
        found = -1
        for r in range(prow, nrows):
            if work[r][col]:
                found = r
                break
        if found < 0:
            continue
        if found != prow:
            work[prow], work[found] = work[found], work[prow]
        piv = work[prow]
        if piv[col] != 1:
            work[prow] = piv = scale_row(piv, piv[col])
        for r in range(nrows):
            f = work[r][col]
            if f and r != prow:
                work[r] = axpy(work[r], piv, f)
        pivots.append((prow, col))
        prow += 1
        if prow == nrows:
            break
    return pivots


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...], int]:
    """Reduced row echelon form; returns (R, pivot columns, rank)."""
    work = [m.row_list(i) for i in range(m.rows)]
    pivots = _eliminate(m.ctx, work, m.cols)
    flat = [x for row in work for x in row]
    cols = tuple(c for _, c in pivots)
    return Matrix(m.ctx, m.rows, m.cols, flat), cols, len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[2]


def _kernel_from_rref(
    ctx: FieldCtx, work: list[list[int]], ncols: int, pivots: list[tuple[int, int]]
) -> list[Matrix]:
    """Kernel basis read off an eliminated row list (first ncols columns)."""
    pivot_set = {c for _, c in pivots}
    neg = ctx.neg_i
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [0] * ncols
        vec[free] = 1
        for r, c in pivots:
            vec[c] = neg(work[r][free])
        basis.append(Matrix(ctx, ncols, 1, vec))
    return basis


def kernel_basis(m: Matrix) -> list[Matrix]:
    """Deterministic basis of the right kernel, as column vectors."""
    work = [m.row_list(i) for i in range(m.rows)]
    pivots = _eliminate(m.ctx, work, m.cols)
    return _kernel_from_rref(m.ctx, work, m.cols, pivots)


@dataclass(frozen=True)
class SolveResult:
    """Outcome of an exact linear solve a @ x = b.

    `kernel` always holds a basis of ker(a).  If consistent, `solution` is
    one particular solution; otherwise `certificate` is a row vector y with
    y @ a = 0 and y @ b != 0, re-checkable without the solver.
    """

    consistent: bool
    solution: Optional[Matrix]
    kernel: tuple[Matrix, ...]
    certificate: Optional[Matrix]


def solve(a: Matrix, b: Matrix) -> SolveResult:
    a._check(b)
    if a.rows != b.rows:
        raise ShapeMismatch(f"solve: {a.rows} equations vs {b.rows} right-hand rows")
    ctx = a.ctx
    # augmented [a | b] with pivots restricted to the columns of a
    work = [a.row_list(i) + b.row_list(i) for i in range(a.rows)]
    pivots = _eliminate(ctx, work, a.cols)
    kernel = tuple(_kernel_from_rref(ctx, work, a.cols, pivots))
    if any(
        any(work[r][a.cols :]) for r in range(len(pivots), a.rows)
    ):
        # inconsistent: a certificate row lives in the left kernel of a
        for y in kernel_basis(a.transpose()):
            yt = y.transpose()
            if not (yt @ b).is_zero:
                return SolveResult(False, None, kernel, yt)
        raise ModcohError("internal error: inconsistent system without a certificate")
    sol = [0] * (a.cols * b.cols)
    for r, c in pivots:
        sol[c * b.cols : (c + 1) * b.cols] = work[r][a.cols :]
    return SolveResult(True, Matrix(ctx, a.cols, b.cols, sol), kernel, None)


def inverse(m: Matrix) -> Matrix:
    if not m.is_square:
        raise ShapeMismatch(f"inverse of non-square {m.rows}x{m.cols}")
    n = m.rows
    work = [m.row_list(i) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    pivots = _eliminate(m.ctx, work, n)
    if len(pivots) < n:
        raise Singular(f"matrix of rank {len(pivots)} < {n}")
    return Matrix(m.ctx, n, n, [x for row in work for x in row[n:]])


def is_invertible(m: Matrix) -> bool:
    return m.is_square and rank(m) == m.rows


# -- serialization ------------------------------------------------------------


def matrix_to_json(m: Matrix) -> dict:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [
            [list(m[i, j].coeffs) for j in range(m.cols)] for i in range(m.rows)
        ],
    }


def matrix_from_json(ctx: FieldCtx, obj: dict) -> Matrix:
    try:
        rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ModcohError(f"bad matrix object: {obj!r}") from exc
    if not isinstance(rows, int) or not isinstance(cols, int) or len(entries) != rows:
        raise ModcohError("matrix shape mismatch in serialized form")
    data = []
    for row in entries:
        if len(row) != cols:
            raise ModcohError("matrix shape mismatch in serialized form")
        for entry in row:
            data.append(element_from_json(ctx, entry).val)
    return Matrix(ctx, rows, cols, data)
