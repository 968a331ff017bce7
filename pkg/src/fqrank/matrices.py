"""Dense matrices over GF(q): exact products, rank, and entry counting.

A matrix is a thin wrapper around a numpy int16 array of element indices
together with the field it lives over.  Shapes with zero rows or columns are
legal everywhere (an m x 0 times 0 x n product is the zero matrix), which
keeps rank-0 factorisations free of special cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .field import FieldCtx, field_from_order


class DimensionMismatch(ValueError):
    """Raised when operand shapes are incompatible."""


class FieldMismatch(ValueError):
    """Raised when operands live over different fields."""


@dataclass(frozen=True)
class MatrixFq:
    """An m x n matrix of element indices over a fixed field."""

    field: FieldCtx
    data: np.ndarray  # int16, shape (m, n), values in range(q)

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=np.int16)
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d array, got ndim={arr.ndim}")
        if arr.size and (int(arr.min()) < 0 or int(arr.max()) >= self.field.q):
            raise ValueError(f"entries must lie in range({self.field.q})")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape  # type: ignore[return-value]

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixFq):
            return NotImplemented
        return (
            self.field.q == other.field.q
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.shape, self.data.tobytes()))

    def transpose(self) -> "MatrixFq":
        return MatrixFq(self.field, self.data.T)


def matrix(ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> MatrixFq:
    """Build a matrix from nested sequences of element indices."""
    return MatrixFq(ctx, np.array(rows, dtype=np.int16).reshape(len(rows), -1))


def zero_matrix(ctx: FieldCtx, m: int, n: int) -> MatrixFq:
    return MatrixFq(ctx, np.zeros((m, n), dtype=np.int16))


def identity_matrix(ctx: FieldCtx, n: int) -> MatrixFq:
    data = np.zeros((n, n), dtype=np.int16)
    np.fill_diagonal(data, 1)
    return MatrixFq(ctx, data)


def _check_same_field(a: MatrixFq, b: MatrixFq) -> None:
    if a.field is not b.field and a.field.spec != b.field.spec:
        raise FieldMismatch(f"GF({a.field.q}) vs GF({b.field.q})")


def mat_mul(a: MatrixFq, b: MatrixFq) -> MatrixFq:
    """Exact matrix product via table gathers, one inner index at a time."""
    _check_same_field(a, b)
    if a.cols != b.rows:
        raise DimensionMismatch(f"inner dimensions differ: {a.shape} x {b.shape}")
    ctx = a.field
    out = np.zeros((a.rows, b.cols), dtype=np.int16)
    for k in range(a.cols):
        term = ctx.mul_table[a.data[:, k][:, None], b.data[k, :][None, :]]
        out = ctx.add_table[out, term]
    return MatrixFq(ctx, out)


def mat_add(a: MatrixFq, b: MatrixFq) -> MatrixFq:
    _check_same_field(a, b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return MatrixFq(a.field, a.field.add_table[a.data, b.data])


def rank(mat: MatrixFq) -> int:
    """Rank by Gaussian elimination, exact over the field.

    Row echelon reduction with the first nonzero entry of the working column
    as pivot; elimination uses vectorised table gathers per pivot.
    """
    ctx = mat.field
    a = mat.data.astype(np.int16).copy()
    m, n = a.shape
    r = 0
    for col in range(n):
        if r == m:
            break
        pivot_rows = np.nonzero(a[r:, col])[0]
        if pivot_rows.size == 0:
            continue
        piv = r + int(pivot_rows[0])
        if piv != r:
            a[[r, piv], :] = a[[piv, r], :]
        inv_p = ctx.inv_table[a[r, col]]
        a[r, :] = ctx.mul_table[a[r, :], inv_p]
        below = np.nonzero(a[r + 1 :, col])[0] + r + 1
        if below.size:
            fac = ctx.neg_table[a[below, col]]
            scaled = ctx.mul_table[fac[:, None], a[r, :][None, :]]
            a[below, :] = ctx.add_table[a[below, :], scaled]
        r += 1
    return r


# ---------------------------------------------------------------------------
# entry subsets and counting statistics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubsetA:
    """A subset of field elements, stored as a bitmask over indices."""

    q: int
    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask < (1 << self.q):
            raise ValueError(f"mask out of range for q={self.q}")

    @classmethod
    def from_indices(cls, q: int, indices: Iterable[int]) -> "SubsetA":
        mask = 0
        for a in indices:
            if not 0 <= a < q:
                raise ValueError(f"element {a} outside range({q})")
            mask |= 1 << a
        return cls(q, mask)

    @classmethod
    def nonzero(cls, q: int) -> "SubsetA":
        return cls(q, ((1 << q) - 1) & ~1)

    @classmethod
    def zero_only(cls, q: int) -> "SubsetA":
        return cls(q, 1)

    @classmethod
    def full(cls, q: int) -> "SubsetA":
        return cls(q, (1 << q) - 1)

    def members(self) -> tuple[int, ...]:
        return tuple(a for a in range(self.q) if self.mask >> a & 1)

    @property
    def size(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, a: int) -> bool:
        return 0 <= a < self.q and bool(self.mask >> a & 1)

    def complement(self) -> "SubsetA":
        return SubsetA(self.q, ((1 << self.q) - 1) & ~self.mask)

    def member_table(self) -> np.ndarray:
        """Boolean membership lookup of length q."""
        return _member_table(self.q, self.mask)


@lru_cache(maxsize=None)
def _member_table(q: int, mask: int) -> np.ndarray:
    table = np.fromiter((bool(mask >> a & 1) for a in range(q)), dtype=bool, count=q)
    table.setflags(write=False)
    return table


def ct(mat: MatrixFq, subset: SubsetA) -> int:
    """Number of entries of the matrix that lie in the subset."""
    if subset.q != mat.field.q:
        raise FieldMismatch(f"subset over GF({subset.q}), matrix over GF({mat.field.q})")
    return int(subset.member_table()[mat.data].sum())


def wt(mat: MatrixFq) -> int:
    """Number of nonzero entries (Hamming weight)."""
    return int(np.count_nonzero(mat.data))


# ---------------------------------------------------------------------------
# plain-text serialisation
# ---------------------------------------------------------------------------


def dump_matrix(mat: MatrixFq) -> str:
    """Render as a header line "m n q" followed by one line per row."""
    lines = [f"{mat.rows} {mat.cols} {mat.field.q}"]
    for row in mat.data:
        lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def load_matrix(text: str, ctx: FieldCtx | None = None) -> MatrixFq:
    """Parse the :func:`dump_matrix` format.

    When ``ctx`` is given its order must match the header; otherwise the
    field is constructed from the header's q.
    """
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    header = lines[0].split()
    if len(header) != 3:
        raise ValueError(f"header must be 'm n q', got {lines[0]!r}")
    m, n, q = (int(tok) for tok in header)
    if ctx is None:
        ctx = field_from_order(q)
    elif ctx.q != q:
        raise FieldMismatch(f"header says GF({q}), context is GF({ctx.q})")
    if len(lines) - 1 != m:
        raise ValueError(f"expected {m} rows, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        row = [int(tok) for tok in ln.split()]
        if len(row) != n:
            raise ValueError(f"expected {n} columns, got {len(row)}")
        rows.append(row)
    data = np.array(rows, dtype=np.int16).reshape(m, n)
    if data.size and (int(data.min()) < 0 or int(data.max()) >= q):
        raise ValueError(f"entries must lie in range({q})")
    return MatrixFq(ctx, data)
