"""Dense bit-packed linear algebra over GF(2).

Matrices store one Python int per row; bit ``j`` of a row is the entry in
column ``j``.  Arbitrary-precision ints give word-parallel XOR row
operations at any width, so rank/kernel/product all reduce to integer
bit twiddling.  All values are immutable and safe to share between
threads.

Kronecker products use left-factor-major index ordering throughout:
``kron(A, B)`` places entry ``(i1, i2), (j1, j2)`` at row
``i1 * B.rows + i2`` and column ``j1 * B.cols + j2``.  Every tensor-style
construction in this package relies on this single convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class DimensionMismatch(ValueError):
    """Operands do not conform (wrong row/column counts)."""


def _mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class BinVector:
    """A length-``n`` bit vector packed into a single int (bit j = coord j)."""

    n: int
    bits: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("negative length")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError("bits outside declared length")

    @classmethod
    def from_support(cls, n: int, support: Iterable[int]) -> BinVector:
        bits = 0
        for j in support:
            if not 0 <= j < n:
                raise ValueError(f"index {j} out of range for length {n}")
            bits |= 1 << j
        return cls(n, bits)

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> BinVector:
        bits = 0
        for j, e in enumerate(entries):
            if e & 1:
                bits |= 1 << j
        return cls(len(entries), bits)

    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        return _support_of(self.bits)

    def __add__(self, other: BinVector) -> BinVector:
        if self.n != other.n:
            raise DimensionMismatch("vector lengths differ")
        return BinVector(self.n, self.bits ^ other.bits)


@dataclass(frozen=True)
class BinMatrix:
    """A ``rows x cols`` matrix over GF(2) with bit-packed rows.

    ``data[i]`` is row ``i``; bits beyond ``cols`` are always zero.
    0 x n and m x 0 matrices are valid and act as empty maps.
    """

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.data) != self.rows:
            raise ValueError("row count does not match data")
        m = _mask(self.cols)
        for r in self.data:
            if r < 0 or r & ~m:
                raise ValueError("row has bits beyond declared width")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BinMatrix:
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> BinMatrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> BinMatrix:
        """Build from a list of 0/1 entry lists."""
        if cols is None:
            cols = len(rows[0]) if rows else 0
        data = []
        for row in rows:
            if len(row) != cols:
                raise DimensionMismatch("ragged rows")
            bits = 0
            for j, e in enumerate(row):
                if e & 1:
                    bits |= 1 << j
            data.append(bits)
        return cls(len(rows), cols, tuple(data))

    @classmethod
    def from_bitrows(cls, bitrows: Sequence[int], cols: int) -> BinMatrix:
        return cls(len(bitrows), cols, tuple(bitrows))

    @classmethod
    def from_support(cls, rows: int, cols: int, support: Sequence[Sequence[int]]) -> BinMatrix:
        if len(support) != rows:
            raise DimensionMismatch("support list length != rows")
        data = []
        for sup in support:
            bits = 0
            for j in sup:
                if not 0 <= j < cols:
                    raise ValueError(f"column index {j} out of range")
                bits |= 1 << j
            data.append(bits)
        return cls(rows, cols, tuple(data))

    # -- accessors ------------------------------------------------------

    def row(self, i: int) -> int:
        return self.data[i]

    def entry(self, i: int, j: int) -> int:
        return (self.data[i] >> j) & 1

    def row_vector(self, i: int) -> BinVector:
        return BinVector(self.cols, self.data[i])

    def row_weights(self) -> list[int]:
        return [r.bit_count() for r in self.data]

    def col_weights(self) -> list[int]:
        w = [0] * self.cols
        for r in self.data:
            for j in _support_of(r):
                w[j] += 1
        return w

    def support(self) -> list[list[int]]:
        return [_support_of(r) for r in self.data]

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.data)

    def total_weight(self) -> int:
        return sum(r.bit_count() for r in self.data)

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self.data]

    def __str__(self) -> str:
        return "\n".join(
            "".join("1" if (r >> j) & 1 else "." for j in range(self.cols)) for r in self.data
        )


def _support_of(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


# -- elimination core ---------------------------------------------------


def _rref_bitrows(bitrows: Sequence[int], cols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form of int rows; returns (nonzero rows, pivot cols)."""
    work = [r for r in bitrows]
    pivots: list[int] = []
    row_idx = 0
    for col in range(cols):
        bit = 1 << col
        pivot = None
        for r in range(row_idx, len(work)):
            if work[r] & bit:
                pivot = r
                break
        if pivot is None:
            continue
        work[row_idx], work[pivot] = work[pivot], work[row_idx]
        piv_row = work[row_idx]
        for r in range(len(work)):
            if r != row_idx and work[r] & bit:
                work[r] ^= piv_row
        pivots.append(col)
        row_idx += 1
        if row_idx == len(work):
            break
    return work[: len(pivots)], pivots


def _reduce_by_rref(vec: int, rref_rows: Sequence[int], pivots: Sequence[int]) -> int:
    for row, col in zip(rref_rows, pivots):
        if (vec >> col) & 1:
            vec ^= row
    return vec


# -- public operations ---------------------------------------------------


def rank(m: BinMatrix) -> int:
    """Dimension of the row space of ``m``."""
    _, pivots = _rref_bitrows(m.data, m.cols)
    return len(pivots)


def rref(m: BinMatrix) -> tuple[BinMatrix, list[int]]:
    """Reduced row echelon form and its pivot columns."""
    rows, pivots = _rref_bitrows(m.data, m.cols)
    return BinMatrix(len(rows), m.cols, tuple(rows)), pivots


def kernel_basis(m: BinMatrix) -> BinMatrix:
    """Basis of the right kernel {v : m v = 0}, one vector per row.

    Row count is ``cols - rank(m)``.  For a matrix with no rows this is the
    identity-like basis of the whole domain.
    """
    rows, pivots = _rref_bitrows(m.data, m.cols)
    pivot_set = set(pivots)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free_cols:
        vec = 1 << f
        for row, p in zip(rows, pivots):
            if (row >> f) & 1:
                vec |= 1 << p
        basis.append(vec)
    return BinMatrix(len(basis), m.cols, tuple(basis))


def rowspace_contains(m: BinMatrix, v: BinVector) -> bool:
    """Whether ``v`` is an F2-combination of the rows of ``m``."""
    if v.n != m.cols:
        raise DimensionMismatch(f"vector length {v.n} != cols {m.cols}")
    rows, pivots = _rref_bitrows(m.data, m.cols)
    return _reduce_by_rref(v.bits, rows, pivots) == 0


def matmul(a: BinMatrix, b: BinMatrix) -> BinMatrix:
    """Matrix product over GF(2) (XOR accumulation)."""
    if a.cols != b.rows:
        raise DimensionMismatch(f"inner dimensions {a.cols} != {b.rows}")
    out = []
    bdata = b.data
    for row in a.data:
        acc = 0
        rem = row
        while rem:
            low = rem & -rem
            acc ^= bdata[low.bit_length() - 1]
            rem ^= low
        out.append(acc)
    return BinMatrix(a.rows, b.cols, tuple(out))


def matvec(m: BinMatrix, v: BinVector) -> BinVector:
    """Matrix-vector product; returns a length-``rows`` vector."""
    if v.n != m.cols:
        raise DimensionMismatch(f"vector length {v.n} != cols {m.cols}")
    bits = 0
    for i, row in enumerate(m.data):
        if (row & v.bits).bit_count() & 1:
            bits |= 1 << i
    return BinVector(m.rows, bits)


def transpose(m: BinMatrix) -> BinMatrix:
    out = [0] * m.cols
    for i, row in enumerate(m.data):
        bit = 1 << i
        for j in _support_of(row):
            out[j] |= bit
    return BinMatrix(m.cols, m.rows, tuple(out))


def kron(a: BinMatrix, b: BinMatrix) -> BinMatrix:
    """Kronecker product, left factor major.

    Entry ((i1, i2), (j1, j2)) = a[i1, j1] * b[i2, j2] at row
    i1 * b.rows + i2 and column j1 * b.cols + j2.
    """
    out = []
    for arow in a.data:
        asup = _support_of(arow)
        for brow in b.data:
            bits = 0
            for j1 in asup:
                bits |= brow << (j1 * b.cols)
            out.append(bits)
    return BinMatrix(a.rows * b.rows, a.cols * b.cols, tuple(out))


def hstack(mats: Sequence[BinMatrix]) -> BinMatrix:
    """Concatenate matrices left to right (equal row counts)."""
    if not mats:
        return BinMatrix.zeros(0, 0)
    rows = mats[0].rows
    for m in mats:
        if m.rows != rows:
            raise DimensionMismatch("hstack row counts differ")
    data = []
    for i in range(rows):
        bits = 0
        shift = 0
        for m in mats:
            bits |= m.data[i] << shift
            shift += m.cols
        data.append(bits)
    return BinMatrix(rows, sum(m.cols for m in mats), tuple(data))


def vstack(mats: Sequence[BinMatrix]) -> BinMatrix:
    """Concatenate matrices top to bottom (equal column counts)."""
    if not mats:
        return BinMatrix.zeros(0, 0)
    cols = mats[0].cols
    data: list[int] = []
    for m in mats:
        if m.cols != cols:
            raise DimensionMismatch("vstack column counts differ")
        data.extend(m.data)
    return BinMatrix(len(data), cols, tuple(data))


def permute_rows(m: BinMatrix, perm: Sequence[int]) -> BinMatrix:
    """Move row i to position perm[i]."""
    if len(perm) != m.rows:
        raise DimensionMismatch("permutation length != rows")
    out = [0] * m.rows
    for i, p in enumerate(perm):
        out[p] = m.data[i]
    return BinMatrix(m.rows, m.cols, tuple(out))


def permute_cols(m: BinMatrix, perm: Sequence[int]) -> BinMatrix:
    """Move column j to position perm[j]."""
    if len(perm) != m.cols:
        raise DimensionMismatch("permutation length != cols")
    out = []
    for row in m.data:
        bits = 0
        for j in _support_of(row):
            bits |= 1 << perm[j]
        out.append(bits)
    return BinMatrix(m.rows, m.cols, tuple(out))


def delete_row(m: BinMatrix, i: int) -> BinMatrix:
    data = m.data[:i] + m.data[i + 1 :]
    return BinMatrix(m.rows - 1, m.cols, data)


def delete_col(m: BinMatrix, j: int) -> BinMatrix:
    low = _mask(j)
    data = tuple((r & low) | ((r >> 1) & ~low) for r in m.data)
    return BinMatrix(m.rows, m.cols - 1, data)


# -- text format ----------------------------------------------------------
#
# First line "rows cols", then one line per row with the sorted column
# indices of its set bits; a zero row is an empty line.


def to_text(m: BinMatrix) -> str:
    lines = [f"{m.rows} {m.cols}"]
    for r in m.data:
        lines.append(" ".join(str(j) for j in _support_of(r)))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> BinMatrix:
    lines = text.split("\n")
    if not lines or not lines[0].strip():
        raise ValueError("missing header line")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"bad header {lines[0]!r}")
    rows, cols = int(head[0]), int(head[1])
    if len(lines) < rows + 1:
        raise ValueError("truncated matrix text")
    support = []
    for i in range(rows):
        line = lines[1 + i].strip()
        support.append([int(tok) for tok in line.split()] if line else [])
    return BinMatrix.from_support(rows, cols, support)
