"""Chain complexes over GF(2).

A complex is a graded list of F2 spaces with boundary maps composing to
zero.  Degree 0 is the rightmost space: a length-3 complex reads
``C_2 -> C_1 -> C_0`` with ``boundary(i)`` mapping degree i to degree
i - 1 (shape ``dims[i-1] x dims[i]``).  Working in characteristic 2, all
Koszul signs are dropped: the usual alternating signs in the tensor
differential are identically 1.

Summand ordering inside a tensor product is fixed once and for all:
``(X (x) Y)_k`` lists ``X_i (x) Y_j`` by increasing left degree ``i``, and
each summand uses left-factor-major Kronecker indexing.  This makes every
block matrix reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import gf2
from .gf2 import BinMatrix

HomologyProfile = tuple[int, ...]


class ShapeMismatch(ValueError):
    """A boundary matrix does not match the declared dimensions."""

    def __init__(self, degree: int, message: str):
        super().__init__(message)
        self.degree = degree


class BoundarySquareNonzero(ValueError):
    """The composite of two consecutive boundary maps is nonzero."""

    def __init__(self, degree: int, message: str):
        super().__init__(message)
        self.degree = degree


@dataclass(frozen=True)
class ChainComplex:
    """Immutable chain complex; ``boundaries[i - 1]`` is the map out of degree i."""

    dims: tuple[int, ...]
    boundaries: tuple[BinMatrix, ...]

    def __post_init__(self) -> None:
        if not self.dims:
            raise ValueError("a complex needs at least one space")
        if len(self.boundaries) != len(self.dims) - 1:
            raise ValueError(
                f"expected {len(self.dims) - 1} boundary maps, got {len(self.boundaries)}"
            )

    @classmethod
    def build(cls, dims: Sequence[int], boundaries: Sequence[BinMatrix]) -> ChainComplex:
        return cls(tuple(dims), tuple(boundaries))

    @classmethod
    def single(cls, n: int) -> ChainComplex:
        """The complex 0 -> F^n -> 0 concentrated at degree 0."""
        return cls((n,), ())

    def top_degree(self) -> int:
        return len(self.dims) - 1

    def dim(self, i: int) -> int:
        if 0 <= i < len(self.dims):
            return self.dims[i]
        return 0

    def boundary(self, i: int) -> BinMatrix:
        """The map C_i -> C_{i-1}; out-of-range degrees give zero maps."""
        if 1 <= i <= self.top_degree():
            return self.boundaries[i - 1]
        return BinMatrix.zeros(self.dim(i - 1), self.dim(i))


def unit_complex() -> ChainComplex:
    """The tensor unit 0 -> F -> 0 at degree 0."""
    return ChainComplex.single(1)


def validate(x: ChainComplex) -> None:
    """Raise ShapeMismatch or BoundarySquareNonzero at the first failing degree."""
    for i in range(1, x.top_degree() + 1):
        b = x.boundary(i)
        if b.cols != x.dims[i] or b.rows != x.dims[i - 1]:
            raise ShapeMismatch(
                i,
                f"boundary {i} has shape {b.rows}x{b.cols}, "
                f"expected {x.dims[i - 1]}x{x.dims[i]}",
            )
    for i in range(2, x.top_degree() + 1):
        if not gf2.matmul(x.boundary(i - 1), x.boundary(i)).is_zero():
            raise BoundarySquareNonzero(i, f"boundary {i - 1} o boundary {i} != 0")


def is_valid(x: ChainComplex) -> bool:
    try:
        validate(x)
        return True
    except (ShapeMismatch, BoundarySquareNonzero):
        return False


def homology_dims(x: ChainComplex) -> HomologyProfile:
    """dim H_i = dims[i] - rank(boundary i) - rank(boundary i+1) at every degree."""
    validate(x)
    ranks = [gf2.rank(x.boundary(i)) for i in range(len(x.dims) + 1)]
    return tuple(x.dims[i] - ranks[i] - ranks[i + 1] for i in range(len(x.dims)))


def euler_characteristic(x: ChainComplex) -> int:
    return sum((-1) ** i * d for i, d in enumerate(x.dims))


def _tensor_summands(dx: Sequence[int], dy: Sequence[int], k: int) -> list[tuple[int, int]]:
    """Index pairs (i, j) with i + j = k, ascending i."""
    lo = max(0, k - (len(dy) - 1))
    hi = min(len(dx) - 1, k)
    return [(i, k - i) for i in range(lo, hi + 1)]


def tensor_dims(dx: Sequence[int], dy: Sequence[int]) -> tuple[int, ...]:
    """Dimension convolution of the two graded spaces."""
    out = []
    for k in range(len(dx) + len(dy) - 1):
        out.append(sum(dx[i] * dy[j] for i, j in _tensor_summands(dx, dy, k)))
    return tuple(out)


def tensor(x: ChainComplex, y: ChainComplex) -> ChainComplex:
    """Tensor product of complexes with the fixed summand ordering.

    The boundary on the (i, j) summand is the block column
    ``kron(dX_i, I)`` into (i-1, j) plus ``kron(I, dY_j)`` into (i, j-1);
    no signs in characteristic 2.
    """
    dx, dy = x.dims, y.dims
    dims = tensor_dims(dx, dy)
    boundaries = []
    for k in range(1, len(dims)):
        src = _tensor_summands(dx, dy, k)
        tgt = _tensor_summands(dx, dy, k - 1)
        tgt_offset = {}
        off = 0
        for (i, j) in tgt:
            tgt_offset[(i, j)] = off
            off += dx[i] * dy[j]
        rows = [0] * dims[k - 1]
        col_off = 0
        for (i, j) in src:
            width = dx[i] * dy[j]
            if width:
                if i >= 1 and (i - 1, j) in tgt_offset:
                    block = gf2.kron(x.boundary(i), BinMatrix.identity(dy[j]))
                    ro = tgt_offset[(i - 1, j)]
                    for t, brow in enumerate(block.data):
                        rows[ro + t] ^= brow << col_off
                if j >= 1 and (i, j - 1) in tgt_offset:
                    block = gf2.kron(BinMatrix.identity(dx[i]), y.boundary(j))
                    ro = tgt_offset[(i, j - 1)]
                    for t, brow in enumerate(block.data):
                        rows[ro + t] ^= brow << col_off
            col_off += width
        boundaries.append(BinMatrix(dims[k - 1], dims[k], tuple(rows)))
    return ChainComplex(dims, tuple(boundaries))


def truncate(x: ChainComplex, lo: int, hi: int) -> ChainComplex:
    """Keep degrees lo..hi and the maps strictly between them; re-index lo -> 0."""
    if not (0 <= lo <= hi <= x.top_degree()):
        raise ValueError(f"range {lo}..{hi} outside degrees 0..{x.top_degree()}")
    dims = x.dims[lo : hi + 1]
    boundaries = tuple(x.boundary(i) for i in range(lo + 1, hi + 1))
    return ChainComplex(dims, boundaries)


def reduce(x: ChainComplex) -> ChainComplex:
    """Cancel unit pivots until every boundary map is zero.

    Each step picks the entry 1 with the lowest (degree, row, column)
    triple, removes that row/column pair of basis vectors and applies the
    Schur complement update to the pivot's own matrix; the two neighbouring
    maps only lose the paired row/column.  The result has zero boundary
    maps and dims equal to the homology profile of the input, and the
    pivot order makes the reduction deterministic.
    """
    validate(x)
    dims = list(x.dims)
    top = x.top_degree()
    bnd: dict[int, list[int]] = {i: list(x.boundary(i).data) for i in range(1, top + 1)}

    def lowest_pivot() -> tuple[int, int, int] | None:
        for d in range(1, top + 1):
            for r, row in enumerate(bnd[d]):
                if row:
                    return d, r, (row & -row).bit_length() - 1
        return None

    while True:
        piv = lowest_pivot()
        if piv is None:
            break
        d, r, c = piv
        rows = bnd[d]
        piv_row = rows[r]
        bit = 1 << c
        for t in range(len(rows)):
            if t != r and rows[t] & bit:
                rows[t] ^= piv_row
        del rows[r]
        low = (1 << c) - 1
        bnd[d] = [(row & low) | ((row >> 1) & ~low) for row in rows]
        if d + 1 <= top:
            del bnd[d + 1][c]
        if d - 1 >= 1:
            low_r = (1 << r) - 1
            bnd[d - 1] = [(row & low_r) | ((row >> 1) & ~low_r) for row in bnd[d - 1]]
        dims[d] -= 1
        dims[d - 1] -= 1

    boundaries = tuple(
        BinMatrix(dims[i - 1], dims[i], tuple(bnd[i])) for i in range(1, top + 1)
    )
    return ChainComplex(tuple(dims), boundaries)


def associativity_permutation(
    dx: Sequence[int], dy: Sequence[int], dz: Sequence[int]
) -> list[tuple[int, ...]]:
    """Basis permutations carrying (X (x) Y) (x) Z onto X (x) (Y (x) Z).

    Entry ``perm[n][p]`` is the position in the right-associated basis of
    the left-associated basis vector ``p`` at degree ``n``.  Both orderings
    list the same (i, j, k) blocks, sorted by (i + j, i) on the left and by
    (i, j) on the right, with identical row-major indices inside a block.
    """
    total = len(dx) + len(dy) + len(dz) - 2
    yz_layout = {}
    for mp in range(len(dy) + len(dz) - 1):
        table = {}
        off = 0
        for (j, k) in _tensor_summands(dy, dz, mp):
            table[(j, k)] = off
            off += dy[j] * dz[k]
        yz_layout[mp] = (table, off)

    perms: list[tuple[int, ...]] = []
    for n in range(total):
        triples = [
            (i, j, n - i - j)
            for i in range(len(dx))
            for j in range(len(dy))
            if 0 <= n - i - j < len(dz)
        ]
        # Left association: (X (x) Y)_m blocks by ascending m then i, with
        # (x, y, z) row-major inside; every triple occupies a contiguous run.
        left_off = {}
        off = 0
        for t in sorted(triples, key=lambda t: (t[0] + t[1], t[0])):
            left_off[t] = off
            off += dx[t[0]] * dy[t[1]] * dz[t[2]]
        size = off
        # Right association: X_i (x) (Y (x) Z)_{n-i} blocks by ascending i,
        # where a triple's vectors stride by the full (Y (x) Z) dimension.
        right_block_off = {}
        off = 0
        for i in range(len(dx)):
            mp = n - i
            if mp in yz_layout:
                right_block_off[i] = off
                off += dx[i] * yz_layout[mp][1]
        perm = [0] * size
        for (i, j, k) in triples:
            lo = left_off[(i, j, k)]
            inner_off_table, inner_total = yz_layout[n - i]
            base = right_block_off[i] + inner_off_table[(j, k)]
            pos = lo
            for x in range(dx[i]):
                for y in range(dy[j]):
                    row = base + x * inner_total + y * dz[k]
                    for z in range(dz[k]):
                        perm[pos] = row + z
                        pos += 1
        perms.append(tuple(perm))
    return perms


# -- text format ----------------------------------------------------------
#
# Header "degrees d", a "dims ..." line, then each boundary map in the
# matrix text format, concatenated in increasing degree.


def to_text(x: ChainComplex) -> str:
    parts = [f"degrees {len(x.dims)}", "dims " + " ".join(str(d) for d in x.dims)]
    body = "\n".join(parts) + "\n"
    for i in range(1, len(x.dims)):
        body += gf2.to_text(x.boundary(i))
    return body


def from_text(text: str) -> ChainComplex:
    lines = text.split("\n")
    if not lines or not lines[0].startswith("degrees"):
        raise ValueError("missing 'degrees' header")
    d = int(lines[0].split()[1])
    if not lines[1].startswith("dims"):
        raise ValueError("missing 'dims' line")
    dims = tuple(int(tok) for tok in lines[1].split()[1:])
    if len(dims) != d:
        raise ValueError("dims line does not match degree count")
    boundaries = []
    pos = 2
    for _ in range(d - 1):
        head = lines[pos].split()
        rows = int(head[0])
        chunk = "\n".join(lines[pos : pos + rows + 1]) + "\n"
        boundaries.append(gf2.from_text(chunk))
        pos += rows + 1
    return ChainComplex(dims, tuple(boundaries))
