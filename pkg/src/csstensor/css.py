"""CSS codes as binary matrix pairs and their single-code analytics.

A CSS code is a pair (h_x, h_z) of parity-check matrices on the same n
qubits with ``h_x . h_z^T = 0``.  The associated length-3 chain complex is
``F^{r_z} -> F^n -> F^{r_x}`` with boundary 1 equal to h_x and boundary 2
equal to h_z transposed; qubits sit at degree 1.

Distance conventions (fixed here once; both sides are always reported, so
an opposite labelling elsewhere is a swap, not a numerical change):

    d_Z = min weight of v in ker(h_x) outside rowspace(h_z)
    d_X = min weight of v in ker(h_z) outside rowspace(h_x)

Exact searches enumerate combinations of a reduced kernel basis in
increasing support size.  A word of Hamming weight w picks at most w
pivot coordinates, hence at most w basis rows, so completing support
size p certifies that no target of weight <= p was missed.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from . import chain, gf2
from .chain import ChainComplex
from .gf2 import BinMatrix, BinVector


class OrthogonalityViolation(ValueError):
    """h_x and h_z have a row pair with odd overlap; carries one witness pair."""

    def __init__(self, witness: tuple[int, int]):
        super().__init__(
            f"h_x row {witness[0]} and h_z row {witness[1]} overlap on an odd number of qubits"
        )
        self.witness = witness


class KIsZero(ValueError):
    """The code has no logical qubits, so no logical class exists."""


class EmptyStabilizerGroup(ValueError):
    """The selected stabilizer matrix has no nonzero row."""


@dataclass(frozen=True)
class CssCode:
    n: int
    h_x: BinMatrix
    h_z: BinMatrix

    def __post_init__(self) -> None:
        if self.h_x.cols != self.n or self.h_z.cols != self.n:
            raise gf2.DimensionMismatch(
                f"check matrices have {self.h_x.cols}/{self.h_z.cols} columns, expected n={self.n}"
            )
        witness = _orthogonality_witness(self.h_x, self.h_z)
        if witness is not None:
            raise OrthogonalityViolation(witness)


def _orthogonality_witness(h_x: BinMatrix, h_z: BinMatrix) -> tuple[int, int] | None:
    prod = gf2.matmul(h_x, gf2.transpose(h_z))
    for i, row in enumerate(prod.data):
        if row:
            return i, (row & -row).bit_length() - 1
    return None


def from_matrices(h_x: BinMatrix, h_z: BinMatrix) -> CssCode:
    """Validated constructor; raises OrthogonalityViolation with a witness pair."""
    if h_x.cols != h_z.cols:
        raise gf2.DimensionMismatch(
            f"h_x has {h_x.cols} columns but h_z has {h_z.cols}"
        )
    return CssCode(h_x.cols, h_x, h_z)


def to_complex(code: CssCode) -> ChainComplex:
    """The associated complex with dims [r_x, n, r_z] and qubits at degree 1."""
    return ChainComplex(
        (code.h_x.rows, code.n, code.h_z.rows),
        (code.h_x, gf2.transpose(code.h_z)),
    )


def from_complex(x: ChainComplex) -> CssCode:
    """Inverse of to_complex for a valid complex with exactly 3 spaces."""
    if len(x.dims) != 3:
        raise ValueError(f"expected a length-3 complex, got {len(x.dims)} spaces")
    chain.validate(x)
    return CssCode(x.dims[1], x.boundary(1), gf2.transpose(x.boundary(2)))


def dimension_k(code: CssCode) -> int:
    """Number of logical qubits, n - rank(h_x) - rank(h_z)."""
    return code.n - gf2.rank(code.h_x) - gf2.rank(code.h_z)


# -- low-weight search engine ---------------------------------------------


@dataclass(frozen=True)
class DistanceResult:
    """Outcome of a weight-stratified search.

    ``lower`` is always a certified lower bound on the true minimum.  When
    ``exact`` holds, ``lower == upper == value``.  A capped search reports
    lower = cap + 1 and whatever upper the enumeration happened to find.
    """

    lower: int
    upper: int | None
    exact: bool
    witness: BinVector | None = None

    @property
    def value(self) -> int:
        if not self.exact or self.upper is None:
            raise ValueError("search did not finish; no exact value")
        return self.upper


class _Timeout(Exception):
    pass


class _Search:
    """Combination enumeration over a reduced basis, smallest support first."""

    def __init__(self, basis_rows, n, is_target, deadline):
        reduced, _ = gf2._rref_bitrows(basis_rows, n)
        self.rows = reduced
        self.n = n
        self.is_target = is_target
        self.deadline = deadline
        self.best_w: int | None = None
        self.best_word: int | None = None
        self.nodes = 0

    def _leaf(self, word: int) -> None:
        w = word.bit_count()
        if (self.best_w is None or w < self.best_w) and self.is_target(word):
            self.best_w = w
            self.best_word = word

    def _walk(self, start: int, depth: int, acc: int, r: int) -> None:
        rows = self.rows
        k = len(rows)
        if depth == r - 1:
            self.nodes += k - start
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise _Timeout
            best_w = self.best_w
            target = self.is_target
            for idx in range(start, k):
                word = acc ^ rows[idx]
                w = word.bit_count()
                if best_w is None or w < best_w:
                    if target(word):
                        best_w = w
                        self.best_word = word
            self.best_w = best_w
        else:
            for idx in range(start, k - (r - depth) + 1):
                self._walk(idx + 1, depth + 1, acc ^ rows[idx], r)

    def run(
        self,
        weight_cap: int | None,
        seed_upper: int | None = None,
        seed_word: int | None = None,
    ) -> DistanceResult:
        if seed_word is not None:
            self.best_word = seed_word
            self.best_w = seed_word.bit_count()
        if seed_upper is not None and (self.best_w is None or seed_upper < self.best_w):
            self.best_w = seed_upper
        completed = 0
        r = 1
        while True:
            if self.best_w is not None and self.best_w <= r:
                break
            if r > len(self.rows):
                break
            if weight_cap is not None and r > weight_cap:
                break
            try:
                self._walk(0, 0, 0, r)
            except _Timeout:
                break
            completed = r
            r += 1

        found = self.best_w if self.best_word is not None else None
        exhausted = completed >= len(self.rows)
        if found is not None and (found <= completed + 1 or exhausted):
            return DistanceResult(found, found, True, _vec(self.best_word, self.n))
        lower = completed + 1
        if found is not None:
            lower = min(lower, found)
        witness = _vec(self.best_word, self.n) if self.best_word is not None else None
        return DistanceResult(lower, found, False, witness)


def _vec(bits: int | None, n: int) -> BinVector | None:
    return None if bits is None else BinVector(n, bits)


def _memberness(m: BinMatrix):
    """Fast repeated membership test against rowspace(m)."""
    rows, pivots = gf2._rref_bitrows(m.data, m.cols)

    def contains(word: int) -> bool:
        return gf2._reduce_by_rref(word, rows, pivots) == 0

    return contains


def _side_matrices(code: CssCode, side: str) -> tuple[BinMatrix, BinMatrix]:
    """(kernel-defining matrix, same-side stabilizer matrix) for a side."""
    if side == "Z":
        return code.h_x, code.h_z
    if side == "X":
        return code.h_z, code.h_x
    raise ValueError(f"side must be 'X' or 'Z', got {side!r}")


def min_distance_exact(
    code: CssCode,
    side: str,
    weight_cap: int | None = None,
    time_budget: float | None = None,
    seed_upper: int | None = None,
) -> DistanceResult:
    """Weight-stratified exact distance search on one side.

    Enumerates kernel combinations in increasing support size, testing
    rowspace membership only on candidate improvements.  With a cap the
    result certifies lower = cap + 1 when nothing lighter was found.
    """
    if dimension_k(code) == 0:
        raise KIsZero("distances are undefined for k = 0")
    kernel_of, stab = _side_matrices(code, side)
    kernel = gf2.kernel_basis(kernel_of)
    trivial = _memberness(stab)
    deadline = None if time_budget is None else time.monotonic() + time_budget
    search = _Search(list(kernel.data), code.n, lambda w: not trivial(w), deadline)
    return search.run(weight_cap, seed_upper=seed_upper)


def min_distance_random_upper(code: CssCode, side: str, trials: int, seed: int) -> int:
    """Upper bound from seeded random information sets over the kernel.

    Each trial re-eliminates the kernel basis with a random column
    priority; the resulting rows (and their pairs, on small kernels) are
    low-weight kernel members and every nontrivial one bounds the distance
    from above.  Deterministic for a fixed seed.
    """
    if dimension_k(code) == 0:
        raise KIsZero("distances are undefined for k = 0")
    kernel_of, stab = _side_matrices(code, side)
    kernel = gf2.kernel_basis(kernel_of)
    trivial = _memberness(stab)
    rng = random.Random(seed)
    base = list(kernel.data)
    best: int | None = None

    def consider(word: int) -> None:
        nonlocal best
        w = word.bit_count()
        if (best is None or w < best) and word and not trivial(word):
            best = w

    for _ in range(max(1, trials)):
        order = list(range(code.n))
        rng.shuffle(order)
        rows = _rref_with_column_order(base, order)
        for row in rows:
            consider(row)
        if len(rows) <= 80:
            for i in range(len(rows)):
                for j in range(i + 1, len(rows)):
                    consider(rows[i] ^ rows[j])
    if best is None:
        raise RuntimeError("no nontrivial kernel element found; inconsistent inputs")
    return best


def _rref_with_column_order(bitrows: list[int], order: list[int]) -> list[int]:
    work = list(bitrows)
    row_idx = 0
    for col in order:
        bit = 1 << col
        pivot = None
        for r in range(row_idx, len(work)):
            if work[r] & bit:
                pivot = r
                break
        if pivot is None:
            continue
        work[row_idx], work[pivot] = work[pivot], work[row_idx]
        piv = work[row_idx]
        for r in range(len(work)):
            if r != row_idx and work[r] & bit:
                work[r] ^= piv
        row_idx += 1
        if row_idx == len(work):
            break
    return work[:row_idx]


GRAY_ENUMERATION_MAX_RANK = 20


def stabilizer_min_weight(
    code: CssCode,
    side: str,
    weight_cap: int | None = None,
    time_budget: float | None = None,
) -> DistanceResult:
    """Minimum weight over nonzero elements of one stabilizer row space.

    Exact by Gray-code enumeration of all 2^rank - 1 elements when the
    rank is at most 20, otherwise by the same weight-stratified search
    (and cap semantics) as the distance computations.
    """
    if side not in ("X", "Z"):
        raise ValueError(f"side must be 'X' or 'Z', got {side!r}")
    stab = code.h_x if side == "X" else code.h_z
    if all(r == 0 for r in stab.data):
        raise EmptyStabilizerGroup(f"no nonzero {side} stabilizer rows")
    rows, _ = gf2._rref_bitrows(stab.data, stab.cols)
    r = len(rows)
    if r <= GRAY_ENUMERATION_MAX_RANK:
        word = 0
        best = None
        best_word = None
        for i in range(1, 1 << r):
            word ^= rows[(i & -i).bit_length() - 1]
            w = word.bit_count()
            if best is None or w < best:
                best, best_word = w, word
        return DistanceResult(best, best, True, _vec(best_word, stab.cols))
    deadline = None if time_budget is None else time.monotonic() + time_budget
    search = _Search(rows, stab.cols, lambda w: True, deadline)
    seed_word = min((r for r in stab.data if r), key=int.bit_count)
    return search.run(weight_cap, seed_word=seed_word)


def is_degenerate(
    code: CssCode,
    weight_cap: int | None = None,
    time_budget: float | None = None,
) -> bool | None:
    """Whether some stabilizer is strictly lighter than the minimum distance.

    Compares min over both sides of the stabilizer weights against min over
    both sides of the distances; returns None when the available bounds do
    not decide the strict inequality.
    """
    if dimension_k(code) == 0:
        raise KIsZero("degeneracy is undefined for k = 0")
    stabs = [
        stabilizer_min_weight(code, s, weight_cap, time_budget)
        for s in ("X", "Z")
        if not (code.h_x if s == "X" else code.h_z).is_zero()
    ]
    if not stabs:
        return False
    dists = [min_distance_exact(code, s, weight_cap, time_budget) for s in ("X", "Z")]
    return _decide_degenerate(stabs, dists)


def _decide_degenerate(
    stabs: list[DistanceResult], dists: list[DistanceResult]
) -> bool | None:
    if not stabs:
        return False
    stab_lo = min(s.lower for s in stabs)
    stab_hi = min((s.upper for s in stabs if s.upper is not None), default=None)
    dist_lo = min(d.lower for d in dists)
    dist_hi = min((d.upper for d in dists if d.upper is not None), default=None)
    if stab_hi is not None and stab_hi < dist_lo:
        return True
    if dist_hi is not None and stab_lo >= dist_hi:
        return False
    return None


@dataclass(frozen=True)
class WeightProfile:
    max_row_weight_x: int
    max_row_weight_z: int
    max_col_weight_x: int
    max_col_weight_z: int
    mean_row_weight_x: float
    mean_row_weight_z: float
    mean_col_weight_x: float
    mean_col_weight_z: float


def weight_profile(code: CssCode) -> WeightProfile:
    """Exact LDPC metrics from the matrix supports."""

    def stats(weights: list[int]) -> tuple[int, float]:
        if not weights:
            return 0, 0.0
        return max(weights), sum(weights) / len(weights)

    rx, mrx = stats(code.h_x.row_weights())
    rz, mrz = stats(code.h_z.row_weights())
    cx, mcx = stats(code.h_x.col_weights())
    cz, mcz = stats(code.h_z.col_weights())
    return WeightProfile(rx, rz, cx, cz, mrx, mrz, mcx, mcz)


# -- reports ----------------------------------------------------------------


@dataclass(frozen=True)
class CodeReport:
    """Computed parameters with explicit provenance for every number."""

    n: int
    k: int
    d_x: DistanceResult | None
    d_z: DistanceResult | None
    profile: WeightProfile
    min_stabilizer_weight_x: DistanceResult | None
    min_stabilizer_weight_z: DistanceResult | None
    degenerate: bool | None

    def to_json_dict(self) -> dict:
        def dist(d: DistanceResult | None) -> dict | None:
            if d is None:
                return None
            return {"lower": d.lower, "upper": d.upper, "exact": d.exact}

        return {
            "n": self.n,
            "k": self.k,
            "d_x": dist(self.d_x),
            "d_z": dist(self.d_z),
            "max_row_weight_x": self.profile.max_row_weight_x,
            "max_row_weight_z": self.profile.max_row_weight_z,
            "max_col_weight_x": self.profile.max_col_weight_x,
            "max_col_weight_z": self.profile.max_col_weight_z,
            "mean_row_weight_x": self.profile.mean_row_weight_x,
            "mean_row_weight_z": self.profile.mean_row_weight_z,
            "min_stabilizer_weight_x": dist(self.min_stabilizer_weight_x),
            "min_stabilizer_weight_z": dist(self.min_stabilizer_weight_z),
            "degenerate": self.degenerate,
        }


DEFAULT_WEIGHT_CAP = 6
DEFAULT_TRIALS = 200


def analyze(
    code: CssCode,
    exact_up_to: int = DEFAULT_WEIGHT_CAP,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    time_budget: float | None = None,
) -> CodeReport:
    """Full report: k, distance bounds per side, LDPC profile, degeneracy.

    Exact searches run up to ``exact_up_to`` (and ``time_budget`` seconds
    each, when given); whatever is not settled exactly is bracketed by the
    certified lower bound and a seeded randomized upper bound, with the
    exactness flags kept honest.  For a fixed seed the result is
    deterministic whenever the searches finish within budget; an expiring
    budget can only weaken the certified lower bound, never the flags.
    """
    k = dimension_k(code)
    profile = weight_profile(code)
    stab_x = (
        None
        if code.h_x.is_zero()
        else stabilizer_min_weight(code, "X", exact_up_to, time_budget)
    )
    stab_z = (
        None
        if code.h_z.is_zero()
        else stabilizer_min_weight(code, "Z", exact_up_to, time_budget)
    )
    if k == 0:
        return CodeReport(code.n, 0, None, None, profile, stab_x, stab_z, None)

    dists = {}
    for side in ("X", "Z"):
        upper = min_distance_random_upper(code, side, trials, seed)
        res = min_distance_exact(
            code, side, weight_cap=exact_up_to, time_budget=time_budget, seed_upper=upper
        )
        best = upper if res.upper is None else min(res.upper, upper)
        lower = min(res.lower, best)
        dists[side] = DistanceResult(lower, best, res.exact or lower == best, res.witness)

    degenerate = _decide_degenerate(
        [s for s in (stab_x, stab_z) if s is not None], [dists["X"], dists["Z"]]
    )
    return CodeReport(
        code.n, k, dists["X"], dists["Z"], profile, stab_x, stab_z, degenerate
    )


# -- JSON file format --------------------------------------------------------


def matrix_to_json(m: BinMatrix) -> dict:
    return {"rows": m.rows, "cols": m.cols, "support": m.support()}


def matrix_from_json(obj: dict) -> BinMatrix:
    return BinMatrix.from_support(obj["rows"], obj["cols"], obj["support"])


def code_to_json(code: CssCode, name: str = "") -> dict:
    return {
        "name": name,
        "n": code.n,
        "h_x": matrix_to_json(code.h_x),
        "h_z": matrix_to_json(code.h_z),
    }


def code_from_json(obj: dict) -> CssCode:
    h_x = matrix_from_json(obj["h_x"])
    h_z = matrix_from_json(obj["h_z"])
    code = from_matrices(h_x, h_z)
    if obj.get("n") is not None and obj["n"] != code.n:
        raise ValueError(f"declared n={obj['n']} does not match matrices ({code.n})")
    return code
