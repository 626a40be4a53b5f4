"""CSS-level tensor products, iterated powers, and distance lower bounds.

The product of two CSS codes is taken at the chain level: tensor the two
length-3 complexes, keep the middle three degrees, and read the result
back as a code.  Iterated powers build the full (2l+1)-term power and
truncate once around the chosen degree (default: the middle), assembling
only the three degrees that survive; folding pairwise products with
intermediate truncation agrees at l = 2 but discards middle-feeding
spaces at higher l.

Distance lower bounds come from a Kuenneth decomposition of the middle
homology of the product.  A nontrivial logical class has a nonzero
component in at least one of three sectors, and each sector forces
weight:

* middle (x) middle: contracting the middle block of a representative
  with a detecting cocycle of either factor yields a nontrivial logical
  of that factor, so the block has at least d(C) nonzero rows (and d(D)
  nonzero columns).  Rows that are cycles of D weigh at least the
  minimum nonzero cycle weight of D; rows that are not cycles are
  charged to the outer blocks through the stabilizer supports, at most
  (max check row weight) captured rows per unit of outer-block weight.
  Minimising over the split gives a bound that strictly improves the
  plain max(d(C), d(D)) whenever the capture factor is finite.
* end sectors (present only when a factor has redundant checks):
  contractions land in the kernel of the top boundary, bounding the
  class weight by the lightest nonzero check redundancy.

The criterion reported by ``check_distance_criterion`` is per-side
non-degeneracy: no stabilizer is strictly lighter than the distance,
i.e. the minimum nonzero cycle weight equals the distance.  When it
holds for C the middle-sector bound evaluates with the full distance of
C in place of its cycle minimum for every partner D.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Sequence

from . import chain, css, gf2
from .chain import ChainComplex
from .css import CssCode, DistanceResult, KIsZero
from .gf2 import BinMatrix, BinVector

DEFAULT_SEED = 101


class ResourceCeiling(RuntimeError):
    """Predicted size exceeds the configured ceiling."""

    def __init__(self, predicted: int, ceiling: int):
        super().__init__(f"predicted n = {predicted} exceeds ceiling {ceiling}")
        self.predicted = predicted
        self.ceiling = ceiling


@dataclass(frozen=True)
class PowerSpec:
    base: CssCode
    ell: int
    reduced: bool = False

    def __post_init__(self) -> None:
        if self.ell < 1:
            raise ValueError("ell must be >= 1")


# -- products and powers ------------------------------------------------


def css_tensor(c: CssCode, d: CssCode) -> CssCode:
    """Tensor product code: middle three degrees of the product complex."""
    e = chain.tensor(css.to_complex(c), css.to_complex(d))
    return css.from_complex(chain.truncate(e, 1, 3))


def _kron_between_identities(m: BinMatrix, left: int, right: int) -> BinMatrix:
    """kron(I_left, kron(m, I_right)) without building the identities."""
    rows = []
    shifted = []
    for row in m.data:
        bits = 0
        for j in gf2._support_of(row):
            bits |= 1 << (j * right)
        shifted.append(bits)
    for a in range(left):
        base = a * m.cols * right
        for srow in shifted:
            for b in range(right):
                rows.append(srow << (base + b))
    return BinMatrix(left * m.rows * right, left * m.cols * right, tuple(rows))


def _power_compositions(top: int, ell: int, degree: int) -> list[tuple[int, ...]]:
    """Summand index tuples of degree ``degree`` in the ell-th power.

    Ordered to match a left fold of pairwise tensor products: ascending
    prefix-sum tuples (s_{ell-1}, ..., s_1).
    """
    combos: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], remaining: int, slots: int) -> None:
        if slots == 1:
            if 0 <= remaining <= top:
                combos.append(prefix + (remaining,))
            return
        for v in range(0, min(top, remaining) + 1):
            rec(prefix + (v,), remaining - v, slots - 1)

    rec((), degree, ell)

    def key(c: tuple[int, ...]) -> tuple[int, ...]:
        sums = []
        s = 0
        for v in c[:-1]:
            s += v
            sums.append(s)
        return tuple(reversed(sums))

    combos.sort(key=key)
    return combos


def power_complex_window(x: ChainComplex, ell: int, lo: int, hi: int) -> ChainComplex:
    """Degrees lo..hi of the ell-th tensor power, bit-identical to folding.

    Assembles only the requested window of the full (ell * top + 1)-term
    power, block by block, so large powers never materialise the spaces
    outside the window.
    """
    top = x.top_degree()
    if not (0 <= lo <= hi <= ell * top):
        raise ValueError(f"window {lo}..{hi} outside 0..{ell * top}")
    dims_x = x.dims
    comps = {k: _power_compositions(top, ell, k) for k in range(lo, hi + 1)}

    def size(c: Sequence[int]) -> int:
        out = 1
        for v in c:
            out *= dims_x[v]
        return out

    dims = tuple(sum(size(c) for c in comps[k]) for k in range(lo, hi + 1))
    boundaries = []
    for k in range(lo + 1, hi + 1):
        src = comps[k]
        tgt = comps[k - 1]
        tgt_offset = {}
        off = 0
        for c in tgt:
            tgt_offset[c] = off
            off += size(c)
        rows = [0] * dims[k - 1 - lo]
        col_off = 0
        for c in src:
            width = size(c)
            if width:
                for p in range(ell):
                    if c[p] >= 1:
                        t = c[:p] + (c[p] - 1,) + c[p + 1 :]
                        if t not in tgt_offset:
                            continue
                        left = 1
                        for v in c[:p]:
                            left *= dims_x[v]
                        right = 1
                        for v in c[p + 1 :]:
                            right *= dims_x[v]
                        block = _kron_between_identities(x.boundary(c[p]), left, right)
                        ro = tgt_offset[t]
                        for s, brow in enumerate(block.data):
                            rows[ro + s] ^= brow << col_off
            col_off += width
        boundaries.append(BinMatrix(dims[k - 1 - lo], dims[k - lo], tuple(rows)))
    return ChainComplex(dims, tuple(boundaries))


def power_length(dims: Sequence[int], ell: int, degree: int | None = None) -> int:
    """Dimension of one graded piece of the ell-th power, in closed form.

    For a length-3 complex this is the coefficient of z^degree in
    (c0 + c1 z + c2 z^2)^ell, expanded as a trinomial sum; the default
    degree is the middle one (= ell).  Exact big-integer arithmetic, so
    no overflow at any ell.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if degree is None:
        degree = ell * (len(dims) - 1) // 2
    if len(dims) == 3:
        c0, c1, c2 = dims
        total = 0
        for twos in range(0, min(ell, degree // 2) + 1):
            ones = degree - 2 * twos
            zeros = ell - ones - twos
            if ones < 0 or zeros < 0:
                continue
            total += (
                math.comb(ell, twos)
                * math.comb(ell - twos, ones)
                * (c0**zeros)
                * (c1**ones)
                * (c2**twos)
            )
        return total
    poly = [1]
    for _ in range(ell):
        out = [0] * (len(poly) + len(dims) - 1)
        for i, a in enumerate(poly):
            if a:
                for j, b in enumerate(dims):
                    out[i + j] += a * b
        poly = out
    return poly[degree] if 0 <= degree < len(poly) else 0


def css_power(
    c: CssCode,
    ell: int,
    reduced: bool = False,
    max_n: int | None = None,
    center: int | None = None,
) -> CssCode:
    """The ell-th iterated tensor power of a code.

    Builds the full power at the chain level and truncates once to the
    three degrees around ``center`` (default: the middle degree ell).
    With ``reduced`` the pipeline interleaves the deterministic pivot
    reduction after every product stage, which collapses each stage to
    its homology; see ``reduced_power_complex``.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    x = css.to_complex(c)
    if reduced:
        return css.from_complex(reduced_power_complex(x, ell))
    if center is None:
        center = ell
    predicted = power_length(x.dims, ell, center)
    if max_n is not None and predicted > max_n:
        raise ResourceCeiling(predicted, max_n)
    if ell == 1:
        return css.from_complex(x)
    window = power_complex_window(x, ell, center - 1, center + 1)
    return css.from_complex(window)


def reduced_power_complex(x: ChainComplex, ell: int) -> ChainComplex:
    """Iterated power with pivot reduction applied after every stage.

    Stage 1 reduces the input; each later stage tensors with the original
    factor, truncates to the middle three degrees and reduces again.  An
    exact input collapses immediately, so all its reduced powers are
    empty.  Lengths of these minimal representatives are the homology
    analogue of the unreduced length formula.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    s = chain.reduce(x)
    for _ in range(ell - 1):
        product = chain.tensor(s, x)
        mid = (len(product.dims) - 1) // 2
        s = chain.reduce(chain.truncate(product, mid - 1, mid + 1))
    return s


def reduced_power_length(
    base: CssCode | ChainComplex | Sequence[int], ell: int
) -> int:
    """Qubit count of the reduced power pipeline (middle dimension).

    Accepts a code, a length-3 complex, or a bare dimension triple (read
    as a complex with zero boundary maps, i.e. already reduced).
    """
    if isinstance(base, ChainComplex):
        x = base
    elif isinstance(base, CssCode):
        x = css.to_complex(base)
    else:
        c0, c1, c2 = base
        x = ChainComplex(
            (c0, c1, c2), (BinMatrix.zeros(c0, c1), BinMatrix.zeros(c1, c2))
        )
    return reduced_power_complex(x, ell).dims[1]


# -- distance criterion and lower bounds ---------------------------------


@dataclass(frozen=True)
class CriterionReport:
    """Per-side non-degeneracy of a code, with the witnesses that decide it.

    ``holds_z`` means no nonzero Z stabilizer is strictly lighter than
    d_Z (equivalently the minimum nonzero weight in ker h_x equals d_Z);
    ``holds_x`` symmetrically.  ``holds`` requires both sides.
    """

    holds: bool
    holds_x: bool
    holds_z: bool
    d_x: int
    d_z: int
    stab_min_x: int | None
    stab_min_z: int | None
    logical_witness_x: BinVector
    logical_witness_z: BinVector
    stabilizer_witness_x: BinVector | None
    stabilizer_witness_z: BinVector | None

    def to_json_dict(self) -> dict:
        return {
            "holds": self.holds,
            "holds_x": self.holds_x,
            "holds_z": self.holds_z,
            "d_x": self.d_x,
            "d_z": self.d_z,
            "stab_min_x": self.stab_min_x,
            "stab_min_z": self.stab_min_z,
            "logical_witness_x": self.logical_witness_x.support(),
            "logical_witness_z": self.logical_witness_z.support(),
            "stabilizer_witness_x": (
                None
                if self.stabilizer_witness_x is None
                else self.stabilizer_witness_x.support()
            ),
            "stabilizer_witness_z": (
                None
                if self.stabilizer_witness_z is None
                else self.stabilizer_witness_z.support()
            ),
        }


def check_distance_criterion(code: CssCode) -> CriterionReport:
    """Exact per-side non-degeneracy check with witnesses."""
    if css.dimension_k(code) == 0:
        raise KIsZero("criterion is undefined for k = 0")
    values = {}
    for side in ("X", "Z"):
        dist = css.min_distance_exact(code, side)
        stab_mat = code.h_x if side == "X" else code.h_z
        if stab_mat.is_zero():
            stab = None
        else:
            stab = css.stabilizer_min_weight(code, side)
        holds = stab is None or stab.value >= dist.value
        values[side] = (dist, stab, holds)
    dist_x, stab_x, holds_x = values["X"]
    dist_z, stab_z, holds_z = values["Z"]
    return CriterionReport(
        holds=holds_x and holds_z,
        holds_x=holds_x,
        holds_z=holds_z,
        d_x=dist_x.value,
        d_z=dist_z.value,
        stab_min_x=None if stab_x is None else stab_x.value,
        stab_min_z=None if stab_z is None else stab_z.value,
        logical_witness_x=dist_x.witness,
        logical_witness_z=dist_z.witness,
        stabilizer_witness_x=None if stab_x is None else stab_x.witness,
        stabilizer_witness_z=None if stab_z is None else stab_z.witness,
    )


@dataclass(frozen=True)
class FactorParams:
    """Certified per-side invariants of one factor feeding the bound machine.

    All entries are lower bounds except ``check_w`` (exact max check row
    weight; 0 means no checks, so no capture is possible) and the two
    homology dimensions, which are exact.
    """

    k: int
    d_lo: int
    cycle_lo: int
    check_w: int
    h_top: int
    h_bot: int
    top_min_lo: int | None


def _min_nonzero_weight(rows: Sequence[int], cols: int) -> int | None:
    """Exact minimum weight over nonzero elements of a row space."""
    reduced, _ = gf2._rref_bitrows(rows, cols)
    if not reduced:
        return None
    search = css._Search(list(reduced), cols, lambda w: True, None)
    return search.run(None).value


def factor_params(code: CssCode, side: str) -> FactorParams:
    """Exact invariants of a code for one side of the bound machine."""
    kernel_of, stab = css._side_matrices(code, side)
    k = css.dimension_k(code)
    d_lo = css.min_distance_exact(code, side).value if k else 0
    cycle = _min_nonzero_weight(gf2.kernel_basis(kernel_of).data, code.n)
    check_w = max(stab.row_weights(), default=0)
    h_top = stab.rows - gf2.rank(stab)
    h_bot = kernel_of.rows - gf2.rank(kernel_of)
    top_min = None
    if h_top:
        left_kernel = gf2.kernel_basis(gf2.transpose(stab))
        top_min = _min_nonzero_weight(left_kernel.data, stab.rows)
    return FactorParams(
        k=k,
        d_lo=d_lo,
        cycle_lo=1 if cycle is None else cycle,
        check_w=check_w,
        h_top=h_top,
        h_bot=h_bot,
        top_min_lo=top_min,
    )


def _capture_refinement(count_d: int, heavy: int, check_w: int) -> int:
    """Minimum of N + heavy * (count_d - L) + L over L <= min(count_d, check_w * N).

    ``count_d`` rows are forced nonzero; each is either a cycle of the
    partner (weight >= heavy) or captured by the outer block, at most
    ``check_w`` captures per unit of outer weight N.
    """
    best = count_d * heavy
    if check_w <= 0:
        return best
    n_outer = 1
    while True:
        captured = min(count_d, check_w * n_outer)
        best = min(best, n_outer + heavy * (count_d - captured) + captured)
        if captured >= count_d:
            return best
        n_outer += 1


def _sector_bounds(cp: FactorParams, dp: FactorParams, refined: bool) -> list[int]:
    sectors = []
    if cp.k and dp.k:
        if refined:
            sectors.append(
                max(
                    cp.d_lo,
                    dp.d_lo,
                    _capture_refinement(cp.d_lo, dp.cycle_lo, cp.check_w),
                    _capture_refinement(dp.d_lo, cp.cycle_lo, dp.check_w),
                )
            )
        else:
            sectors.append(max(cp.d_lo, dp.d_lo))
    if cp.h_top and dp.h_bot:
        sectors.append(max(cp.top_min_lo or 1, 1))
    if dp.h_top and cp.h_bot:
        sectors.append(max(dp.top_min_lo or 1, 1))
    return sectors


def bound_from_params(cp: FactorParams, dp: FactorParams, refined: bool = True) -> int:
    """Sound lower bound on one side of the product distance."""
    sectors = _sector_bounds(cp, dp, refined)
    if not sectors:
        raise KIsZero("the product has no logical qubits on this side")
    return min(sectors)


def generic_lower_bound(c: CssCode, d: CssCode) -> tuple[int, int]:
    """Unconditional lower bounds (bound_x, bound_z) on the product distances."""
    bounds = []
    for side in ("X", "Z"):
        bounds.append(bound_from_params(factor_params(c, side), factor_params(d, side)))
    return bounds[0], bounds[1]


def known_comparison_bound(c: CssCode, d: CssCode) -> tuple[int, int]:
    """The plain per-sector max bound, kept for before/after comparison."""
    bounds = []
    for side in ("X", "Z"):
        bounds.append(
            bound_from_params(factor_params(c, side), factor_params(d, side), refined=False)
        )
    return bounds[0], bounds[1]


def tensor_distance_lower_bound(
    c: CssCode, d: CssCode, criterion: CriterionReport
) -> tuple[int, int]:
    """Lower bounds (bound_x, bound_z) for the product of c with any d.

    With the criterion holding on c, the cycle minimum of c equals its
    distance, so the middle-sector refinement runs at full strength; when
    it fails the same machinery still applies with c's true cycle minimum
    and the result coincides with ``generic_lower_bound``.
    """
    bounds = []
    for side in ("X", "Z"):
        cp = factor_params(c, side)
        if criterion.holds:
            d_side = criterion.d_x if side == "X" else criterion.d_z
            cp = FactorParams(
                cp.k, d_side, d_side, cp.check_w, cp.h_top, cp.h_bot, cp.top_min_lo
            )
        dp = factor_params(d, side)
        bounds.append(bound_from_params(cp, dp))
    generic = generic_lower_bound(c, d)
    return max(bounds[0], generic[0]), max(bounds[1], generic[1])


# -- sweeps ----------------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    ell: int
    n: int
    k: int
    d_x: DistanceResult | None
    d_z: DistanceResult | None
    wmax_x: int
    wmax_z: int
    stab_min_x: DistanceResult | None
    stab_min_z: DistanceResult | None
    degenerate: bool | None
    seconds: float
    error: str | None = None

    @property
    def stab_min(self) -> int | None:
        values = [
            s.upper
            for s in (self.stab_min_x, self.stab_min_z)
            if s is not None and s.upper is not None
        ]
        return min(values) if values else None

    def to_json_dict(self) -> dict:
        def dist(r: DistanceResult | None) -> dict | None:
            if r is None:
                return None
            return {"lower": r.lower, "upper": r.upper, "exact": r.exact}

        return {
            "ell": self.ell,
            "n": self.n,
            "k": self.k,
            "d_x": dist(self.d_x),
            "d_z": dist(self.d_z),
            "wmax_x": self.wmax_x,
            "wmax_z": self.wmax_z,
            "stab_min": self.stab_min,
            "degenerate": self.degenerate,
            "seconds": self.seconds,
            "error": self.error,
        }


SWEEP_CSV_HEADER = (
    "ell,n,k,dx_lo,dx_hi,dx_exact,dz_lo,dz_hi,dz_exact,"
    "wmax_x,wmax_z,stab_min,degenerate,seconds"
)


def sweep_to_csv(records: Sequence[SweepRecord], with_seconds: bool = True) -> str:
    """CSV table of a sweep; seconds can be masked for byte-stable output."""
    lines = [SWEEP_CSV_HEADER]
    for r in records:
        def fmt(res: DistanceResult | None) -> tuple[str, str, str]:
            if res is None:
                return "", "", ""
            hi = "" if res.upper is None else str(res.upper)
            return str(res.lower), hi, str(res.exact).lower()

        dx = fmt(r.d_x)
        dz = fmt(r.d_z)
        degen = "unknown" if r.degenerate is None else str(r.degenerate).lower()
        seconds = f"{r.seconds:.3f}" if with_seconds else ""
        stab = "" if r.stab_min is None else str(r.stab_min)
        lines.append(
            f"{r.ell},{r.n},{r.k},{dx[0]},{dx[1]},{dx[2]},{dz[0]},{dz[1]},{dz[2]},"
            f"{r.wmax_x},{r.wmax_z},{stab},{degen},{seconds}"
        )
    return "\n".join(lines) + "\n"


def _params_from_record(
    code: CssCode, record: SweepRecord, side: str
) -> FactorParams:
    """Certified factor invariants of a built power, from its sweep record."""
    kernel_of, stab = css._side_matrices(code, side)
    dist = record.d_x if side == "X" else record.d_z
    stab_res = record.stab_min_x if side == "X" else record.stab_min_z
    d_lo = dist.lower if dist is not None else 0
    stab_lo = stab_res.lower if stab_res is not None else None
    cycle_lo = d_lo if stab_lo is None else min(d_lo, stab_lo)
    h_top = stab.rows - gf2.rank(stab)
    h_bot = kernel_of.rows - gf2.rank(kernel_of)
    top_min = None
    if h_top:
        left_kernel = gf2.kernel_basis(gf2.transpose(stab))
        top_min = _min_nonzero_weight(left_kernel.data, stab.rows)
    return FactorParams(
        k=record.k,
        d_lo=d_lo,
        cycle_lo=max(1, cycle_lo),
        check_w=max(stab.row_weights(), default=0),
        h_top=h_top,
        h_bot=h_bot,
        top_min_lo=top_min,
    )


def sweep(
    spec: PowerSpec,
    ell_max: int,
    weight_cap: int = css.DEFAULT_WEIGHT_CAP,
    time_budget: float | None = 60.0,
    trials: int = css.DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    max_n: int | None = None,
) -> list[SweepRecord]:
    """Analyze the powers of a base code for ell = 1..ell_max.

    Each stage builds the (reduced or full) power, runs the budgeted
    analysis, and strengthens the certified distance lower bounds with
    the sector bound applied to base (x) previous power.  Lower bounds
    never exceed upper bounds; capped searches record cap + 1, never a
    guess.  A stage rejected by the resource ceiling is recorded in-row
    (predicted n, empty analytics, the message in ``error``) and the run
    continues.
    """
    if ell_max < 1:
        raise ValueError("ell_max must be >= 1")
    base_params = {
        side: factor_params(spec.base, side) for side in ("X", "Z")
    }
    records: list[SweepRecord] = []
    prev_code: CssCode | None = None
    for ell in range(1, ell_max + 1):
        t0 = time.monotonic()
        try:
            code = css_power(spec.base, ell, reduced=spec.reduced, max_n=max_n)
        except ResourceCeiling as exc:
            records.append(
                SweepRecord(
                    ell=ell,
                    n=exc.predicted,
                    k=0,
                    d_x=None,
                    d_z=None,
                    wmax_x=0,
                    wmax_z=0,
                    stab_min_x=None,
                    stab_min_z=None,
                    degenerate=None,
                    seconds=time.monotonic() - t0,
                    error=str(exc),
                )
            )
            prev_code = None
            continue
        report = css.analyze(
            code,
            exact_up_to=weight_cap,
            trials=trials,
            seed=seed + ell,
            time_budget=time_budget,
        )
        d_x, d_z = report.d_x, report.d_z
        if (
            not spec.reduced
            and ell >= 2
            and records
            and prev_code is not None
            and report.k >= 1
        ):
            merged = {}
            for side, current in (("X", d_x), ("Z", d_z)):
                if current is None:
                    merged[side] = None
                    continue
                prev_params = _params_from_record(prev_code, records[-1], side)
                try:
                    machine = bound_from_params(base_params[side], prev_params)
                except KIsZero:
                    machine = 1
                lower = max(current.lower, machine)
                exact = current.exact or (
                    current.upper is not None and lower == current.upper
                )
                merged[side] = DistanceResult(lower, current.upper, exact, current.witness)
            d_x, d_z = merged["X"], merged["Z"]
        degenerate = css._decide_degenerate(
            [s for s in (report.min_stabilizer_weight_x, report.min_stabilizer_weight_z) if s],
            [d for d in (d_x, d_z) if d is not None],
        ) if report.k >= 1 else None
        records.append(
            SweepRecord(
                ell=ell,
                n=report.n,
                k=report.k,
                d_x=d_x,
                d_z=d_z,
                wmax_x=report.profile.max_row_weight_x,
                wmax_z=report.profile.max_row_weight_z,
                stab_min_x=report.min_stabilizer_weight_x,
                stab_min_z=report.min_stabilizer_weight_z,
                degenerate=degenerate,
                seconds=time.monotonic() - t0,
            )
        )
        prev_code = code
    return records
