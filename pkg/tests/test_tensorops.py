"""Tensor products of codes, powers, length formulas, and distance bounds."""

from __future__ import annotations

import random

import pytest

from csstensor import chain, css, gf2, tensorops
from csstensor.css import CssCode, KIsZero
from csstensor.families import steane
from csstensor.gf2 import BinMatrix
from csstensor.rand import random_complex3, random_css_code
from csstensor.tensorops import (
    PowerSpec,
    ResourceCeiling,
    check_distance_criterion,
    css_power,
    css_tensor,
    generic_lower_bound,
    known_comparison_bound,
    power_length,
    reduced_power_length,
    tensor_distance_lower_bound,
)


def unit_code() -> CssCode:
    return CssCode(1, BinMatrix.zeros(0, 1), BinMatrix.zeros(0, 1))


def convolution_coefficient(dims, ell, degree):
    poly = [1]
    for _ in range(ell):
        out = [0] * (len(poly) + len(dims) - 1)
        for i, a in enumerate(poly):
            for j, b in enumerate(dims):
                out[i + j] += a * b
        poly = out
    return poly[degree] if 0 <= degree < len(poly) else 0


class TestCssTensor:
    def test_unit_reproduces_code(self):
        code = steane()
        assert css_tensor(code, unit_code()) == code
        assert css_tensor(unit_code(), code) == code

    def test_steane_square(self):
        product = css_tensor(steane(), steane())
        assert product.n == 67
        assert css.dimension_k(product) == 1

    def test_kunneth_k_on_random_pairs(self):
        rng = random.Random(1)
        for _ in range(15):
            c = random_css_code(rng, rng.randrange(3, 7), 1, 2, min_k=0)
            d = random_css_code(rng, rng.randrange(3, 7), 2, 1, min_k=0)
            product = css_tensor(c, d)
            hc = chain.homology_dims(css.to_complex(c))
            hd = chain.homology_dims(css.to_complex(d))
            expected = hc[0] * hd[2] + hc[1] * hd[1] + hc[2] * hd[0]
            assert css.dimension_k(product) == expected


class TestCssPower:
    def test_ell_one_identity(self):
        code = steane()
        assert css_power(code, 1) == code

    def test_ell_two_matches_pairwise(self):
        code = steane()
        assert css_power(code, 2) == css_tensor(code, code)

    def test_fold_bit_identity_small(self):
        rng = random.Random(2)
        for _ in range(5):
            code = random_css_code(rng, rng.randrange(3, 6), 1, 1, min_k=0)
            assert css_power(code, 2) == css_tensor(code, code)

    def test_ell_three_n_k_match_fold(self):
        code = steane()
        window = css_power(code, 3)
        fold = css_tensor(css_tensor(code, code), code)
        assert window.n == fold.n == 721
        assert css.dimension_k(window) == css.dimension_k(fold) == 1

    def test_length_formula_agreement(self):
        rng = random.Random(3)
        for _ in range(8):
            code = random_css_code(rng, rng.randrange(2, 5), 1, 1, min_k=0)
            dims = css.to_complex(code).dims
            for ell in (1, 2, 3):
                predicted = power_length(dims, ell)
                if predicted > 500:
                    continue
                built = css_power(code, ell)
                assert built.n == predicted

    def test_resource_guard(self):
        with pytest.raises(ResourceCeiling):
            css_power(steane(), 4, max_n=1000)

    def test_window_parameter(self):
        # off-middle window: degree 1 of the square
        code = steane()
        shifted = css_power(code, 2, center=1)
        assert shifted.n == power_length((3, 7, 3), 2, 1) == 42

    def test_invalid_ell(self):
        with pytest.raises(ValueError):
            css_power(steane(), 0)

    def test_row_weight_subadditive(self):
        rng = random.Random(11)
        for _ in range(5):
            code = random_css_code(rng, rng.randrange(3, 6), 1, 1, min_k=0)
            base = css.weight_profile(code)
            for ell in (2, 3):
                if power_length(css.to_complex(code).dims, ell) > 400:
                    continue
                profile = css.weight_profile(css_power(code, ell))
                assert profile.max_row_weight_x <= ell * max(
                    base.max_row_weight_x, base.max_col_weight_z, 1
                )
                assert profile.max_row_weight_z <= ell * max(
                    base.max_row_weight_z, base.max_col_weight_x, 1
                )


class TestPowerLength:
    def test_ell_one(self):
        assert power_length((3, 7, 3), 1) == 7

    def test_steane_square(self):
        assert power_length((3, 7, 3), 2) == 67

    def test_middle_only(self):
        assert power_length((0, 5, 0), 4) == 5**4

    def test_matches_convolution(self):
        rng = random.Random(4)
        for _ in range(40):
            dims = tuple(rng.randrange(0, 9) for _ in range(3))
            for ell in range(1, 5):
                for degree in range(0, 2 * ell + 1):
                    assert power_length(dims, ell, degree) == convolution_coefficient(
                        dims, ell, degree
                    )

    def test_large_ell_big_integers(self):
        value = power_length((3, 7, 3), 64)
        assert value == convolution_coefficient((3, 7, 3), 64, 64)
        assert value > 10**60


class TestReducedPowers:
    def test_already_reduced_ell_one(self):
        x = chain.ChainComplex((2, 3, 1), (BinMatrix.zeros(2, 3), BinMatrix.zeros(3, 1)))
        assert reduced_power_length(x, 1) == 3

    def test_exact_complex_collapses(self):
        x = chain.ChainComplex((2, 2), (BinMatrix.identity(2),))
        padded = chain.ChainComplex((2, 2, 0), (BinMatrix.identity(2), BinMatrix.zeros(2, 0)))
        assert chain.homology_dims(padded) == (0, 0, 0)
        assert reduced_power_length(padded, 1) == 0
        assert reduced_power_length(padded, 3) == 0
        del x

    def test_steane_goldens(self):
        code = steane()
        assert [reduced_power_length(code, ell) for ell in (1, 2, 3)] == [1, 1, 1]

    def test_reduced_below_full(self):
        rng = random.Random(5)
        for _ in range(10):
            x = random_complex3(rng, 5)
            for ell in (1, 2, 3):
                assert reduced_power_length(x, ell) <= power_length(x.dims, ell)

    def test_reduced_code_buildable(self):
        reduced = css_power(steane(), 2, reduced=True)
        assert reduced.n == 1
        assert css.dimension_k(reduced) == 1


class TestCriterion:
    def test_steane_golden(self):
        report = check_distance_criterion(steane())
        assert report.holds and report.holds_x and report.holds_z
        assert (report.d_x, report.d_z) == (3, 3)
        assert (report.stab_min_x, report.stab_min_z) == (4, 4)
        assert report.logical_witness_x.weight() == 3
        assert report.stabilizer_witness_x.weight() == 4

    def test_k_zero_raises(self):
        code = css.from_matrices(BinMatrix.identity(3), BinMatrix.zeros(0, 3))
        with pytest.raises(KIsZero):
            check_distance_criterion(code)

    def test_degenerate_code_fails_criterion(self):
        pairs = [(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8)]
        h_z = BinMatrix.from_support(6, 9, [list(p) for p in pairs])
        h_x = BinMatrix.from_support(2, 9, [list(range(0, 6)), list(range(3, 9))])
        report = check_distance_criterion(css.from_matrices(h_x, h_z))
        assert not report.holds
        assert not report.holds_z  # the weight-2 checks undercut d_Z = 3

    def test_no_stabilizers_holds_trivially(self):
        code = CssCode(2, BinMatrix.zeros(0, 2), BinMatrix.zeros(0, 2))
        report = check_distance_criterion(code)
        assert report.holds and report.stab_min_x is None


class TestBounds:
    def test_steane_pair_goldens(self):
        code = steane()
        assert known_comparison_bound(code, code) == (3, 3)
        assert generic_lower_bound(code, code) == (4, 4)
        crit = check_distance_criterion(code)
        assert tensor_distance_lower_bound(code, code, crit) == (4, 4)

    def test_bounds_below_exact_steane_square(self):
        code = steane()
        crit = check_distance_criterion(code)
        bound = tensor_distance_lower_bound(code, code, crit)
        product = css_tensor(code, code)
        for side, value in zip(("X", "Z"), bound):
            upper = css.min_distance_random_upper(product, side, 100, 9)
            exact = css.min_distance_exact(product, side, weight_cap=9, seed_upper=upper)
            assert value <= exact.lower

    def test_nonnegative_and_at_least_one(self):
        rng = random.Random(6)
        for _ in range(10):
            c = random_css_code(rng, rng.randrange(4, 8), 1, 2)
            d = random_css_code(rng, rng.randrange(4, 8), 2, 1)
            if css.dimension_k(css_tensor(c, d)) < 1:
                continue
            bx, bz = generic_lower_bound(c, d)
            assert bx >= 1 and bz >= 1

    def test_generic_requires_logical_sector(self):
        full = css.from_matrices(BinMatrix.identity(2), BinMatrix.zeros(0, 2))
        with pytest.raises(KIsZero):
            generic_lower_bound(full, full)

    def test_weight_two_cell_code_bound_tight(self):
        # single X check of weight 2: d_X = 1, d_Z = 2; the square of this
        # code has Z distance exactly 4, matching the refined bound
        code = css.from_matrices(BinMatrix.from_rows([[1, 1]]), BinMatrix.zeros(0, 2))
        crit = check_distance_criterion(code)
        assert crit.holds
        product = css_tensor(code, code)
        bound = tensor_distance_lower_bound(code, code, crit)
        assert css.min_distance_exact(product, "Z").value == 4
        assert css.min_distance_exact(product, "X").value == 1
        assert bound[1] == 4  # capture factor 0 on the checkless side: pure product
        assert bound[0] == 1

    def test_redundant_checks_activate_end_sectors(self):
        # duplicate check rows create top homology; the sector bound must
        # then account for light redundancy vectors
        h = BinMatrix.from_rows([[1, 1, 0], [1, 1, 0]])
        c = css.from_matrices(h, BinMatrix.zeros(0, 3))
        d = css.from_matrices(BinMatrix.zeros(0, 3), h)
        product = css_tensor(c, d)
        k = css.dimension_k(product)
        assert k >= 1
        bx, bz = generic_lower_bound(c, d)
        for side, bound in zip(("X", "Z"), (bx, bz)):
            exact = css.min_distance_exact(product, side).value
            assert bound <= exact


class TestWindowBoundSoundness:
    def test_machine_bound_sound_for_window_cubes(self):
        # the sweep strengthens stage-3 bounds with the sector bound for
        # base (x) previous power; window-power logicals embed into that
        # product's logicals, so the bound must sit below the exact value
        rng = random.Random(21)
        checked = 0
        while checked < 6:
            code = random_css_code(rng, rng.randrange(3, 5), 1, 1)
            if css.dimension_k(code) < 1:
                continue
            dims = css.to_complex(code).dims
            if power_length(dims, 3) > 120:
                continue
            cube = css_power(code, 3)
            if css.dimension_k(cube) < 1:
                continue
            square = css_power(code, 2)
            checked += 1
            for side in ("X", "Z"):
                cp = tensorops.factor_params(code, side)
                dp = tensorops.factor_params(square, side)
                bound = tensorops.bound_from_params(cp, dp)
                exact = css.min_distance_exact(cube, side).value
                assert bound <= exact


class TestSweep:
    def test_steane_two_stages(self):
        records = tensorops.sweep(
            PowerSpec(steane(), 1), 2, weight_cap=6, time_budget=10.0, trials=40, seed=5
        )
        assert [r.n for r in records] == [7, 67]
        assert [r.k for r in records] == [1, 1]
        assert records[0].d_x.exact and records[0].d_x.value == 3
        assert records[0].degenerate is False
        # stage 2: capped search certifies 7; upper 9 from sampling
        assert records[1].d_z.lower == 7
        assert records[1].d_z.upper == 9
        assert records[1].wmax_x <= 8 and records[1].wmax_z <= 8
        assert records[1].stab_min == 5
        assert records[1].degenerate is True

    def test_reduced_sweep_below_full(self):
        full = tensorops.sweep(
            PowerSpec(steane(), 1), 2, weight_cap=3, time_budget=5.0, trials=20, seed=5
        )
        reduced = tensorops.sweep(
            PowerSpec(steane(), 1, reduced=True),
            2,
            weight_cap=3,
            time_budget=5.0,
            trials=20,
            seed=5,
        )
        for f, r in zip(full, reduced):
            assert r.n <= f.n

    def test_csv_shape(self):
        records = tensorops.sweep(
            PowerSpec(steane(), 1), 1, weight_cap=3, time_budget=5.0, trials=20, seed=5
        )
        text = tensorops.sweep_to_csv(records)
        lines = text.strip().split("\n")
        assert lines[0] == (
            "ell,n,k,dx_lo,dx_hi,dx_exact,dz_lo,dz_hi,dz_exact,"
            "wmax_x,wmax_z,stab_min,degenerate,seconds"
        )
        assert lines[1].startswith("1,7,1,3,3,true,3,3,true,4,4,4,false,")

    def test_masked_seconds_deterministic(self):
        kwargs = dict(weight_cap=3, time_budget=5.0, trials=20, seed=5)
        a = tensorops.sweep(PowerSpec(steane(), 1), 1, **kwargs)
        b = tensorops.sweep(PowerSpec(steane(), 1), 1, **kwargs)
        assert tensorops.sweep_to_csv(a, with_seconds=False) == tensorops.sweep_to_csv(
            b, with_seconds=False
        )

    def test_record_json(self):
        records = tensorops.sweep(
            PowerSpec(steane(), 1), 1, weight_cap=3, time_budget=5.0, trials=20, seed=5
        )
        row = records[0].to_json_dict()
        assert row["n"] == 7 and row["d_x"]["exact"] is True
        assert row["error"] is None

    def test_ceiling_failures_recorded_in_row(self):
        records = tensorops.sweep(
            PowerSpec(steane(), 1),
            3,
            weight_cap=3,
            time_budget=5.0,
            trials=20,
            seed=5,
            max_n=70,
        )
        assert len(records) == 3
        assert records[0].error is None and records[1].error is None
        assert records[2].error is not None and "ceiling" in records[2].error
        assert records[2].n == 721  # predicted length still reported
        # the CSV still renders, with empty analysis columns on the failed row
        text = tensorops.sweep_to_csv(records)
        assert text.strip().split("\n")[3].startswith("3,721,0,,,,,,,0,0,,unknown,")
