"""Chain complex tests: validity, homology, tensor, truncate, reduce."""

from __future__ import annotations

import random

import pytest

from csstensor import chain, gf2
from csstensor.chain import BoundarySquareNonzero, ChainComplex, ShapeMismatch
from csstensor.families import hamming_parity_check
from csstensor.rand import random_complex3


def steane_complex() -> ChainComplex:
    h = hamming_parity_check(3)
    return ChainComplex((3, 7, 3), (h, gf2.transpose(h)))


def convolve(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


class TestValidate:
    def test_single_space_ok(self):
        chain.validate(ChainComplex.single(1))

    def test_steane_ok(self):
        chain.validate(steane_complex())

    def test_square_nonzero_detected(self):
        one = gf2.BinMatrix.from_rows([[1]])
        bad = ChainComplex((1, 1, 1), (one, one))
        with pytest.raises(BoundarySquareNonzero) as err:
            chain.validate(bad)
        assert err.value.degree == 2

    def test_shape_mismatch_detected(self):
        with pytest.raises(ShapeMismatch) as err:
            chain.validate(ChainComplex((2, 3), (gf2.BinMatrix.zeros(1, 3),)))
        assert err.value.degree == 1


class TestHomology:
    def test_single_space(self):
        assert chain.homology_dims(ChainComplex.single(5)) == (5,)

    def test_steane_profile(self):
        assert chain.homology_dims(steane_complex()) == (0, 1, 0)

    def test_exact_two_term(self):
        x = ChainComplex((3, 3), (gf2.BinMatrix.identity(3),))
        assert chain.homology_dims(x) == (0, 0)

    def test_euler_characteristic_alternating_sum(self):
        rng = random.Random(3)
        for _ in range(50):
            x = random_complex3(rng, 5)
            h = chain.homology_dims(x)
            euler = sum((-1) ** i * d for i, d in enumerate(x.dims))
            assert sum((-1) ** i * v for i, v in enumerate(h)) == euler


class TestTensor:
    def test_unit_is_identity(self):
        x = steane_complex()
        assert chain.tensor(x, chain.unit_complex()) == x
        assert chain.tensor(chain.unit_complex(), x) == x

    def test_dims_convolve(self):
        x = steane_complex()
        product = chain.tensor(x, x)
        assert product.dims == (9, 42, 67, 42, 9)
        assert product.dims == chain.tensor_dims(x.dims, x.dims)

    def test_product_valid_and_kunneth(self):
        rng = random.Random(4)
        for _ in range(60):
            x = random_complex3(rng, 5)
            y = random_complex3(rng, 5)
            product = chain.tensor(x, y)
            chain.validate(product)
            assert chain.homology_dims(product) == convolve(
                chain.homology_dims(x), chain.homology_dims(y)
            )

    def test_euler_multiplies(self):
        rng = random.Random(5)
        for _ in range(20):
            x = random_complex3(rng, 4)
            y = random_complex3(rng, 4)
            assert chain.euler_characteristic(chain.tensor(x, y)) == (
                chain.euler_characteristic(x) * chain.euler_characteristic(y)
            )

    def test_associativity_up_to_permutation(self):
        rng = random.Random(6)
        for _ in range(40):
            x, y, z = (random_complex3(rng, 3) for _ in range(3))
            lhs = chain.tensor(chain.tensor(x, y), z)
            rhs = chain.tensor(x, chain.tensor(y, z))
            assert lhs.dims == rhs.dims
            assert chain.homology_dims(lhs) == chain.homology_dims(rhs)
            perms = chain.associativity_permutation(x.dims, y.dims, z.dims)
            for i in range(1, len(lhs.dims)):
                moved = gf2.permute_cols(
                    gf2.permute_rows(lhs.boundary(i), perms[i - 1]), perms[i]
                )
                assert moved == rhs.boundary(i)


class TestTruncate:
    def test_full_range_identity(self):
        x = steane_complex()
        assert chain.truncate(x, 0, 2) == x

    def test_steane_square_window(self):
        t = chain.truncate(chain.tensor(steane_complex(), steane_complex()), 1, 3)
        assert t.dims == (42, 67, 42)

    def test_middle_homology_preserved(self):
        square = chain.tensor(steane_complex(), steane_complex())
        t = chain.truncate(square, 1, 3)
        assert chain.homology_dims(square)[2] == 1
        assert chain.homology_dims(t)[1] == 1

    def test_range_error(self):
        with pytest.raises(ValueError):
            chain.truncate(steane_complex(), 1, 3)


class TestReduce:
    def test_exact_complex_collapses(self):
        x = ChainComplex((4, 4), (gf2.BinMatrix.identity(4),))
        r = chain.reduce(x)
        assert r.dims == (0, 0)

    def test_no_boundary_fixed_point(self):
        x = ChainComplex.single(5)
        assert chain.reduce(x) == x
        z = ChainComplex((2, 3), (gf2.BinMatrix.zeros(2, 3),))
        assert chain.reduce(z) == z

    def test_homology_preserved_and_dims_shrink(self):
        rng = random.Random(7)
        for _ in range(80):
            x = random_complex3(rng, 6)
            r = chain.reduce(x)
            chain.validate(r)
            assert chain.homology_dims(r) == chain.homology_dims(x)
            assert all(a <= b for a, b in zip(r.dims, x.dims))

    def test_idempotent(self):
        rng = random.Random(8)
        for _ in range(30):
            r = chain.reduce(random_complex3(rng, 6))
            assert chain.reduce(r).dims == r.dims

    def test_euler_preserved(self):
        rng = random.Random(9)
        for _ in range(30):
            x = random_complex3(rng, 6)
            assert chain.euler_characteristic(chain.reduce(x)) == chain.euler_characteristic(x)

    def test_steane_square_reduction(self):
        t = chain.truncate(chain.tensor(steane_complex(), steane_complex()), 1, 3)
        r = chain.reduce(t)
        assert chain.homology_dims(r) == chain.homology_dims(t) == (9, 1, 9)
        # fully reduced: all maps zero, dims equal the homology profile
        assert r.dims == (9, 1, 9)
        assert all(r.boundary(i).is_zero() for i in range(1, 3))

    def test_deterministic(self):
        rng = random.Random(10)
        x = random_complex3(rng, 6)
        assert chain.reduce(x) == chain.reduce(x)

    def test_five_term_complexes(self):
        rng = random.Random(12)
        for _ in range(10):
            product = chain.tensor(random_complex3(rng, 4), random_complex3(rng, 4))
            r = chain.reduce(product)
            chain.validate(r)
            assert chain.homology_dims(r) == chain.homology_dims(product)
            assert all(r.boundary(i).is_zero() for i in range(1, len(r.dims)))


class TestTextFormat:
    def test_round_trip(self):
        rng = random.Random(11)
        for _ in range(20):
            x = random_complex3(rng, 5)
            assert chain.from_text(chain.to_text(x)) == x

    def test_steane_round_trip(self):
        x = steane_complex()
        text = chain.to_text(x)
        assert text.startswith("degrees 3\ndims 3 7 3\n")
        assert chain.from_text(text) == x
