"""Seeded random matrices, complexes, and codes for property suites."""

from __future__ import annotations

import random

from . import css, gf2
from .chain import ChainComplex
from .css import CssCode
from .gf2 import BinMatrix


def random_matrix(rng: random.Random, rows: int, cols: int, density: float = 0.5) -> BinMatrix:
    data = []
    for _ in range(rows):
        bits = 0
        for j in range(cols):
            if rng.random() < density:
                bits |= 1 << j
        data.append(bits)
    return BinMatrix(rows, cols, tuple(data))


def random_complex3(rng: random.Random, max_dim: int = 6) -> ChainComplex:
    """A random valid 3-term complex with dims up to max_dim.

    boundary 1 is arbitrary; boundary 2 takes its columns from the kernel
    of boundary 1, which enforces the square-zero condition.
    """
    c0 = rng.randrange(0, max_dim + 1)
    c1 = rng.randrange(1, max_dim + 1)
    c2 = rng.randrange(0, max_dim + 1)
    d1 = random_matrix(rng, c0, c1)
    kernel = gf2.kernel_basis(d1)
    cols = []
    for _ in range(c2):
        bits = 0
        for row in kernel.data:
            if rng.random() < 0.5:
                bits ^= row
        cols.append(bits)
    d2 = gf2.transpose(BinMatrix(c2, c1, tuple(cols)))
    return ChainComplex((c0, c1, c2), (d1, d2))


def random_css_code(
    rng: random.Random,
    n: int,
    r_x: int,
    r_z: int,
    min_k: int = 1,
    attempts: int = 200,
) -> CssCode:
    """A random CSS code with the requested shape and k >= min_k.

    h_z rows are random combinations of the kernel of h_x, so the CSS
    condition holds by construction.
    """
    for _ in range(attempts):
        h_x = random_matrix(rng, r_x, n)
        kernel = gf2.kernel_basis(h_x)
        rows = []
        for _ in range(r_z):
            bits = 0
            for krow in kernel.data:
                if rng.random() < 0.5:
                    bits ^= krow
            rows.append(bits)
        h_z = BinMatrix(r_z, n, tuple(rows))
        code = css.from_matrices(h_x, h_z)
        if css.dimension_k(code) >= min_k:
            return code
    raise RuntimeError(f"no code with k >= {min_k} found in {attempts} attempts")
