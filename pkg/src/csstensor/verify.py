"""Self-check suites behind the ``verify`` command.

Each suite runs a batch of randomized cross-checks against independent
oracles (exhaustive enumeration, convolution identities, brute-force
distances) and reports per-property counts.  Everything is seeded, so a
fixed seed reproduces the report byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import chain, css, gf2, rand, tensorops
from .gf2 import BinMatrix, BinVector


@dataclass(frozen=True)
class PropertyResult:
    name: str
    checks: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _convolve(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def gf2_properties(seed: int, instances: int) -> list[PropertyResult]:
    """Rank-nullity, transpose rank, mixed product, membership vs enumeration."""
    rng = random.Random(seed)
    failures = {"rank_nullity": 0, "rank_transpose": 0, "mixed_product": 0, "membership": 0}
    membership_checks = 0
    for _ in range(instances):
        rows = rng.randrange(0, 7)
        cols = rng.randrange(1, 7)
        m = rand.random_matrix(rng, rows, cols)
        if gf2.rank(m) + gf2.kernel_basis(m).rows != m.cols:
            failures["rank_nullity"] += 1
        if gf2.rank(m) != gf2.rank(gf2.transpose(m)):
            failures["rank_transpose"] += 1

        a = rand.random_matrix(rng, rng.randrange(1, 4), rng.randrange(1, 4))
        b = rand.random_matrix(rng, rng.randrange(1, 4), rng.randrange(1, 4))
        c = rand.random_matrix(rng, a.cols, rng.randrange(1, 4))
        d = rand.random_matrix(rng, b.cols, rng.randrange(1, 4))
        lhs = gf2.matmul(gf2.kron(a, b), gf2.kron(c, d))
        rhs = gf2.kron(gf2.matmul(a, c), gf2.matmul(b, d))
        if lhs != rhs:
            failures["mixed_product"] += 1

        member_rows = rng.randrange(0, 13)
        mm = rand.random_matrix(rng, member_rows, cols)
        v = rand.random_matrix(rng, 1, cols).data[0]
        claimed = gf2.rowspace_contains(mm, BinVector(cols, v))
        actual = v == 0
        word = 0
        for i in range(1, 1 << mm.rows):  # Gray walk over all combinations
            word ^= mm.data[(i & -i).bit_length() - 1]
            if word == v:
                actual = True
                break
        membership_checks += 1
        if claimed != actual:
            failures["membership"] += 1
    return [
        PropertyResult("gf2/rank_nullity", instances, failures["rank_nullity"]),
        PropertyResult("gf2/rank_transpose", instances, failures["rank_transpose"]),
        PropertyResult("gf2/mixed_product", instances, failures["mixed_product"]),
        PropertyResult("gf2/membership_vs_enumeration", membership_checks, failures["membership"]),
    ]


def kunneth_suite(seed: int, pairs: int, max_dim: int = 6) -> list[PropertyResult]:
    """Homology of explicit products equals the convolution of profiles."""
    rng = random.Random(seed)
    failures = 0
    valid_failures = 0
    for _ in range(pairs):
        x = rand.random_complex3(rng, max_dim)
        y = rand.random_complex3(rng, max_dim)
        product = chain.tensor(x, y)
        if not chain.is_valid(product):
            valid_failures += 1
            continue
        expected = _convolve(chain.homology_dims(x), chain.homology_dims(y))
        if chain.homology_dims(product) != expected:
            failures += 1
    return [
        PropertyResult("chain/tensor_valid", pairs, valid_failures),
        PropertyResult("chain/kunneth", pairs, failures),
    ]


def reduce_suite(seed: int, instances: int, max_dim: int = 6) -> list[PropertyResult]:
    """reduce preserves homology, shrinks dims, and is idempotent."""
    rng = random.Random(seed)
    failures = {"homology": 0, "dims": 0, "idempotent": 0}
    for _ in range(instances):
        x = rand.random_complex3(rng, max_dim)
        r = chain.reduce(x)
        if chain.homology_dims(r) != chain.homology_dims(x):
            failures["homology"] += 1
        if any(a > b for a, b in zip(r.dims, x.dims)):
            failures["dims"] += 1
        if chain.reduce(r).dims != r.dims:
            failures["idempotent"] += 1
    return [
        PropertyResult("chain/reduce_homology", instances, failures["homology"]),
        PropertyResult("chain/reduce_dims", instances, failures["dims"]),
        PropertyResult("chain/reduce_idempotent", instances, failures["idempotent"]),
    ]


def length_formula_suite(seed: int, triples: int, ell_max: int = 4) -> list[PropertyResult]:
    """Closed-form power length equals the assembled block dimension.

    The assembly path enumerates summand compositions; small instances
    additionally materialise the boundary matrices and validate them.
    """
    rng = random.Random(seed)
    failures = 0
    materialised_failures = 0
    materialised = 0
    for _ in range(triples):
        dims = (rng.randrange(0, 9), rng.randrange(1, 9), rng.randrange(0, 9))
        x = _random_complex_with_dims(rng, dims)
        for ell in range(1, ell_max + 1):
            predicted = tensorops.power_length(dims, ell)
            comps = tensorops._power_compositions(2, ell, ell)
            assembled = 0
            for c in comps:
                size = 1
                for v in c:
                    size *= dims[v]
                assembled += size
            if assembled != predicted:
                failures += 1
            if predicted <= 400:
                lo = max(0, ell - 1)
                window = tensorops.power_complex_window(x, ell, lo, min(2 * ell, ell + 1))
                materialised += 1
                if window.dim(ell - lo) != predicted or not chain.is_valid(window):
                    materialised_failures += 1
    return [
        PropertyResult("tensorops/power_length_assembly", triples * ell_max, failures),
        PropertyResult("tensorops/power_length_matrices", materialised, materialised_failures),
    ]


def _random_complex_with_dims(rng: random.Random, dims: tuple[int, int, int]):
    c0, c1, c2 = dims
    d1 = rand.random_matrix(rng, c0, c1)
    kernel = gf2.kernel_basis(d1)
    cols = []
    for _ in range(c2):
        bits = 0
        for row in kernel.data:
            if rng.random() < 0.5:
                bits ^= row
        cols.append(bits)
    d2 = gf2.transpose(BinMatrix(c2, c1, tuple(cols)))
    return chain.ChainComplex(dims, (d1, d2))


def bound_soundness_suite(seed: int, pairs: int, max_n: int = 9) -> list[PropertyResult]:
    """Exact product distances dominate the emitted lower bounds.

    Codes are generated with full-rank checks, so the middle sector is the
    only active one and the comparison bound is the plain max.
    """
    rng = random.Random(seed)
    failures = {"generic": 0, "criterion": 0, "comparison": 0, "kunneth_k": 0}
    done = 0
    while done < pairs:
        n1 = rng.randrange(4, max_n + 1)
        n2 = rng.randrange(4, max_n + 1)
        try:
            c = rand.random_css_code(rng, n1, rng.randrange(1, 3), rng.randrange(1, 3))
            d = rand.random_css_code(rng, n2, rng.randrange(1, 3), rng.randrange(1, 3))
        except RuntimeError:
            continue
        if gf2.rank(c.h_x) != c.h_x.rows or gf2.rank(c.h_z) != c.h_z.rows:
            continue
        if gf2.rank(d.h_x) != d.h_x.rows or gf2.rank(d.h_z) != d.h_z.rows:
            continue
        product = tensorops.css_tensor(c, d)
        if css.dimension_k(product) < 1:
            continue
        done += 1
        expected_k = sum(
            a * b
            for a, b in zip(
                chain.homology_dims(css.to_complex(c)),
                reversed(chain.homology_dims(css.to_complex(d))),
            )
        )
        if css.dimension_k(product) != expected_k:
            failures["kunneth_k"] += 1
        exact = {
            side: css.min_distance_exact(product, side).value for side in ("X", "Z")
        }
        generic = tensorops.generic_lower_bound(c, d)
        known = tensorops.known_comparison_bound(c, d)
        crit = tensorops.check_distance_criterion(c)
        strong = tensorops.tensor_distance_lower_bound(c, d, crit)
        if generic[0] > exact["X"] or generic[1] > exact["Z"]:
            failures["generic"] += 1
        if strong[0] > exact["X"] or strong[1] > exact["Z"]:
            failures["criterion"] += 1
        if strong[0] < known[0] or strong[1] < known[1] or generic[0] < known[0] or generic[1] < known[1]:
            failures["comparison"] += 1
    return [
        PropertyResult("tensorops/kunneth_k", pairs, failures["kunneth_k"]),
        PropertyResult("tensorops/generic_bound_sound", pairs, failures["generic"]),
        PropertyResult("tensorops/criterion_bound_sound", pairs, failures["criterion"]),
        PropertyResult("tensorops/new_bound_ge_known", pairs, failures["comparison"]),
    ]


def run_suite(scale: str, seed: int) -> list[PropertyResult]:
    """The fast or full verification battery.

    A suite that crashes outright (possible when a kernel primitive is
    broken) is reported as a single failed property instead of aborting
    the whole report.
    """
    if scale == "fast":
        plan = [
            (gf2_properties, (seed, 200)),
            (kunneth_suite, (seed + 1, 40)),
            (reduce_suite, (seed + 2, 40)),
            (length_formula_suite, (seed + 3, 10)),
            (bound_soundness_suite, (seed + 4, 10)),
        ]
    elif scale == "full":
        plan = [
            (gf2_properties, (seed, 1000)),
            (kunneth_suite, (seed + 1, 200)),
            (reduce_suite, (seed + 2, 200)),
            (length_formula_suite, (seed + 3, 50)),
            (bound_soundness_suite, (seed + 4, 50)),
        ]
    else:
        raise ValueError(f"unknown suite {scale!r}")
    results: list[PropertyResult] = []
    for fn, args in plan:
        try:
            results += fn(*args)
        except Exception:
            results.append(PropertyResult(f"{fn.__name__}/crashed", 1, 1))
    return results


def format_report(results: list[PropertyResult]) -> str:
    lines = []
    for r in results:
        status = "pass" if r.passed else "FAIL"
        lines.append(f"{status} {r.name}: {r.checks - r.failures}/{r.checks}")
    total_failures = sum(r.failures for r in results)
    lines.append(f"{'pass' if total_failures == 0 else 'FAIL'} total: {len(results)} properties")
    return "\n".join(lines) + "\n"
