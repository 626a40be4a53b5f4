"""Generators for the code families handled by this package.

Every constructor funnels through the validated CSS constructor, so any
pairing that violates ``h_x . h_z^T = 0`` fails loudly with a witness
row pair instead of producing a non-code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import chain, css, gf2
from .chain import ChainComplex
from .css import CssCode
from .gf2 import BinMatrix


class FamilyParseError(ValueError):
    """A family spec string could not be parsed."""


class NotADivisor(ValueError):
    """The given polynomial does not divide x^n - 1 over GF(2)."""


# -- Hamming / Steane -----------------------------------------------------


def hamming_parity_check(m: int) -> BinMatrix:
    """m x (2^m - 1) parity check whose columns are the nonzero m-bit words.

    Column j holds the binary representation of j + 1, so row b is set
    exactly where bit b of the column index (1-based) is set.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if m > 24:
        raise ValueError("m too large for dense construction")
    n = (1 << m) - 1
    rows = []
    for b in range(m):
        bits = 0
        for j in range(n):
            if ((j + 1) >> b) & 1:
                bits |= 1 << j
        rows.append(bits)
    return BinMatrix(m, n, tuple(rows))


def hamming_css(m: int) -> CssCode:
    """Self-dual-check CSS code from a Hamming parity check (needs m >= 3)."""
    h = hamming_parity_check(m)
    return css.from_matrices(h, h)


def steane() -> CssCode:
    """The [[7, 1, 3]] code: both checks equal to the m = 3 Hamming matrix."""
    return hamming_css(3)


# -- classical codes as complexes ------------------------------------------


def classical_as_complex(h: BinMatrix, orientation: str = "ker") -> ChainComplex:
    """A parity check as a 2-term complex.

    ``ker`` puts the code space at degree 1 (F^n -> F^r with map h);
    ``im`` uses the transposed grading (F^r -> F^n with map h^T).
    """
    if orientation == "ker":
        return ChainComplex((h.rows, h.cols), (h,))
    if orientation == "im":
        return ChainComplex((h.cols, h.rows), (gf2.transpose(h),))
    raise ValueError(f"orientation must be 'ker' or 'im', got {orientation!r}")


def tillich_zemor(h1: BinMatrix, h2: BinMatrix) -> CssCode:
    """Hypergraph product of two classical codes as a tensor of 2-term complexes.

    For full-rank r x n checks paired with themselves this gives
    n^2 + r^2 qubits and (n - r)^2 logical qubits.
    """
    x = classical_as_complex(h1, "ker")
    y = classical_as_complex(h2, "im")
    return css.from_complex(chain.tensor(x, y))


# -- Reed-Muller ------------------------------------------------------------


def reed_muller_generator(r: int, m: int) -> BinMatrix:
    """Generator matrix of RM(r, m): evaluations of monomials of degree <= r.

    Monomials are ordered by degree, then lexicographically by their
    variable index tuple; column p assigns bit i of p to variable i.
    """
    if not 0 <= r <= m:
        raise ValueError(f"need 0 <= r <= m, got r={r}, m={m}")
    n = 1 << m
    monomials: list[tuple[int, ...]] = []
    for deg in range(r + 1):
        monomials.extend(_subsets_of_size(m, deg))
    rows = []
    for mono in monomials:
        bits = 0
        for p in range(n):
            if all((p >> i) & 1 for i in mono):
                bits |= 1 << p
        rows.append(bits)
    return BinMatrix(len(rows), n, tuple(rows))


def _subsets_of_size(m: int, size: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def rec(start: int, chosen: tuple[int, ...]) -> None:
        if len(chosen) == size:
            out.append(chosen)
            return
        for i in range(start, m):
            rec(i + 1, chosen + (i,))

    rec(0, ())
    return out


def quantum_reed_muller(m: int, r1: int, r2: int) -> CssCode:
    """CSS code with h_x = RM(r1, m) and h_z = RM(r2, m) generators.

    Needs r1 + r2 <= m - 1 so the rows are orthogonal (every monomial of
    degree < m sums to zero over all points); violating the precondition
    trips the orthogonality validator.  k = 2^m - sum_{i<=r1} C(m, i)
    - sum_{i<=r2} C(m, i).
    """
    return css.from_matrices(reed_muller_generator(r1, m), reed_muller_generator(r2, m))


def quantum_reed_muller_k(m: int, r1: int, r2: int) -> int:
    return (1 << m) - sum(math.comb(m, i) for i in range(r1 + 1)) - sum(
        math.comb(m, i) for i in range(r2 + 1)
    )


# -- cyclic codes ------------------------------------------------------------
#
# Polynomials over GF(2) pack their coefficients into an int, lowest
# degree first (bit i = coefficient of x^i).


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mod(a: int, b: int) -> int:
    if b == 0:
        raise ZeroDivisionError("polynomial modulus is zero")
    db = poly_degree(b)
    while a and poly_degree(a) >= db:
        a ^= b << (poly_degree(a) - db)
    return a


def poly_divides(g: int, f: int) -> bool:
    return poly_mod(f, g) == 0


def poly_quotient(f: int, g: int) -> int:
    q = 0
    dg = poly_degree(g)
    while f and poly_degree(f) >= dg:
        shift = poly_degree(f) - dg
        q |= 1 << shift
        f ^= g << shift
    if f:
        raise NotADivisor("polynomial division left a remainder")
    return q


def poly_reverse(p: int, degree: int) -> int:
    out = 0
    for i in range(degree + 1):
        if (p >> i) & 1:
            out |= 1 << (degree - i)
    return out


def circulant(first_row: int, n: int) -> BinMatrix:
    """All n cyclic shifts of a length-n coefficient row."""
    mask = (1 << n) - 1
    rows = []
    row = first_row & mask
    for _ in range(n):
        rows.append(row)
        row = ((row << 1) | (row >> (n - 1))) & mask
    return BinMatrix(n, n, tuple(rows))


def cyclic_parity_circulant(n: int, g: int) -> BinMatrix:
    """Parity-check circulant of the cyclic code generated by g.

    Rows are the n shifts of the reciprocal of h = (x^n - 1) / g; the row
    space is the dual code, so the rank equals deg(g).  All n shifts are
    kept to preserve cyclic symmetry and constant row weight.
    """
    if n % 2 == 0:
        raise ValueError("n must be odd")
    modulus = (1 << n) | 1
    if g == 0 or not poly_divides(g, modulus):
        raise NotADivisor(f"g (bits {g:b}) does not divide x^{n} - 1")
    h = poly_quotient(modulus, g)
    first_row = poly_mod(poly_reverse(h, poly_degree(h)), modulus)
    return circulant(first_row, n)


def cyclic_css(n: int, g1: int, g2: int) -> CssCode:
    """CSS code from two cyclic codes via their parity circulants.

    Both generators must divide x^n - 1 (checked by polynomial division);
    the CSS condition, equivalently dual containment of the two cyclic
    codes, is validated numerically and reported with a witness row pair
    on failure.
    """
    h_x = cyclic_parity_circulant(n, g1)
    h_z = cyclic_parity_circulant(n, g2)
    return css.from_matrices(h_x, h_z)


# -- finite geometries --------------------------------------------------------


_PRIMITIVE_POLYS = {
    # coefficients low degree first over the prime subfield, as digit ints
    4: (2, [1, 1, 1]),  # x^2 + x + 1 over GF(2)
    8: (2, [1, 1, 0, 1]),  # x^3 + x + 1
    9: (3, [2, 2, 1]),  # x^2 + 2x + 2 over GF(3)
    16: (2, [1, 1, 0, 0, 1]),  # x^4 + x + 1
}

SUPPORTED_GEOMETRY_ORDERS = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)


class _GF:
    """Arithmetic in GF(q), q <= 16, with a fixed primitive polynomial per q.

    Elements are integers 0..q-1 read as base-p digit vectors over the
    prime subfield, which fixes a canonical element order shared by every
    run.
    """

    def __init__(self, q: int):
        if q not in SUPPORTED_GEOMETRY_ORDERS:
            raise ValueError(f"unsupported field order {q}")
        self.q = q
        self.p = _smallest_prime_factor(q)
        if q == self.p:
            self.add_table = None
            return
        p, poly = _PRIMITIVE_POLYS[q]
        assert p == self.p
        e = len(poly) - 1
        self._e = e
        self._poly = poly
        self._mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(q):
                self._mul[a][b] = self._poly_mul(a, b)

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self._e):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds: list[int]) -> int:
        out = 0
        for d in reversed(ds):
            out = out * self.p + d
        return out

    def _poly_mul(self, a: int, b: int) -> int:
        p = self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self._e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # reduce by the primitive polynomial (monic of degree e)
        for i in range(len(prod) - 1, self._e - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(self._e):
                    prod[i - self._e + j] = (prod[i - self._e + j] - c * self._poly[j]) % p
        return self._undigits(prod[: self._e])

    def add(self, a: int, b: int) -> int:
        if self.q == self.p:
            return (a + b) % self.p
        da, db = self._digits(a), self._digits(b)
        return self._undigits([(x + y) % self.p for x, y in zip(da, db)])

    def mul(self, a: int, b: int) -> int:
        if self.q == self.p:
            return (a * b) % self.p
        return self._mul[a][b]


def _smallest_prime_factor(q: int) -> int:
    for p in (2, 3, 5, 7, 11, 13):
        if q % p == 0:
            return p
    raise ValueError(f"unsupported order {q}")


def _pg_points(gf: _GF) -> list[tuple[int, int, int]]:
    """Normalized homogeneous triples, first nonzero coordinate = 1."""
    q = gf.q
    pts = [(1, a, b) for a in range(q) for b in range(q)]
    pts += [(0, 1, b) for b in range(q)]
    pts.append((0, 0, 1))
    return pts


def finite_geometry_incidence(kind: str, q: int) -> BinMatrix:
    """Line-by-point incidence matrix of PG(2, q) or EG(2, q).

    PG lines reuse the canonical point order by duality; EG points are
    affine pairs (a, b) ordered by a * q + b, with the q^2 sloped lines
    first and the q vertical lines last.  Determinism comes from the
    fixed primitive polynomial per field order.
    """
    gf = _GF(q)
    if kind == "pg":
        pts = _pg_points(gf)
        rows = []
        for (u, v, w) in pts:
            bits = 0
            for jPt, (x, y, z) in enumerate(pts):
                s = gf.add(gf.add(gf.mul(u, x), gf.mul(v, y)), gf.mul(w, z))
                if s == 0:
                    bits |= 1 << jPt
            rows.append(bits)
        return BinMatrix(len(pts), len(pts), tuple(rows))
    if kind == "eg":
        n_pts = q * q

        def pt(a: int, b: int) -> int:
            return a * q + b

        rows = []
        for m in range(q):
            for c in range(q):
                bits = 0
                for a in range(q):
                    b = gf.add(gf.mul(m, a), c)
                    bits |= 1 << pt(a, b)
                rows.append(bits)
        for c in range(q):
            bits = 0
            for b in range(q):
                bits |= 1 << pt(c, b)
            rows.append(bits)
        return BinMatrix(q * q + q, n_pts, tuple(rows))
    raise ValueError(f"kind must be 'pg' or 'eg', got {kind!r}")


def _complement(m: BinMatrix) -> BinMatrix:
    mask = (1 << m.cols) - 1
    return BinMatrix(m.rows, m.cols, tuple(r ^ mask for r in m.data))


_GEOMETRY_VARIANTS = ("incidence", "transpose", "complement", "complement-transpose", "none")


def _geometry_matrix(incidence: BinMatrix, variant: str) -> BinMatrix:
    if variant == "incidence":
        return incidence
    if variant == "transpose":
        return gf2.transpose(incidence)
    if variant == "complement":
        return _complement(incidence)
    if variant == "complement-transpose":
        return _complement(gf2.transpose(incidence))
    if variant == "none":
        return BinMatrix.zeros(0, incidence.cols)
    raise ValueError(f"unknown variant {variant!r}; pick from {_GEOMETRY_VARIANTS}")


def finite_geometry_css(
    kind: str, q: int, pairing: tuple[str, str] = ("complement", "incidence")
) -> CssCode:
    """CSS code from a finite-geometry incidence matrix and a pairing choice.

    Each pairing entry picks the matrix used as h_x / h_z from the
    incidence matrix.  Any choice that fails the CSS condition is
    rejected with an orthogonality witness; the default pairs the
    complement of the PG(2, q) incidence with the incidence itself,
    which is orthogonal exactly for even q (two projective lines meet in
    one point, and line size q + 1 is odd).
    """
    incidence = finite_geometry_incidence(kind, q)
    h_x = _geometry_matrix(incidence, pairing[0])
    h_z = _geometry_matrix(incidence, pairing[1])
    return css.from_matrices(h_x, h_z)


# -- family spec strings -------------------------------------------------------


def _parse_kv(body: str) -> dict[str, str]:
    out = {}
    if not body:
        return out
    for part in body.split(","):
        if "=" not in part:
            raise FamilyParseError(f"expected key=value, got {part!r}")
        key, value = part.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _classical_matrix(token: str) -> BinMatrix:
    if token.startswith("hamming"):
        return hamming_parity_check(int(token[len("hamming") :]))
    if token.startswith("rep"):
        n = int(token[len("rep") :])
        if n < 2:
            raise FamilyParseError("rep needs length >= 2")
        rows = [(1 << i) | (1 << (i + 1)) for i in range(n - 1)]
        return BinMatrix(n - 1, n, tuple(rows))
    raise FamilyParseError(f"unknown classical code token {token!r}")


_FAMILY_NAMES = ("steane", "hamming", "tz", "rm", "cyclic", "fg")


@dataclass(frozen=True)
class FamilySpec:
    """A parsed family string: the family name plus its raw parameters.

    ``from_string`` performs all syntax checks (raising FamilyParseError);
    ``build`` runs the constructor, so any violated validity predicate
    surfaces as the family's own construction error.
    """

    name: str
    parameters: dict[str, str] = field(default_factory=dict)
    tokens: tuple[str, ...] = ()

    @classmethod
    def from_string(cls, spec: str) -> FamilySpec:
        head, _, body = spec.partition(":")
        head = head.strip()
        if head not in _FAMILY_NAMES:
            raise FamilyParseError(f"unknown family {head!r}")
        try:
            if head == "tz":
                tokens = tuple(t.strip() for t in body.split(","))
                if len(tokens) != 2:
                    raise FamilyParseError("tz needs two classical codes")
                return cls(head, {}, tokens)
            if head == "fg":
                parts = [t.strip() for t in body.split(",")]
                return cls(head, _parse_kv(",".join(parts[1:])), (parts[0],))
            return cls(head, _parse_kv(body))
        except FamilyParseError:
            raise
        except ValueError as exc:
            raise FamilyParseError(f"bad family spec {spec!r}: {exc}") from exc

    def build(self) -> CssCode:
        try:
            if self.name == "steane":
                return steane()
            if self.name == "hamming":
                return hamming_css(int(self.parameters["m"]))
            if self.name == "tz":
                return tillich_zemor(*[_classical_matrix(t) for t in self.tokens])
            if self.name == "rm":
                kv = self.parameters
                return quantum_reed_muller(int(kv["m"]), int(kv["r1"]), int(kv["r2"]))
            if self.name == "cyclic":
                kv = self.parameters
                g1 = int(kv["g1"][::-1], 2)
                g2 = int(kv["g2"][::-1], 2)
                return cyclic_css(int(kv["n"]), g1, g2)
            if self.name == "fg":
                kv = self.parameters
                pairing = (kv.get("hx", "complement"), kv.get("hz", "incidence"))
                return finite_geometry_css(self.tokens[0], int(kv["q"]), pairing)
        except (KeyError, IndexError) as exc:
            raise FamilyParseError(f"family {self.name!r} is missing {exc}") from exc
        except ValueError as exc:
            if isinstance(exc, (css.OrthogonalityViolation, NotADivisor)):
                raise
            raise FamilyParseError(f"bad parameters for {self.name!r}: {exc}") from exc
        raise FamilyParseError(f"unknown family {self.name!r}")


def parse_family_spec(spec: str) -> tuple[str, CssCode]:
    """Parse and build a family string; returns (spec string, code).

    Formats: ``steane``, ``hamming:m=4``, ``tz:hamming3,hamming3``,
    ``rm:m=4,r1=1,r2=1``, ``cyclic:n=7,g1=1011,g2=1011`` (coefficient
    bits, lowest degree first), ``fg:pg,q=2[,hx=...,hz=...]``.
    """
    return spec, FamilySpec.from_string(spec).build()
