"""Exact rational matrices, minors and determinants.

Entries are :class:`fractions.Fraction` values, which already keep the
numerator/denominator pair reduced with a positive denominator.  Matrices are
immutable; every operation returns a new :class:`RatMatrix`.

Row/column positions on :class:`RatMatrix` are 0-based like any Python
sequence.  :class:`MinorIndex` uses 1-based index sets, matching the usual
``A[alpha|beta]`` notation with ``[n] = {1, ..., n}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Iterable, Iterator, Sequence

MAX_MINOR_DIM = 12


def as_rat(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: they would silently smuggle rounding error into an
    exact computation.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def rat_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    # -- construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> RatMatrix:
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(as_rat(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> RatMatrix:
        cols = rows if cols is None else cols
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls.diag([1] * n)

    @classmethod
    def diag(cls, values: Sequence) -> RatMatrix:
        n = len(values)
        vals = [as_rat(v) for v in values]
        ent = [Fraction(0)] * (n * n)
        for i, v in enumerate(vals):
            ent[i * n + i] = v
        return cls(n, n, tuple(ent))

    @classmethod
    def unit(cls, n: int, i: int, j: int, weight=1) -> RatMatrix:
        """``I + weight * E_ij`` with 1-based ``i, j`` (``i != j``)."""
        if i == j:
            raise ValueError("unit() is for off-diagonal positions")
        ent = list(cls.identity(n).entries)
        ent[(i - 1) * n + (j - 1)] = as_rat(weight)
        return cls(n, n, tuple(ent))

    @classmethod
    def antidiag(cls, values: Sequence) -> RatMatrix:
        """Matrix with ``values[i]`` at 0-based position ``(i, n-1-i)``."""
        n = len(values)
        ent = [Fraction(0)] * (n * n)
        for i, v in enumerate(values):
            ent[i * n + (n - 1 - i)] = as_rat(v)
        return cls(n, n, tuple(ent))

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"position {ij} outside {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def diagonal(self) -> tuple[Fraction, ...]:
        return tuple(self[i, i] for i in range(min(self.rows, self.cols)))

    def is_diagonal(self) -> bool:
        return all(
            x == 0
            for k, x in enumerate(self.entries)
            if k // self.cols != k % self.cols
        )

    def is_lower_triangular(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(i + 1, self.cols))

    def is_upper_triangular(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(min(i, self.cols)))

    def first_nonzero(self) -> Fraction | None:
        return next((x for x in self.entries if x != 0), None)

    # -- arithmetic ---------------------------------------------------------

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        # integer dot products; row scales of self, column scales of other
        left, lsc = integer_rows(self)
        right_t, rsc = integer_rows(other.T)
        out = []
        for r, ls in zip(left, lsc):
            for c, rs in zip(right_t, rsc):
                out.append(Fraction(sum(a * b for a, b in zip(r, c)), ls * rs))
        return RatMatrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: RatMatrix) -> RatMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> RatMatrix:
        return RatMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> RatMatrix:
        c = as_rat(c)
        return RatMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    @property
    def T(self) -> RatMatrix:
        return RatMatrix(
            self.cols, self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> RatMatrix:
        """0-based row/column selection."""
        return RatMatrix(len(rows), len(cols), tuple(self[i, j] for i in rows for j in cols))

    def max_abs_diff(self, other: RatMatrix) -> Fraction:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return max((abs(a - b) for a, b in zip(self.entries, other.entries)), default=Fraction(0))

    def det(self) -> Fraction:
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det(self.to_rows())

    def inverse(self) -> RatMatrix:
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = [r + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.to_rows())]
        for c in range(n):
            p = next((r for r in range(c, n) if aug[r][c] != 0), None)
            if p is None:
                raise ZeroDivisionError("matrix is singular")
            aug[c], aug[p] = aug[p], aug[c]
            piv = aug[c][c]
            aug[c] = [x / piv for x in aug[c]]
            for r in range(n):
                if r != c and aug[r][c] != 0:
                    f = aug[r][c]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
        return RatMatrix.from_rows([r[n:] for r in aug])

    def __str__(self) -> str:
        cells = [[rat_str(x) for x in self.row(i)] for i in range(self.rows)]
        w = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)


def direct_sum(*blocks: RatMatrix) -> RatMatrix:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    out = [[Fraction(0)] * m for _ in range(n)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[r0 + i][c0 + j] = b[i, j]
        r0 += b.rows
        c0 += b.cols
    return RatMatrix.from_rows(out)


def matprod(factors: Iterable[RatMatrix], n: int) -> RatMatrix:
    out = RatMatrix.identity(n)
    for f in factors:
        out = out @ f
    return out


def bareiss_det(rows: list[list[Fraction]]) -> Fraction:
    """Fraction-free elimination.

    Denominators are cleared first so all intermediate values stay integers;
    each step divides exactly by the previous pivot.
    """
    n = len(rows)
    if n == 0:
        return Fraction(1)
    den = 1
    for r in rows:
        for x in r:
            den = den * x.denominator // _gcd(den, x.denominator)
    m = [[x.numerator * (den // x.denominator) for x in r] for r in rows]
    return Fraction(int_det(m), den ** n)


def int_det(rows: list[list[int]]) -> int:
    """Bareiss elimination on an integer matrix (the input is not modified)."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pk - mik * row_k[j]) // prev
        prev = pk
    return sign * m[n - 1][n - 1]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class MinorIndex:
    """Row set ``alpha`` and column set ``beta``, both 1-based."""

    alpha: tuple[int, ...]
    beta: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(self.alpha))
        object.__setattr__(self, "beta", tuple(self.beta))
        if len(self.alpha) != len(self.beta):
            raise ValueError("minor must select as many rows as columns")
        if not self.alpha:
            raise ValueError("empty minor")
        for s in (self.alpha, self.beta):
            if any(a >= b for a, b in zip(s, s[1:])):
                raise ValueError(f"index set {s} is not strictly increasing")
            if s[0] < 1:
                raise ValueError("index sets are 1-based")

    @property
    def size(self) -> int:
        return len(self.alpha)

    def check_bounds(self, rows: int, cols: int) -> None:
        if self.alpha[-1] > rows or self.beta[-1] > cols:
            raise IndexError(f"{self} outside a {rows}x{cols} matrix")

    def __str__(self) -> str:
        return f"({set(self.alpha)}|{set(self.beta)})"


def minor(A: RatMatrix, idx: MinorIndex) -> Fraction:
    idx.check_bounds(A.rows, A.cols)
    sub = A.submatrix([a - 1 for a in idx.alpha], [b - 1 for b in idx.beta])
    return sub.det()


def minor_indices(n: int, m: int | None = None) -> Iterator[MinorIndex]:
    """All square minors of an n x m matrix, by size, then alpha, then beta."""
    m = n if m is None else m
    for k in range(1, min(n, m) + 1):
        for alpha in combinations(range(1, n + 1), k):
            for beta in combinations(range(1, m + 1), k):
                yield MinorIndex(alpha, beta)


def integer_rows(A: RatMatrix) -> tuple[list[list[int]], list[int]]:
    """Rows of ``diag(scales) @ A`` as integers, with positive ``scales``.

    Minor signs are unchanged by positive row scaling, and a minor over row
    set alpha is recovered by dividing by the product of those scales.
    """
    out, scales = [], []
    for i in range(A.rows):
        r = A.row(i)
        den = 1
        for x in r:
            den = den * x.denominator // _gcd(den, x.denominator)
        scales.append(den)
        out.append([x.numerator * (den // x.denominator) for x in r])
    return out, scales


def _all_minors_int(M: list[list[int]], ncols: int) -> dict:
    n = len(M)
    out: dict = {}
    for i in range(n):
        for j in range(ncols):
            out[(i + 1,), (j + 1,)] = M[i][j]
    for k in range(2, min(n, ncols) + 1):
        col_sets = list(combinations(range(1, ncols + 1), k))
        for alpha in combinations(range(1, n + 1), k):
            top = M[alpha[0] - 1]
            rest = alpha[1:]
            for beta in col_sets:
                total = 0
                for t, b in enumerate(beta):
                    a = top[b - 1]
                    if a:
                        sub = out[rest, beta[:t] + beta[t + 1:]]
                        if sub:
                            total += a * sub if t % 2 == 0 else -a * sub
                out[alpha, beta] = total
    return out


def all_minors_scaled(A: RatMatrix) -> tuple[dict, list[int]]:
    """Every minor of the integer-scaled copy of ``A`` (see :func:`integer_rows`)."""
    if min(A.rows, A.cols) > MAX_MINOR_DIM:
        raise ValueError(f"minor enumeration capped at dimension {MAX_MINOR_DIM}")
    M, scales = integer_rows(A)
    return _all_minors_int(M, A.cols), scales


def unscale_minor(value: int, alpha: Sequence[int], scales: Sequence[int]) -> Fraction:
    den = 1
    for a in alpha:
        den *= scales[a - 1]
    return Fraction(value, den)


def all_minors(A: RatMatrix) -> dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction]:
    """Every square minor of ``A`` keyed by 1-based ``(alpha, beta)``.

    Built size by size with a Laplace expansion along the first selected row,
    so each k x k minor costs k multiplications of already-known minors.
    """
    raw, scales = all_minors_scaled(A)
    return {key: unscale_minor(v, key[0], scales) for key, v in raw.items()}


@dataclass(frozen=True)
class CauchyBinetResult:
    equal: bool
    det_product: Fraction
    expansion: Fraction


def cauchy_binet_check(A: RatMatrix, B: RatMatrix) -> CauchyBinetResult:
    """Compare ``det(AB)`` with the sum over column subsets of ``A`` and
    matching row subsets of ``B``; the two sides are computed independently."""
    m, n = A.shape
    if B.shape != (n, m):
        raise ValueError(f"shapes {A.shape} and {B.shape} are not m x n / n x m")
    if m > n:
        raise ValueError("Cauchy-Binet expansion needs m <= n")
    lhs = (A @ B).det()
    rows = tuple(range(1, m + 1))
    rhs = Fraction(0)
    for gamma in combinations(range(1, n + 1), m):
        rhs += minor(A, MinorIndex(rows, gamma)) * minor(B, MinorIndex(gamma, rows))
    return CauchyBinetResult(lhs == rhs, lhs, rhs)
