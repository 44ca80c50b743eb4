"""Whitney bidiagonal factorization of invertible totally nonnegative matrices.

An ITN matrix is written as a product of elementary bidiagonal factors
``L_k(w) = I + w E_{k+1,k}`` and ``U_k(w) = I + w E_{k,k+1}`` around a
positive diagonal ``D``::

    A = G_1 G_2 ... G_{n-1}  D  H_{n-1} ... H_2 H_1

    G_j = L_{n-1}(w[j,n-1]) L_{n-2}(w[j,n-2]) ... L_j(w[j,j])
    H_j = U_j(w'[j,j+1]) U_{j+1}(w'[j,j+2]) ... U_{n-1}(w'[j,n])

so the upper block is the transpose of the lower block with ``w'[j,k+1]``
in place of ``w[j,k]``.  Parameters are recovered by Neville elimination
(adjacent-row subtraction), run on ``L`` and on ``U^T`` of the Gaussian
decomposition ``A = L D U``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence, Union

from gmpy2 import mpq

from .exact import RatMatrix, as_rat


class NotITNError(ValueError):
    """Elimination hit a negative multiplier or a nonpositive pivot."""


@dataclass(frozen=True)
class ElementaryBidiagonal:
    n: int
    kind: str  # "lower" -> I + w E_{k+1,k};  "upper" -> I + w E_{k,k+1}
    k: int
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in ("lower", "upper"):
            raise ValueError(f"kind must be 'lower' or 'upper', not {self.kind!r}")
        if not 1 <= self.k <= self.n - 1:
            raise ValueError(f"site k={self.k} outside [1, {self.n - 1}]")
        object.__setattr__(self, "weight", as_rat(self.weight))
        if self.weight < 0:
            raise ValueError("elementary bidiagonal weights are nonnegative")

    @property
    def position(self) -> tuple[int, int]:
        """1-based position of the off-diagonal entry."""
        return (self.k + 1, self.k) if self.kind == "lower" else (self.k, self.k + 1)

    def matrix(self) -> RatMatrix:
        return RatMatrix.unit(self.n, *self.position, self.weight)


@dataclass(frozen=True)
class DiagonalFactor:
    d: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(as_rat(x) for x in self.d))
        if any(x <= 0 for x in self.d):
            raise ValueError("diagonal factors must be positive")

    @property
    def n(self) -> int:
        return len(self.d)

    def matrix(self) -> RatMatrix:
        return RatMatrix.diag(self.d)


GeneratorItem = Union[ElementaryBidiagonal, DiagonalFactor]


def lower_keys(n: int) -> list[tuple[int, int]]:
    return [(j, k) for j in range(1, n) for k in range(j, n)]


def upper_keys(n: int) -> list[tuple[int, int]]:
    return [(j, k + 1) for j in range(1, n) for k in range(j, n)]


@dataclass(frozen=True)
class BidiagonalFactorization:
    n: int
    w: dict = field(default_factory=dict)        # (j, k) -> weight of L_k in G_j
    w_prime: dict = field(default_factory=dict)  # (j, k+1) -> weight of U_k in H_j
    d: tuple = ()

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise ValueError("dimension must be >= 1")
        w = {tuple(key): as_rat(v) for key, v in self.w.items()}
        wp = {tuple(key): as_rat(v) for key, v in self.w_prime.items()}
        for name, got, keys in (("w", w, lower_keys(n)), ("w_prime", wp, upper_keys(n))):
            extra = set(got) - set(keys)
            if extra:
                raise ValueError(f"{name} has out-of-range keys {sorted(extra)}")
            if any(v < 0 for v in got.values()):
                raise ValueError(f"{name} parameters must be nonnegative")
        d = tuple(as_rat(x) for x in self.d)
        if len(d) != n:
            raise ValueError(f"need {n} diagonal entries, got {len(d)}")
        if any(x <= 0 for x in d):
            raise ValueError("diagonal entries must be positive")
        # missing keys mean zero weight
        object.__setattr__(self, "w", {key: w.get(key, Fraction(0)) for key in lower_keys(n)})
        object.__setattr__(self, "w_prime", {key: wp.get(key, Fraction(0)) for key in upper_keys(n)})
        object.__setattr__(self, "d", d)

    def parameters(self) -> list[Fraction]:
        return list(self.w.values()) + list(self.w_prime.values()) + list(self.d)

    def all_positive(self) -> bool:
        return all(x > 0 for x in self.parameters())

    def lower_word(self) -> list[ElementaryBidiagonal]:
        n = self.n
        return [
            ElementaryBidiagonal(n, "lower", k, self.w[j, k])
            for j in range(1, n)
            for k in range(n - 1, j - 1, -1)
        ]

    def upper_word(self) -> list[ElementaryBidiagonal]:
        n = self.n
        return [
            ElementaryBidiagonal(n, "upper", k, self.w_prime[j, k + 1])
            for j in range(n - 1, 0, -1)
            for k in range(j, n)
        ]

    def word(self) -> list[GeneratorItem]:
        return [*self.lower_word(), DiagonalFactor(self.d), *self.upper_word()]


def word_to_matrix(word: Sequence[GeneratorItem], n: int | None = None) -> RatMatrix:
    """Ordered product of the word's factors, applied as column operations."""
    if n is None:
        if not word:
            raise ValueError("dimension needed for an empty word")
        n = word[0].n
    M = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for item in word:
        if item.n != n:
            raise ValueError(f"factor of size {item.n} in a word of size {n}")
        if isinstance(item, DiagonalFactor):
            for row in M:
                for j, dj in enumerate(item.d):
                    row[j] *= dj
            continue
        w = item.weight
        if not w:
            continue
        k = item.k - 1
        if item.kind == "lower":   # right-multiplying by I + w E_{k+1,k}: col k += w col k+1
            for row in M:
                row[k] += w * row[k + 1]
        else:                      # right-multiplying by I + w E_{k,k+1}: col k+1 += w col k
            for row in M:
                row[k + 1] += w * row[k]
    return RatMatrix.from_rows(M)


def synthesize(f: BidiagonalFactorization) -> RatMatrix:
    return word_to_matrix(f.word(), f.n)


# The elimination kernels run on gmpy2.mpq; results are converted back to
# Fraction at the boundary.

def _to_mpq(x: Fraction) -> mpq:
    return mpq(x.numerator, x.denominator)


def _to_frac(x: mpq) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _gauss_ldu(A: RatMatrix):
    n = A.rows
    M = [[_to_mpq(x) for x in A.row(i)] for i in range(n)]
    L = [[mpq(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = M[c][c]
        if piv <= 0:
            raise NotITNError(f"pivot {_to_frac(piv)} at position {c + 1} is not positive")
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] / piv
                L[r][c] = f
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    d = [M[i][i] for i in range(n)]
    U = [[M[i][j] / d[i] for j in range(n)] for i in range(n)]
    return L, d, U


def _neville_unit_lower(L: list[list[mpq]]) -> dict[tuple[int, int], Fraction]:
    """Peel G_1, G_2, ... off a unit lower triangular matrix."""
    n = len(L)
    M = [list(r) for r in L]
    w = {}
    for j in range(1, n):
        c = j - 1
        for k in range(n - 1, j - 1, -1):
            num, den = M[k][c], M[k - 1][c]
            if den == 0:
                if num != 0:
                    raise NotITNError(f"zero above nonzero entry in column {j} (row {k})")
                wt = mpq(0)
            else:
                wt = num / den
                if wt < 0:
                    raise NotITNError(f"negative multiplier {_to_frac(wt)} at step ({j},{k})")
                if wt:
                    M[k] = [x - wt * y for x, y in zip(M[k], M[k - 1])]
            w[j, k] = _to_frac(wt)
    return w


def factorize(A: RatMatrix) -> BidiagonalFactorization:
    if not A.is_square:
        raise ValueError("factorize needs a square matrix")
    n = A.rows
    L, d, U = _gauss_ldu(A)
    w = _neville_unit_lower(L)
    Ut = [[U[j][i] for j in range(n)] for i in range(n)]
    wt = _neville_unit_lower(Ut)
    w_prime = {(j, k + 1): v for (j, k), v in wt.items()}
    return BidiagonalFactorization(n, w, w_prime, tuple(_to_frac(x) for x in d))


def ldu(A: RatMatrix) -> tuple[RatMatrix, RatMatrix, RatMatrix]:
    f = factorize(A)
    return (
        word_to_matrix(f.lower_word(), f.n),
        RatMatrix.diag(f.d),
        word_to_matrix(f.upper_word(), f.n),
    )


def _rng(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    if isinstance(seed, tuple):
        seed = ":".join(map(str, seed))
    return random.Random(seed)


def _param(rng: random.Random, positive: bool) -> Fraction:
    if not positive and rng.random() < 0.25:
        return Fraction(0)
    return Fraction(rng.randint(1, 8), rng.randint(1, 8))


def random_factorization(n: int, seed=None, strict_tp: bool = False) -> BidiagonalFactorization:
    """Seeded random parameters: numerators in [1, 8], denominators in [1, 8];
    off-diagonal weights are zero with probability 1/4 unless ``strict_tp``."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    rng = _rng(seed)
    w = {key: _param(rng, strict_tp) for key in lower_keys(n)}
    wp = {key: _param(rng, strict_tp) for key in upper_keys(n)}
    d = tuple(_param(rng, True) for _ in range(n))
    return BidiagonalFactorization(n, w, wp, d)


def random_itn(n: int, seed=None, strict_tp: bool = False) -> RatMatrix:
    return synthesize(random_factorization(n, seed, strict_tp))


def iter_random_itn(n: int, seed, count: int, strict_tp: bool = False) -> Iterator[RatMatrix]:
    rng = _rng(seed)
    for _ in range(count):
        yield random_itn(n, rng, strict_tp)
