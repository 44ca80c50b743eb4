"""Centralizers and distinguished submonoids of ITN(n).

``C(A)`` here always means the ITN matrices commuting with ``A``.  Membership
is decided by exact commutation plus an ITN certificate; nothing is solved
symbolically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .classify import classify_full, is_itn
from .exact import RatMatrix, as_rat, direct_sum


@dataclass(frozen=True)
class CentralizerShape:
    composition: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "composition", tuple(int(x) for x in self.composition))
        if not self.composition or any(x < 1 for x in self.composition):
            raise ValueError("composition parts must be positive")

    @property
    def n(self) -> int:
        return sum(self.composition)

    def blocks(self) -> list[range]:
        """0-based index ranges of the diagonal blocks."""
        out, start = [], 0
        for size in self.composition:
            out.append(range(start, start + size))
            start += size
        return out


def _positive_diagonal(D: RatMatrix) -> tuple[Fraction, ...]:
    if not D.is_square or not D.is_diagonal():
        raise ValueError("expected a diagonal matrix")
    d = D.diagonal()
    if any(x <= 0 for x in d):
        raise ValueError("diagonal entries must be positive")
    return d


def centralizer_shape(D: RatMatrix) -> CentralizerShape:
    """Group maximal runs of equal consecutive diagonal entries."""
    d = _positive_diagonal(D)
    comp = [1]
    for a, b in zip(d, d[1:]):
        if a == b:
            comp[-1] += 1
        else:
            comp.append(1)
    return CentralizerShape(tuple(comp))


def in_centralizer(A: RatMatrix, X: RatMatrix) -> bool:
    if not (A.is_square and X.is_square and A.rows == X.rows):
        raise ValueError(f"shape mismatch: {A.shape} vs {X.shape}")
    return A @ X == X @ A and is_itn(X)


def block_membership(D: RatMatrix, X: RatMatrix) -> bool:
    """Predict ``X in C(D)`` from the block pattern alone: zeros outside the
    diagonal blocks of ``centralizer_shape(D)``, ITN diagonal blocks."""
    shape = centralizer_shape(D)
    if X.shape != D.shape:
        raise ValueError(f"shape mismatch: {D.shape} vs {X.shape}")
    owner = [b for b, rng in enumerate(shape.blocks()) for _ in rng]
    n = X.rows
    for i in range(n):
        for j in range(n):
            if owner[i] != owner[j] and X[i, j] != 0:
                return False
    return all(is_itn(X.submatrix(list(r), list(r))) for r in shape.blocks())


def dk_matrix(n: int, k: int) -> RatMatrix:
    """Diagonal with (j, j) entry j, except (k+1, k+1) entry k."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"k={k} outside [1, {n - 1}]")
    return RatMatrix.diag([k if j == k + 1 else j for j in range(1, n + 1)])


def is_dk_matrix(D: RatMatrix, k: int) -> bool:
    """Positive diagonal whose only equal adjacent pair sits at (k, k+1)."""
    try:
        d = _positive_diagonal(D)
    except ValueError:
        return False
    eq = [i + 1 for i in range(len(d) - 1) if d[i] == d[i + 1]]
    return eq == [k]


@dataclass(frozen=True)
class CkElement:
    n: int
    k: int
    a: Fraction
    b: Fraction
    X: RatMatrix

    def __post_init__(self):
        if not 1 <= self.k <= self.n - 1:
            raise ValueError(f"k={self.k} outside [1, {self.n - 1}]")
        object.__setattr__(self, "a", as_rat(self.a))
        object.__setattr__(self, "b", as_rat(self.b))
        if self.a <= 0 or self.b <= 0:
            raise ValueError("a and b must be positive")
        if self.X.shape != (2, 2) or self.X.is_diagonal() or not is_itn(self.X):
            raise ValueError("X must be a non-diagonal 2x2 ITN matrix")

    def matrix(self) -> RatMatrix:
        parts = []
        if self.k > 1:
            parts.append(RatMatrix.identity(self.k - 1).scale(self.a))
        parts.append(self.X)
        if self.n - self.k - 1 > 0:
            parts.append(RatMatrix.identity(self.n - self.k - 1).scale(self.b))
        return direct_sum(*parts)


def _small_pos(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 9), rng.randint(1, 9))


def random_nondiagonal_2x2(rng: random.Random) -> RatMatrix:
    while True:
        x12 = _small_pos(rng) if rng.random() < 0.75 else Fraction(0)
        x21 = _small_pos(rng) if rng.random() < 0.75 else Fraction(0)
        if x12 == 0 and x21 == 0:
            continue
        x11 = _small_pos(rng)
        # x22 > x12 x21 / x11 keeps the determinant positive
        x22 = x12 * x21 / x11 + _small_pos(rng)
        return RatMatrix.from_rows([[x11, x12], [x21, x22]])


def random_ck_element(n: int, k: int, rng: random.Random) -> CkElement:
    return CkElement(n, k, _small_pos(rng), _small_pos(rng), random_nondiagonal_2x2(rng))


def ck_commute_expected(n: int, i: int, j: int) -> bool:
    """Whether all of C_i commutes with all of C_j."""
    if n < 4:
        raise ValueError("the commuting pattern is stated for n >= 4")
    for x in (i, j):
        if not 1 <= x <= n - 1:
            raise ValueError(f"index {x} outside [1, {n - 1}]")
    return abs(i - j) > 1


def find_noncommuting_ck_pair(n: int, i: int, j: int, rng: random.Random, budget: int = 50):
    """Sample C_i x C_j pairs; return the first pair that fails to commute."""
    for _ in range(budget):
        P = random_ck_element(n, i, rng).matrix()
        Q = random_ck_element(n, j, rng).matrix()
        if P @ Q != Q @ P:
            return P, Q
    return None


def maximal_subgroup_witness(A: RatMatrix) -> tuple[tuple[int, int], Fraction]:
    """1-based position and value of a negative entry of ``A^{-1}``.

    Every non-diagonal ITN matrix has one, which is why the positive
    diagonal matrices form the largest group inside ITN(n).
    """
    if not A.is_square:
        raise ValueError("expected a square matrix")
    if A.is_diagonal():
        raise ValueError("diagonal input: its inverse is again positive diagonal")
    if not classify_full(A).label.is_itn:
        raise ValueError("input is not ITN")
    inv = A.inverse()
    for i in range(inv.rows):
        for j in range(inv.cols):
            if inv[i, j] < 0:
                return (i + 1, j + 1), inv[i, j]
    raise AssertionError("non-diagonal ITN matrix with entrywise nonnegative inverse")


def two_by_two_conjugation_test(A: RatMatrix) -> bool:
    """Whether ``D A D^-1`` commutes with ``A`` for every positive diagonal D,
    i.e. ``A = aI + bE12`` or ``A = aI + bE21``."""
    if A.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    if A.is_diagonal():
        raise ValueError("expected a non-diagonal matrix")
    if not is_itn(A):
        raise ValueError("expected an ITN matrix")
    return A[0, 0] == A[1, 1] and (A[0, 1] == 0 or A[1, 0] == 0)
