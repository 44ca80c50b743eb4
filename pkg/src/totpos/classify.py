"""Membership tests for TP(n), TN(n) and ITN(n) with minor certificates."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations

from .exact import (
    MAX_MINOR_DIM,
    MinorIndex,
    RatMatrix,
    all_minors_scaled,
    as_rat,
    int_det,
    integer_rows,
    minor,
    unscale_minor,
)
from .factor import NotITNError, factorize


class ClassLabel(str, Enum):
    TP = "TP"
    ITN_NOT_TP = "ITN_not_TP"
    TN_SINGULAR = "TN_singular"
    NOT_TN = "NOT_TN"

    @property
    def is_itn(self) -> bool:
        return self in (ClassLabel.TP, ClassLabel.ITN_NOT_TP)

    @property
    def is_tn(self) -> bool:
        return self is not ClassLabel.NOT_TN


@dataclass(frozen=True)
class Certificate:
    label: ClassLabel
    witness: MinorIndex | None = None
    value: Fraction | None = None

    def __post_init__(self):
        if self.label is ClassLabel.TP:
            if self.witness is not None:
                raise ValueError("a TP certificate carries no witness")
        elif self.witness is None:
            raise ValueError(f"{self.label.value} needs a witness minor")
        elif self.label is ClassLabel.NOT_TN and not self.value < 0:
            raise ValueError("NOT_TN witness must be a negative minor")
        elif self.label is not ClassLabel.NOT_TN and self.value != 0:
            raise ValueError(f"{self.label.value} witness must be a zero minor")


def _require_square(A: RatMatrix) -> int:
    if not A.is_square:
        raise ValueError(f"expected a square matrix, got {A.rows}x{A.cols}")
    return A.rows


def classify_full(A: RatMatrix) -> Certificate:
    """Exact label from every square minor of ``A``.

    The first negative minor (by size, then row set, then column set) is
    reported for NOT_TN; the determinant for TN_singular; the first zero
    minor for ITN_not_TP.
    """
    n = _require_square(A)
    if n > MAX_MINOR_DIM:
        raise ValueError(f"classify_full is capped at n <= {MAX_MINOR_DIM}")
    # signs from the integer-scaled copy; only a reported value is rescaled
    minors, scales = all_minors_scaled(A)
    first_zero = None
    for (alpha, beta), v in minors.items():
        if v < 0:
            return Certificate(ClassLabel.NOT_TN, MinorIndex(alpha, beta), unscale_minor(v, alpha, scales))
        if v == 0 and first_zero is None:
            first_zero = (alpha, beta)
    full = tuple(range(1, n + 1))
    if minors[full, full] == 0:
        return Certificate(ClassLabel.TN_SINGULAR, MinorIndex(full, full), Fraction(0))
    if first_zero is not None:
        return Certificate(ClassLabel.ITN_NOT_TP, MinorIndex(*first_zero), Fraction(0))
    return Certificate(ClassLabel.TP)


def is_tp(A: RatMatrix) -> bool:
    return classify_full(A).label is ClassLabel.TP


def is_itn(A: RatMatrix) -> bool:
    return classify_full(A).label.is_itn


def contiguous_indices(n: int):
    for k in range(1, n + 1):
        for i in range(1, n - k + 2):
            for j in range(1, n - k + 2):
                yield MinorIndex(tuple(range(i, i + k)), tuple(range(j, j + k)))


def is_tp_fekete(A: RatMatrix) -> bool:
    """TP test using only minors with consecutive rows and columns."""
    n = _require_square(A)
    M, _ = integer_rows(A)
    for idx in contiguous_indices(n):
        rows = [M[a - 1][idx.beta[0] - 1:idx.beta[-1]] for a in idx.alpha]
        if int_det(rows) <= 0:
            return False
    return True


def is_itn_fast(A: RatMatrix) -> bool:
    """Polynomial-time ITN test: Neville elimination must succeed with
    nonnegative multipliers and positive pivots."""
    _require_square(A)
    try:
        factorize(A)
    except NotITNError:
        return False
    return True


def principal_minors_positive(A: RatMatrix) -> tuple[bool, MinorIndex | None]:
    n = _require_square(A)
    for k in range(1, n + 1):
        for alpha in combinations(range(1, n + 1), k):
            idx = MinorIndex(alpha, alpha)
            if minor(A, idx) <= 0:
                return False, idx
    return True, None


class CertificationError(RuntimeError):
    """A constructed matrix failed its own class certification."""


def tp_approx_identity(n: int, q) -> RatMatrix:
    """Gaussian kernel ``Q[i, j] = q ** ((i - j) ** 2)``, TP for 0 < q < 1."""
    q = as_rat(q)
    if not 0 < q < 1:
        raise ValueError(f"need 0 < q < 1, got {q}")
    Q = RatMatrix.from_rows([[q ** ((i - j) ** 2) for j in range(n)] for i in range(n)])
    if not is_tp(Q):
        raise CertificationError(f"kernel matrix with q={q} failed TP certification")
    return Q


MAX_HALVINGS = 64


def whitney_perturb(A: RatMatrix, eps) -> RatMatrix:
    """A TP matrix ``Q A Q`` within max-entry distance ``eps`` of ITN ``A``.

    ``q`` starts at 1/2 and halves until the distance bound holds.
    """
    eps = as_rat(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    cert = classify_full(A)
    if not cert.label.is_itn:
        raise ValueError(f"whitney_perturb needs an ITN input, got {cert.label.value}")
    n = A.rows
    q = Fraction(1, 2)
    for _ in range(MAX_HALVINGS):
        Q = tp_approx_identity(n, q)
        B = Q @ A @ Q
        if B.max_abs_diff(A) < eps:
            if not is_tp(B):
                raise CertificationError("perturbed matrix failed TP certification")
            return B
        q /= 2
    raise CertificationError(f"no q >= 2**-{MAX_HALVINGS} reached distance {eps}")
