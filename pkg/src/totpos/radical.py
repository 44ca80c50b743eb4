"""Exact positive reals of the form ``q * prod p_i ** e_i`` with rational
``q`` and rational exponents ``e_i``.

These carry the scalar factor of a semigroup automorphism, which involves an
n-th root of a determinant and is usually irrational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

from .exact import RatMatrix, as_rat, rat_str

PRIME_CAP = 10**6


class FactorizationCapError(ValueError):
    """A prime factor exceeded the trial-division cap."""


@lru_cache(maxsize=4096)
def factor_int(n: int) -> tuple[tuple[int, int], ...]:
    """Trial division, refusing any prime factor above ``PRIME_CAP``."""
    if n < 1:
        raise ValueError("factor_int needs a positive integer")
    out = []
    p = 2
    while p * p <= n:
        if p > PRIME_CAP:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        if n > PRIME_CAP:
            raise FactorizationCapError(
                f"cofactor {n} has no prime factor below {PRIME_CAP}; exceeds the cap"
            )
        out.append((n, 1))
    return tuple(out)


def factor_rat(x: Fraction) -> dict[int, int]:
    if x <= 0:
        raise ValueError(f"expected a positive rational, got {x}")
    f = dict(factor_int(x.numerator))
    for p, e in factor_int(x.denominator):
        f[p] = f.get(p, 0) - e
    return f


@dataclass(frozen=True)
class RadicalScalar:
    """``rational * prod(p ** e for p, e in factors)`` with every ``e`` in (0, 1).

    Integer parts of exponents are folded into ``rational`` so that only
    genuine radicands are ever factored; the canonical form makes equal values
    compare equal field by field.
    """

    rational: Fraction = Fraction(1)
    factors: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        q = as_rat(self.rational)
        if q <= 0:
            raise ValueError(f"radical scalars are positive, got rational part {q}")
        merged: dict[int, Fraction] = {}
        for p, e in self.factors:
            p, e = int(p), as_rat(e)
            if p < 2:
                raise ValueError(f"{p} is not a prime base")
            merged[p] = merged.get(p, Fraction(0)) + e
        frac = []
        for p in sorted(merged):
            e = merged[p]
            whole = e.numerator // e.denominator
            if whole:
                q *= Fraction(p) ** whole
            if e != whole:
                frac.append((p, e - whole))
        object.__setattr__(self, "rational", q)
        object.__setattr__(self, "factors", tuple(frac))

    @classmethod
    def one(cls) -> RadicalScalar:
        return cls()

    @classmethod
    def from_rational(cls, x) -> RadicalScalar:
        return cls(as_rat(x))

    @classmethod
    def from_prime_powers(cls, d: dict) -> RadicalScalar:
        return cls(Fraction(1), tuple((int(p), as_rat(e)) for p, e in d.items()))

    def as_dict(self) -> dict[int, Fraction]:
        """Full prime-to-exponent table (factors the rational part)."""
        out = {p: Fraction(e) for p, e in factor_rat(self.rational).items()}
        for p, e in self.factors:
            out[p] = out.get(p, Fraction(0)) + e
        return {p: e for p, e in sorted(out.items()) if e != 0}

    def __mul__(self, other):
        if not isinstance(other, RadicalScalar):
            other = RadicalScalar.from_rational(other)
        return RadicalScalar(self.rational * other.rational, self.factors + other.factors)

    __rmul__ = __mul__

    def inverse(self) -> RadicalScalar:
        return RadicalScalar(1 / self.rational, tuple((p, -e) for p, e in self.factors))

    def __truediv__(self, other):
        if not isinstance(other, RadicalScalar):
            other = RadicalScalar.from_rational(other)
        return self * other.inverse()

    def __pow__(self, k) -> RadicalScalar:
        k = as_rat(k)
        if k.denominator == 1:
            return RadicalScalar(self.rational ** int(k), tuple((p, e * k) for p, e in self.factors))
        table = factor_rat(self.rational)
        return RadicalScalar(
            Fraction(1),
            tuple((p, e * k) for p, e in table.items()) + tuple((p, e * k) for p, e in self.factors),
        )

    def is_rational(self) -> bool:
        return not self.factors

    def to_rational(self) -> Fraction:
        if self.factors:
            raise ValueError(f"{self} is irrational")
        return self.rational

    def __float__(self) -> float:
        q = self.rational
        log = math.log(q.numerator) - math.log(q.denominator)
        return math.exp(log + sum(float(e) * math.log(p) for p, e in self.factors))

    def __str__(self) -> str:
        parts = [] if self.rational == 1 and self.factors else [rat_str(self.rational)]
        parts += [f"{p}^({rat_str(e)})" for p, e in self.factors]
        return "*".join(parts)


def radical_mul(s: RadicalScalar, t: RadicalScalar) -> RadicalScalar:
    return s * t


def rational_root(x, k: int) -> RadicalScalar:
    """The positive ``k``-th root of a positive rational ``x``."""
    if k < 1:
        raise ValueError("root order must be >= 1")
    x = as_rat(x)
    if x <= 0:
        raise ValueError(f"rational_root needs x > 0, got {x}")
    return RadicalScalar.from_rational(x) ** Fraction(1, k)


def rational_power(x, e) -> RadicalScalar:
    """``x ** e`` for positive rational ``x`` and rational ``e``."""
    x = as_rat(x)
    if x <= 0:
        raise ValueError(f"rational_power needs x > 0, got {x}")
    return RadicalScalar.from_rational(x) ** as_rat(e)


@dataclass(frozen=True)
class ScaledMatrix:
    """``scale * body`` with the body's first nonzero entry normalized to 1.

    Construct through :meth:`of`, which moves any rational factor of the body
    into the scale.  Only a positive leading entry can be absorbed, since the
    scale is a positive real.
    """

    scale: RadicalScalar
    body: RatMatrix

    @classmethod
    def of(cls, M: RatMatrix, scale: RadicalScalar | None = None) -> ScaledMatrix:
        scale = RadicalScalar() if scale is None else scale
        lead = M.first_nonzero()
        if lead is None:
            raise ValueError("zero matrix has no canonical scaled form")
        if lead < 0:
            raise ValueError("leading entry is negative; not representable with a positive scale")
        return cls(scale * lead, M.scale(1 / lead))

    @property
    def n(self) -> int:
        return self.body.rows

    def __matmul__(self, other: ScaledMatrix) -> ScaledMatrix:
        return ScaledMatrix.of(self.body @ other.body, self.scale * other.scale)

    def is_rational(self) -> bool:
        return self.scale.is_rational()

    def to_matrix(self) -> RatMatrix:
        return self.body.scale(self.scale.to_rational())

    def __str__(self) -> str:
        return f"{self.scale} *\n{self.body}"
