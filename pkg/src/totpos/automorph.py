"""Semigroup automorphisms of TP(n) and ITN(n).

Every automorphism has the form

    T(A) = mu(det A) * (det A) ** (-1/n) * R A R^{-1}

with ``R`` a positive diagonal or positive antidiagonal matrix and ``mu`` a
bijective multiplicative map of (0, oo).  Only power maps ``mu(x) = x**c``
with rational ``c != 0`` are representable here, so the scalar factor is
``(det A) ** (c - 1/n)``, held exactly as a :class:`RadicalScalar`.
"""

from __future__ import annotations

import json
import random
import subprocess
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence

from .classify import classify_full, is_itn_fast, is_tp, is_tp_fekete
from .exact import RatMatrix, as_rat
from .factor import DiagonalFactor, ElementaryBidiagonal, GeneratorItem, random_itn
from .radical import RadicalScalar, ScaledMatrix, rational_power

ORIENTATIONS = ("diagonal", "antidiagonal")


@dataclass(frozen=True)
class AutomorphismSpec:
    n: int
    orientation: str
    r: tuple[Fraction, ...]
    mu_exponent: Fraction

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        if self.orientation not in ORIENTATIONS:
            raise ValueError(f"orientation must be one of {ORIENTATIONS}")
        r = tuple(as_rat(x) for x in self.r)
        if len(r) != self.n or any(x <= 0 for x in r):
            raise ValueError(f"r must hold {self.n} positive rationals")
        c = as_rat(self.mu_exponent)
        if c == 0:
            raise ValueError("mu_exponent 0 gives a constant map, not a bijection")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "mu_exponent", c)

    @property
    def R(self) -> RatMatrix:
        if self.orientation == "diagonal":
            return RatMatrix.diag(self.r)
        return RatMatrix.antidiag(self.r)

    @property
    def R_inv(self) -> RatMatrix:
        n = self.n
        if self.orientation == "diagonal":
            return RatMatrix.diag([1 / x for x in self.r])
        # (sum r_i E_{i,n+1-i})^{-1} = sum (1/r_i) E_{n+1-i,i}
        return RatMatrix.antidiag([1 / self.r[n - 1 - i] for i in range(n)])

    def normalized(self) -> AutomorphismSpec:
        """R and any positive multiple of R conjugate identically; fix r_1 = 1.
        At n = 1 the two orientations coincide and "diagonal" is used."""
        r1 = self.r[0]
        orientation = "diagonal" if self.n == 1 else self.orientation
        return replace(self, orientation=orientation, r=tuple(x / r1 for x in self.r))

    def mu(self, x) -> RadicalScalar:
        return rational_power(x, self.mu_exponent)


def random_spec(n: int, rng: random.Random) -> AutomorphismSpec:
    c = Fraction(rng.choice([-1, 1]) * rng.randint(1, 6), rng.randint(1, 6))
    return AutomorphismSpec(
        n,
        rng.choice(ORIENTATIONS),
        tuple(Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(n)),
        c,
    )


def conjugate(spec: AutomorphismSpec, A: RatMatrix) -> RatMatrix:
    return spec.R @ A @ spec.R_inv


def apply(spec: AutomorphismSpec, A: RatMatrix, check: bool = True) -> ScaledMatrix:
    if A.shape != (spec.n, spec.n):
        raise ValueError(f"spec is for n={spec.n}, matrix is {A.rows}x{A.cols}")
    if check and not is_itn_fast(A):
        raise ValueError("automorphisms act on ITN matrices only")
    n = spec.n
    det = A.det()
    scale = rational_power(det, spec.mu_exponent - Fraction(1, n))
    return ScaledMatrix.of(conjugate(spec, A), scale)


def scaled_item(spec: AutomorphismSpec, item: GeneratorItem) -> ScaledMatrix:
    return apply(spec, item.matrix())


# -- homomorphism verification ----------------------------------------------

@dataclass
class VerificationReport:
    passed: bool
    trials: int
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {"passed": self.passed, "trials": self.trials, "counterexample": self.counterexample}


def _sample_pair(n: int, rng: random.Random) -> tuple[RatMatrix, RatMatrix]:
    return random_itn(n, rng, rng.random() < 0.5), random_itn(n, rng, rng.random() < 0.5)


def verify_homomorphism(
    spec: AutomorphismSpec,
    trials: int,
    n: int | None = None,
    seed=0,
    apply_fn: Callable = apply,
) -> VerificationReport:
    """Random ITN pairs: exact ``T(AB) == T(A) T(B)`` and class preservation."""
    from .serialize import matrix_to_json, scaled_to_json

    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = spec.n if n is None else n
    if n != spec.n:
        raise ValueError(f"spec is for n={spec.n}, asked to verify n={n}")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    for t in range(trials):
        A, B = _sample_pair(n, rng)
        TA, TB, TAB = apply_fn(spec, A), apply_fn(spec, B), apply_fn(spec, A @ B)
        product = TA @ TB
        if TAB != product:
            return VerificationReport(False, t + 1, {
                "property": "multiplicative",
                "A": matrix_to_json(A), "B": matrix_to_json(B),
                "T(AB)": scaled_to_json(TAB), "T(A)T(B)": scaled_to_json(product),
            })
        for X, TX in ((A, TA), (B, TB)):
            same_tp = is_tp_fekete(X) == is_tp_fekete(TX.body)
            if not (same_tp and is_itn_fast(TX.body)):
                return VerificationReport(False, t + 1, {
                    "property": "class preservation",
                    "X": matrix_to_json(X), "T(X)": scaled_to_json(TX),
                })
    return VerificationReport(True, trials)


# -- generator tables -------------------------------------------------------

@dataclass(frozen=True)
class GeneratorImageTable:
    n: int
    entries: tuple = field(default_factory=tuple)  # (GeneratorItem, ScaledMatrix) pairs

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(tuple(e) for e in self.entries))
        for item, img in self.entries:
            if item.n != self.n or img.n != self.n:
                raise ValueError("table entry of the wrong dimension")

    def replace_image(self, index: int, image: ScaledMatrix) -> GeneratorImageTable:
        entries = list(self.entries)
        entries[index] = (entries[index][0], image)
        return GeneratorImageTable(self.n, tuple(entries))


def tabulate(spec: AutomorphismSpec, apply_fn: Callable = apply) -> GeneratorImageTable:
    """Images of every unit-weight elementary bidiagonal generator, of the
    scalars 2I and 3I, and of each ``diag(1, .., 2, .., 1)``."""
    n = spec.n
    items: list[GeneratorItem] = []
    for k in range(1, n):
        items.append(ElementaryBidiagonal(n, "upper", k, 1))
        items.append(ElementaryBidiagonal(n, "lower", k, 1))
    items.append(DiagonalFactor((2,) * n))
    items.append(DiagonalFactor((3,) * n))
    for i in range(n):
        items.append(DiagonalFactor(tuple(2 if j == i else 1 for j in range(n))))
    return GeneratorImageTable(n, tuple((g, apply_fn(spec, g.matrix())) for g in items))


class InconsistentTableError(ValueError):
    """The table matches no automorphism of the classified form."""

    def __init__(self, index: int | None, item, reason: str):
        self.index = index
        self.item = item
        where = "table" if index is None else f"entry {index} ({_describe(item)})"
        super().__init__(f"{where}: {reason}")


def _describe(item) -> str:
    if isinstance(item, DiagonalFactor):
        return "diag(" + ", ".join(str(x) for x in item.d) + ")"
    return f"{item.kind} k={item.k} weight={item.weight}"


def elementary_site(M: RatMatrix) -> tuple[str, int, Fraction] | None:
    """``(kind, k, weight)`` if ``M = I + w E`` at an adjacent off-diagonal
    position with ``w > 0``; otherwise None."""
    if not M.is_square or any(x != 1 for x in M.diagonal()):
        return None
    off = [(i, j, M[i, j]) for i in range(M.rows) for j in range(M.cols) if i != j and M[i, j] != 0]
    if len(off) != 1:
        return None
    i, j, w = off[0]
    if w < 0:
        return None
    if j == i + 1:
        return ("upper", i + 1, w)
    if i == j + 1:
        return ("lower", j + 1, w)
    return None


def _solve_exponent(a: Fraction, image: ScaledMatrix, n: int, index: int, item) -> Fraction:
    """``c`` with ``image == a**(n c) * I``."""
    if image.body != RatMatrix.identity(n):
        raise InconsistentTableError(index, item, "image of a scalar matrix is not scalar")
    base = RadicalScalar.from_rational(a).as_dict()
    got = image.scale.as_dict()
    p = next(iter(base))
    c = got.get(p, Fraction(0)) / (n * base[p])
    if c == 0:
        raise InconsistentTableError(index, item, "scalar matrices collapse to I; mu is not bijective")
    if (RadicalScalar.from_rational(a) ** (n * c)) != image.scale:
        raise InconsistentTableError(index, item, f"scale {image.scale} is not a power of {a}")
    return c


def recover(table: GeneratorImageTable) -> AutomorphismSpec:
    """Rebuild the (normalized) spec from generator images, then replay every
    entry through :func:`apply` and reject the table on the first mismatch."""
    n = table.n
    scalar = next(
        ((i, g, img) for i, (g, img) in enumerate(table.entries)
         if isinstance(g, DiagonalFactor) and len(set(g.d)) == 1 and g.d[0] != 1),
        None,
    )
    if scalar is None:
        raise InconsistentTableError(None, None, "no scalar matrix aI with a != 1")
    i0, g0, img0 = scalar
    c = _solve_exponent(g0.d[0], img0, n, i0, g0)

    orientation = "diagonal"
    r = [Fraction(1)] * n
    if n >= 2:
        ratio: dict[int, Fraction] = {}
        for k in range(1, n):
            hit = next(
                ((i, g, img) for i, (g, img) in enumerate(table.entries)
                 if isinstance(g, ElementaryBidiagonal) and g.kind == "upper" and g.k == k and g.weight > 0),
                None,
            )
            if hit is None:
                raise InconsistentTableError(None, None, f"no image of an upper generator at site {k}")
            i, g, img = hit
            if img.scale != RadicalScalar():
                raise InconsistentTableError(i, g, "determinant-1 generator acquired a scalar factor")
            site = elementary_site(img.body)
            if site is None:
                raise InconsistentTableError(i, g, "image is not an elementary bidiagonal matrix")
            kind, k_img, w_img = site
            if kind == "upper" and k_img == k:
                this = "diagonal"
            elif kind == "lower" and k_img == n - k:
                this = "antidiagonal"
            else:
                raise InconsistentTableError(i, g, f"image sits at {kind} site {k_img}, matching neither orientation")
            if k == 1:
                orientation = this
            elif this != orientation:
                raise InconsistentTableError(i, g, f"mixed orientations ({orientation} vs {this})")
            ratio[k] = w_img / g.weight
        if orientation == "diagonal":
            # weight of U_k maps to r_k / r_{k+1}
            for k in range(1, n):
                r[k] = r[k - 1] / ratio[k]
        else:
            # U_k maps to L_{n-k} with weight r_{n-k+1} / r_{n-k}
            for m in range(1, n):
                r[m] = r[m - 1] * ratio[n - m]

    spec = AutomorphismSpec(n, orientation, tuple(r), c)
    for i, (g, img) in enumerate(table.entries):
        try:
            expected = apply(spec, g.matrix())
        except ValueError as exc:
            raise InconsistentTableError(i, g, str(exc)) from None
        if expected != img:
            raise InconsistentTableError(i, g, f"image disagrees with the recovered spec (expected scale {expected.scale})")
    return spec


# -- extension from TP to ITN ----------------------------------------------

class OracleError(RuntimeError):
    """The supplied map misbehaved: failed, or left TP(n)."""


def _as_scaled(value) -> ScaledMatrix:
    if isinstance(value, ScaledMatrix):
        return value
    if isinstance(value, RatMatrix):
        return ScaledMatrix.of(value)
    raise OracleError(f"oracle returned {type(value).__name__}, expected a matrix")


def extend_tp_automorphism(
    oracle: Callable[[RatMatrix], object],
    reference: RatMatrix,
    X: RatMatrix,
    side: str = "left",
) -> ScaledMatrix:
    """Extend a TP(n) automorphism to ITN(n) through a TP reference ``A``:
    ``T(A)^{-1} T(AX)`` (side="left") or ``T(XA) T(A)^{-1}`` (side="right")."""
    if not is_tp(reference):
        raise ValueError("reference matrix is not TP")
    if not classify_full(X).label.is_itn:
        raise ValueError("X is not ITN")
    TA = _as_scaled(oracle(reference))
    if not is_tp(TA.body):
        raise OracleError("oracle image of the reference is not TP")
    if side == "left":
        TP_ = _as_scaled(oracle(reference @ X))
        body = TA.body.inverse() @ TP_.body
    elif side == "right":
        TP_ = _as_scaled(oracle(X @ reference))
        body = TP_.body @ TA.body.inverse()
    else:
        raise ValueError("side must be 'left' or 'right'")
    if not is_tp(TP_.body):
        raise OracleError("oracle image of a TP product is not TP")
    return ScaledMatrix.of(body, TP_.scale / TA.scale)


class SubprocessOracle:
    """Map evaluated by an external process speaking newline-delimited JSON.

    Each request is ``{"matrix": <matrix JSON>}``; each response is
    ``{"matrix": <matrix JSON>}``, optionally with ``"scale"`` as a
    ``{prime: exponent}`` object for irrational images.
    """

    def __init__(self, argv: Sequence[str]):
        self.argv = list(argv)
        self._proc = subprocess.Popen(
            self.argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1
        )

    def __call__(self, M: RatMatrix) -> ScaledMatrix:
        from .serialize import FormatError, matrix_from_json, matrix_to_json, radical_from_json

        proc = self._proc
        if proc.poll() is not None:
            raise OracleError(f"oracle exited with status {proc.returncode}")
        try:
            proc.stdin.write(json.dumps({"matrix": matrix_to_json(M)}) + "\n")
            proc.stdin.flush()
        except BrokenPipeError:
            raise OracleError("oracle closed its input") from None
        line = proc.stdout.readline()
        if not line:
            proc.wait()
            raise OracleError(f"oracle exited with status {proc.returncode}")
        try:
            obj = json.loads(line)
            body = matrix_from_json(obj["matrix"])
            scale = radical_from_json(obj.get("scale", {}))
        except (ValueError, KeyError, FormatError) as exc:
            raise OracleError(f"bad oracle response: {exc}") from None
        return ScaledMatrix.of(body, scale)

    def close(self) -> None:
        if self._proc.poll() is None:
            self._proc.stdin.close()
            self._proc.wait(timeout=10)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


# -- intermediate semigroups ------------------------------------------------

@dataclass
class DomainReport:
    passed: bool
    checked: int
    failures: list = field(default_factory=list)


def theoremB_domain_check(
    samples: Sequence[RatMatrix], spec: AutomorphismSpec, apply_fn: Callable = apply
) -> DomainReport:
    """Check that ``apply(spec)`` keeps TP samples TP and positive diagonal
    samples diagonal, on a sample of ``TP(n) | D(n)``."""
    failures = []
    kinds = []
    for i, S in enumerate(samples):
        if S.is_diagonal() and all(x > 0 for x in S.diagonal()):
            kinds.append("diagonal")
        elif S.is_square and is_tp(S):
            kinds.append("TP")
        else:
            raise ValueError(f"sample {i} is neither TP nor positive diagonal")
    for i, (S, kind) in enumerate(zip(samples, kinds)):
        body = apply_fn(spec, S).body
        ok = body.is_diagonal() if kind == "diagonal" else is_tp(body)
        if not ok:
            failures.append(i)
    return DomainReport(not failures, len(samples), failures)
