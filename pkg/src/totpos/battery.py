"""Seeded property battery covering every module, plus canned mutants.

Each property draws its random stream from ``Random(f"{seed}:{property_id}")``
so reports do not depend on which other properties ran, or in what order.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .automorph import (
    InconsistentTableError,
    apply,
    extend_tp_automorphism,
    random_spec,
    recover,
    tabulate,
    theoremB_domain_check,
    verify_homomorphism,
)
from .classify import (
    ClassLabel,
    classify_full,
    is_itn,
    is_itn_fast,
    is_tp,
    is_tp_fekete,
    principal_minors_positive,
    whitney_perturb,
)
from .exact import RatMatrix, cauchy_binet_check, direct_sum
from .factor import (
    BidiagonalFactorization,
    ElementaryBidiagonal,
    DiagonalFactor,
    factorize,
    ldu,
    random_factorization,
    synthesize,
    word_to_matrix,
)
from .radical import RadicalScalar, ScaledMatrix
from .serialize import matrix_to_json, scaled_to_json, spec_to_json
from .structure import (
    block_membership,
    ck_commute_expected,
    find_noncommuting_ck_pair,
    in_centralizer,
    maximal_subgroup_witness,
    random_ck_element,
    random_nondiagonal_2x2,
    two_by_two_conjugation_test,
)

DEFAULT_CAP = 6
HARD_CAP = 12
MAX_RECORDED_FAILURES = 3


@dataclass(frozen=True)
class RunConfig:
    seed: int = 42
    dims: tuple[int, ...] = (2, 3, 4, 5, 6)
    trials: int = 10
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(n) for n in self.dims))
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 1 <= self.cap <= HARD_CAP:
            raise ValueError(f"dimension cap must lie in [1, {HARD_CAP}]")
        if not self.dims:
            raise ValueError("dims must not be empty")
        bad = [n for n in self.dims if not 1 <= n <= self.cap]
        if bad:
            raise ValueError(f"dims {bad} outside [1, {self.cap}]")


@dataclass
class PropertyReport:
    id: str
    citation: str
    trials: int
    failures: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "id": self.id,
            "citation": self.citation,
            "passed": self.passed,
            "trials": self.trials,
            "failures": self.failures,
        }
        if timings:
            out["elapsed"] = round(self.elapsed, 3)
        return out

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.id} [{self.citation}] trials={self.trials} failures={len(self.failures)}"


def reports_to_json(reports: list[PropertyReport], timings: bool = False) -> str:
    """Elapsed times are left out unless asked for, so equal configs give
    byte-identical output."""
    return json.dumps([r.to_json(timings) for r in reports], indent=2, sort_keys=True)


# -- mutants ---------------------------------------------------------------

@dataclass(frozen=True)
class Hooks:
    synthesize: Callable[[BidiagonalFactorization], RatMatrix] = synthesize
    apply: Callable = apply


def _apply_transposed(spec, A, check=True):
    out = apply(spec, A, check)
    return ScaledMatrix.of(out.body.T, out.scale)


def _apply_unscaled(spec, A, check=True):
    out = apply(spec, A, check)
    return ScaledMatrix.of(out.body)


def _synthesize_reversed_upper(f: BidiagonalFactorization) -> RatMatrix:
    # inner index run downwards inside each upper group
    n = f.n
    upper = [
        ElementaryBidiagonal(n, "upper", k, f.w_prime[j, k + 1])
        for j in range(n - 1, 0, -1)
        for k in range(n - 1, j - 1, -1)
    ]
    return word_to_matrix([*f.lower_word(), DiagonalFactor(f.d), *upper], n)


MUTANTS: dict[str, Hooks] = {
    "transpose": Hooks(apply=_apply_transposed),
    "drop-scale": Hooks(apply=_apply_unscaled),
    "synth-order": Hooks(synthesize=_synthesize_reversed_upper),
}


# -- helpers ---------------------------------------------------------------

class _Run:
    """Trial counter and failure log for one property."""

    def __init__(self):
        self.trials = 0
        self.failures: list = []

    def fail(self, **info) -> None:
        if len(self.failures) < MAX_RECORDED_FAILURES:
            self.failures.append(info)
        else:
            self.failures.append({"omitted": True})

    def trial(self, fn: Callable[[], dict | None]) -> None:
        self.trials += 1
        try:
            bad = fn()
        except Exception as exc:  # a crash inside a trial is a failure, not an abort
            bad = {"error": f"{type(exc).__name__}: {exc}"}
        if bad:
            self.fail(**bad)


def _itn(n: int, rng: random.Random, hooks: Hooks, strict: bool | None = None) -> RatMatrix:
    if strict is None:
        strict = rng.random() < 0.5
    return hooks.synthesize(random_factorization(n, rng, strict))


def _mj(M: RatMatrix) -> dict:
    return matrix_to_json(M)


def _at_least(dims, lo: int, fallback: int, cap: int) -> list[int]:
    got = [n for n in dims if n >= lo]
    if got:
        return got
    return [fallback] if fallback <= cap else []


# -- properties ------------------------------------------------------------

def p_roundtrip(rng, cfg, hooks, run):
    for n in cfg.dims:
        for _ in range(cfg.trials):
            def t():
                A = _itn(n, rng, hooks)
                back = hooks.synthesize(factorize(A))
                if back != A:
                    return {"n": n, "A": _mj(A), "resynthesized": _mj(back)}
            run.trial(t)


def p_positivity(rng, cfg, hooks, run):
    for n in _at_least(cfg.dims, 2, 2, cfg.cap):
        for _ in range(cfg.trials):
            def t():
                f = random_factorization(n, rng, rng.random() < 0.5)
                A = hooks.synthesize(f)
                tp = is_tp(A)
                if tp != f.all_positive():
                    return {"n": n, "all_positive": f.all_positive(), "certified_tp": tp, "A": _mj(A)}
                if tp and factorize(A) != f:
                    return {"n": n, "reason": "parameters not recovered", "A": _mj(A)}
            run.trial(t)


def p_ldu(rng, cfg, hooks, run):
    for n in cfg.dims:
        for _ in range(cfg.trials):
            def t():
                A = _itn(n, rng, hooks)
                L, D, U = ldu(A)
                ok = (
                    L @ D @ U == A
                    and L.is_lower_triangular() and all(x == 1 for x in L.diagonal())
                    and U.is_upper_triangular() and all(x == 1 for x in U.diagonal())
                    and D.is_diagonal() and all(x > 0 for x in D.diagonal())
                    and is_itn(L) and is_itn(U)
                )
                if not ok:
                    return {"n": n, "A": _mj(A), "L": _mj(L), "D": _mj(D), "U": _mj(U)}
            run.trial(t)


def p_density(rng, cfg, hooks, run):
    eps = Fraction(1, 1000)
    for n in [m for m in cfg.dims if m <= 5] or [min(cfg.dims)]:
        for _ in range(cfg.trials):
            def t():
                A = _itn(n, rng, hooks, strict=False)
                B = whitney_perturb(A, eps)
                if not (is_tp(B) and B.max_abs_diff(A) < eps):
                    return {"n": n, "A": _mj(A), "B": _mj(B)}
            run.trial(t)


def p_karlin(rng, cfg, hooks, run):
    for n in cfg.dims:
        for _ in range(cfg.trials):
            def t():
                A = _itn(n, rng, hooks)
                ok, idx = principal_minors_positive(A)
                if not ok:
                    return {"n": n, "A": _mj(A), "minor": str(idx)}
            run.trial(t)


def _random_rect(rows: int, cols: int, rng: random.Random) -> RatMatrix:
    return RatMatrix.from_rows(
        [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(cols)] for _ in range(rows)]
    )


def p_cauchy_binet(rng, cfg, hooks, run):
    top = max(cfg.dims)
    for _ in range(cfg.trials * len(cfg.dims)):
        def t():
            m = rng.randint(1, min(top, 4))
            k = rng.randint(m, max(m, top))
            A, B = _random_rect(m, k, rng), _random_rect(k, m, rng)
            res = cauchy_binet_check(A, B)
            if not res.equal:
                return {"A": _mj(A), "B": _mj(B)}
        run.trial(t)


def p_closure(rng, cfg, hooks, run):
    for n in cfg.dims:
        for _ in range(cfg.trials):
            def t():
                A = _itn(n, rng, hooks, strict=True)
                X = _itn(n, rng, hooks, strict=False)
                if not (is_tp(A @ X) and is_tp(X @ A)):
                    return {"n": n, "A": _mj(A), "X": _mj(X)}
            run.trial(t)


def _mixed_sample(n: int, rng: random.Random, hooks: Hooks) -> RatMatrix:
    roll = rng.random()
    if roll < 0.5:
        return _itn(n, rng, hooks)
    A = _itn(n, rng, hooks)
    i, j = rng.randrange(n), rng.randrange(n)
    rows = A.to_rows()
    if roll < 0.75:
        rows[i][j] = -rows[i][j] - 1   # usually NOT_TN
    else:
        rows[i] = list(rows[(i + 1) % n]) if n > 1 else [Fraction(0)]  # singular
    return RatMatrix.from_rows(rows)


def p_classifier(rng, cfg, hooks, run):
    for n in cfg.dims:
        for _ in range(cfg.trials):
            def t():
                A = _mixed_sample(n, rng, hooks)
                label = classify_full(A).label
                fek, fast = is_tp_fekete(A), is_itn_fast(A)
                if fek != (label is ClassLabel.TP) or fast != label.is_itn:
                    return {"n": n, "A": _mj(A), "label": label.value, "fekete": fek, "itn_fast": fast}
            run.trial(t)


def p_extension(rng, cfg, hooks, run):
    for n in cfg.dims:
        for _ in range(cfg.trials):
            def t():
                spec = random_spec(n, rng)
                oracle = lambda M: hooks.apply(spec, M)
                X = _itn(n, rng, hooks, strict=False)
                want = hooks.apply(spec, X)
                refs = [_itn(n, rng, hooks, strict=True) for _ in range(3)]
                for ref in refs:
                    for side in ("left", "right"):
                        got = extend_tp_automorphism(oracle, ref, X, side)
                        if got != want:
                            return {
                                "spec": spec_to_json(spec), "X": _mj(X), "reference": _mj(ref),
                                "side": side, "extended": scaled_to_json(got), "direct": scaled_to_json(want),
                            }
            run.trial(t)


def p_max_subgroup(rng, cfg, hooks, run):
    for n in _at_least(cfg.dims, 2, 2, cfg.cap):
        for _ in range(cfg.trials):
            def t():
                A = _itn(n, rng, hooks)
                if A.is_diagonal():
                    return None
                (i, j), v = maximal_subgroup_witness(A)
                if not (v < 0 and A.inverse()[i - 1, j - 1] == v):
                    return {"n": n, "A": _mj(A), "position": [i, j]}
            run.trial(t)


def p_scalar(rng, cfg, hooks, run):
    for n in cfg.dims:
        for _ in range(cfg.trials):
            def t():
                spec = random_spec(n, rng)
                a = Fraction(rng.randint(1, 9), rng.randint(1, 9))
                img = hooks.apply(spec, RatMatrix.identity(n).scale(a))
                want = ScaledMatrix(spec.mu(a**n), RatMatrix.identity(n))
                if img != want:
                    return {"spec": spec_to_json(spec), "a": str(a), "image": scaled_to_json(img),
                            "expected": scaled_to_json(want)}
                X = _mixed_sample(n, rng, hooks)
                if in_centralizer(RatMatrix.identity(n).scale(a), X) != is_itn(X):
                    return {"n": n, "a": str(a), "X": _mj(X), "reason": "scalar centralizer is not all of ITN"}
            run.trial(t)


def _random_diag_with_ties(n: int, rng: random.Random) -> RatMatrix:
    d = [Fraction(rng.randint(1, 5), rng.randint(1, 3))]
    for _ in range(n - 1):
        roll = rng.random()
        if roll < 0.4:
            d.append(d[-1])
        elif roll < 0.5:
            d.append(rng.choice(d))
        else:
            d.append(Fraction(rng.randint(1, 5), rng.randint(1, 3)))
    return RatMatrix.diag(d)


def _block_candidate(D: RatMatrix, rng: random.Random, hooks: Hooks) -> RatMatrix:
    from .structure import centralizer_shape

    n = D.rows
    roll = rng.random()
    if roll < 0.25:
        return _itn(n, rng, hooks)
    blocks = []
    for size in centralizer_shape(D).composition:
        if rng.random() < 0.85:
            blocks.append(_itn(size, rng, hooks))
        else:
            blocks.append(_random_rect(size, size, rng))
    X = direct_sum(*blocks)
    if roll < 0.45 and n > 1:
        rows = X.to_rows()
        i = rng.randrange(n - 1)
        rows[i][i + 1] += Fraction(1, rng.randint(1, 50))
        X = RatMatrix.from_rows(rows)
    return X


def p_block_centralizer(rng, cfg, hooks, run):
    for n in _at_least(cfg.dims, 2, 3, cfg.cap):
        for _ in range(cfg.trials):
            def t():
                D = _random_diag_with_ties(n, rng)
                X = _block_candidate(D, rng, hooks)
                pred, truth = block_membership(D, X), in_centralizer(D, X)
                if pred != truth:
                    return {"D": _mj(D), "X": _mj(X), "block_membership": pred, "in_centralizer": truth}
            run.trial(t)


CONJUGATOR_SAMPLES = 50


def _random_special_2x2(rng: random.Random) -> RatMatrix:
    roll = rng.random()
    if roll < 0.5:
        return random_nondiagonal_2x2(rng)
    a = Fraction(rng.randint(1, 9), rng.randint(1, 9))
    b = Fraction(rng.randint(1, 9), rng.randint(1, 9))
    pos = (0, 1) if roll < 0.75 else (1, 0)
    rows = [[a, 0], [0, a]]
    rows[pos[0]][pos[1]] = b
    return RatMatrix.from_rows(rows)


def conjugation_by_sampling(A: RatMatrix, rng: random.Random, samples: int = CONJUGATOR_SAMPLES) -> bool:
    """Whether ``D A D^-1`` lies in C(A) for ``samples`` random positive diagonals D."""
    for _ in range(samples):
        d1 = Fraction(rng.randint(1, 20), rng.randint(1, 20))
        d2 = Fraction(rng.randint(1, 20), rng.randint(1, 20))
        D = RatMatrix.diag([d1, d2])
        if not in_centralizer(A, D @ A @ D.inverse()):
            return False
    return True


def p_two_by_two(rng, cfg, hooks, run):
    for _ in range(cfg.trials * len(cfg.dims)):
        def t():
            A = _random_special_2x2(rng)
            pred = two_by_two_conjugation_test(A)
            sampled = conjugation_by_sampling(A, rng)
            if pred != sampled:
                return {"A": _mj(A), "predicate": pred, "sampled": sampled}
        run.trial(t)


def p_ck_commuting(rng, cfg, hooks, run):
    for n in _at_least(cfg.dims, 4, 4, cfg.cap):
        for i in range(1, n):
            for j in range(1, n):
                def t():
                    if ck_commute_expected(n, i, j):
                        for _ in range(cfg.trials):
                            P = random_ck_element(n, i, rng).matrix()
                            Q = random_ck_element(n, j, rng).matrix()
                            if P @ Q != Q @ P:
                                return {"n": n, "i": i, "j": j, "P": _mj(P), "Q": _mj(Q)}
                    elif find_noncommuting_ck_pair(n, i, j, rng) is None:
                        return {"n": n, "i": i, "j": j, "reason": "no non-commuting pair within 50 samples"}
                run.trial(t)


def p_homomorphism(rng, cfg, hooks, run):
    for n in cfg.dims:
        for _ in range(cfg.trials):
            def t():
                spec = random_spec(n, rng)
                rep = verify_homomorphism(spec, 2, seed=rng, apply_fn=hooks.apply)
                if not rep.passed:
                    return {"spec": spec_to_json(spec), **rep.counterexample}
            run.trial(t)


def p_det_covariance(rng, cfg, hooks, run):
    for n in cfg.dims:
        for _ in range(cfg.trials):
            def t():
                spec = random_spec(n, rng)
                A = _itn(n, rng, hooks)
                TA = hooks.apply(spec, A)
                lhs = (TA.scale ** n) * TA.body.det()
                rhs = spec.mu(A.det()) ** n
                if lhs != rhs:
                    return {"spec": spec_to_json(spec), "A": _mj(A), "image": scaled_to_json(TA),
                            "det_image": str(lhs), "expected": str(rhs)}
            run.trial(t)


def _expected_site(spec, kind: str, k: int) -> tuple[str, int]:
    if spec.orientation == "diagonal":
        return kind, k
    return ("lower" if kind == "upper" else "upper"), spec.n - k


def p_generators(rng, cfg, hooks, run):
    from .automorph import elementary_site

    for n in _at_least(cfg.dims, 2, 2, cfg.cap):
        for _ in range(cfg.trials):
            def t():
                spec = random_spec(n, rng)
                for k in range(1, n):
                    for kind in ("upper", "lower"):
                        w = Fraction(rng.randint(1, 9), rng.randint(1, 9))
                        E = ElementaryBidiagonal(n, kind, k, w).matrix()
                        img = hooks.apply(spec, E)
                        site = elementary_site(img.body)
                        want = _expected_site(spec, kind, k)
                        if img.scale != RadicalScalar() or site is None or site[:2] != want:
                            return {"spec": spec_to_json(spec), "generator": [kind, k, str(w)],
                                    "image": scaled_to_json(img), "expected_site": list(want)}
            run.trial(t)


def _perturb(img: ScaledMatrix, rng: random.Random) -> ScaledMatrix:
    if rng.random() < 0.5:
        return ScaledMatrix(img.scale * 2, img.body)
    rows = img.body.to_rows()
    n = len(rows)
    i, j = rng.randrange(n), rng.randrange(n)
    rows[i][j] += Fraction(1, 7)
    return ScaledMatrix.of(RatMatrix.from_rows(rows), img.scale)


def p_recovery(rng, cfg, hooks, run):
    for n in _at_least(cfg.dims, 2, 2, cfg.cap):
        for _ in range(cfg.trials):
            def t():
                spec = random_spec(n, rng)
                table = tabulate(spec, hooks.apply)
                got = recover(table)
                if got != spec.normalized():
                    return {"spec": spec_to_json(spec), "recovered": spec_to_json(got)}
                idx = rng.randrange(len(table.entries))
                bad = table.replace_image(idx, _perturb(table.entries[idx][1], rng))
                try:
                    recover(bad)
                except InconsistentTableError as exc:
                    if exc.index is None:
                        return {"spec": spec_to_json(spec), "mutated": idx, "reason": "no entry named"}
                    return None
                return {"spec": spec_to_json(spec), "mutated": idx, "reason": "mutated table accepted"}
            run.trial(t)


def p_intermediate(rng, cfg, hooks, run):
    for n in cfg.dims:
        for _ in range(cfg.trials):
            def t():
                spec = random_spec(n, rng)
                samples = [_itn(n, rng, hooks, strict=True) for _ in range(2)]
                samples.append(RatMatrix.diag([Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(n)]))
                rep = theoremB_domain_check(samples, spec, hooks.apply)
                if not rep.passed:
                    return {"spec": spec_to_json(spec),
                            "failed_samples": [_mj(samples[i]) for i in rep.failures]}
            run.trial(t)


# (id, citation, function); ids name what is checked, citations name the result
PROPERTIES: list[tuple[str, str, Callable]] = [
    ("factor-roundtrip", "Whitney bidiagonal factorization", p_roundtrip),
    ("factor-positivity", "BFZ parametrization of TP(n)", p_positivity),
    ("ldu-itn-factors", "Cryer LDU decomposition", p_ldu),
    ("whitney-density", "Whitney density theorem", p_density),
    ("karlin-principal-minors", "Karlin principal minor positivity", p_karlin),
    ("cauchy-binet", "Cauchy-Binet formula", p_cauchy_binet),
    ("tp-itn-closure", "TP(n) is an ideal of ITN(n)", p_closure),
    ("classifier-agreement", "Fekete contiguous minor criterion", p_classifier),
    ("tp-extension", "extension of TP(n) automorphisms to ITN(n)", p_extension),
    ("maximal-subgroup", "positive diagonals as the maximal subgroup", p_max_subgroup),
    ("scalar-action", "action on scalar matrices", p_scalar),
    ("block-centralizer", "centralizers of positive diagonal matrices", p_block_centralizer),
    ("two-by-two-conjugation", "conjugation-stable 2x2 centralizers", p_two_by_two),
    ("ck-commuting", "commuting pattern of the C_k semigroups", p_ck_commuting),
    ("aut-homomorphism", "automorphism classification, sufficiency", p_homomorphism),
    ("aut-det-covariance", "determinant covariance of automorphisms", p_det_covariance),
    ("aut-generators", "automorphisms permute elementary generators", p_generators),
    ("aut-recovery", "automorphism classification, necessity", p_recovery),
    ("intermediate-semigroups", "automorphisms of TP(n) plus diagonals", p_intermediate),
]

PROPERTY_IDS = [pid for pid, _, _ in PROPERTIES]


def check_all(cfg: RunConfig, mutant: str | None = None, only: list[str] | None = None) -> list[PropertyReport]:
    if mutant is not None and mutant not in MUTANTS:
        raise ValueError(f"unknown mutant {mutant!r}; choose from {sorted(MUTANTS)}")
    if only is not None:
        unknown = set(only) - set(PROPERTY_IDS)
        if unknown:
            raise ValueError(f"unknown property ids {sorted(unknown)}")
    hooks = MUTANTS[mutant] if mutant else Hooks()
    reports = []
    for pid, citation, fn in PROPERTIES:
        if only is not None and pid not in only:
            continue
        rng = random.Random(f"{cfg.seed}:{pid}")
        run = _Run()
        start = time.perf_counter()
        fn(rng, cfg, hooks, run)
        reports.append(PropertyReport(pid, citation, run.trials, run.failures, time.perf_counter() - start))
    return reports
