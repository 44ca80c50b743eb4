"""The twelve acceptance criteria at their stated sample counts.

Each test prints one PASS/FAIL line (shown even under output capture).
Run directly with ``python3 tests/test_acceptance.py`` for just the summary.
"""

import json
import random
import time
from fractions import Fraction

import pytest

from totpos.automorph import (
    InconsistentTableError,
    apply,
    elementary_site,
    extend_tp_automorphism,
    random_spec,
    recover,
    tabulate,
    verify_homomorphism,
)
from totpos.battery import RunConfig, check_all
from totpos.classify import (
    ClassLabel,
    classify_full,
    is_itn,
    is_itn_fast,
    is_tp,
    is_tp_fekete,
    principal_minors_positive,
    whitney_perturb,
)
from totpos.exact import RatMatrix, cauchy_binet_check, direct_sum
from totpos.factor import factorize, random_factorization, random_itn, synthesize
from totpos.radical import RadicalScalar, ScaledMatrix
from totpos.structure import (
    block_membership,
    centralizer_shape,
    ck_commute_expected,
    find_noncommuting_ck_pair,
    in_centralizer,
    maximal_subgroup_witness,
    random_ck_element,
    random_nondiagonal_2x2,
    two_by_two_conjugation_test,
)

SEED = 20240601


def rng_for(tag):
    return random.Random(f"{SEED}:{tag}")


def report(capsys, number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title} ({detail})"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    return ok


# 1 ---------------------------------------------------------------------------

def criterion_1(capsys=None):
    rng = rng_for(1)
    start = time.perf_counter()
    failures = 0
    for n in range(2, 7):
        for _ in range(500):
            A = random_itn(n, rng, rng.random() < 0.5)
            failures += synthesize(factorize(A)) != A
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 60
    return report(capsys, 1, "factorization round trip, 500 per n in 2..6",
                  ok, f"{failures} failures, {elapsed:.1f}s")


# 2 ---------------------------------------------------------------------------

def criterion_2(capsys=None):
    rng = rng_for(2)
    failures = 0
    seen = {True: 0, False: 0}
    for n in range(2, 6):
        for _ in range(200):
            f = random_factorization(n, rng, strict_tp=rng.random() < 0.5)
            tp = is_tp(synthesize(f))
            failures += tp != f.all_positive()
            seen[f.all_positive()] += 1
    ok = failures == 0 and min(seen.values()) > 0
    return report(capsys, 2, "TP iff all parameters positive, 200 per n in 2..5",
                  ok, f"{failures} failures, {seen[True]} positive / {seen[False]} with zeros")


# 3 ---------------------------------------------------------------------------

def mixed_sample(n, rng):
    """ITN, TP, singular TN, and perturbed (often not TN) matrices."""
    kind = rng.randrange(4)
    A = random_itn(n, rng, strict_tp=kind == 1)
    rows = A.to_rows()
    if kind == 2:
        i = rng.randrange(n - 1)
        rows[i + 1] = [x * 2 for x in rows[i]]
    elif kind == 3:
        i, j = rng.randrange(n), rng.randrange(n)
        rows[i][j] += Fraction(rng.choice([-1, 1]) * rng.randint(1, 5), rng.randint(1, 5))
    return RatMatrix.from_rows(rows)


def criterion_3(capsys=None):
    rng = rng_for(3)
    bad = 0
    labels = {}
    for n in range(2, 6):
        for _ in range(500):
            A = mixed_sample(n, rng)
            label = classify_full(A).label
            labels[label] = labels.get(label, 0) + 1
            bad += is_tp_fekete(A) != (label is ClassLabel.TP)
            bad += is_itn_fast(A) != label.is_itn
    ok = bad == 0 and len(labels) == 4
    mix = ", ".join(f"{k.value}={v}" for k, v in sorted(labels.items(), key=lambda kv: kv[0].value))
    return report(capsys, 3, "fast classifiers agree with full enumeration, 500 per n in 2..5",
                  ok, f"{bad} disagreements; {mix}")


# 4 ---------------------------------------------------------------------------

def criterion_4(capsys=None):
    rng = rng_for(4)
    closure_fail = 0
    for n in range(2, 6):
        for _ in range(200):
            A = random_itn(n, rng, strict_tp=True)
            X = random_itn(n, rng)
            closure_fail += not (is_tp(A @ X) and is_tp(X @ A))
    cb_fail = 0
    for _ in range(200):
        m = rng.randint(1, 4)
        k = rng.randint(m, 6)
        A = RatMatrix.from_rows([[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(k)] for _ in range(m)])
        B = RatMatrix.from_rows([[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(m)] for _ in range(k)])
        cb_fail += not cauchy_binet_check(A, B).equal
    ok = closure_fail == 0 and cb_fail == 0
    return report(capsys, 4, "TP*ITN closure (200 per n in 2..5) and Cauchy-Binet (200 pairs)",
                  ok, f"{closure_fail} closure failures, {cb_fail} Cauchy-Binet failures")


# 5 ---------------------------------------------------------------------------

def criterion_5(capsys=None):
    rng = rng_for(5)
    failures = 0
    for i in range(2000):
        A = random_itn(1 + i % 6, rng, rng.random() < 0.3)
        failures += not principal_minors_positive(A)[0]
    return report(capsys, 5, "principal minors positive on 2000 ITN samples", failures == 0, f"{failures} failures")


# 6 ---------------------------------------------------------------------------

def criterion_6(capsys=None):
    rng = rng_for(6)
    start = time.perf_counter()
    failures = []
    for i in range(100):
        spec = random_spec(2 + i % 4, rng)
        rep = verify_homomorphism(spec, 200, seed=rng.getrandbits(32))
        if not rep.passed:
            failures.append(rep.counterexample)
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 300
    return report(capsys, 6, "automorphism formula is multiplicative and class preserving, 100 specs x 200 pairs",
                  ok, f"{len(failures)} failing specs, {elapsed:.1f}s")


# 7 ---------------------------------------------------------------------------

def predicted_site(spec, kind, k):
    if spec.orientation == "diagonal":
        return kind, k
    return ("lower" if kind == "upper" else "upper"), spec.n - k


def criterion_7(capsys=None):
    from totpos.factor import ElementaryBidiagonal

    rng = rng_for(7)
    failures = 0
    checked = 0
    for i in range(100):
        spec = random_spec(2 + i % 4, rng)
        n = spec.n
        for k in range(1, n):
            for kind in ("upper", "lower"):
                img = apply(spec, ElementaryBidiagonal(n, kind, k, Fraction(rng.randint(1, 9), rng.randint(1, 9))).matrix())
                site = elementary_site(img.body)
                checked += 1
                failures += img.scale != RadicalScalar() or site is None or site[:2] != predicted_site(spec, kind, k)
    return report(capsys, 7, "elementary generators map to predicted sites, 100 specs",
                  failures == 0, f"{failures} failures over {checked} generators")


# 8 ---------------------------------------------------------------------------

def criterion_8(capsys=None):
    rng = rng_for(8)
    misses = 0
    unnamed = 0
    for n in range(2, 6):
        for _ in range(100):
            spec = random_spec(n, rng)
            table = tabulate(spec)
            if recover(table) != spec.normalized():
                misses += 1
            idx = rng.randrange(len(table.entries))
            img = table.entries[idx][1]
            if rng.random() < 0.5:
                wrong = ScaledMatrix(img.scale * Fraction(3, 2), img.body)
            else:
                rows = img.body.to_rows()
                rows[rng.randrange(n)][rng.randrange(n)] += Fraction(1, 5)
                wrong = ScaledMatrix.of(RatMatrix.from_rows(rows), img.scale)
            try:
                recover(table.replace_image(idx, wrong))
                misses += 1
            except InconsistentTableError as exc:
                unnamed += exc.index is None
    ok = misses == 0 and unnamed == 0
    return report(capsys, 8, "recovery from generator tables, 100 specs per n in 2..5",
                  ok, f"{misses} misses, {unnamed} rejections without a named entry")


# 9 ---------------------------------------------------------------------------

def criterion_9(capsys=None):
    rng = rng_for(9)
    failures = 0
    for i in range(200):
        n = 2 + i % 4
        spec = random_spec(n, rng)
        oracle = lambda M, spec=spec: apply(spec, M)
        X = random_itn(n, rng)
        want = apply(spec, X)
        refs = [random_itn(n, rng, strict_tp=True) for _ in range(3)]
        got = {extend_tp_automorphism(oracle, r, X, side) for r in refs for side in ("left", "right")}
        failures += got != {want}
    return report(capsys, 9, "TP extension equals the formula, 200 inputs x 3 references",
                  failures == 0, f"{failures} failures")


# 10 --------------------------------------------------------------------------

def diag_with_ties(n, rng):
    d = [Fraction(rng.randint(1, 4))]
    for _ in range(n - 1):
        d.append(d[-1] if rng.random() < 0.45 else Fraction(rng.randint(1, 4)))
    return RatMatrix.diag(d)


def block_candidate(D, rng):
    n = D.rows
    roll = rng.random()
    if roll < 0.2:
        return random_itn(n, rng)
    blocks = []
    for size in centralizer_shape(D).composition:
        if rng.random() < 0.9:
            blocks.append(random_itn(size, rng))
        else:
            blocks.append(RatMatrix.from_rows([[Fraction(rng.randint(-2, 3)) for _ in range(size)] for _ in range(size)]))
    X = direct_sum(*blocks)
    if roll < 0.4:
        rows = X.to_rows()
        i, j = rng.randrange(n), rng.randrange(n)
        rows[i][j] += Fraction(1, rng.randint(1, 30))
        X = RatMatrix.from_rows(rows)
    return X


def sampled_conjugation(A, rng, count=50):
    for _ in range(count):
        D = RatMatrix.diag([Fraction(rng.randint(1, 20), rng.randint(1, 20)) for _ in range(2)])
        if not in_centralizer(A, D @ A @ D.inverse()):
            return False
    return True


def special_2x2(rng):
    if rng.random() < 0.5:
        return random_nondiagonal_2x2(rng)
    a, b = Fraction(rng.randint(1, 9), rng.randint(1, 9)), Fraction(rng.randint(1, 9), rng.randint(1, 9))
    return RatMatrix.from_rows([[a, b], [0, a]] if rng.random() < 0.5 else [[a, 0], [b, a]])


def criterion_10(capsys=None):
    rng = rng_for(10)
    block_bad = members = 0
    for n in range(3, 7):
        for _ in range(1000):
            D = diag_with_ties(n, rng)
            X = block_candidate(D, rng)
            truth = in_centralizer(D, X)
            members += truth
            block_bad += block_membership(D, X) != truth

    sub_bad = sub_checked = 0
    for i in range(1000):
        A = random_itn(2 + i % 5, rng)
        if A.is_diagonal():
            continue
        sub_checked += 1
        try:
            (r, c), v = maximal_subgroup_witness(A)
            sub_bad += not (v < 0 and A.inverse()[r - 1, c - 1] == v)
        except Exception:
            sub_bad += 1

    ck_bad = 0
    for n in range(4, 7):
        for i in range(1, n):
            for j in range(1, n):
                found = find_noncommuting_ck_pair(n, i, j, rng, budget=50)
                ck_bad += (found is None) != ck_commute_expected(n, i, j)
                if ck_commute_expected(n, i, j):
                    P, Q = random_ck_element(n, i, rng).matrix(), random_ck_element(n, j, rng).matrix()
                    ck_bad += P @ Q != Q @ P

    two_bad = 0
    for _ in range(200):
        A = special_2x2(rng)
        two_bad += two_by_two_conjugation_test(A) != sampled_conjugation(A, rng)

    ok = block_bad == sub_bad == ck_bad == two_bad == 0
    detail = (f"block {block_bad}/4000 wrong ({members} members), max-subgroup {sub_bad}/{sub_checked}, "
              f"C_k pattern {ck_bad}, 2x2 conjugation {two_bad}/200")
    return report(capsys, 10, "structure lemmas", ok, detail)


# 11 --------------------------------------------------------------------------

def criterion_11(capsys=None):
    rng = rng_for(11)
    eps = Fraction(1, 1000)
    failures = 0
    for i in range(100):
        A = random_itn(2 + i % 4, rng)
        B = whitney_perturb(A, eps)
        failures += not (is_tp(B) and B.max_abs_diff(A) < eps and is_itn(A))
    return report(capsys, 11, "TP perturbation within 1/1000 of 100 ITN inputs", failures == 0, f"{failures} failures")


# 12 --------------------------------------------------------------------------

def criterion_12(capsys=None):
    cfg = RunConfig(seed=42, dims=(2, 3, 4, 5), trials=5)
    caught = {}
    for mutant in ("transpose", "drop-scale", "synth-order"):
        failing = [r for r in check_all(cfg, mutant=mutant) if not r.passed]
        serialized = all(json.loads(json.dumps(r.failures[0])) for r in failing)
        caught[mutant] = [r.id for r in failing] if failing and serialized else []
    ok = all(caught.values())
    detail = "; ".join(f"{m}: {', '.join(ids) or 'NOT CAUGHT'}" for m, ids in caught.items())
    return report(capsys, 12, "mutation sensitivity", ok, detail)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


@pytest.mark.slow
@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 13)])
def test_criterion(criterion, capsys):
    assert criterion(capsys)


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed")
