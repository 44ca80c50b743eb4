"""Command-line interface.

Exit codes: 0 success, 1 a mathematically negative answer (not TN, not ITN,
failed verification, inconsistent table), 2 bad usage or malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import shlex
import sys

from . import battery
from .automorph import (
    InconsistentTableError,
    OracleError,
    SubprocessOracle,
    apply,
    extend_tp_automorphism,
    recover,
    verify_homomorphism,
)
from .classify import ClassLabel, classify_full, is_itn_fast, is_tp_fekete, whitney_perturb
from .factor import NotITNError, factorize, ldu, random_factorization, synthesize
from .serialize import (
    FormatError,
    certificate_to_json,
    factorization_from_json,
    factorization_to_json,
    load_matrix,
    matrix_to_json,
    scaled_to_json,
    shape_to_json,
    spec_from_json,
    spec_to_json,
    table_from_json,
    rat_from_json,
)
from .structure import block_membership, centralizer_shape, in_centralizer

OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Negative(Exception):
    """Carries a report for a mathematically negative outcome."""

    def __init__(self, message: str, payload=None):
        super().__init__(message)
        self.payload = payload


# -- input helpers -----------------------------------------------------------

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _json(path: str):
    text = _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(
            f"malformed JSON in {path} at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}"
        ) from None


def _matrix(path: str, fmt: str):
    if fmt == "csv":
        return load_matrix(_read(path), "csv")
    from .serialize import matrix_from_json

    return matrix_from_json(_json(path))


def _seed(args):
    env = os.environ.get("TOTPOS_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"TOTPOS_SEED must be an integer, got {env!r}") from None
    return args.seed


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


# -- subcommands -------------------------------------------------------------

def cmd_classify(args):
    A = _matrix(args.input, args.format)
    if args.method == "full":
        cert = classify_full(A)
        label = cert.label
        out = certificate_to_json(cert)
    elif args.method == "fekete":
        label = None
        out = {"tp": is_tp_fekete(A)}
    else:
        label = None
        out = {"itn": is_itn_fast(A)}
    if args.json:
        _emit(out)
    elif label is not None:
        print(label.value)
        if "witness" in out:
            w = out["witness"]
            print(f"witness rows={w['alpha']} cols={w['beta']} value={w['value']}")
    else:
        print(next(iter(out.values())))
    negative = label is ClassLabel.NOT_TN if label is not None else not next(iter(out.values()))
    return NEGATIVE if negative else OK


def cmd_factorize(args):
    A = _matrix(args.input, args.format)
    try:
        f = factorize(A)
    except NotITNError as exc:
        raise Negative(f"not ITN: {exc}") from None
    _emit(factorization_to_json(f))
    return OK


def cmd_synthesize(args):
    f = factorization_from_json(_json(args.input))
    _emit(matrix_to_json(synthesize(f)))
    return OK


def cmd_ldu(args):
    A = _matrix(args.input, args.format)
    try:
        L, D, U = ldu(A)
    except NotITNError as exc:
        raise Negative(f"not ITN: {exc}") from None
    _emit({"L": matrix_to_json(L), "D": matrix_to_json(D), "U": matrix_to_json(U)})
    return OK


def cmd_apply_aut(args):
    spec = spec_from_json(_json(args.spec))
    A = _matrix(args.input, args.format)
    if A.shape != (spec.n, spec.n):
        raise UsageError(f"spec is for n={spec.n}, input is {A.rows}x{A.cols}")
    if not is_itn_fast(A):
        raise Negative("input is not ITN; automorphisms act on ITN matrices only")
    _emit(scaled_to_json(apply(spec, A)))
    return OK


def cmd_verify_aut(args):
    spec = spec_from_json(_json(args.spec))
    n = spec.n if args.dim is None else args.dim
    if n != spec.n:
        raise UsageError(f"--dim {n} does not match the spec's n={spec.n}")
    report = verify_homomorphism(spec, args.trials, n, _seed(args))
    if args.json:
        _emit(report.to_json())
    else:
        status = "PASS" if report.passed else "FAIL"
        print(f"{status} homomorphism and class preservation, trials={report.trials}")
        if report.counterexample:
            print(json.dumps(report.counterexample, indent=2))
    return OK if report.passed else NEGATIVE


def cmd_recover_aut(args):
    table = table_from_json(_json(args.table))
    try:
        spec = recover(table)
    except InconsistentTableError as exc:
        raise Negative(f"inconsistent table: {exc}", {"index": exc.index, "reason": str(exc)}) from None
    _emit(spec_to_json(spec))
    return OK


def cmd_centralizer(args):
    D = _matrix(args.diag, args.format)
    try:
        shape = centralizer_shape(D)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.test is None:
        _emit(shape_to_json(shape))
        return OK
    X = _matrix(args.test, args.format)
    member = in_centralizer(D, X)
    out = {**shape_to_json(shape), "member": member, "predicted": block_membership(D, X)}
    if args.json:
        _emit(out)
    else:
        print(f"shape {list(shape.composition)}: {'member' if member else 'not a member'}")
    return OK if member else NEGATIVE


def cmd_perturb(args):
    A = _matrix(args.input, args.format)
    eps = rat_from_json(args.eps)
    if not is_itn_fast(A):
        raise Negative("input is not ITN")
    _emit(matrix_to_json(whitney_perturb(A, eps)))
    return OK


def cmd_extend(args):
    ref = _matrix(args.reference, args.format)
    X = _matrix(args.input, args.format)
    argv = shlex.split(args.oracle)
    if not argv:
        raise UsageError("--oracle needs a command")
    try:
        with SubprocessOracle(argv) as oracle:
            out = extend_tp_automorphism(oracle, ref, X, args.side)
    except OSError as exc:
        raise UsageError(f"cannot start oracle: {exc}") from None
    except OracleError as exc:
        raise Negative(f"oracle misbehaved: {exc}") from None
    _emit(scaled_to_json(out))
    return OK


def cmd_random(args):
    rng = random.Random(_seed(args))
    out = []
    for _ in range(args.count):
        f = random_factorization(args.dim, rng, args.strict)
        out.append(factorization_to_json(f) if args.factorization else matrix_to_json(synthesize(f)))
    _emit(out[0] if args.count == 1 else out)
    return OK


def cmd_check_all(args):
    dims = tuple(int(x) for x in args.dims.split(",")) if args.dims else tuple(range(2, args.cap + 1))
    only = args.only.split(",") if args.only else None
    try:
        cfg = battery.RunConfig(_seed(args), dims, args.trials, args.cap)
        reports = battery.check_all(cfg, args.mutant, only)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        print(battery.reports_to_json(reports, args.timings))
    else:
        for r in reports:
            line = r.line()
            if args.timings:
                line += f" elapsed={r.elapsed:.2f}s"
            print(line)
            for fail in r.failures[:1]:
                print("  counterexample: " + json.dumps(fail))
        bad = sum(not r.passed for r in reports)
        print(f"{len(reports) - bad}/{len(reports)} properties passed")
    return OK if all(r.passed for r in reports) else NEGATIVE


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="totpos", description="Exact total positivity toolkit.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json", help="matrix input format")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("classify", cmd_classify, "label a matrix TP / ITN_not_TP / TN_singular / NOT_TN")
    sp.add_argument("--input", required=True)
    sp.add_argument("--method", choices=("full", "fekete", "fast"), default="full")

    add("factorize", cmd_factorize, "bidiagonal factorization of an ITN matrix").add_argument("--input", required=True)
    add("synthesize", cmd_synthesize, "matrix from factorization parameters").add_argument("--input", required=True)
    add("ldu", cmd_ldu, "LDU decomposition of an ITN matrix").add_argument("--input", required=True)

    sp = add("apply-aut", cmd_apply_aut, "apply an automorphism spec to an ITN matrix")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--input", required=True)

    sp = add("verify-aut", cmd_verify_aut, "randomized homomorphism check of a spec")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--dim", type=int)
    sp.add_argument("--seed", type=int, default=0)

    add("recover-aut", cmd_recover_aut, "recover a spec from a generator image table").add_argument("--table", required=True)

    sp = add("centralizer", cmd_centralizer, "centralizer shape of a positive diagonal matrix")
    sp.add_argument("--diag", required=True)
    sp.add_argument("--test", help="matrix to test for membership")

    sp = add("perturb", cmd_perturb, "nearby TP matrix for an ITN input")
    sp.add_argument("--input", required=True)
    sp.add_argument("--eps", default="1/1000")

    sp = add("extend", cmd_extend, "extend an external TP map to an ITN input")
    sp.add_argument("--oracle", required=True, help="command speaking newline-delimited JSON")
    sp.add_argument("--reference", required=True, help="TP reference matrix")
    sp.add_argument("--input", required=True)
    sp.add_argument("--side", choices=("left", "right"), default="left")

    sp = add("random", cmd_random, "seeded random ITN matrices")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--strict", action="store_true", help="all parameters positive (TP output)")
    sp.add_argument("--factorization", action="store_true", help="emit parameters instead of matrices")

    sp = add("check-all", cmd_check_all, "run the property battery")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--dims", help="comma-separated list; default 2..cap")
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--cap", type=int, default=battery.DEFAULT_CAP)
    sp.add_argument("--mutant", choices=sorted(battery.MUTANTS))
    sp.add_argument("--only", help="comma-separated property ids")
    sp.add_argument("--timings", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if getattr(args, "count", 1) < 1 or getattr(args, "dim", 1) is not None and getattr(args, "dim", 1) < 1:
        print("error: counts and dimensions must be positive", file=sys.stderr)
        return USAGE
    try:
        return args.fn(args)
    except Negative as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.json and exc.payload is not None:
            _emit(exc.payload)
        return NEGATIVE
    except (UsageError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ValueError as exc:
        # shape mismatches, non-square input, bad parameter values
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
