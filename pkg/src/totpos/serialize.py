"""JSON (and CSV input) formats for matrices, certificates, factorizations,
automorphism specs, generator tables and centralizer shapes."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .exact import MinorIndex, RatMatrix, as_rat, rat_str


class FormatError(ValueError):
    """Input does not follow one of the documented formats."""


def rat_to_json(x: Fraction):
    return x.numerator if x.denominator == 1 else rat_str(x)


def rat_from_json(v) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise FormatError(f"rational must be an integer or a 'p/q' string, got {v!r}")
    try:
        return as_rat(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {v!r}: {exc}") from None


# -- matrices ---------------------------------------------------------------

def matrix_to_json(M: RatMatrix) -> dict:
    return {
        "rows": M.rows,
        "cols": M.cols,
        "entries": [[rat_to_json(x) for x in M.row(i)] for i in range(M.rows)],
    }


def matrix_from_json(obj) -> RatMatrix:
    if not isinstance(obj, dict) or "entries" not in obj:
        raise FormatError("matrix JSON needs 'rows', 'cols' and 'entries'")
    entries = obj["entries"]
    rows, cols = obj.get("rows"), obj.get("cols")
    if not isinstance(entries, list):
        raise FormatError("'entries' must be a list")
    if entries and all(isinstance(r, list) for r in entries):
        flat = [x for r in entries for x in r]
        if rows is None:
            rows = len(entries)
        if cols is None:
            cols = len(entries[0])
        if any(len(r) != cols for r in entries):
            raise FormatError("ragged 'entries' rows")
    else:
        flat = entries
    if rows is None or cols is None:
        raise FormatError("flat 'entries' need explicit 'rows' and 'cols'")
    if len(flat) != rows * cols:
        raise FormatError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(flat)}")
    return RatMatrix(rows, cols, tuple(rat_from_json(x) for x in flat))


def matrix_from_csv(text: str) -> RatMatrix:
    rows = [
        [cell.strip() for cell in r]
        for r in csv.reader(io.StringIO(text))
        if r and any(c.strip() for c in r)
    ]
    if not rows:
        raise FormatError("empty CSV matrix")
    if any(len(r) != len(rows[0]) for r in rows):
        raise FormatError("ragged CSV rows")
    return RatMatrix.from_rows([[rat_from_json(c) for c in r] for r in rows])


def load_matrix(text: str, fmt: str = "json") -> RatMatrix:
    if fmt == "csv":
        return matrix_from_csv(text)
    return matrix_from_json(json.loads(text))


# -- certificates -----------------------------------------------------------

def certificate_to_json(cert) -> dict:
    out = {"label": cert.label.value}
    if cert.witness is not None:
        out["witness"] = {
            "alpha": list(cert.witness.alpha),
            "beta": list(cert.witness.beta),
            "value": rat_str(cert.value),
        }
    return out


def certificate_from_json(obj):
    from .classify import Certificate, ClassLabel

    try:
        label = ClassLabel(obj["label"])
    except (KeyError, ValueError, TypeError):
        raise FormatError(f"bad certificate label in {obj!r}") from None
    w = obj.get("witness")
    if w is None:
        return Certificate(label)
    return Certificate(label, MinorIndex(tuple(w["alpha"]), tuple(w["beta"])), rat_from_json(w["value"]))


# -- factorizations ---------------------------------------------------------

def factorization_to_json(f) -> dict:
    return {
        "n": f.n,
        "w": [{"j": j, "k": k, "value": rat_str(v)} for (j, k), v in f.w.items()],
        "w_prime": [{"j": j, "k": k1, "value": rat_str(v)} for (j, k1), v in f.w_prime.items()],
        "d": [rat_str(x) for x in f.d],
    }


def factorization_from_json(obj):
    """``w_prime`` items carry ``k`` = the second subscript ``k+1``."""
    from .factor import BidiagonalFactorization

    try:
        return BidiagonalFactorization(
            int(obj["n"]),
            {(int(e["j"]), int(e["k"])): rat_from_json(e["value"]) for e in obj.get("w", [])},
            {(int(e["j"]), int(e["k"])): rat_from_json(e["value"]) for e in obj.get("w_prime", [])},
            tuple(rat_from_json(x) for x in obj["d"]),
        )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad factorization JSON: missing {exc}") from None


# -- radicals and scaled matrices ------------------------------------------

def radical_to_json(s) -> dict:
    return {
        "rational": rat_str(s.rational),
        "factors": {str(p): rat_str(e) for p, e in s.factors},
    }


def radical_from_json(obj):
    """``{"rational": "p/q", "factors": {prime: exponent}}``; both keys optional."""
    from .radical import RadicalScalar, factor_int

    if not isinstance(obj, dict):
        raise FormatError("radical scalar must be a JSON object")
    try:
        factors = tuple((int(p), rat_from_json(e)) for p, e in obj.get("factors", {}).items())
        for p, _ in factors:
            if p < 2 or factor_int(p) != ((p, 1),):
                raise ValueError(f"base {p} is not prime")
        return RadicalScalar(rat_from_json(obj.get("rational", 1)), factors)
    except (ValueError, AttributeError) as exc:
        raise FormatError(f"bad radical scalar {obj!r}: {exc}") from None


def scaled_to_json(S) -> dict:
    return {"scale": radical_to_json(S.scale), "body": matrix_to_json(S.body)}


def scaled_from_json(obj):
    from .radical import ScaledMatrix

    return ScaledMatrix.of(matrix_from_json(obj["body"]), radical_from_json(obj.get("scale", {})))


# -- automorphisms ----------------------------------------------------------

def spec_to_json(spec) -> dict:
    return {
        "n": spec.n,
        "orientation": spec.orientation,
        "r": [rat_str(x) for x in spec.r],
        "mu_exponent": rat_str(spec.mu_exponent),
    }


def spec_from_json(obj):
    from .automorph import AutomorphismSpec

    try:
        return AutomorphismSpec(
            int(obj["n"]),
            obj["orientation"],
            tuple(rat_from_json(x) for x in obj["r"]),
            rat_from_json(obj["mu_exponent"]),
        )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad automorphism spec JSON: missing {exc}") from None


def generator_to_json(item) -> dict:
    from .factor import DiagonalFactor

    if isinstance(item, DiagonalFactor):
        return {"kind": "diagonal", "d": [rat_to_json(x) for x in item.d]}
    return {"kind": item.kind, "n": item.n, "k": item.k, "weight": rat_to_json(item.weight)}


def generator_from_json(obj):
    from .factor import DiagonalFactor, ElementaryBidiagonal

    kind = obj.get("kind")
    if kind == "diagonal":
        return DiagonalFactor(tuple(rat_from_json(x) for x in obj["d"]))
    if kind in ("lower", "upper"):
        return ElementaryBidiagonal(int(obj["n"]), kind, int(obj["k"]), rat_from_json(obj.get("weight", 1)))
    raise FormatError(f"unknown generator kind {kind!r}")


def table_to_json(table) -> dict:
    return {
        "n": table.n,
        "entries": [
            {"generator": generator_to_json(g), "image": scaled_to_json(img)}
            for g, img in table.entries
        ],
    }


def table_from_json(obj):
    from .automorph import GeneratorImageTable

    return GeneratorImageTable(
        int(obj["n"]),
        tuple(
            (generator_from_json(e["generator"]), scaled_from_json(e["image"]))
            for e in obj["entries"]
        ),
    )


def shape_to_json(shape) -> dict:
    return {"composition": list(shape.composition)}
