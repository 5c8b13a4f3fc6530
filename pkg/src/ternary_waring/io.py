"""JSON file formats for forms and decompositions.

FormFile::

    {"vars": 3, "degree": 4,
     "terms": [{"exp": [4, 0, 0], "coeff": "1/2"},
               {"exp": [0, 2, 2], "coeff": [0.5, -1.0]}]}

Rational coefficients are strings ``"p/q"`` (or integers); complex ones are
``[re, im]`` pairs.  A form with any complex coefficient is read in the
float tier.

DecompositionFile::

    {"degree": 4, "vars": 3,
     "summands": [{"weight": [re, im], "linear": [[re, im], [re, im], [re, im]]}],
     "certificate": {...}}
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .forms import Form, WeightedDecomposition, monomial_index
from .linalg import Tier, promote


class FormatError(ValueError):
    """Malformed FormFile or DecompositionFile content."""


def _coeff_to_json(c, exact: bool):
    if exact:
        c = Fraction(c)
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    c = complex(c)
    return [c.real, c.imag]


def _coeff_from_json(c):
    if isinstance(c, bool):
        raise FormatError("boolean coefficient")
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        try:
            return Fraction(c.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad rational coefficient {c!r}") from exc
    if isinstance(c, float):
        return complex(c)
    if isinstance(c, (list, tuple)) and len(c) == 2 and all(
            isinstance(a, (int, float)) and not isinstance(a, bool) for a in c):
        return complex(float(c[0]), float(c[1]))
    raise FormatError(f"bad coefficient {c!r}")


def form_to_json(f: Form) -> dict:
    terms = [{"exp": list(e), "coeff": _coeff_to_json(c, f.is_exact)}
             for e, c in f.terms().items()]
    return {"vars": f.nvars, "degree": f.degree, "terms": terms}


def form_from_json(obj) -> Form:
    if not isinstance(obj, dict):
        raise FormatError("FormFile must be a JSON object")
    try:
        n, d, terms = obj["vars"], obj["degree"], obj["terms"]
    except KeyError as exc:
        raise FormatError(f"FormFile is missing {exc.args[0]!r}") from exc
    if n not in (2, 3) or isinstance(n, bool):
        raise FormatError("vars must be 2 or 3")
    if not isinstance(d, int) or isinstance(d, bool) or d < 0:
        raise FormatError("degree must be a nonnegative integer")
    if not isinstance(terms, list):
        raise FormatError("terms must be a list")
    parsed = {}
    for t in terms:
        try:
            exp = tuple(t["exp"])
            c = _coeff_from_json(t["coeff"])
        except (KeyError, TypeError) as exc:
            raise FormatError(f"bad term {t!r}") from exc
        if len(exp) != n or any(not isinstance(a, int) or a < 0 for a in exp):
            raise FormatError(f"bad exponent {list(exp)}")
        if sum(exp) != d:
            raise FormatError(f"exponent {list(exp)} does not sum to degree {d}")
        if exp in parsed:
            raise FormatError(f"duplicate exponent {list(exp)}")
        parsed[exp] = c
    exact = all(isinstance(c, Fraction) for c in parsed.values())
    tier = Tier.EXACT if exact else Tier.FLOAT
    f = Form.zero(n, d, tier=tier)
    coeffs = f.coeffs.copy()
    idx = monomial_index(n, d)
    for e, c in parsed.items():
        coeffs[idx[e]] = c if exact else complex(c)
    return Form(n, d, coeffs)


def form_hash(f: Form) -> str:
    blob = json.dumps(form_to_json(f), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def decomposition_to_json(dec: WeightedDecomposition, certificate=None) -> dict:
    obj = {
        "degree": dec.degree,
        "vars": dec.nvars,
        "summands": [{"weight": _pair(w), "linear": [_pair(a) for a in v]}
                     for w, v in zip(promote(dec.weights), promote(dec.points))],
    }
    if certificate is not None:
        obj["certificate"] = certificate.to_dict() if hasattr(certificate, "to_dict") \
            else dict(certificate)
    return obj


def decomposition_from_json(obj) -> tuple[WeightedDecomposition, dict | None]:
    if not isinstance(obj, dict):
        raise FormatError("DecompositionFile must be a JSON object")
    try:
        d = obj["degree"]
        summands = obj["summands"]
    except KeyError as exc:
        raise FormatError(f"DecompositionFile is missing {exc.args[0]!r}") from exc
    n = obj.get("vars")
    w, pts = [], []
    try:
        for s in summands:
            w.append(complex(*s["weight"]))
            pts.append([complex(*a) for a in s["linear"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError("bad summand") from exc
    if n is None:
        n = len(pts[0]) if pts else 3
    if any(len(p) != n for p in pts):
        raise FormatError("linear forms have inconsistent lengths")
    P = np.array(pts, dtype=np.complex128).reshape(len(pts), n)
    try:
        dec = WeightedDecomposition(d, np.array(w, dtype=np.complex128), P)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    return dec, obj.get("certificate")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def read_form(path) -> Form:
    return form_from_json(read_json(path))


def write_form(path, f: Form) -> None:
    write_json(path, form_to_json(f))
