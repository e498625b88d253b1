"""JSON documents for forms and reports, plus the schemas they must satisfy.

A form document stores each ``p_i`` and ``G`` as a list of terms
``{"exp": [e_1, ..., e_m], "coeff": "a/b"}`` over the U-variables.
Coefficients are strings so that no float ever touches the data.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .forms import PerazzoForm
from .linalg import Field
from .poly import Polynomial, VarLayout

FORMAT = "perazzo-form"
VERSION = 1


class DocumentError(ValueError):
    """Malformed input document."""


def _terms(q: Polynomial, field: Field) -> list[dict]:
    return [{"exp": list(e), "coeff": field.to_str(c)} for e, c in sorted(q.terms.items(), reverse=True)]


def form_to_dict(f: PerazzoForm) -> dict:
    return {
        "format": FORMAT,
        "version": VERSION,
        "n": f.n,
        "m": f.m,
        "d": f.d,
        "field": f.field.to_dict(),
        "p": [_terms(q, f.field) for q in f.p],
        "G": _terms(f.G, f.field),
        "meta": {k: v for k, v in sorted(f.meta.items()) if isinstance(v, (str, int, bool)) or v is None},
    }


def dumps_form(f: PerazzoForm) -> str:
    return json.dumps(form_to_dict(f), indent=2) + "\n"


def _coeff(raw, field: Field):
    if not isinstance(raw, str):
        raise DocumentError(f"coefficient {raw!r} must be a string")
    try:
        return field(Fraction(raw.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad coefficient {raw!r}: {exc}") from None


def _poly(raw, U: VarLayout, field: Field, what: str) -> Polynomial:
    if not isinstance(raw, list):
        raise DocumentError(f"{what} must be a list of terms")
    terms: dict = {}
    for t in raw:
        if not isinstance(t, dict) or "exp" not in t or "coeff" not in t:
            raise DocumentError(f"{what}: each term needs 'exp' and 'coeff'")
        exp = t["exp"]
        if (not isinstance(exp, list) or len(exp) != U.total
                or not all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in exp)):
            raise DocumentError(f"{what}: exponent {exp!r} is not a list of {U.total} nonnegative integers")
        e = tuple(exp)
        if e in terms:
            raise DocumentError(f"{what}: repeated exponent {exp}")
        terms[e] = _coeff(t["coeff"], field)
    try:
        return Polynomial(U, terms, field)
    except ValueError as exc:
        raise DocumentError(f"{what}: {exc}") from None


def form_from_dict(data: dict) -> PerazzoForm:
    """Parse a form document; the result is not validated mathematically."""
    if not isinstance(data, dict):
        raise DocumentError("form document must be a JSON object")
    if data.get("format", FORMAT) != FORMAT:
        raise DocumentError(f"unexpected format {data.get('format')!r}")
    try:
        n, m, d = (data[k] for k in ("n", "m", "d"))
    except KeyError as exc:
        raise DocumentError(f"missing field {exc}") from None
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in (n, m, d)):
        raise DocumentError("n, m, d must be integers")
    if m < 1 or n < 0 or d < 1:
        raise DocumentError(f"(n, m, d) = ({n}, {m}, {d}) out of range")
    try:
        field = Field.from_dict(data.get("field", {"kind": "prime"}))
    except (ValueError, TypeError) as exc:
        raise DocumentError(f"bad field: {exc}") from None
    U = VarLayout(-1, m)
    raw_p = data.get("p")
    if not isinstance(raw_p, list):
        raise DocumentError("'p' must be a list of term lists")
    p = tuple(_poly(t, U, field, f"p[{i}]") for i, t in enumerate(raw_p))
    G = _poly(data.get("G", []), U, field, "G")
    meta = data.get("meta", {})
    if not isinstance(meta, dict):
        raise DocumentError("'meta' must be an object")
    return PerazzoForm(n, m, d, p, G, field, dict(meta))


def loads_form(text: str) -> PerazzoForm:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from None
    return form_from_dict(data)


@lru_cache(maxsize=None)
def schema(name: str) -> dict:
    """Shipped JSON schema, e.g. ``schema("form")``."""
    path = resources.files("perazzo") / "schemas" / f"{name}.schema.json"
    return json.loads(path.read_text(encoding="utf-8"))


SCHEMA_NAMES = ("form", "extremes", "hilbert", "lefschetz", "hessian", "betti", "verify", "validation")
