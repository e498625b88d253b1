"""Perazzo forms ``F = X_0 p_0 + ... + X_n p_n + G``.

The ``p_i`` (degree ``d - 1``) and ``G`` (degree ``d`` or zero) live in the
U-variables only.  Algebraic dependence of the ``p_i`` is never computed: it is
automatic from ``n + 1 > m``, which :func:`parameter_violations` enforces via
``n >= m``.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Sequence

from .linalg import DEFAULT_FIELD, Field, rank
from .poly import Polynomial, VarLayout, coeff_matrix, monomials, random_form

MAX_RETRIES = 16


class PreconditionError(ValueError):
    """A mathematical hypothesis of an operation does not hold."""


class PerazzoError(PreconditionError):
    def __init__(self, message: str, report: "ValidationReport | None" = None):
        super().__init__(message)
        self.report = report


class IndependenceLost(PerazzoError):
    """The contracted ``p_i`` are linearly dependent for this linear form."""


class RetryExhausted(PerazzoError):
    pass


def derived_rng(seed, attempt: int = 0, tag: str = "") -> random.Random:
    """Reproducible RNG for ``(seed, attempt)``; str seeding is hash-stable."""
    return random.Random(f"{tag}:{seed}:{attempt}")


def parameter_violations(n: int, m: int, d: int) -> list[str]:
    out = []
    if m < 2:
        out.append(f"m={m} < 2")
    if n < m:
        out.append(f"n={n} < m={m}")
    if d < 2:
        out.append(f"d={d} < 2")
    elif n + 1 > comb(d + m - 2, m - 1):
        out.append(f"n+1={n + 1} exceeds C(d+m-2, m-1)={comb(d + m - 2, m - 1)}")
    return out


def check_parameters(n: int, m: int, d: int) -> None:
    bad = parameter_violations(n, m, d)
    if bad:
        raise PreconditionError(f"invalid (n, m, d) = ({n}, {m}, {d}): " + "; ".join(bad))


def is_full(n: int, m: int, d: int) -> bool:
    return n + 1 == comb(d + m - 2, m - 1)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[str, ...]
    is_full_perazzo: bool

    def __str__(self):
        if self.valid:
            return "valid" + (" (full Perazzo)" if self.is_full_perazzo else "")
        return "invalid: " + "; ".join(self.violations)


@dataclass(frozen=True, eq=False)
class PerazzoForm:
    n: int
    m: int
    d: int
    p: tuple[Polynomial, ...]
    G: Polynomial
    field: Field = DEFAULT_FIELD
    meta: dict = dc_field(default_factory=dict, compare=False)

    @property
    def layout(self) -> VarLayout:
        return VarLayout(self.n, self.m)

    @property
    def u_layout(self) -> VarLayout:
        return VarLayout(-1, self.m)

    def __eq__(self, other):
        if not isinstance(other, PerazzoForm):
            return NotImplemented
        return (self.n, self.m, self.d, self.p, self.G, self.field) == (
            other.n, other.m, other.d, other.p, other.G, other.field)

    def __hash__(self):
        return hash((self.n, self.m, self.d, self.p, self.G))

    def __repr__(self):
        return f"PerazzoForm(n={self.n}, m={self.m}, d={self.d}, F={assemble(self, check=False)!r})"


def validate(f: PerazzoForm) -> ValidationReport:
    bad = parameter_violations(f.n, f.m, f.d)
    U = f.u_layout
    if len(f.p) != f.n + 1:
        bad.append(f"expected {f.n + 1} polynomials p_i, got {len(f.p)}")
    for i, q in enumerate(f.p):
        if q.layout != U:
            bad.append(f"p_{i} is not a polynomial in U_1..U_{f.m}")
        elif q.is_zero():
            bad.append(f"p_{i} is zero")
        elif q.degree != f.d - 1:
            bad.append(f"p_{i} has degree {q.degree}, expected {f.d - 1}")
    if f.G.layout != U:
        bad.append("G is not a polynomial in the U-variables")
    elif not f.G.is_zero() and f.G.degree != f.d:
        bad.append(f"G has degree {f.G.degree}, expected {f.d} or zero")
    if not bad:
        r = rank(coeff_matrix(f.p, f.d - 1, layout=U, field=f.field))
        if r != f.n + 1:
            bad.append(f"p_0..p_{f.n} are linearly dependent (rank {r} < {f.n + 1})")
    full = not bad and is_full(f.n, f.m, f.d)
    return ValidationReport(not bad, tuple(bad), full)


def assemble(f: PerazzoForm, check: bool = True) -> Polynomial:
    """The dual generator ``F`` as a polynomial in all ``n + m + 1`` variables."""
    if check:
        report = validate(f)
        if not report.valid:
            raise PerazzoError(str(report), report)
    layout = f.layout
    nx = layout.nx
    terms = {}
    for i, q in enumerate(f.p):
        unit = tuple(1 if k == i else 0 for k in range(nx))
        for e, c in q.terms.items():
            terms[unit + e] = c
    zx = (0,) * nx
    for e, c in f.G.terms.items():
        terms[zx + e] = c
    return Polynomial(layout, terms, f.field, _trusted=True)


def from_polynomial(F: Polynomial, n: int, m: int) -> PerazzoForm:
    """Split an assembled form back into its ``p_i`` and ``G``."""
    layout = VarLayout(n, m)
    if F.layout != layout:
        raise ValueError("layout mismatch")
    nx = layout.nx
    U = layout.u_layout
    ps = [dict() for _ in range(nx)]
    g = {}
    for e, c in F.terms.items():
        xs = e[:nx]
        if sum(xs) == 0:
            g[e[nx:]] = c
        elif sum(xs) == 1:
            ps[xs.index(1)][e[nx:]] = c
        else:
            raise PerazzoError("form is not linear in the X-variables")
    d = F.degree or 0
    return PerazzoForm(n, m, d, tuple(Polynomial(U, t, F.field, _trusted=True) for t in ps),
                       Polynomial(U, g, F.field, _trusted=True), F.field)


# -- generators ---------------------------------------------------------------

class Canonical(enum.Enum):
    """The three minimal-Hilbert-function normal forms in five variables."""

    I = "i"
    II = "ii"
    III = "iii"


def _u_monomial(U: VarLayout, exps, field: Field) -> Polynomial:
    return Polynomial(U, {tuple(exps): field.one}, field, _trusted=True)


def gen_canonical(kind: Canonical | str, d: int, lam=None, seed=0, field: Field = DEFAULT_FIELD) -> PerazzoForm:
    kind = Canonical(kind) if not isinstance(kind, Canonical) else kind
    if d < 5:
        raise PreconditionError(f"canonical forms are classified for d >= 5 only, got d={d}")
    U = VarLayout(-1, 2)
    u, v = Polynomial.var(U, 0, field), Polynomial.var(U, 1, field)
    meta = {"generator": f"canonical-{kind.value}", "seed": seed}
    if kind is Canonical.I:
        p = (_u_monomial(U, (d - 1, 0), field), _u_monomial(U, (d - 2, 1), field),
             _u_monomial(U, (d - 3, 2), field))
    elif kind is Canonical.II:
        p = (_u_monomial(U, (d - 1, 0), field), _u_monomial(U, (d - 2, 1), field),
             _u_monomial(U, (0, d - 1), field))
    else:
        if lam is None:
            lam = field.random_nonzero(derived_rng(seed, 0, "lambda"))
        lam = field(lam)
        if lam == 0:
            raise PreconditionError("case (iii) needs a nonzero lambda")
        meta["lambda"] = field.to_str(lam)
        p = (_u_monomial(U, (d - 1, 0), field), (u + v.scale(lam)) ** (d - 1),
             _u_monomial(U, (0, d - 1), field))
    return PerazzoForm(2, 2, d, p, Polynomial.zero(U, field), field, meta)


def _random_linear_u(U: VarLayout, field: Field, rng) -> Polynomial:
    return Polynomial.linear_form(U, [field.random(rng) for _ in range(U.total)], field)


def _resample(n, m, d, seed, field, tag, build) -> PerazzoForm:
    check_parameters(n, m, d)
    for attempt in range(MAX_RETRIES):
        f = build(derived_rng(seed, attempt, tag))
        if validate(f).valid:
            f.meta.update({"generator": tag, "seed": seed, "attempt": attempt})
            return f
    raise RetryExhausted(f"no independent sample for ({n}, {m}, {d}) after {MAX_RETRIES} attempts")


def gen_min(n: int, m: int, d: int, seed=0, field: Field = DEFAULT_FIELD) -> PerazzoForm:
    """``sum X_i L_i^(d-1)`` for random linear forms ``L_i`` in the U-variables."""
    U = VarLayout(-1, m)

    def build(rng):
        p = tuple(_random_linear_u(U, field, rng) ** (d - 1) for _ in range(n + 1))
        return PerazzoForm(n, m, d, p, Polynomial.zero(U, field), field, {})

    return _resample(n, m, d, seed, field, "min", build)


def gen_general(n: int, m: int, d: int, with_G: bool = True, seed=0, field: Field = DEFAULT_FIELD) -> PerazzoForm:
    """All coefficients of the ``p_i`` (and ``G``) independent and random."""
    U = VarLayout(-1, m)

    def build(rng):
        p = tuple(random_form(U, d - 1, field, rng) for _ in range(n + 1))
        G = random_form(U, d, field, rng) if with_G else Polynomial.zero(U, field)
        return PerazzoForm(n, m, d, p, G, field, {})

    return _resample(n, m, d, seed, field, "general" if with_G else "general-noG", build)


def gen_mixed(n: int, m: int, d: int, seed=0, field: Field = DEFAULT_FIELD) -> PerazzoForm:
    """Each ``p_i`` is independently a power of a linear form, a monomial,
    a binomial or a general form; ``G`` is zero or general.

    Lands on intermediate h-vectors far more often than :func:`gen_min` or
    :func:`gen_general`.
    """
    U = VarLayout(-1, m)
    mons = monomials(m, d - 1)

    def one(rng):
        kind = rng.randrange(4)
        if kind == 0:
            return _random_linear_u(U, field, rng) ** (d - 1)
        if kind == 1:
            return _u_monomial(U, rng.choice(mons), field)
        if kind == 2:
            a, b = rng.sample(range(len(mons)), 2) if len(mons) > 1 else (0, 0)
            return Polynomial(U, {mons[a]: field.one, mons[b]: field.random_nonzero(rng)}, field)
        return random_form(U, d - 1, field, rng)

    def build(rng):
        p = tuple(one(rng) for _ in range(n + 1))
        G = random_form(U, d, field, rng) if rng.random() < 0.5 else Polynomial.zero(U, field)
        return PerazzoForm(n, m, d, p, G, field, {})

    return _resample(n, m, d, seed, field, "mixed", build)


def contract_linear(f: PerazzoForm, ell: Sequence) -> PerazzoForm:
    """``l o F`` for ``l = a_0 x_0 + ... + a_n x_n + b_1 u_1 + ... + b_m u_m``.

    Returns the degree ``d - 1`` form with ``p~_i = (b . grad) p_i`` and
    G-part ``a_0 p_0 + ... + a_n p_n + (b . grad) G``.
    """
    F = f.field
    ell = [F(c) for c in ell]
    if len(ell) != f.n + 1 + f.m:
        raise ValueError(f"linear form needs {f.n + 1 + f.m} coefficients")
    if all(c == 0 for c in ell):
        raise PreconditionError("linear form is zero")
    bound = comb(f.d + f.m - 3, f.m - 1)
    if f.n + 1 > bound:
        raise PreconditionError(f"n+1={f.n + 1} exceeds C(d+m-3, m-1)={bound}")
    a, b = ell[: f.n + 1], ell[f.n + 1:]
    U = f.u_layout

    def directional(q: Polynomial) -> Polynomial:
        out = Polynomial.zero(U, F)
        for j, bj in enumerate(b):
            if bj != 0:
                out = out + q.differentiate(j).scale(bj)
        return out

    new_p = tuple(directional(q) for q in f.p)
    new_G = directional(f.G)
    for ai, q in zip(a, f.p):
        if ai != 0:
            new_G = new_G + q.scale(ai)
    g = PerazzoForm(f.n, f.m, f.d - 1, new_p, new_G, F, {"contracted_from": f.meta.get("generator")})
    report = validate(g)
    if not report.valid:
        raise IndependenceLost("contracted polynomials p~_i are linearly dependent", report)
    return g
