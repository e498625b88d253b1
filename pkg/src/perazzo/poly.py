"""Homogeneous polynomials in the split variable set ``X_0..X_n | U_1..U_m``.

A polynomial is a sparse map from exponent tuples to nonzero field elements.
The dual ring acts by genuine differentiation: ``x_i`` acts as d/dX_i, so
``u^a v^b`` applied to ``U^c V^e`` gives ``c!/(c-a)! * e!/(e-b)! U^(c-a) V^(e-b)``.

Monomials are ordered graded-lexicographically with
``x_0 > ... > x_n > u_1 > ... > u_m``; within one degree this is the
descending lex order on exponent tuples, which is what :func:`monomials`
yields.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from .linalg import DEFAULT_FIELD, ExactMatrix, Field


@dataclass(frozen=True)
class VarLayout:
    """``n + 1`` X-variables followed by ``m`` U-variables.

    ``n = -1`` means there are no X-variables at all, which is how the
    U-only rings (the home of the ``p_i`` and ``G``) are represented.
    """

    n: int
    m: int

    def __post_init__(self):
        if self.n < -1 or self.m < 1:
            raise ValueError(f"bad layout n={self.n}, m={self.m}")

    @property
    def nx(self) -> int:
        return self.n + 1

    @property
    def total(self) -> int:
        return self.n + 1 + self.m

    @property
    def u_layout(self) -> "VarLayout":
        return VarLayout(-1, self.m)

    def names(self) -> list[str]:
        if self.n == 2 and self.m == 2:
            return ["X", "Y", "Z", "U", "V"]
        if self.n == -1 and self.m <= 3:
            return ["U", "V", "W"][: self.m]
        xs = [f"X{i}" for i in range(self.nx)]
        us = [f"U{i}" for i in range(1, self.m + 1)]
        return xs + us

    def dual_names(self) -> list[str]:
        return [s.lower() for s in self.names()]


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All exponent tuples of the given degree, graded-lex descending."""
    if degree < 0:
        return ()
    if nvars == 0:
        return ((),) if degree == 0 else ()
    if nvars == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars: int, degree: int) -> dict:
    return {e: i for i, e in enumerate(monomials(nvars, degree))}


def num_monomials(nvars: int, degree: int) -> int:
    return comb(nvars - 1 + degree, degree) if degree >= 0 else 0


def _falling(e: int, a: int) -> int:
    out = 1
    for t in range(e - a + 1, e + 1):
        out *= t
    return out


def multinomial(exps: Sequence[int]) -> int:
    out, acc = 1, 0
    for e in exps:
        acc += e
        out *= comb(acc, e)
    return out


class Polynomial:
    """Homogeneous polynomial with exact coefficients.

    ``terms`` maps exponent tuples (length ``layout.total``) to nonzero field
    elements.  The zero polynomial has ``degree is None`` and mixes freely
    with any degree.
    """

    __slots__ = ("layout", "field", "terms", "degree")

    def __init__(self, layout: VarLayout, terms: Mapping | None = None, field: Field = DEFAULT_FIELD,
                 _trusted: bool = False):
        self.layout = layout
        self.field = field
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for e, c in (terms or {}).items():
                e = tuple(int(x) for x in e)
                if len(e) != layout.total or min(e, default=0) < 0:
                    raise ValueError(f"exponent {e} does not fit layout {layout}")
                c = field(c)
                if e in clean:
                    c = field.add(clean[e], c)
                if c == 0:
                    clean.pop(e, None)
                else:
                    clean[e] = c
            self.terms = clean
        degrees = {sum(e) for e in self.terms}
        if len(degrees) > 1:
            raise ValueError(f"polynomial is not homogeneous (degrees {sorted(degrees)})")
        self.degree = degrees.pop() if degrees else None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, layout: VarLayout, field: Field = DEFAULT_FIELD) -> "Polynomial":
        return cls(layout, {}, field, _trusted=True)

    @classmethod
    def one(cls, layout: VarLayout, field: Field = DEFAULT_FIELD) -> "Polynomial":
        return cls(layout, {(0,) * layout.total: field.one}, field, _trusted=True)

    @classmethod
    def monomial(cls, layout: VarLayout, exps: Sequence[int], coeff=1, field: Field = DEFAULT_FIELD):
        return cls(layout, {tuple(exps): coeff}, field)

    @classmethod
    def var(cls, layout: VarLayout, index: int, field: Field = DEFAULT_FIELD) -> "Polynomial":
        e = [0] * layout.total
        e[index] = 1
        return cls(layout, {tuple(e): field.one}, field, _trusted=True)

    @classmethod
    def linear_form(cls, layout: VarLayout, coeffs: Sequence, field: Field = DEFAULT_FIELD) -> "Polynomial":
        if len(coeffs) != layout.total:
            raise ValueError("linear form needs one coefficient per variable")
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * layout.total
            e[i] = 1
            terms[tuple(e)] = c
        return cls(layout, terms, field)

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), self.field.zero)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.layout == other.layout and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.layout, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        names = self.layout.names()
        F = self.field
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                (names[i] if k == 1 else f"{names[i]}^{k}") for i, k in enumerate(e) if k
            )
            cs = F.to_str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.layout != other.layout or self.field != other.field:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = F.add(out.get(e, F.zero), c)
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return Polynomial(self.layout, out, F, _trusted=True)

    def __neg__(self) -> "Polynomial":
        F = self.field
        return Polynomial(self.layout, {e: F.neg(c) for e, c in self.terms.items()}, F, _trusted=True)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, c) -> "Polynomial":
        F = self.field
        c = F(c)
        if c == 0:
            return Polynomial.zero(self.layout, F)
        return Polynomial(self.layout, {e: F.mul(c, v) for e, v in self.terms.items()}, F, _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        F = self.field
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        if F.is_prime:
            out = {e: c % F.p for e, c in out.items()}
        return Polynomial(self.layout, {e: c for e, c in out.items() if c != 0}, F, _trusted=True)

    __rmul__ = scale

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial.one(self.layout, self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- changes of ring ---------------------------------------------------

    def embed(self, layout: VarLayout, offset: int) -> "Polynomial":
        """Place the variables of ``self`` at positions ``offset..`` of ``layout``."""
        pad = layout.total - offset - self.layout.total
        if offset < 0 or pad < 0:
            raise ValueError("layout too small")
        pre, post = (0,) * offset, (0,) * pad
        return Polynomial(layout, {pre + e + post: c for e, c in self.terms.items()}, self.field, _trusted=True)

    def restrict(self, layout: VarLayout, offset: int) -> "Polynomial":
        """Inverse of :meth:`embed`; every term must avoid the dropped variables."""
        k = layout.total
        out = {}
        for e, c in self.terms.items():
            if any(e[:offset]) or any(e[offset + k:]):
                raise ValueError("term uses variables outside the target layout")
            out[e[offset:offset + k]] = c
        return Polynomial(layout, out, self.field, _trusted=True)

    def with_field(self, field: Field) -> "Polynomial":
        return Polynomial(self.layout, dict(self.terms), field)

    # -- calculus ---------------------------------------------------------

    def differentiate(self, var_index: int) -> "Polynomial":
        if not 0 <= var_index < self.layout.total:
            raise IndexError(f"variable index {var_index} out of range")
        F = self.field
        p = F.p
        out = {}
        for e, c in self.terms.items():
            k = e[var_index]
            if k:
                out[e[:var_index] + (k - 1,) + e[var_index + 1:]] = c * k
        if p is not None:
            out = {e: c % p for e, c in out.items()}
            out = {e: c for e, c in out.items() if c}
        return Polynomial(self.layout, out, F, _trusted=True)

    def derivative(self, alpha: Sequence[int]) -> "Polynomial":
        """``d^alpha self`` in one pass (falling-factorial coefficients)."""
        F = self.field
        alpha = tuple(alpha)
        out = {}
        for e, c in self.terms.items():
            coeff = 1
            ne = []
            for k, a in zip(e, alpha):
                if k < a:
                    break
                if a:
                    coeff *= _falling(k, a)
                ne.append(k - a)
            else:
                v = F.mul(c, coeff)
                if v != 0:
                    out[tuple(ne)] = v
        return Polynomial(self.layout, out, F, _trusted=True)

    def evaluate(self, point: Sequence):
        F = self.field
        s = F.zero
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = F.mul(t, pow(x, k, F.p) if F.is_prime else x**k)
            s = F.add(s, t)
        return s

    def coefficient_vector(self, degree: int) -> list:
        """Coefficients against all monomials of ``degree`` in graded-lex order."""
        F = self.field
        mons = monomials(self.layout.total, degree)
        if self.terms and self.degree != degree:
            raise ValueError(f"polynomial of degree {self.degree} is not of degree {degree}")
        return [self.terms.get(e, F.zero) for e in mons]


def differentiate(f: Polynomial, var_index: int) -> Polynomial:
    return f.differentiate(var_index)


def apply_operator(op: Polynomial, F: Polynomial) -> Polynomial:
    """``op o F``: the dual-ring element ``op`` acting by differentiation."""
    op._check(F)
    out = Polynomial.zero(F.layout, F.field)
    for alpha, c in op.terms.items():
        out = out + F.derivative(alpha).scale(c)
    return out


def partials(F: Polynomial, order: int) -> list[Polynomial]:
    """All ``d^alpha F`` with ``|alpha| = order``, alpha in graded-lex order."""
    if F.degree is not None and not 0 <= order <= F.degree:
        raise ValueError(f"order {order} outside 0..{F.degree}")
    return [F.derivative(a) for a in monomials(F.layout.total, order)]


def coeff_matrix(fs: Sequence[Polynomial], degree: int, layout: VarLayout | None = None,
                 field: Field | None = None, support_only: bool = False) -> ExactMatrix:
    """Column ``j`` holds the coefficients of ``fs[j]``.

    Rows run over all degree-``degree`` monomials in graded-lex order, or, with
    ``support_only``, over just the monomials that occur (same rank, far
    fewer rows for wide layouts).
    """
    fs = list(fs)
    if layout is None:
        layout = fs[0].layout
    if field is None:
        field = fs[0].field if fs else DEFAULT_FIELD
    for f in fs:
        if f.terms and f.degree != degree:
            raise ValueError(f"expected degree {degree}, got a polynomial of degree {f.degree}")
    if support_only:
        support = sorted({e for f in fs for e in f.terms}, reverse=True)
        index = {e: i for i, e in enumerate(support)}
        nrows = len(support)
    else:
        index = monomial_index(layout.total, degree)
        nrows = len(index)
    ncols = len(fs)
    entries = [field.zero] * (nrows * ncols)
    for j, f in enumerate(fs):
        for e, c in f.terms.items():
            entries[index[e] * ncols + j] = c
    return ExactMatrix(nrows, ncols, tuple(entries), field)


def from_vector(vec: Sequence, layout: VarLayout, degree: int, field: Field = DEFAULT_FIELD) -> Polynomial:
    mons = monomials(layout.total, degree)
    return Polynomial(layout, {e: c for e, c in zip(mons, vec) if c != 0}, field, _trusted=True)


def random_form(layout: VarLayout, degree: int, field: Field, rng) -> Polynomial:
    """Every monomial of ``degree`` gets an independent random coefficient."""
    return Polynomial(layout, {e: field.random(rng) for e in monomials(layout.total, degree)}, field)


def span_dimension(fs: Iterable[Polynomial], degree: int) -> int:
    from .linalg import rank

    fs = [f for f in fs if f.terms]
    if not fs:
        return 0
    return rank(coeff_matrix(fs, degree, support_only=True))
