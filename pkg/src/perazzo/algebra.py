"""A finite-dimensional model of ``A_F = R / Ann(F)`` for any form ``F``.

Degree ``k`` of ``A_F`` is identified with ``W_k``, the span of the order-``k``
partial derivatives of ``F``, through ``[phi] -> phi o F``.  Multiplication by
the variable ``x_v`` becomes differentiation ``d/dX_v : W_k -> W_{k+1}``, so
every quotient dimension in sight is a rank and no annihilator generators are
ever computed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linalg import ExactMatrix, Field, rank, rref
from .poly import Polynomial, VarLayout, apply_operator, coeff_matrix


@dataclass
class AlgebraModel:
    """Bases of the ``W_k`` and matrices of every ``x_v : W_k -> W_{k+1}``.

    ``labels[k][j]`` is the multi-index ``alpha`` with
    ``basis[k][j] = d^alpha F``.  ``mult[v][k]`` has shape ``h[k+1] x h[k]``.
    """

    layout: VarLayout
    field: Field
    d: int
    basis: list[list[Polynomial]]
    labels: list[list[tuple[int, ...]]]
    h: list[int]
    mult: list[list[ExactMatrix]]

    @property
    def nvars(self) -> int:
        return self.layout.total

    def __repr__(self):
        return f"AlgebraModel(nvars={self.nvars}, d={self.d}, h={tuple(self.h)})"


def build_model(F: Polynomial) -> AlgebraModel:
    if F.is_zero():
        raise ValueError("the dual generator must be nonzero")
    field = F.field
    nv = F.layout.total
    d = F.degree
    basis = [[F]]
    labels = [[(0,) * nv]]
    mult = [[] for _ in range(nv)]
    for k in range(d):
        # d^(alpha + e_v) F for alpha labelling W_k spans W_{k+1}; each is one
        # differentiation away from a basis element already in hand
        parent = {}
        for j, alpha in enumerate(labels[k]):
            for v in range(nv):
                beta = alpha[:v] + (alpha[v] + 1,) + alpha[v + 1:]
                parent.setdefault(beta, (j, v))
        cand = sorted(parent, reverse=True)
        polys = {beta: basis[k][j].differentiate(v) for beta, (j, v) in parent.items()}
        cols = [polys[b] for b in cand]
        live = [f for f in cols if f.terms]
        if live:
            C = coeff_matrix(cols, d - k - 1, layout=F.layout, field=field, support_only=True)
            R, pivots = rref(C)
        else:
            R, pivots = None, []
        basis.append([cols[j] for j in pivots])
        labels.append([cand[j] for j in pivots])
        r = len(pivots)
        # column j of the RREF holds the coordinates of candidate j
        coords = {beta: [R[i, j] for i in range(r)] for j, beta in enumerate(cand)} if r else {
            beta: [] for beta in cand}
        hk = len(labels[k])
        for v in range(nv):
            entries = [field.zero] * (r * hk)
            for j, alpha in enumerate(labels[k]):
                beta = alpha[:v] + (alpha[v] + 1,) + alpha[v + 1:]
                for i, c in enumerate(coords[beta]):
                    entries[i * hk + j] = c
            mult[v].append(ExactMatrix(r, hk, tuple(entries), field))
    h = [len(b) for b in basis]
    return AlgebraModel(F.layout, field, d, basis, labels, h, mult)


def mult_map(model: AlgebraModel, ell: Sequence, k: int) -> ExactMatrix:
    """Matrix of ``x ell : A_k -> A_{k+1}``."""
    if not 0 <= k < model.d:
        raise ValueError(f"degree {k} outside 0..{model.d - 1}")
    F = model.field
    ell = [F(c) for c in ell]
    rows, cols = model.h[k + 1], model.h[k]
    acc = [0] * (rows * cols)
    for v, c in enumerate(ell):
        if c != 0:
            for idx, x in enumerate(model.mult[v][k].entries):
                if x:
                    acc[idx] += c * x
    if F.is_prime:
        acc = [x % F.p for x in acc]
    else:
        acc = [F(x) for x in acc]
    return ExactMatrix(rows, cols, tuple(acc), F)


def quotient_h(model: AlgebraModel, ell: Sequence) -> tuple[int, ...]:
    """Hilbert function of ``A / (ell)``: cokernel dimensions of ``x ell``."""
    out = [model.h[0]]
    for k in range(1, model.d + 1):
        out.append(model.h[k] - rank(mult_map(model, ell, k - 1)))
    return tuple(out)


def linear_operator(layout: VarLayout, ell: Sequence, field: Field) -> Polynomial:
    return Polynomial.linear_form(layout, list(ell), field)


def check_exact_sequence(F: Polynomial, ell: Sequence, model: AlgebraModel | None = None) -> bool:
    """``h_A(j) = h_{A_{ell o F}}(j-1) + h_{A/(ell)}(j)`` for every ``j``.

    The middle term is an independently built model of ``ell o F``.
    """
    if model is None:
        model = build_model(F)
    G = apply_operator(linear_operator(F.layout, ell, F.field), F)
    if G.is_zero():
        raise ValueError("ell o F vanishes")
    middle = build_model(G).h
    q = quotient_h(model, ell)
    for j in range(model.d + 1):
        left = middle[j - 1] if 1 <= j <= len(middle) else 0
        if model.h[j] != left + q[j]:
            return False
    return True


def random_linear_form(nvars: int, field: Field, rng) -> list:
    return [field.random(rng) for _ in range(nvars)]
