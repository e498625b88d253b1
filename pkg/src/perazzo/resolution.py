"""Graded Betti numbers through Koszul homology.

``beta_{i,j}(M) = dim H_i(K(x) (x) M)_j`` where ``K(x)`` is the Koszul complex
on the variables, generators in degree 1.  In internal degree ``j`` the term
``Lambda^i V (x) M_{j-i}`` has basis ``e_S (x) w`` (``S`` an ``i``-subset of
the variables, ``w`` a basis vector of ``M_{j-i}``) and

    d(e_S (x) w) = sum_{pos, t in S} (-1)^pos e_{S - t} (x) x_t w.

Only ranks of these blocks are needed, so everything reduces to the
multiplication matrices of a finite-dimensional graded module.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb
from typing import Sequence

from .algebra import AlgebraModel, mult_map
from .forms import PreconditionError
from .linalg import ExactMatrix, Field, kernel_basis, matmul, rank, rref


@dataclass
class GradedModule:
    """``h[k]`` = dim of degree ``k``; ``mult[v][k]`` maps degree ``k`` to ``k+1``."""

    nvars: int
    field: Field
    h: list[int]
    mult: list[list[ExactMatrix]]

    def action(self, v: int, k: int) -> ExactMatrix:
        if 0 <= k < len(self.h) - 1:
            return self.mult[v][k]
        rows = self.h[k + 1] if 0 <= k + 1 < len(self.h) else 0
        cols = self.h[k] if 0 <= k < len(self.h) else 0
        return ExactMatrix.zeros(rows, cols, self.field)

    def dim(self, k: int) -> int:
        return self.h[k] if 0 <= k < len(self.h) else 0


def as_module(model: AlgebraModel | GradedModule) -> GradedModule:
    if isinstance(model, GradedModule):
        return model
    return GradedModule(model.nvars, model.field, list(model.h), model.mult)


def quotient_module(model: AlgebraModel, ell: Sequence) -> GradedModule:
    """``B = A / ell A`` with the induced action of the variables.

    ``Q_k`` (rows spanning the annihilator of ``im(x ell)`` in degree ``k``,
    in RREF) projects onto ``B_k``; the pivot columns give a section ``S_k``
    with ``Q_k S_k = 1``.  The action on ``B`` is ``Q_{k+1} x_v S_k``.
    """
    F = model.field
    d = model.d
    Q, S = [], []
    for k in range(d + 1):
        hk = model.h[k]
        if k == 0:
            vecs = [[F.one if c == r else F.zero for c in range(hk)] for r in range(hk)]
        else:
            L = mult_map(model, ell, k - 1)
            vecs = kernel_basis(L.transpose())
        if vecs:
            R, piv = rref(ExactMatrix.from_rows(vecs, F))
            q = R.select_rows(range(len(piv)))
        else:
            q, piv = ExactMatrix.zeros(0, hk, F), []
        s_entries = [F.zero] * (hk * len(piv))
        for r, c in enumerate(piv):
            s_entries[c * len(piv) + r] = F.one
        Q.append(q)
        S.append(ExactMatrix(hk, len(piv), tuple(s_entries), F))
    h = [q.rows for q in Q]
    mult = [[matmul(Q[k + 1], matmul(model.mult[v][k], S[k])) for k in range(d)]
            for v in range(model.nvars)]
    return GradedModule(model.nvars, F, h, mult)


def koszul_term_dim(module, i: int, j: int) -> int:
    M = as_module(module)
    if not 0 <= i <= M.nvars:
        return 0
    return comb(M.nvars, i) * M.dim(j - i)


def koszul_differential(module, i: int, j: int) -> ExactMatrix:
    """Degree-``j`` block of ``d_i : Lambda^i (x) M -> Lambda^{i-1} (x) M``."""
    M = as_module(module)
    F = M.field
    N = M.nvars
    if not 1 <= i <= N:
        return ExactMatrix.zeros(0, 0, F)
    src_dim, tgt_dim = M.dim(j - i), M.dim(j - i + 1)
    src = list(combinations(range(N), i))
    tgt = {S: r for r, S in enumerate(combinations(range(N), i - 1))}
    rows, cols = len(tgt) * tgt_dim, len(src) * src_dim
    if rows == 0 or cols == 0:
        return ExactMatrix.zeros(rows, cols, F)
    entries = [F.zero] * (rows * cols)
    for cs, S in enumerate(src):
        for pos, t in enumerate(S):
            block = M.action(t, j - i)
            r0 = tgt[S[:pos] + S[pos + 1:]] * tgt_dim
            c0 = cs * src_dim
            neg = pos % 2 == 1
            for a in range(tgt_dim):
                base = (r0 + a) * cols + c0
                brow = a * src_dim
                for b in range(src_dim):
                    x = block.entries[brow + b]
                    if x:
                        entries[base + b] = F.neg(x) if neg else x
    return ExactMatrix(rows, cols, tuple(entries), F)


@dataclass
class BettiTable:
    """``entries[(i, j)] = beta_{i,j}``; zeros are not stored."""

    nvars: int
    entries: dict = dc_field(default_factory=dict)

    def __getitem__(self, ij) -> int:
        return self.entries.get(tuple(ij), 0)

    def __eq__(self, other):
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.nvars == other.nvars and self.clean() == other.clean()

    def clean(self) -> dict:
        return {k: v for k, v in self.entries.items() if v}

    def totals(self) -> tuple[int, ...]:
        out = [0] * (self.nvars + 1)
        for (i, _), b in self.entries.items():
            out[i] += b
        return tuple(out)

    def max_row(self) -> int:
        return max((j - i for (i, j), b in self.entries.items() if b), default=0)

    def is_self_dual(self, socle_degree: int) -> bool:
        N = self.nvars
        top = socle_degree + N
        return all(self[(N - i, top - j)] == b for (i, j), b in self.clean().items())

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "entries": [{"i": i, "j": j, "beta": b} for (i, j), b in sorted(self.clean().items())],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "BettiTable":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["nvars"]), {(int(e["i"]), int(e["j"])): int(e["beta"]) for e in data["entries"]})


def betti(module) -> BettiTable:
    M = as_module(module)
    N = M.nvars
    top = len(M.h) - 1
    ranks = {}

    def rk(i, j):
        if i < 1 or i > N:
            return 0
        if (i, j) not in ranks:
            ranks[(i, j)] = rank(koszul_differential(M, i, j))
        return ranks[(i, j)]

    table = {}
    for i in range(N + 1):
        for j in range(i, i + top + 1):
            dim = koszul_term_dim(M, i, j)
            if dim == 0:
                continue
            b = dim - rk(i, j) - rk(i + 1, j)
            if b:
                table[(i, j)] = b
    return BettiTable(N, table)


def expected_betti_min_p4(d: int) -> BettiTable:
    """Closed-form Betti table of a minimal-h Perazzo algebra in five variables."""
    if d < 5:
        raise PreconditionError(f"closed form stated for d >= 5, got d={d}")
    t = {(0, 0): 1, (5, d + 5): 1}

    def row(r, values):
        for i, b in enumerate(values, start=1):
            t[(i, i + r)] = t.get((i, i + r), 0) + b

    row(1, (9, 17, 12, 3))
    row(2, (1, 3, 3, 1))
    row(d - 2, (1, 3, 3, 1))
    row(d - 1, (3, 12, 17, 9))
    return BettiTable(5, t)


def check_tor_vanishing(model: AlgebraModel, ell: Sequence, band: int = 2) -> bool:
    """``beta_{i,j}(A / ell A) = 0`` for every ``j > i + band``."""
    table = betti(quotient_module(model, ell))
    return all(b == 0 for (i, j), b in table.entries.items() if j > i + band)


def render_m2(t: BettiTable) -> str:
    """Boxed Betti diagram in Macaulay2's layout: rows ``j - i``, dots for zeros."""
    N = t.nvars
    nrows = t.max_row() + 1
    cells = [["." if not t[(i, i + r)] else str(t[(i, i + r)]) for i in range(N + 1)] for r in range(nrows)]
    totals = [str(x) for x in t.totals()]
    header = [str(i) for i in range(N + 1)]
    labels = [f"{r}:" for r in range(nrows)]
    label_w = max(len("total:"), *(len(s) for s in labels))
    col0 = max(len(header[0]), len(totals[0]), *(len(c[0]) for c in cells))
    rest = [len(s) for s in header[1:] + totals[1:]] + [len(x) for c in cells for x in c[1:]]
    colw = max(rest, default=1)
    widths = [col0] + [colw] * N

    def line(label, values):
        return label.rjust(label_w) + "".join(" " + v.rjust(w) for v, w in zip(values, widths))

    body = [line("", header), line("total:", totals)] + [line(lab, c) for lab, c in zip(labels, cells)]
    width = len(body[0])
    border = "+" + "-" * width + "+"
    return "\n".join([border] + [f"|{b}|" for b in body] + [border]) + "\n"
