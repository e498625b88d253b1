"""h-vectors of Perazzo algebras.

Closed forms use the three binomial quantities at index ``i``::

    alpha_i = C(m+i-1, m-1)           dim of degree-i forms in the u's
    beta_i  = C(d+m-i-1, m-1)         dim of degree-(d-i) forms in the U's
    gamma_i = (n+1) C(m+i-2, m-1)     order-(i-1) U-partials of all the p's

The rank-based path builds, for each ``1 <= i <= d/2``, the block matrix

    ( 0        | N_i     )
    ( M_{i-1}  | Gamma_i )

of catalecticants of the ``p_k`` and of ``G``; its rank is ``h_i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .forms import PerazzoForm, check_parameters
from .linalg import ExactMatrix, hstack, rank, vstack
from .poly import Polynomial, monomials, multinomial


class HVector(tuple):
    """Symmetric integer vector ``(h_0, ..., h_d)`` with ``h_0 = 1``."""

    def __new__(cls, entries: Iterable[int]):
        h = super().__new__(cls, (int(x) for x in entries))
        if not h or h[0] != 1:
            raise ValueError(f"h-vector must start with 1: {tuple(h)}")
        if tuple(h) != tuple(reversed(h)):
            raise ValueError(f"h-vector is not symmetric: {tuple(h)}")
        return h

    @property
    def socle_degree(self) -> int:
        return len(self) - 1

    def is_unimodal(self) -> bool:
        return is_unimodal(self)

    def termwise_le(self, other: Sequence[int]) -> bool:
        return len(self) == len(other) and all(a <= b for a, b in zip(self, other))

    def __repr__(self):
        return f"HVector{tuple(self)}"


def _reflect(lower: Sequence[int], d: int) -> HVector:
    return HVector(lower[i] if i <= d // 2 else lower[d - i] for i in range(d + 1))


def abg(n: int, m: int, d: int, i: int) -> tuple[int, int, int]:
    if not 0 <= i <= d:
        raise ValueError(f"index {i} outside 0..{d}")
    # math.comb(k, r) is 0 for r > k, which gives gamma_0 = 0
    return comb(m + i - 1, m - 1), comb(d + m - i - 1, m - 1), (n + 1) * comb(m + i - 2, m - 1)


def h_max(n: int, m: int, d: int) -> HVector:
    check_parameters(n, m, d)
    low = []
    for i in range(d // 2 + 1):
        a, b, g = abg(n, m, d, i)
        low.append(min(a + b, a + g))
    return _reflect(low, d)


def h_min(n: int, m: int, d: int) -> HVector:
    check_parameters(n, m, d)
    low = [1]
    for i in range(1, d // 2 + 1):
        a, b, _ = abg(n, m, d, i)
        low.append(min(2 * (n + 1), a + n + 1, a + b))
    return _reflect(low, d)


def is_unimodal(h: Sequence[int]) -> bool:
    """Weakly rises then weakly falls (plateaus allowed)."""
    i, k = 0, len(h)
    while i + 1 < k and h[i] <= h[i + 1]:
        i += 1
    while i + 1 < k and h[i] >= h[i + 1]:
        i += 1
    return i >= k - 1


def hmax_conditions(n: int, m: int, d: int) -> tuple[bool, bool]:
    """``gamma_{s-1} < beta_{s-1}`` and ``alpha_{s-1}+gamma_{s-1} <= alpha_s+beta_s``."""
    s = d // 2
    a1, b1, g1 = abg(n, m, d, s - 1)
    a, b, _ = abg(n, m, d, s)
    return g1 < b1, a1 + g1 <= a + b


def predict_hmax_unimodal(n: int, m: int, d: int) -> bool:
    check_parameters(n, m, d)
    if m == 2:
        return True
    return all(hmax_conditions(n, m, d))


def hmin_inequality(n: int, m: int, d: int) -> bool:
    """The published criterion ``n+1 <= beta_{s-1}``.

    Reported for comparison only: it misclassifies a few boundary cases,
    among them ``(n, m, d) = (9, 3, 4)`` where ``n + 1 = beta_1``.
    """
    return n + 1 <= abg(n, m, d, d // 2 - 1)[1]


def predict_hmin_unimodal(n: int, m: int, d: int) -> bool:
    """Closed-form test: unimodal iff ``h_{s-1} <= h_s``.

    On ``1..s`` the minimal vector is the minimum of a constant, an increasing
    and a strictly decreasing sequence, so once it drops it keeps dropping up
    to ``s``; a drop anywhere therefore shows up at the last step.
    """
    check_parameters(n, m, d)
    if m == 2:
        return True
    s = d // 2
    if s < 2:
        return True

    def entry(i):
        a, b, _ = abg(n, m, d, i)
        return min(2 * (n + 1), a + n + 1, a + b)

    return entry(s - 1) <= entry(s)


def extremes_coincide(n: int, m: int, d: int) -> bool:
    check_parameters(n, m, d)
    return comb(d + m - 3, m - 1) <= n + 1


@dataclass(frozen=True)
class ExtremesReport:
    n: int
    m: int
    d: int
    hmax: HVector
    hmin: HVector
    hmax_unimodal: bool
    hmin_unimodal: bool
    coincide: bool
    s: int
    abg_s_minus_1: tuple[int, int, int]
    abg_s: tuple[int, int, int]
    hmin_inequality: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n, "m": self.m, "d": self.d, "s": self.s,
            "hmax": list(self.hmax), "hmin": list(self.hmin),
            "hmax_unimodal": self.hmax_unimodal, "hmin_unimodal": self.hmin_unimodal,
            "coincide": self.coincide,
            "alpha_beta_gamma": {"s-1": list(self.abg_s_minus_1), "s": list(self.abg_s)},
            "hmin_inequality_n1_le_beta_s_minus_1": self.hmin_inequality,
        }


def extremes(n: int, m: int, d: int) -> ExtremesReport:
    hmax, hmin = h_max(n, m, d), h_min(n, m, d)
    s = d // 2
    return ExtremesReport(
        n, m, d, hmax, hmin,
        predict_hmax_unimodal(n, m, d), predict_hmin_unimodal(n, m, d),
        extremes_coincide(n, m, d), s,
        abg(n, m, d, max(s - 1, 0)), abg(n, m, d, s), hmin_inequality(n, m, d),
    )


# -- rank-based Hilbert function ----------------------------------------------

def normalized_coefficient(q: Polynomial, exps: tuple[int, ...]):
    """``q_lambda``: coefficient of ``U^lambda`` divided by the multinomial."""
    c = q.terms.get(exps)
    F = q.field
    if c is None:
        return F.zero
    return F.div(c, F(multinomial(exps)))


def catalecticant(q: Polynomial, i: int, degree: int | None = None) -> ExactMatrix:
    """Rows ``|eta| = e - i``, columns ``|delta| = i``, entries ``q_{delta+eta}``.

    ``degree`` gives ``e`` when ``q`` may be zero.
    """
    F = q.field
    e = q.degree if degree is None else degree
    if e is None:
        raise ValueError("degree of the zero polynomial must be given")
    if not 0 <= i <= e:
        raise ValueError(f"catalecticant index {i} outside 0..{e}")
    k = q.layout.total
    rows = monomials(k, e - i)
    cols = monomials(k, i)
    norm = {ex: normalized_coefficient(q, ex) for ex in q.terms}
    zero = F.zero
    entries = tuple(
        norm.get(tuple(a + b for a, b in zip(eta, delta)), zero) for eta in rows for delta in cols
    )
    return ExactMatrix(len(rows), len(cols), entries, F)


def block_matrix(f: PerazzoForm, i: int) -> ExactMatrix:
    """Coefficient matrix of the degree-``i`` annihilator system.

    Valid for ``1 <= i <= d - 1``; the h-vector only needs ``i <= d/2``.
    """
    d = f.d
    if not 1 <= i <= d - 1:
        raise ValueError(f"block index {i} outside 1..{d - 1}")
    M = hstack([catalecticant(q, i - 1, d - 1) for q in f.p])
    N = vstack([catalecticant(q, i, d - 1) for q in f.p])
    Gam = catalecticant(f.G, i, d)
    top = hstack([ExactMatrix.zeros(N.rows, M.cols, f.field), N])
    bottom = hstack([M, Gam])
    return vstack([top, bottom])


def block_ranks(f: PerazzoForm, i: int) -> tuple[int, int]:
    """``(rank M_{i-1}, rank N_i)``; they sum to ``h_i`` when ``G = 0``."""
    d = f.d
    M = hstack([catalecticant(q, i - 1, d - 1) for q in f.p])
    N = vstack([catalecticant(q, i, d - 1) for q in f.p])
    return rank(M), rank(N)


def hilbert_function(f: PerazzoForm, full_check: bool = False) -> HVector:
    """h-vector from block-matrix ranks on ``1..d/2``, reflected.

    With ``full_check`` every degree ``1..d-1`` is computed independently and
    the symmetry is asserted rather than assumed.
    """
    d = f.d
    if d == 0:
        return HVector((1,))
    top = d - 1 if full_check else d // 2
    ranks = {0: 1, d: 1}
    for i in range(1, top + 1):
        ranks[i] = rank(block_matrix(f, i))
    if full_check:
        h = [ranks[i] for i in range(d + 1)]
        if h != h[::-1]:
            raise AssertionError(f"computed Hilbert function is not symmetric: {h}")
        return HVector(h)
    return _reflect([ranks[i] for i in range(d // 2 + 1)], d)


def sandwich_position(h: Sequence[int], n: int, m: int, d: int) -> str:
    lo, hi = h_min(n, m, d), h_max(n, m, d)
    if tuple(h) == tuple(lo) and tuple(h) == tuple(hi):
        return "min=max"
    if tuple(h) == tuple(lo):
        return "min"
    if tuple(h) == tuple(hi):
        return "max"
    if lo.termwise_le(h) and HVector(h).termwise_le(hi):
        return "intermediate"
    return "outside"
