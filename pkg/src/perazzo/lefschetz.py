"""Weak and strong Lefschetz verdicts, Hessian vanishing.

A verdict of ``holds`` carries a witness linear form and is a certificate:
re-running :func:`witness_ranks` on it reproduces maximal rank everywhere.
A verdict of ``fails`` only means no sampled form reached maximal rank;
since maximal rank is a Zariski-open condition, failure for a handful of
random forms over a 62-bit field is overwhelming evidence, not a proof.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .algebra import AlgebraModel, mult_map, random_linear_form
from .forms import PreconditionError, assemble, derived_rng, gen_min
from .hilbert import abg, h_min, hilbert_function, is_unimodal
from .linalg import DEFAULT_FIELD, ExactMatrix, Field, matmul, rank
from .poly import Polynomial

DEFAULT_TRIALS = 5


@dataclass(frozen=True)
class Deficit:
    """Best rank seen for ``x l^power : A_degree -> A_{degree+power}``."""

    degree: int
    rank: int
    required: int
    power: int = 1


@dataclass(frozen=True)
class LefschetzVerdict:
    mode: str  # "weak" | "strong"
    holds: bool
    trials: int
    witness: tuple | None = None
    deficits: tuple[Deficit, ...] = dc_field(default_factory=tuple)

    @property
    def kind(self) -> str:
        return "holds" if self.holds else "fails_generic"

    def to_dict(self, field: Field | None = None) -> dict:
        out = {"mode": self.mode, "verdict": self.kind, "trials": self.trials}
        if self.witness is not None:
            to_s = field.to_str if field is not None else str
            out["witness"] = [to_s(c) for c in self.witness]
        out["deficits"] = [
            {"degree": x.degree, "power": x.power, "rank": x.rank, "required": x.required}
            for x in self.deficits
        ]
        return out


def _power_maps(model: AlgebraModel, ell: Sequence, max_power: int):
    """Yield ``(i, k, matrix of x l^k : A_i -> A_{i+k})`` for ``1 <= k <= max_power``."""
    d = model.d
    steps = [mult_map(model, ell, i) for i in range(d)]
    for i in range(d):
        acc = None
        for k in range(1, min(max_power, d - i) + 1):
            acc = steps[i] if acc is None else matmul(steps[i + k - 1], acc)
            yield i, k, acc


def witness_ranks(model: AlgebraModel, ell: Sequence, strong: bool = False) -> dict:
    """``{(i, k): (rank, required)}`` for one linear form."""
    max_power = model.d if strong else 1
    out = {}
    for i, k, M in _power_maps(model, ell, max_power):
        out[(i, k)] = (rank(M), min(model.h[i], model.h[i + k]))
    return out


def is_lefschetz_element(model: AlgebraModel, ell: Sequence, strong: bool = False) -> bool:
    return all(r == req for r, req in witness_ranks(model, ell, strong).values())


def _verdict(model: AlgebraModel, trials: int, seed, strong: bool) -> LefschetzVerdict:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    mode = "strong" if strong else "weak"
    best: dict = {}
    for t in range(trials):
        ell = random_linear_form(model.nvars, model.field, derived_rng(seed, t, mode))
        ranks = witness_ranks(model, ell, strong)
        if all(r == req for r, req in ranks.values()):
            return LefschetzVerdict(mode, True, t + 1, tuple(ell))
        for key, (r, req) in ranks.items():
            if key not in best or r > best[key][0]:
                best[key] = (r, req)
    deficits = tuple(
        Deficit(i, r, req, k) for (i, k), (r, req) in sorted(best.items()) if r < req
    )
    return LefschetzVerdict(mode, False, trials, None, deficits)


def wlp(model: AlgebraModel, trials: int = DEFAULT_TRIALS, seed=0) -> LefschetzVerdict:
    return _verdict(model, trials, seed, strong=False)


def slp(model: AlgebraModel, trials: int = DEFAULT_TRIALS, seed=0) -> LefschetzVerdict:
    return _verdict(model, trials, seed, strong=True)


# -- Hessian ------------------------------------------------------------------

def hessian_at(F: Polynomial, point: Sequence) -> ExactMatrix:
    """Matrix of second partials of ``F`` evaluated at ``point``."""
    K = F.field
    N = F.layout.total
    p = K.p
    H = [[0] * N for _ in range(N)]
    # cached powers of the coordinates
    pw = [[1] for _ in range(N)]
    deg = F.degree or 0
    for a in range(N):
        for _ in range(deg):
            x = pw[a][-1] * point[a]
            pw[a].append(x % p if p is not None else x)
    for e, c in F.terms.items():
        support = [a for a in range(N) if e[a]]
        for ia, a in enumerate(support):
            for b in support[ia:]:
                if a == b:
                    if e[a] < 2:
                        continue
                    coeff = e[a] * (e[a] - 1)
                else:
                    coeff = e[a] * e[b]
                val = c * coeff
                for t in support:
                    k = e[t] - (t == a) - (t == b)
                    if k:
                        val = val * pw[t][k]
                        if p is not None:
                            val %= p
                H[a][b] += val
                if a != b:
                    H[b][a] += val
    if p is not None:
        H = [[x % p for x in row] for row in H]
    return ExactMatrix(N, N, tuple(K(x) if p is None else x for row in H for x in row), K)


def hessian_polynomial(F: Polynomial) -> Polynomial:
    """Symbolic Hessian determinant by cofactor expansion over column subsets."""
    N = F.layout.total
    second = [[F.differentiate(a).differentiate(b) for b in range(N)] for a in range(N)]
    zero = Polynomial.zero(F.layout, F.field)
    memo = {(): Polynomial.one(F.layout, F.field)}

    def minor(cols: tuple[int, ...]) -> Polynomial:
        # determinant of rows N-len(cols).. against these columns
        if cols in memo:
            return memo[cols]
        row = N - len(cols)
        out = zero
        for pos, c in enumerate(cols):
            entry = second[row][c]
            if entry.is_zero():
                continue
            sub = minor(cols[:pos] + cols[pos + 1:])
            if sub.is_zero():
                continue
            term = entry * sub
            out = out - term if pos % 2 else out + term
        memo[cols] = out
        return out

    return minor(tuple(range(N)))


SYMBOLIC_LIMITS = (5, 6)  # at most 5 variables, degree at most 6


def hessian_vanishes(F: Polynomial, trials: int = DEFAULT_TRIALS, seed=0, symbolic: bool = False) -> bool:
    """``det Hess(F) == 0``, tested at random points (or expanded exactly)."""
    if symbolic:
        nmax, dmax = SYMBOLIC_LIMITS
        if F.layout.total > nmax or (F.degree or 0) > dmax:
            raise PreconditionError(f"symbolic Hessian limited to {nmax} variables and degree {dmax}")
        return hessian_polynomial(F).is_zero()
    N = F.layout.total
    for t in range(trials):
        rng = derived_rng(seed, t, "hessian")
        point = [F.field.random(rng) for _ in range(N)]
        if rank(hessian_at(F, point)) == N:
            return False
    return True


# -- Perazzo-specific criteria ---------------------------------------------------

def thm_wlp_p4_predicate(h: Sequence[int], d: int) -> bool:
    """WLP iff at most one entry of the h-vector equals ``d + 2`` (n = m = 2, d >= 5)."""
    if len(h) != d + 1:
        raise ValueError(f"h-vector of length {len(h)} does not have socle degree {d}")
    return sum(1 for x in h if x == d + 2) <= 1


def minimal_wlp_preconditions(n: int, m: int, d: int) -> list[str]:
    bad = []
    if not n >= m >= 3:
        bad.append(f"needs n >= m >= 3, got n={n}, m={m}")
        return bad
    hm = h_min(n, m, d)
    if not is_unimodal(hm):
        bad.append(f"minimal h-vector {tuple(hm)} is not unimodal")
    s = d // 2
    beta_s = abg(n, m, d, s)[1]
    if n + 1 > beta_s:
        bad.append(f"n+1={n + 1} exceeds beta_s={beta_s}")
    return bad


def minimal_wlp_check(n: int, m: int, d: int, seed=0, field: Field = DEFAULT_FIELD,
                      trials: int = DEFAULT_TRIALS) -> bool:
    """Build a minimal-h instance and test it for the WLP."""
    from .algebra import build_model

    bad = minimal_wlp_preconditions(n, m, d)
    if bad:
        raise PreconditionError("; ".join(bad))
    f = gen_min(n, m, d, seed=seed, field=field)
    h = hilbert_function(f)
    if tuple(h) != tuple(h_min(n, m, d)):
        raise AssertionError(f"gen_min produced {tuple(h)}, not the minimal vector")
    return wlp(build_model(assemble(f)), trials=trials, seed=seed).holds
