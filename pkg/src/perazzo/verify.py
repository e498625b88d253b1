"""Suite runner: every theorem-level identity as a named, seeded check.

Each check returns one :class:`CheckResult`.  Checks share a cache of
generated forms and algebra models, so running the full suite costs little
more than its most expensive check.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field
from importlib import resources
from typing import Callable, Iterable

from .algebra import build_model, check_exact_sequence, quotient_h, random_linear_form
from .forms import (
    Canonical,
    PreconditionError,
    assemble,
    derived_rng,
    gen_canonical,
    gen_general,
    gen_min,
    gen_mixed,
    parameter_violations,
)
from .hilbert import (
    extremes_coincide,
    h_max,
    h_min,
    hilbert_function,
    is_unimodal,
    predict_hmax_unimodal,
    predict_hmin_unimodal,
)
from .lefschetz import (
    hessian_vanishes,
    is_lefschetz_element,
    minimal_wlp_check,
    minimal_wlp_preconditions,
    slp,
    thm_wlp_p4_predicate,
    wlp,
)
from .linalg import DEFAULT_FIELD, Field, matmul
from .poly import Polynomial, VarLayout
from .resolution import (
    as_module,
    betti,
    check_tor_vanishing,
    expected_betti_min_p4,
    koszul_differential,
    koszul_term_dim,
    quotient_module,
    render_m2,
)

GRID_PAIRS = ((2, 2), (3, 2), (3, 3), (4, 3), (5, 4), (7, 4), (9, 3), (13, 3))
D_RANGE = (4, 10)
EXTENDED_D = 64
P4_MIXED_INSTANCES = 50
MINIMAL_WLP_INSTANCES = ((3, 3, 8), (4, 3, 9))
RATIONAL_FRACTION = 0.2
# rational arithmetic is ~15x slower; keep the spot checks to models this small
RATIONAL_NVARS_LIMIT = 10


@dataclass
class CheckResult:
    name: str
    params: dict
    status: str  # "pass" | "fail" | "skip"
    details: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "params": self.params, "status": self.status, "details": self.details}


@dataclass
class VerifyReport:
    checks: list[CheckResult]
    seed: int | str
    wall_time: float

    @property
    def summary(self) -> dict:
        out = {"pass": 0, "fail": 0, "skip": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    @property
    def ok(self) -> bool:
        return self.summary["fail"] == 0

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "wall_time": round(self.wall_time, 3),
            "summary": self.summary,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            extra = ""
            if "cases" in c.details:
                extra = f" ({c.details['cases']} cases)"
            lines.append(f"{c.status.upper():4}  {c.name}{extra}")
            for msg in c.details.get("failures", [])[:10]:
                lines.append(f"      {msg}")
        s = self.summary
        lines.append(f"{s['pass']} passed, {s['fail']} failed, {s['skip']} skipped "
                     f"(seed {self.seed}, {self.wall_time:.1f}s)")
        return "\n".join(lines) + "\n"


# -- grid handling --------------------------------------------------------------

def parse_d_range(text: str) -> tuple[int, int]:
    """``"5..8"`` or ``"6"``."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
    else:
        lo = hi = int(text)
    if lo > hi:
        raise ValueError(f"empty range {text!r}")
    return lo, hi


def parse_grid(text: str) -> tuple[tuple[int, ...], ...]:
    """Semicolon-separated ``n,m`` pairs or ``n,m,d`` triples."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        nums = tuple(int(x) for x in chunk.replace("(", "").replace(")", "").split(","))
        if len(nums) not in (2, 3):
            raise ValueError(f"grid entry {chunk!r} must be n,m or n,m,d")
        out.append(nums)
    if not out:
        raise ValueError("empty grid")
    return tuple(out)


@dataclass
class Context:
    seed: int | str = 42
    field: Field = DEFAULT_FIELD
    grid: tuple = GRID_PAIRS
    d_range: tuple[int, int] = D_RANGE
    d_range_given: bool = False
    _forms: dict = dc_field(default_factory=dict)
    _models: dict = dc_field(default_factory=dict)
    _h: dict = dc_field(default_factory=dict)

    def instances(self) -> list[tuple[int, int, int]]:
        return self._instances(*self.d_range)

    def extended_instances(self) -> list[tuple[int, int, int]]:
        lo, hi = self.d_range
        return self._instances(lo, hi if self.d_range_given else max(hi, EXTENDED_D))

    def _instances(self, lo: int, hi: int) -> list[tuple[int, int, int]]:
        out = []
        for g in self.grid:
            if len(g) == 3:
                if lo <= g[2] <= hi or not self.d_range_given:
                    out.append(g)
                continue
            n, m = g
            out.extend((n, m, d) for d in range(lo, hi + 1) if not parameter_violations(n, m, d))
        return sorted(set(out))

    def form(self, kind: str, n: int, m: int, d: int, field: Field | None = None):
        field = field or self.field
        key = (kind, n, m, d, field)
        if key not in self._forms:
            if kind == "min":
                f = gen_min(n, m, d, seed=self.seed, field=field)
            elif kind == "general":
                f = gen_general(n, m, d, seed=self.seed, field=field)
            elif kind == "mixed":
                f = gen_mixed(n, m, d, seed=self.seed, field=field)
            else:
                f = gen_canonical(kind, d, seed=self.seed, field=field)
            self._forms[key] = f
        return self._forms[key]

    def model(self, kind: str, n: int, m: int, d: int, field: Field | None = None):
        field = field or self.field
        key = (kind, n, m, d, field)
        if key not in self._models:
            self._models[key] = build_model(assemble(self.form(kind, n, m, d, field)))
        return self._models[key]

    def h(self, kind: str, n: int, m: int, d: int, field: Field | None = None):
        key = (kind, n, m, d, field or self.field)
        if key not in self._h:
            self._h[key] = hilbert_function(self.form(kind, n, m, d, field))
        return self._h[key]

    def rng(self, tag: str, *extra) -> random.Random:
        return derived_rng(self.seed, ":".join(str(x) for x in extra), tag)


def _result(name: str, params: dict, cases: int, failures: list[str], **extra) -> CheckResult:
    if cases == 0:
        return CheckResult(name, params, "skip", {"cases": 0, "reason": "no applicable instances", **extra})
    status = "fail" if failures else "pass"
    return CheckResult(name, params, status, {"cases": cases, "failures": failures, **extra})


def _grid_params(ctx: Context) -> dict:
    return {"grid": [list(g) for g in ctx.grid], "d_range": list(ctx.d_range), "field": repr(ctx.field)}


# -- checks -----------------------------------------------------------------------

def check_sandwich(ctx: Context) -> CheckResult:
    failures, cases = [], 0
    hits = {"min": [0, 0], "general": [0, 0]}
    for n, m, d in ctx.instances():
        lo, hi = h_min(n, m, d), h_max(n, m, d)
        for kind in ("min", "general", "mixed"):
            h = ctx.h(kind, n, m, d)
            cases += 1
            if not (lo.termwise_le(h) and h.termwise_le(hi)):
                failures.append(f"{kind}{(n, m, d)}: {tuple(h)} outside [{tuple(lo)}, {tuple(hi)}]")
            if h[0] != 1 or h[1] != n + m + 1:
                failures.append(f"{kind}{(n, m, d)}: h_0, h_1 = {h[0]}, {h[1]}")
            if kind in hits:
                target = lo if kind == "min" else hi
                hits[kind][0] += tuple(h) == tuple(target)
                hits[kind][1] += 1
    rates = {k: (a / b if b else None) for k, (a, b) in hits.items()}
    for k, r in rates.items():
        if r is not None and r < 0.95:
            failures.append(f"gen_{k} reached its extreme in only {r:.0%} of instances")
    return _result("sandwich", _grid_params(ctx), cases, failures, hit_rates=rates)


def check_symmetry(ctx: Context) -> CheckResult:
    failures, cases = [], 0
    for n, m, d in ctx.instances():
        for kind in ("min", "general", "mixed"):
            h = ctx.h(kind, n, m, d)
            cases += 1
            if tuple(h) != tuple(reversed(h)):
                failures.append(f"{kind}{(n, m, d)}: {tuple(h)} not symmetric")
    return _result("symmetry", _grid_params(ctx), cases, failures)


def check_unimodality_predicates(ctx: Context) -> CheckResult:
    failures, non_unimodal = [], []
    inst = ctx.extended_instances()
    for n, m, d in inst:
        scan_max, scan_min = is_unimodal(h_max(n, m, d)), is_unimodal(h_min(n, m, d))
        if predict_hmax_unimodal(n, m, d) != scan_max:
            failures.append(f"hmax{(n, m, d)}: predicate {not scan_max}, scan {scan_max}")
        if predict_hmin_unimodal(n, m, d) != scan_min:
            failures.append(f"hmin{(n, m, d)}: predicate {not scan_min}, scan {scan_min}")
        if not (scan_max and scan_min):
            non_unimodal.append({"n": n, "m": m, "d": d, "hmax_unimodal": scan_max, "hmin_unimodal": scan_min})
    return _result("unimodality-predicates", {**_grid_params(ctx), "max_d": max((x[2] for x in inst), default=None)},
                   len(inst), failures, non_unimodal=non_unimodal[:50], non_unimodal_count=len(non_unimodal))


def check_extremes_coincide(ctx: Context) -> CheckResult:
    failures, coinciding = [], []
    inst = ctx.extended_instances()
    for n, m, d in inst:
        direct = tuple(h_max(n, m, d)) == tuple(h_min(n, m, d))
        if extremes_coincide(n, m, d) != direct:
            failures.append(f"{(n, m, d)}: criterion {not direct}, direct comparison {direct}")
        if direct:
            coinciding.append([n, m, d])
    return _result("extremes-coincide", _grid_params(ctx), len(inst), failures, coinciding=coinciding[:50])


def check_exact_sequence_suite(ctx: Context) -> CheckResult:
    failures, cases = [], 0
    for n, m, d in ctx.instances():
        f = ctx.form("general", n, m, d)
        model = ctx.model("general", n, m, d)
        if tuple(model.h) != tuple(ctx.h("general", n, m, d)):
            failures.append(f"{(n, m, d)}: model h {tuple(model.h)} != rank formula")
        F = assemble(f)
        rng = ctx.rng("exact-sequence", n, m, d)
        for _ in range(3):
            ell = random_linear_form(model.nvars, ctx.field, rng)
            cases += 1
            if not check_exact_sequence(F, ell, model):
                failures.append(f"{(n, m, d)}: dimension identity fails for l={ell}")
    return _result("exact-sequence", _grid_params(ctx), cases, failures)


def check_mainthm0(ctx: Context) -> CheckResult:
    """Maximal h-vector with d >= 6, or a non-unimodal one, forces WLP failure."""
    failures, cases, skipped = [], 0, []
    for n, m, d in ctx.instances():
        model = ctx.model("general", n, m, d)
        at_max = tuple(model.h) == tuple(h_max(n, m, d))
        if not ((at_max and d >= 6) or not is_unimodal(model.h)):
            if at_max:
                skipped.append([n, m, d])
            continue
        cases += 1
        v = wlp(model, seed=ctx.seed)
        if v.holds:
            failures.append(f"{(n, m, d)}: WLP holds with witness {v.witness}")
    return _result("mainthm0", _grid_params(ctx), cases, failures, not_asserted=skipped)


def check_minimal_wlp(ctx: Context) -> CheckResult:
    failures, cases = [], 0
    lo, hi = ctx.d_range
    for d in range(max(lo, 5), min(hi, 8) + 1):
        for kind in Canonical:
            model = ctx.model(kind.value, 2, 2, d)
            v = wlp(model, seed=ctx.seed)
            cases += 1
            if not v.holds:
                failures.append(f"canonical {kind.value}, d={d}: WLP not found")
            elif not is_lefschetz_element(model, v.witness):
                failures.append(f"canonical {kind.value}, d={d}: witness does not re-verify")
    for n, m, d in MINIMAL_WLP_INSTANCES:
        cases += 1
        if not minimal_wlp_check(n, m, d, seed=ctx.seed, field=ctx.field):
            failures.append(f"{(n, m, d)}: WLP not found on the minimal instance")
    cases += 1
    if not minimal_wlp_preconditions(9, 3, 4):
        failures.append("(9, 3, 4) should violate the hypotheses (non-unimodal minimal vector)")
    return _result("minimal-wlp", {"d_range": list(ctx.d_range), "instances": [list(x) for x in MINIMAL_WLP_INSTANCES]},
                   cases, failures)


def check_thm_wlp_p4(ctx: Context) -> CheckResult:
    failures, seen = [], {}
    lo, hi = max(ctx.d_range[0], 5), min(ctx.d_range[1], 8)
    degrees = list(range(lo, hi + 1))
    if not degrees:
        return _result("thm-wlp-p4", {"instances": 0}, 0, [])
    for t in range(P4_MIXED_INSTANCES):
        d = degrees[t % len(degrees)]
        f = gen_mixed(2, 2, d, seed=f"{ctx.seed}:{t}", field=ctx.field)
        h = hilbert_function(f)
        v = wlp(build_model(assemble(f)), seed=ctx.seed)
        pred = thm_wlp_p4_predicate(h, d)
        seen[str(tuple(h))] = seen.get(str(tuple(h)), 0) + 1
        if v.holds != pred:
            failures.append(f"d={d}, h={tuple(h)}: WLP {v.kind}, criterion predicts {pred}")
    return _result("thm-wlp-p4", {"instances": P4_MIXED_INSTANCES, "degrees": degrees},
                   P4_MIXED_INSTANCES, failures, h_vectors=dict(sorted(seen.items())))


def check_slp_fails(ctx: Context) -> CheckResult:
    failures, cases = [], 0
    for n, m, d in ctx.instances():
        for kind in ("min", "general"):
            cases += 1
            v = slp(ctx.model(kind, n, m, d), seed=ctx.seed)
            if v.holds:
                failures.append(f"{kind}{(n, m, d)}: SLP holds with witness {v.witness}")
    return _result("slp-fails", _grid_params(ctx), cases, failures)


def check_hessian(ctx: Context) -> CheckResult:
    failures, cases = [], 0
    for n, m, d in ctx.instances():
        for kind in ("min", "general", "mixed"):
            cases += 1
            if not hessian_vanishes(assemble(ctx.form(kind, n, m, d)), seed=ctx.seed):
                failures.append(f"{kind}{(n, m, d)}: Hessian does not vanish")
    U = VarLayout(-1, 2)
    for d in sorted({x[2] for x in ctx.instances()} | {3}):
        cases += 1
        control = Polynomial(U, {(d, 0): 1, (0, d): 1}, ctx.field)
        if hessian_vanishes(control, seed=ctx.seed):
            failures.append(f"control U^{d}+V^{d}: Hessian reported zero")
    return _result("hessian-vanishes", _grid_params(ctx), cases, failures)


def golden_betti(d: int) -> str | None:
    path = resources.files("perazzo") / "golden" / f"betti_min_p4_d{d}.txt"
    return path.read_text(encoding="utf-8") if path.is_file() else None


def check_betti_main(ctx: Context) -> CheckResult:
    failures, cases, golden_used = [], 0, []
    lo, hi = ctx.d_range
    for d in range(max(lo, 5), min(hi, 10) + 1):
        expected = expected_betti_min_p4(d)
        rendered = set()
        for kind in Canonical:
            t = betti(ctx.model(kind.value, 2, 2, d))
            cases += 1
            text = render_m2(t)
            rendered.add(text)
            if t != expected:
                failures.append(f"canonical {kind.value}, d={d}: table differs from the closed form")
            if t.totals() != (1, 14, 35, 35, 14, 1):
                failures.append(f"canonical {kind.value}, d={d}: totals {t.totals()}")
            if not t.is_self_dual(d):
                failures.append(f"canonical {kind.value}, d={d}: not self-dual")
            gold = golden_betti(d)
            if gold is not None:
                golden_used.append(d)
                if text != gold:
                    failures.append(f"canonical {kind.value}, d={d}: rendering differs from golden file")
        if len(rendered) != 1:
            failures.append(f"d={d}: the three canonical kinds give different tables")
    return _result("betti-main", {"d_range": [max(lo, 5), min(hi, 10)]}, cases, failures,
                   golden_degrees=sorted(set(golden_used)))


def check_tor_vanishing_suite(ctx: Context) -> CheckResult:
    failures, cases = [], 0
    lo, hi = ctx.d_range
    for d in range(max(lo, 5), min(hi, 10) + 1):
        for kind in Canonical:
            model = ctx.model(kind.value, 2, 2, d)
            ell = random_linear_form(model.nvars, ctx.field, ctx.rng("tor", kind.value, d))
            cases += 1
            q = quotient_h(model, ell)
            if tuple(x for x in q if x) != (1, 4, 1):
                failures.append(f"canonical {kind.value}, d={d}: quotient h-vector {q}")
            if not check_tor_vanishing(model, ell):
                failures.append(f"canonical {kind.value}, d={d}: Tor of the quotient leaves the band j <= i+2")
    return _result("tor-vanishing", {"d_range": [max(lo, 5), min(hi, 10)]}, cases, failures)


def koszul_soundness(module) -> list[str]:
    """Consecutive differentials compose to zero; degree-wise Euler balance."""
    M = as_module(module)
    N = M.nvars
    top = len(M.h) - 1
    problems = []
    t = betti(M)
    if t[(0, 0)] != 1 or any(b for (i, j), b in t.entries.items() if i == 0 and j != 0):
        problems.append("column 0 is not a single beta_00 = 1")
    for j in range(0, top + N + 1):
        euler_terms = sum((-1) ** i * koszul_term_dim(M, i, j) for i in range(N + 1))
        euler_homology = sum((-1) ** i * t[(i, j)] for i in range(N + 1))
        if euler_terms != euler_homology:
            problems.append(f"degree {j}: Euler characteristic {euler_terms} != {euler_homology}")
        for i in range(2, N + 1):
            A, B = koszul_differential(M, i - 1, j), koszul_differential(M, i, j)
            if A.cols and B.rows and not matmul(A, B).is_zero():
                problems.append(f"d_{i - 1} o d_{i} != 0 in degree {j}")
    return problems


def check_koszul(ctx: Context) -> CheckResult:
    failures, cases = [], 0
    lo, hi = ctx.d_range
    for d in range(max(lo, 5), min(hi, 8) + 1):
        for kind in Canonical:
            model = ctx.model(kind.value, 2, 2, d)
            ell = random_linear_form(model.nvars, ctx.field, ctx.rng("koszul", kind.value, d))
            for label, mod in (("A", model), ("A/lA", quotient_module(model, ell))):
                cases += 1
                failures.extend(f"canonical {kind.value}, d={d}, {label}: {p}" for p in koszul_soundness(mod))
    for n, m, d in ctx.instances():
        if (n, m) == (2, 2):
            for kind in ("min", "general"):
                cases += 1
                failures.extend(f"{kind}{(n, m, d)}: {p}" for p in koszul_soundness(ctx.model(kind, n, m, d)))
    return _result("koszul", {"d_range": list(ctx.d_range)}, cases, failures)


def check_field_cross(ctx: Context) -> CheckResult:
    """Re-run a subsample over the rationals and compare with the prime field."""
    QQ = Field.rational()
    failures, sample = [], []
    if not ctx.field.is_prime:
        return CheckResult("field-cross", {}, "skip", {"cases": 0, "reason": "already rational"})
    rng = ctx.rng("field-cross")
    light = [x for x in ctx.instances() if x[0] + x[1] + 1 <= RATIONAL_NVARS_LIMIT]
    k = max(1, round(RATIONAL_FRACTION * len(light))) if light else 0
    sample = sorted(rng.sample(light, k)) if light else []
    cases = 0
    for n, m, d in sample:
        for kind in ("min", "general"):
            cases += 1
            h_q = ctx.h(kind, n, m, d, QQ)
            h_p = ctx.h(kind, n, m, d)
            if tuple(h_q) != tuple(h_p):
                failures.append(f"{kind}{(n, m, d)}: QQ {tuple(h_q)} vs GF(p) {tuple(h_p)}")
            mq = ctx.model(kind, n, m, d, QQ)
            if tuple(mq.h) != tuple(h_q):
                failures.append(f"{kind}{(n, m, d)}: QQ model {tuple(mq.h)} vs rank formula {tuple(h_q)}")
            wq = wlp(mq, seed=ctx.seed).holds
            wp = wlp(ctx.model(kind, n, m, d), seed=ctx.seed).holds
            if wq != wp:
                failures.append(f"{kind}{(n, m, d)}: WLP over QQ {wq}, over GF(p) {wp}")
    lo, hi = ctx.d_range
    if lo <= 5 <= hi or not ctx.d_range_given:
        cases += 1
        tq = betti(build_model(assemble(gen_canonical("i", 5, field=QQ))))
        if render_m2(tq) != golden_betti(5):
            failures.append("canonical i, d=5 over QQ: Betti table differs from golden file")
    return _result("field-cross", {"fraction": RATIONAL_FRACTION}, cases, failures,
                   sample=[list(x) for x in sample])


CHECKS: dict[str, Callable[[Context], CheckResult]] = {
    "betti-main": check_betti_main,
    "exact-sequence": check_exact_sequence_suite,
    "extremes-coincide": check_extremes_coincide,
    "field-cross": check_field_cross,
    "hessian-vanishes": check_hessian,
    "koszul": check_koszul,
    "mainthm0": check_mainthm0,
    "minimal-wlp": check_minimal_wlp,
    "sandwich": check_sandwich,
    "slp-fails": check_slp_fails,
    "symmetry": check_symmetry,
    "thm-wlp-p4": check_thm_wlp_p4,
    "tor-vanishing": check_tor_vanishing_suite,
    "unimodality-predicates": check_unimodality_predicates,
}


def run_verify(checks: Iterable[str] | None = None, seed=42, field: Field = DEFAULT_FIELD,
               grid=None, d_range: tuple[int, int] | None = None) -> VerifyReport:
    names = sorted(set(checks)) if checks else sorted(CHECKS)
    unknown = [c for c in names if c not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}; known: {', '.join(sorted(CHECKS))}")
    ctx = Context(seed=seed, field=field, grid=tuple(grid) if grid else GRID_PAIRS,
                  d_range=d_range or D_RANGE, d_range_given=d_range is not None)
    start = time.perf_counter()
    results = []
    for name in names:
        try:
            results.append(CHECKS[name](ctx))
        except PreconditionError as exc:
            results.append(CheckResult(name, {}, "fail", {"error": str(exc), "failures": [str(exc)]}))
    return VerifyReport(results, seed, time.perf_counter() - start)


__all__ = ["CHECKS", "CheckResult", "Context", "VerifyReport", "parse_d_range", "parse_grid", "run_verify"]
