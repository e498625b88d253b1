"""Acceptance criteria 1-12, each printing one PASS/FAIL line.

Run with ``pytest -v tests/test_acceptance.py``; the lines appear inline.
Shared forms and models are cached at module level so each expensive
object is built once.
"""
import random
from functools import lru_cache
from importlib import resources
from math import comb

import pytest

from perazzo.algebra import build_model, check_exact_sequence, quotient_h, random_linear_form
from perazzo.forms import (
    PerazzoForm,
    assemble,
    gen_canonical,
    gen_general,
    gen_min,
    gen_mixed,
    parameter_violations,
)
from perazzo.hilbert import (
    extremes_coincide,
    h_max,
    h_min,
    hilbert_function,
    is_unimodal,
    predict_hmax_unimodal,
    predict_hmin_unimodal,
)
from perazzo.lefschetz import (
    hessian_vanishes,
    is_lefschetz_element,
    minimal_wlp_check,
    slp,
    thm_wlp_p4_predicate,
    wlp,
)
from perazzo.linalg import DEFAULT_FIELD, Field, matmul
from perazzo.poly import Polynomial, VarLayout, monomials
from perazzo.resolution import (
    betti,
    expected_betti_min_p4,
    koszul_differential,
    koszul_term_dim,
    quotient_module,
    render_m2,
)

PRIME = DEFAULT_FIELD
QQ = Field.rational()
GRID = [(2, 2), (3, 2), (3, 3), (4, 3), (5, 4), (7, 4), (9, 3), (13, 3)]
INSTANCES = [(n, m, d) for n, m in GRID for d in range(4, 11) if not parameter_violations(n, m, d)]
EXTENDED = [(n, m, d) for n, m in GRID for d in range(2, 65) if not parameter_violations(n, m, d)]
SEEDS = (0, 1)
KINDS = ("i", "ii", "iii")
P4_MIXED = 50
RATIONAL_FRACTION = 0.2
RATIONAL_NVARS_LIMIT = 10  # rational models past 10 variables cost tens of seconds each

GEN = {"min": gen_min, "general": gen_general, "mixed": gen_mixed}


# -- shared objects ------------------------------------------------------------

@lru_cache(maxsize=None)
def form(kind, n, m, d, seed=0, field=PRIME):
    if kind in KINDS:
        return gen_canonical(kind, d, seed=seed, field=field)
    return GEN[kind](n, m, d, seed=seed, field=field)


@lru_cache(maxsize=None)
def hvec(kind, n, m, d, seed=0, field=PRIME):
    return tuple(hilbert_function(form(kind, n, m, d, seed, field)))


@lru_cache(maxsize=None)
def model(kind, n, m, d, seed=0, field=PRIME):
    return build_model(assemble(form(kind, n, m, d, seed, field)))


@lru_cache(maxsize=None)
def table(kind, n, m, d, seed=0, field=PRIME):
    return betti(model(kind, n, m, d, seed, field))


def stanley():
    U = VarLayout(-1, 3)
    p = tuple(Polynomial(U, {e: 1}) for e in monomials(3, 3))
    return PerazzoForm(9, 3, 4, p, Polynomial.zero(U))


def p4_mixed_forms(field=PRIME):
    return [gen_mixed(2, 2, 5 + t % 4, seed=f"acceptance:{t}", field=field) for t in range(P4_MIXED)]


def rational_sample(items, tag):
    items = list(items)
    k = max(1, round(RATIONAL_FRACTION * len(items)))
    return sorted(random.Random(f"acceptance:qq:{tag}").sample(items, k))


def light(inst):
    n, m, _ = inst
    return n + m + 1 <= RATIONAL_NVARS_LIMIT


@pytest.fixture
def report(capsys):
    def emit(number, failures, summary):
        status = "PASS" if not failures else "FAIL"
        with capsys.disabled():
            print(f"\ncriterion {number:>2}: {status}  {summary}")
            for f in failures[:10]:
                print(f"    - {f}")
        assert not failures, f"criterion {number}: {failures[:5]}"
    return emit


# -- per-criterion evaluators, reused by criterion 12 ---------------------------

def sandwich_failures(instances, field):
    failures = []
    for n, m, d in instances:
        lo, hi = h_min(n, m, d), h_max(n, m, d)
        for kind in GEN:
            for seed in SEEDS if kind != "mixed" else (0,):
                h = hvec(kind, n, m, d, seed, field)
                tag = f"{kind}{(n, m, d)} seed {seed}"
                if not all(a <= b <= c for a, b, c in zip(lo, h, hi)):
                    failures.append(f"{tag}: {h} outside [{tuple(lo)}, {tuple(hi)}]")
                if h[0] != 1 or h[1] != n + m + 1:
                    failures.append(f"{tag}: h_0, h_1 = {h[0]}, {h[1]}")
                if h != h[::-1]:
                    failures.append(f"{tag}: {h} not symmetric")
    return failures


def koszul_problems(M):
    N = M.nvars
    top = len(M.h) - 1
    t = betti(M)
    problems = []
    col0 = {j: b for (i, j), b in t.entries.items() if i == 0 and b}
    if col0 != {0: 1}:
        problems.append(f"column 0 is {col0}")
    for j in range(top + N + 1):
        chain = sum((-1) ** i * koszul_term_dim(M, i, j) for i in range(N + 1))
        homology = sum((-1) ** i * t[(i, j)] for i in range(N + 1))
        if chain != homology:
            problems.append(f"degree {j}: chain Euler sum {chain} != homology {homology}")
        for i in range(2, N + 1):
            A, B = koszul_differential(M, i - 1, j), koszul_differential(M, i, j)
            if A.cols and B.rows and not matmul(A, B).is_zero():
                problems.append(f"d{i - 1} d{i} != 0 in degree {j}")
    return problems


# -- criteria -----------------------------------------------------------------

def test_criterion_01_hmax_examples(report):
    failures = []
    want = {(7, 4, 6): (1, 12, 42, 40, 42, 12, 1), (13, 3, 5): (1, 17, 16, 17, 1)}
    for nmd, v in want.items():
        got = tuple(h_max(*nmd))
        if got != v:
            failures.append(f"h_max{nmd} = {got}, expected {v}")
    report(1, failures, "h_max(7,4,6) and h_max(13,3,5) against the printed vectors")


def test_criterion_02_hmin_examples(report):
    failures = []
    for d in range(5, 13):
        want = (1, 5) + (6,) * (d - 3) + (5, 1)
        if tuple(h_min(2, 2, d)) != want:
            failures.append(f"h_min(2,2,{d}) = {tuple(h_min(2, 2, d))}")
    if tuple(h_min(9, 3, 4)) != (1, 13, 12, 13, 1):
        failures.append(f"h_min(9,3,4) = {tuple(h_min(9, 3, 4))}")
    report(2, failures, "h_min(2,2,d) for 5<=d<=12 and h_min(9,3,4)")


def test_criterion_03_p4_maximal_law(report):
    failures = []
    for d in range(5, 13):
        s = d // 2
        # h_i = min(4i + 1, d + 2) up to the middle, then by symmetry
        half = [1] + [min(4 * i + 1, d + 2) for i in range(1, s + 1)]
        want = tuple(half + [half[d - i] for i in range(s + 1, d + 1)])
        if tuple(h_max(2, 2, d)) != want:
            failures.append(f"h_max(2,2,{d}) = {tuple(h_max(2, 2, d))}, law gives {want}")
    report(3, failures, "h_max(2,2,d) for 5<=d<=12")


def test_criterion_04_rank_vs_formula(report):
    failures = sandwich_failures(INSTANCES, PRIME)
    forms = sum(2 * len(SEEDS) + 1 for _ in INSTANCES)
    hits = {}
    for kind, target in (("min", h_min), ("general", h_max)):
        got = [hvec(kind, *x, seed) == tuple(target(*x)) for x in INSTANCES for seed in SEEDS]
        hits[kind] = sum(got) / len(got)
        if hits[kind] < 0.95:
            failures.append(f"gen_{kind} hit its extreme in {hits[kind]:.1%} of seeds")
    if forms < 100:
        failures.append(f"only {forms} forms")
    report(4, failures, f"{forms} forms on {len(INSTANCES)} grid instances; "
                        f"hit rates min {hits['min']:.0%}, general {hits['general']:.0%}")


def test_criterion_05_unimodality_predicates(report):
    failures = []
    for x in EXTENDED:
        if predict_hmax_unimodal(*x) != is_unimodal(h_max(*x)):
            failures.append(f"h_max{x}: predicate disagrees with scan")
        if predict_hmin_unimodal(*x) != is_unimodal(h_min(*x)):
            failures.append(f"h_min{x}: predicate disagrees with scan")
    report(5, failures, f"{len(EXTENDED)} instances, d <= 64")


def test_criterion_06_extremes_coincide(report):
    failures = [f"{x}" for x in EXTENDED if extremes_coincide(*x) != (tuple(h_max(*x)) == tuple(h_min(*x)))]
    n_eq = sum(tuple(h_max(*x)) == tuple(h_min(*x)) for x in EXTENDED)
    report(6, failures, f"{len(EXTENDED)} instances, {n_eq} with h_max = h_min")


def lefschetz_failures(field, canonical_degrees, max_instances, slp_instances, mixed):
    failures = []
    for d in canonical_degrees:
        for kind in KINDS:
            M = model(kind, 2, 2, d, 0, field)
            v = wlp(M)
            if not v.holds or not is_lefschetz_element(M, v.witness):
                failures.append(f"canonical {kind}, d={d}: no certified WLP witness")
    for x in max_instances:
        if wlp(model("general", *x, 0, field)).holds:
            failures.append(f"general{x}: WLP holds at h_max")
    for kind, x in slp_instances:
        if slp(model(kind, *x, 0, field)).holds:
            failures.append(f"{kind}{x}: SLP holds")
    for f in mixed:
        d = f.d
        h = hilbert_function(f)
        if wlp(build_model(assemble(f))).holds != thm_wlp_p4_predicate(h, d):
            failures.append(f"mixed P4 d={d}, h={tuple(h)}: verdict disagrees with the criterion")
    return failures


def max_instances():
    return [x for x in INSTANCES if x[2] >= 6 and hvec("general", *x) == tuple(h_max(*x))]


def test_criterion_07_lefschetz(report):
    at_max = max_instances()
    slp_cases = [(k, x) for x in INSTANCES for k in ("min", "general")]
    failures = lefschetz_failures(PRIME, range(5, 9), at_max, slp_cases, p4_mixed_forms())
    for nmd in ((3, 3, 8), (4, 3, 9)):
        if not minimal_wlp_check(*nmd, seed=42):
            failures.append(f"minimal_wlp_check{nmd} found no Lefschetz element")
    if wlp(build_model(assemble(stanley()))).holds:
        failures.append("Stanley form: WLP holds")
    if slp(build_model(assemble(stanley()))).holds:
        failures.append("Stanley form: SLP holds")
    report(7, failures, f"12 canonical WLP, {len(at_max)} h_max instances, "
                        f"{len(slp_cases) + 1} SLP, {P4_MIXED} mixed P4")


def hessian_failures(instances, field):
    failures = []
    for x in instances:
        for kind in GEN:
            if not hessian_vanishes(assemble(form(kind, *x, 0, field)), trials=5):
                failures.append(f"{kind}{x}: Hessian nonzero")
    return failures


def test_criterion_08_hessian(report):
    failures = hessian_failures(INSTANCES, PRIME)
    if not hessian_vanishes(assemble(stanley()), trials=5):
        failures.append("Stanley form: Hessian nonzero")
    UV = VarLayout(-1, 2)
    for d in range(2, 11):
        if hessian_vanishes(Polynomial(UV, {(d, 0): 1, (0, d): 1}), trials=5):
            failures.append(f"U^{d}+V^{d}: Hessian reported zero")
    report(8, failures, f"{3 * len(INSTANCES) + 1} Perazzo forms, 5 trials each; controls U^d+V^d, 2<=d<=10")


def exact_failures(instances, field, minimal_degrees):
    failures = []
    for x in instances:
        F = assemble(form("general", *x, 0, field))
        M = model("general", *x, 0, field)
        rng = random.Random(f"acceptance:exact:{x}")
        for _ in range(3):
            ell = random_linear_form(M.nvars, field, rng)
            if not check_exact_sequence(F, ell, M):
                failures.append(f"{x}: dimension identity fails")
    for d in minimal_degrees:
        for kind in ("min",) + KINDS:
            M = model(kind, 2, 2, d, 0, field)
            q = quotient_h(M, random_linear_form(5, field, random.Random(f"acceptance:q:{kind}:{d}")))
            if tuple(v for v in q if v) != (1, 4, 1):
                failures.append(f"{kind}(2,2,{d}): quotient h {q}")
    return failures


def test_criterion_09_exact_sequence(report):
    failures = exact_failures(INSTANCES, PRIME, range(5, 11))
    report(9, failures, f"{len(INSTANCES)} instances x 3 linear forms; quotients of 24 minimal P4 algebras")


def betti_failures(degrees, field, extra_p4):
    failures = []
    for d in degrees:
        golden = resources.files("perazzo") / "golden" / f"betti_min_p4_d{d}.txt"
        texts = set()
        for kind in KINDS:
            t = table(kind, 2, 2, d, 0, field)
            texts.add(render_m2(t))
            if t != expected_betti_min_p4(d):
                failures.append(f"canonical {kind}, d={d}: table differs from the closed form")
            if t.totals() != (1, 14, 35, 35, 14, 1):
                failures.append(f"canonical {kind}, d={d}: totals {t.totals()}")
            if not t.is_self_dual(d):
                failures.append(f"canonical {kind}, d={d}: not self-dual")
        if len(texts) != 1:
            failures.append(f"d={d}: the three kinds disagree")
        if golden.is_file() and texts != {golden.read_text()}:
            failures.append(f"d={d}: rendering differs from the golden table")
    for kind, d in extra_p4:
        t = table(kind, 2, 2, d, 0, field)
        if not all(b == t[(5 - i, d + 5 - j)] for (i, j), b in t.entries.items()):
            failures.append(f"{kind}(2,2,{d}): not self-dual")
    return failures


P4_EXTRA = [(k, d) for d in range(4, 11) for k in ("min", "general", "mixed")]


def test_criterion_10_betti_tables(report):
    failures = betti_failures(range(5, 11), PRIME, P4_EXTRA)
    report(10, failures, f"canonical I/II/III for 5<=d<=10, golden d=5..8, "
                         f"{18 + len(P4_EXTRA)} P4 tables self-dual")


KOSZUL_SMALL = [(3, 2, 4), (3, 2, 5), (3, 3, 4), (4, 3, 4)]


def koszul_failures(field, canonical_degrees, p4_extra, small):
    failures = []
    modules = []
    for d in canonical_degrees:
        for kind in KINDS:
            M = model(kind, 2, 2, d, 0, field)
            ell = random_linear_form(5, field, random.Random(f"acceptance:koszul:{kind}:{d}"))
            modules += [(f"{kind}(2,2,{d})", M), (f"{kind}(2,2,{d})/l", quotient_module(M, ell))]
    modules += [(f"{k}(2,2,{d})", model(k, 2, 2, d, 0, field)) for k, d in p4_extra]
    modules += [(f"general{x}", model("general", *x, 0, field)) for x in small]
    for name, M in modules:
        failures += [f"{name}: {p}" for p in koszul_problems(M)]
    return failures, len(modules)


def test_criterion_11_koszul(report):
    failures, count = koszul_failures(PRIME, range(5, 11), P4_EXTRA, KOSZUL_SMALL)
    report(11, failures, f"{count} modules: d^2 = 0, beta_00 alone in column 0, Euler balance")


def reduced(f):
    """The same integer form read modulo the default prime."""
    return PerazzoForm(f.n, f.m, f.d, tuple(q.with_field(PRIME) for q in f.p), f.G.with_field(PRIME), PRIME)


def test_criterion_12_field_cross(report):
    failures = []
    notes = ["1-3,5,6 are integer formulas, no field enters"]

    # 4: rerun over QQ, and compare each rational form with its reduction mod p
    sample4 = rational_sample(INSTANCES, 4)
    failures += sandwich_failures(sample4, QQ)
    for x in sample4:
        for kind in GEN:
            for seed in SEEDS if kind != "mixed" else (0,):
                hq = hvec(kind, *x, seed, QQ)
                hp = tuple(hilbert_function(reduced(form(kind, *x, seed, QQ))))
                if hq != hp:
                    failures.append(f"{kind}{x} seed {seed}: h over QQ {hq}, mod p {hp}")
    notes.append(f"4 on {len(sample4)} instances")

    # 7: canonical, h_max, SLP and P4 mixed verdicts
    light_inst = [x for x in INSTANCES if light(x)]
    can = rational_sample(range(5, 9), 7)
    at_max = rational_sample([x for x in max_instances() if light(x)], "7max")
    slp_cases = rational_sample([(k, x) for x in light_inst for k in ("min", "general")], "7slp")
    mixed_idx = rational_sample(range(P4_MIXED), "7mixed")
    mixed = [gen_mixed(2, 2, 5 + t % 4, seed=f"acceptance:{t}", field=QQ) for t in mixed_idx]
    failures += lefschetz_failures(QQ, can, at_max, slp_cases, mixed)
    for t, f in zip(mixed_idx, mixed):
        if wlp(build_model(assemble(f))).holds != wlp(build_model(assemble(reduced(f)))).holds:
            failures.append(f"mixed P4 #{t}: WLP verdict differs between QQ and mod p")
    notes.append(f"7 on {len(can) * 3 + len(at_max) + len(slp_cases) + len(mixed)} cases")

    # 8, 9: Hessian and exact sequence
    sample89 = rational_sample(light_inst, 89)
    failures += hessian_failures(sample89, QQ)
    failures += exact_failures(sample89, QQ, rational_sample(range(5, 11), "9q"))
    notes.append(f"8,9 on {len(sample89)} instances")

    # 10, 11: Betti tables and Koszul soundness
    deg = rational_sample(range(5, 11), 10)
    extra = rational_sample(P4_EXTRA, "10extra")
    failures += betti_failures(deg, QQ, extra)
    for kind, d in [(k, d) for d in deg for k in KINDS] + extra:
        tp = betti(build_model(assemble(reduced(form(kind, 2, 2, d, 0, QQ)))))
        if table(kind, 2, 2, d, 0, QQ) != tp:
            failures.append(f"{kind}(2,2,{d}): Betti table differs between QQ and mod p")
    kf, count = koszul_failures(QQ, deg, extra, rational_sample(KOSZUL_SMALL, 11))
    failures += kf
    notes.append(f"10,11 on degrees {list(deg)} and {count} modules")

    report(12, failures, "exact rationals on 20% subsamples; " + "; ".join(notes))


def test_instance_counts():
    # guard the sizes the criteria quote
    assert len(INSTANCES) == 55
    assert sum(1 for n, m in GRID for d in range(4, 11)) - len(INSTANCES) == 1  # (13,3,4) is excluded
    assert comb(4 + 3 - 2, 2) < 14
