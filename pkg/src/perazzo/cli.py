"""``perazzo`` command line.

Exit codes: 0 success, 2 usage or parse error, 3 a mathematical precondition
fails (invalid form, bad parameters), 4 the verify suite found a failure.
Form-consuming subcommands read a JSON form document from ``--input``
(default ``-``, standard input), so ``perazzo gen ... | perazzo betti`` works.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .algebra import build_model
from .documents import DocumentError, dumps_form, loads_form
from .forms import (
    PerazzoError,
    PreconditionError,
    assemble,
    check_parameters,
    gen_canonical,
    gen_general,
    gen_min,
    gen_mixed,
    validate,
)
from .hilbert import extremes, h_max, h_min, hilbert_function, sandwich_position
from .lefschetz import DEFAULT_TRIALS, hessian_vanishes, slp, wlp
from .linalg import DEFAULT_PRIME, Field
from .resolution import betti, render_m2
from .verify import CHECKS, parse_d_range, parse_grid, run_verify

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(Exception):
    pass


def default_seed():
    raw = os.environ.get("PERAZZO_SEED")
    if raw is None or raw.strip() == "":
        return 42
    raw = raw.strip()
    return int(raw) if raw.lstrip("-").isdigit() else raw


def parse_field(text: str) -> Field:
    text = text.strip().lower()
    if text in ("rational", "qq"):
        return Field.rational()
    if text in ("prime", "default"):
        return Field.prime(DEFAULT_PRIME)
    if text.startswith("prime:"):
        text = text[6:]
    try:
        return Field.prime(int(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _seed_arg(text: str):
    return int(text) if text.lstrip("-").isdigit() else text


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _fmt_vec(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def _read_form(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc}") from None
    return loads_form(text)


def _valid_form(args):
    f = _read_form(args.input)
    report = validate(f)
    if not report.valid:
        raise PerazzoError(str(report), report)
    return f


def _trials(text: str) -> int:
    t = int(text)
    if t < 1:
        raise argparse.ArgumentTypeError("trials must be >= 1")
    return t


# -- subcommands -------------------------------------------------------------

def cmd_extremes(args, out) -> int:
    try:
        check_parameters(args.n, args.m, args.d)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None
    rep = extremes(args.n, args.m, args.d)
    if args.format == "json":
        out.write(_dump(rep.to_dict()))
        return EXIT_OK
    yes = {True: "true", False: "false"}
    s = rep.s
    out.write(
        f"(n, m, d) = ({rep.n}, {rep.m}, {rep.d})\n"
        f"h_max = {_fmt_vec(rep.hmax)}\n"
        f"h_min = {_fmt_vec(rep.hmin)}\n"
        f"hmax_unimodal = {yes[rep.hmax_unimodal]}\n"
        f"hmin_unimodal = {yes[rep.hmin_unimodal]}\n"
        f"coincide = {yes[rep.coincide]}\n"
        f"alpha, beta, gamma at i={max(s - 1, 0)}: {_fmt_vec(rep.abg_s_minus_1)}\n"
        f"alpha, beta, gamma at i={s}: {_fmt_vec(rep.abg_s)}\n"
    )
    return EXIT_OK


def cmd_gen(args, out) -> int:
    field = args.field
    if args.canonical:
        if (args.n, args.m) not in ((None, None), (2, 2)):
            raise UsageError("canonical forms have n = m = 2")
        f = gen_canonical(args.canonical, args.d, lam=args.lam, seed=args.seed, field=field)
    else:
        if args.n is None or args.m is None:
            raise UsageError("--n and --m are required unless --canonical is given")
        if args.min:
            f = gen_min(args.n, args.m, args.d, seed=args.seed, field=field)
        elif args.mixed:
            f = gen_mixed(args.n, args.m, args.d, seed=args.seed, field=field)
        else:
            f = gen_general(args.n, args.m, args.d, with_G=not args.no_G, seed=args.seed, field=field)
    out.write(dumps_form(f))
    return EXIT_OK


def cmd_validate(args, out) -> int:
    f = _read_form(args.input)
    report = validate(f)
    if args.format == "json":
        out.write(_dump({"valid": report.valid, "violations": list(report.violations),
                         "is_full_perazzo": report.is_full_perazzo}))
    else:
        out.write(str(report) + "\n")
    return EXIT_OK if report.valid else EXIT_PRECONDITION


def cmd_hilbert(args, out) -> int:
    f = _valid_form(args)
    h = hilbert_function(f, full_check=args.full_check)
    pos = sandwich_position(h, f.n, f.m, f.d)
    lo, hi = h_min(f.n, f.m, f.d), h_max(f.n, f.m, f.d)
    if args.format == "json":
        out.write(_dump({"n": f.n, "m": f.m, "d": f.d, "h": list(h), "position": pos,
                         "hmin": list(lo), "hmax": list(hi)}))
    else:
        out.write(f"h = {_fmt_vec(h)}\nposition = {pos}\nh_min = {_fmt_vec(lo)}\nh_max = {_fmt_vec(hi)}\n")
    return EXIT_OK


def _lefschetz(args, out, strong: bool) -> int:
    f = _valid_form(args)
    model = build_model(assemble(f))
    v = (slp if strong else wlp)(model, trials=args.trials, seed=args.seed)
    if args.format == "json":
        doc = v.to_dict(f.field)
        doc["h"] = list(model.h)
        out.write(_dump(doc))
        return EXIT_OK
    name = "SLP" if strong else "WLP"
    lines = [f"h = {_fmt_vec(model.h)}"]
    if v.holds:
        lines.append(f"{name}: holds (witness found at trial {v.trials} of {args.trials})")
        lines.append("witness = [" + ", ".join(f.field.to_str(c) for c in v.witness) + "]")
    else:
        lines.append(f"{name}: fails_generic ({v.trials} trials)")
        for x in v.deficits:
            op = "x l" if x.power == 1 else f"x l^{x.power}"
            lines.append(f"  {op}: A_{x.degree} -> A_{x.degree + x.power}  rank {x.rank} < {x.required}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_wlp(args, out) -> int:
    return _lefschetz(args, out, strong=False)


def cmd_slp(args, out) -> int:
    return _lefschetz(args, out, strong=True)


def cmd_hessian(args, out) -> int:
    f = _valid_form(args)
    F = assemble(f)
    vanishes = hessian_vanishes(F, trials=args.trials, seed=args.seed, symbolic=args.symbolic)
    method = "symbolic" if args.symbolic else "evaluation"
    trials = 0 if args.symbolic else args.trials
    if args.format == "json":
        out.write(_dump({"vanishes": vanishes, "trials": trials, "method": method}))
    else:
        detail = "symbolic expansion" if args.symbolic else f"{trials} random evaluations"
        out.write(f"Hessian vanishes: {'yes' if vanishes else 'no'} ({detail})\n")
    return EXIT_OK


def cmd_betti(args, out) -> int:
    f = _valid_form(args)
    t = betti(build_model(assemble(f)))
    if args.format == "json":
        out.write(_dump(t.to_json()))
    else:
        out.write(render_m2(t))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    checks = [c.strip() for c in args.checks.split(",") if c.strip()] if args.checks else None
    try:
        grid = parse_grid(args.grid) if args.grid else None
        d_range = parse_d_range(args.d_range) if args.d_range else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if checks:
        unknown = [c for c in checks if c not in CHECKS]
        if unknown:
            raise UsageError(f"unknown checks: {', '.join(unknown)}; known: {', '.join(sorted(CHECKS))}")
    report = run_verify(checks, seed=args.seed, field=args.field, grid=grid, d_range=d_range)
    out.write(_dump(report.to_dict()) if args.format == "json" else report.to_text())
    return EXIT_OK if report.ok else EXIT_VERIFY


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="perazzo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, form_input=True, seeded=False, fmt=True):
        if form_input:
            p.add_argument("--input", default="-", help="form document path, '-' for stdin (default)")
        if seeded:
            p.add_argument("--seed", type=_seed_arg, default=default_seed(),
                           help="random seed (default: $PERAZZO_SEED or 42)")
        if fmt:
            p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("extremes", help="maximal and minimal h-vectors for (n, m, d)")
    for k in ("n", "m", "d"):
        p.add_argument(f"--{k}", type=int, required=True)
    common(p, form_input=False)
    p.set_defaults(func=cmd_extremes)

    p = sub.add_parser("gen", help="write a form document")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--canonical", choices=("i", "ii", "iii"))
    kind.add_argument("--min", action="store_true", help="sum X_i L_i^(d-1)")
    kind.add_argument("--general", action="store_true", help="random p_i and G")
    kind.add_argument("--mixed", action="store_true", help="mix of powers, monomials, binomials, general")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--no-G", dest="no_G", action="store_true", help="with --general: G = 0")
    p.add_argument("--lambda", dest="lam", help="with --canonical iii: the nonzero parameter")
    p.add_argument("--field", type=parse_field, default=Field.prime(),
                   help="'prime' (default 2^62-57), 'prime:<p>' or 'rational'")
    common(p, form_input=False, seeded=True, fmt=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("validate", help="check a form document")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("hilbert", help="h-vector and its place between the extremes")
    p.add_argument("--full-check", action="store_true", help="compute every degree, not half")
    common(p)
    p.set_defaults(func=cmd_hilbert)

    for name, func, what in (("wlp", cmd_wlp, "weak"), ("slp", cmd_slp, "strong")):
        p = sub.add_parser(name, help=f"{what} Lefschetz verdict")
        p.add_argument("--trials", type=_trials, default=DEFAULT_TRIALS)
        common(p, seeded=True)
        p.set_defaults(func=func)

    p = sub.add_parser("hessian", help="does the Hessian determinant vanish")
    p.add_argument("--trials", type=_trials, default=DEFAULT_TRIALS)
    p.add_argument("--symbolic", action="store_true", help="expand the determinant (small cases only)")
    common(p, seeded=True)
    p.set_defaults(func=cmd_hessian)

    p = sub.add_parser("betti", help="graded Betti table")
    common(p)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("verify", help="run the check suite")
    p.add_argument("--checks", help="comma-separated subset of: " + ", ".join(sorted(CHECKS)))
    p.add_argument("--grid", help="'n,m;n,m' pairs or 'n,m,d' triples")
    p.add_argument("--d-range", dest="d_range", help="'lo..hi' degrees")
    p.add_argument("--field", type=parse_field, default=Field.prime())
    common(p, form_input=False, seeded=True)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (DocumentError, UsageError) as exc:
        print(f"perazzo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"perazzo: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
