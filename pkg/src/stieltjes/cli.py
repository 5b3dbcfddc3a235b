"""Command line front end.

Exit codes: 0 success (or every check passed), 1 malformed input,
2 a numerical check failed, 3 a precondition of the requested identity
does not hold.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .generate import default_seed, random_instance
from .integrand import integrate
from .io import (
    DocumentError,
    dump_number,
    flats_to_json,
    load_document,
    monotone_from_json,
    monotone_to_json,
    parse_number,
    piecewise_from_json,
)
from .measure import measure_from
from .monotone import (
    SIDES,
    compose,
    flat_levels,
    left_inverse,
    right_inverse,
    selector_inverse,
)
from .oracle import OracleConfig, oracle_integrate
from .substitution import (
    IDENTITY_TAGS,
    PreconditionError,
    check_inequalities,
    decompose,
    verify_identity,
)

EXIT_OK, EXIT_INPUT, EXIT_FAIL, EXIT_PRECONDITION = 0, 1, 2, 3


def _monotone(path):
    return monotone_from_json(load_document(path))


def _integrand(path):
    return piecewise_from_json(load_document(path))


def _emit(obj, out):
    json.dump(obj, out, indent=2)
    out.write("\n")


def cmd_eval(args, out):
    F = _monotone(args.fn)
    out.write(f"{float(F.eval_at(parse_number(args.at, '--at'), args.side))!r}\n")
    return EXIT_OK


def cmd_invert(args, out):
    M = _monotone(args.fn)
    if args.theta is not None:
        W = selector_inverse(M, parse_number(args.theta, "--theta"))
    elif args.side == "right":
        W = right_inverse(M)
    else:
        W = left_inverse(M)
    _emit(monotone_to_json(W), out)
    return EXIT_OK


def cmd_compose(args, out):
    _emit(monotone_to_json(compose(_monotone(args.N), _monotone(args.M))), out)
    return EXIT_OK


def cmd_flats(args, out):
    _emit(flats_to_json(flat_levels(_monotone(args.M))), out)
    return EXIT_OK


def cmd_decompose(args, out):
    N, M = _monotone(args.N), _monotone(args.M)
    dec = decompose(N, flat_levels(M))
    _emit({
        "n1": monotone_to_json(dec.n1),
        "n2": monotone_to_json(dec.n2),
        "n3": monotone_to_json(dec.n3),
        "jumps": [{"y": dump_number(j.y), "delta_minus": dump_number(j.delta_minus),
                   "delta_plus": dump_number(j.delta_plus)} for j in dec.split],
    }, out)
    return EXIT_OK


def cmd_integrate(args, out):
    f, F = _integrand(args.f), _monotone(args.F)
    res = {"closed_form": float(integrate(f, measure_from(F)))}
    if args.oracle:
        res["oracle"] = oracle_integrate(f, F, OracleConfig(args.mesh, args.rule))
        res["mesh"] = args.mesh
    _emit(res, out)
    return EXIT_OK


def _verify(tag, fn_path, m_path, n_path, theta, tol, force, side, probes):
    fn, M, N = _integrand(fn_path), _monotone(m_path), _monotone(n_path)
    return verify_identity(tag, fn, M, N, theta=theta, tol=tol, force=force,
                           side=side, probes=probes)


def cmd_verify(args, out):
    theta = parse_number(args.theta, "--theta") if args.theta is not None else Fraction(0)
    probes = [parse_number(p, "--probe") for p in args.probe] or None
    try:
        rep = _verify(args.tag, args.fn, args.M, args.N, theta, args.tol, args.force,
                      args.side, probes)
    except PreconditionError as e:
        _emit({"tag": args.tag, "error": "precondition", "message": str(e),
               "level": dump_number(e.level) if e.level is not None else None}, out)
        print(f"precondition violated: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    _emit(rep.to_dict(), out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_inequalities(args, out):
    g, M, N = _integrand(args.g), _monotone(args.M), _monotone(args.N)
    reps = check_inequalities(g, M, N, decreasing=args.decreasing, tol=args.tol)
    _emit([r.to_dict() for r in reps], out)
    return EXIT_OK if all(r.passed for r in reps) else EXIT_FAIL


def cmd_plot_data(args, out):
    F = _monotone(args.fn)
    n = max(2, args.samples)
    lo, hi = F.domain
    xs = {lo + (hi - lo) * Fraction(i, n - 1) for i in range(n)} | set(F.xs)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["x", *SIDES])
    for x in sorted(xs):
        w.writerow([repr(float(x))] + [repr(float(F.eval_at(x, s))) for s in SIDES])
    return EXIT_OK


def _batch_case(case_dir: str, tag: str, tol: float):
    d = Path(case_dir)
    cfg = {}
    if (d / "case.json").exists():
        cfg = load_document(d / "case.json")
    tag = cfg.get("tag", tag)
    fn = d / ("g.json" if (d / "g.json").exists() and not (d / "f.json").exists() else "f.json")
    theta = parse_number(cfg.get("theta", 0), "case.theta")
    try:
        rep = _verify(tag, fn, d / "M.json", d / "N.json", theta, cfg.get("tol", tol),
                      False, cfg.get("side", "left"), None)
    except PreconditionError as e:
        return {"case": d.name, "tag": tag, "error": "precondition", "message": str(e)}
    except (DocumentError, ValueError) as e:
        return {"case": d.name, "tag": tag, "error": "input", "message": str(e)}
    return {"case": d.name, "report": rep.to_dict()}


def cmd_batch(args, out):
    root = Path(args.dir)
    cases = sorted(str(p) for p in root.iterdir() if p.is_dir() and (p / "M.json").exists())
    if (root / "M.json").exists():
        cases.insert(0, str(root))
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_batch_case, cases, [args.tag] * len(cases),
                                  [args.tol] * len(cases)))
    else:
        results = [_batch_case(c, args.tag, args.tol) for c in cases]
    _emit(results, out)
    code = EXIT_OK
    for r in results:
        if r.get("error") == "input":
            code = max(code, EXIT_INPUT)
        elif r.get("error") == "precondition":
            code = max(code, EXIT_PRECONDITION)
        elif not r["report"]["pass"]:
            code = max(code, EXIT_FAIL)
    return code


# hypotheses each tag needs from a random instance
_RANDOM_KINDS = {
    "eq1": dict(at_flats="continuous"),
    "eq2": dict(m_continuous=True, on="range"),
    "eq3": dict(at_flats="right"),
    "eq4": dict(at_flats="left"),
    "eq5": dict(),
    "eq6": dict(on="range"),
}


def _random_case(seed: int, tag: str, tol: float):
    inst = random_instance(seed, **_RANDOM_KINDS[tag])
    rep = verify_identity(tag, inst.f, inst.M, inst.N, tol=tol)
    return seed, rep.passed, float(abs(rep.residual))


def cmd_random_check(args, out):
    seed0 = args.seed if args.seed is not None else default_seed()
    seeds = [seed0 + i for i in range(args.count)]
    n = len(seeds)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(_random_case, seeds, [args.tag] * n, [args.tol] * n,
                               chunksize=16))
    else:
        rows = [_random_case(s, args.tag, args.tol) for s in seeds]
    failed = [s for s, ok, _ in rows if not ok]
    _emit({"tag": args.tag, "seed": seed0, "count": n, "failures": failed,
           "max_abs_residual": max((r for _, _, r in rows), default=0.0)}, out)
    return EXIT_OK if not failed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="stieltjes",
        description="Lebesgue-Stieltjes measures, generalized inverses and the "
        "substitution rule with discontinuous integrators.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", help="evaluate a monotone function or a one-sided limit")
    s.add_argument("fn")
    s.add_argument("--at", required=True)
    s.add_argument("--side", choices=SIDES, default="value")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("invert", help="generalized inverse of a monotone function")
    s.add_argument("fn")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--side", choices=("left", "right"), default="left")
    g.add_argument("--theta")
    s.set_defaults(func=cmd_invert)

    s = sub.add_parser("compose", help="composite N(M(x))")
    s.add_argument("N")
    s.add_argument("M")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("flats", help="levels where M is flat")
    s.add_argument("M")
    s.set_defaults(func=cmd_flats)

    s = sub.add_parser("decompose", help="split N into n1 + n2 + n3 over the flats of M")
    s.add_argument("N")
    s.add_argument("M")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("integrate", help="integral of f against the measure of F")
    s.add_argument("f")
    s.add_argument("F")
    s.add_argument("--oracle", action="store_true")
    s.add_argument("--mesh", type=float, default=1e-4)
    s.add_argument("--rule", choices=("left", "right", "midpoint"), default="midpoint")
    s.set_defaults(func=cmd_integrate)

    s = sub.add_parser("verify", help="check one substitution identity")
    s.add_argument("tag", choices=IDENTITY_TAGS)
    s.add_argument("fn", help="f (eq1, eq3-eq5) or g (eq2, eq6)")
    s.add_argument("M")
    s.add_argument("N")
    s.add_argument("--theta")
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--force", action="store_true")
    s.add_argument("--side", choices=("left", "right"), default="left")
    s.add_argument("--probe", action="append", default=[],
                   help="extra x for the interval-mass comparison of forced eq3/eq4")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("inequalities", help="inequalities for monotone integrands")
    s.add_argument("g")
    s.add_argument("M")
    s.add_argument("N")
    s.add_argument("--decreasing", action="store_true")
    s.add_argument("--tol", type=float, default=1e-12)
    s.set_defaults(func=cmd_inequalities)

    s = sub.add_parser("plot-data", help="CSV of x, left, value, right")
    s.add_argument("fn")
    s.add_argument("--samples", type=int, default=101)
    s.set_defaults(func=cmd_plot_data)

    s = sub.add_parser("batch", help="verify every case directory under DIR")
    s.add_argument("dir")
    s.add_argument("--tag", choices=IDENTITY_TAGS, default="eq5")
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_batch)

    s = sub.add_parser("random-check",
                       help="verify an identity on seeded random instances "
                       "(seed from --seed or STIELTJES_SEED)")
    s.add_argument("tag", choices=IDENTITY_TAGS)
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--seed", type=int)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_random_check)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except DocumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as e:
        print(f"precondition violated: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
