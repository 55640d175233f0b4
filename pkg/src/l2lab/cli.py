"""``l2`` command-line driver.

Exit codes: 0 success, 2 invalid input, 3 resource limit (dimension cap),
4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import formats
from .complexes import validate
from .errors import InputError, L2Error
from .invariants import Schedule, fk_determinant, l2_betti, l2_torsion, levels_csv, spectral_density, whitehead_det
from .oracles import LaurentPolynomial, finite_group_det, mahler_measure
from .spectral import DEFAULT_CAP

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_NUMERIC = 0, 2, 3, 4


def _levels(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"levels must be comma-separated integers: {text!r}") from None


def _cap(args) -> int:
    if args.cap is not None:
        return args.cap
    env = os.environ.get("L2LAB_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"L2LAB_CAP must be an integer, got {env!r}") from None
    return DEFAULT_CAP


def _schedule(args, levels=None) -> Schedule:
    return Schedule(args.scheme, levels or args.levels, args.threshold, _cap(args))


def _echo(args) -> dict:
    # worker count and output path are deliberately left out: reports must not depend on them
    out = {"command": args.command, "input": getattr(args, "input", None), "format": args.format}
    if hasattr(args, "scheme"):
        out.update(scheme=args.scheme, threshold=args.threshold, cap=_cap(args))
        out["levels"] = [args.level] if args.command == "density" else list(args.levels)
    return out


def _emit(args, text: str):
    if args.out:
        formats.write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _report(args, payload: dict) -> str:
    return formats.dumps({"config": _echo(args), **payload})


def cmd_det(args):
    A = formats.load_matrix(args.input)
    est = fk_determinant(A, _schedule(args), direct=False if args.squared else None, jobs=args.jobs)
    if args.format == "csv":
        return levels_csv(est.levels, args.timing)
    return _report(args, est.as_dict(args.timing))


def cmd_whitehead(args):
    U = formats.unit_product_from_file_obj(formats.read_json(args.input))
    est = whitehead_det(U, _schedule(args), jobs=args.jobs)
    if args.format == "csv":
        return levels_csv(est.levels, args.timing)
    return _report(args, est.as_dict(args.timing))


def cmd_torsion(args):
    C = formats.load_complex(args.input)
    rep = l2_torsion(C, _schedule(args), jobs=args.jobs)
    if args.format == "csv":
        chunks = []
        for d in rep.degrees:
            body = levels_csv(d.levels, args.timing).splitlines()
            chunks.append("\n".join(["degree," + body[0]] + [f"{d.degree}," + row for row in body[1:]]))
        header = chunks[0].splitlines()[0] if chunks else "degree"
        rows = [r for c in chunks for r in c.splitlines()[1:]]
        return "\n".join([header] + rows) + "\n"
    return _report(args, rep.as_dict(args.timing))


def cmd_betti(args):
    C = formats.load_complex(args.input)
    b = l2_betti(C, _schedule(args), jobs=args.jobs)
    if args.format == "csv":
        return "degree,betti\n" + "".join(f"{j},{x:.12g}\n" for j, x in enumerate(b))
    return _report(args, {"kind": "betti", "betti": [float(f"{x:.12g}") for x in b]})


def cmd_density(args):
    A = formats.load_matrix(args.input)
    sched = _schedule(args, levels=(args.level,))
    s = spectral_density(A, sched.scheme, args.level, cap=sched.cap)
    if args.format == "csv":
        return s.to_csv()
    return _report(args, {"kind": "density", "normalization": s.normalization,
                          "steps": [[float(f"{lam:.12g}"), float(f"{F:.12g}")] for lam, F in s.steps()]})


def _parse_poly(text: str):
    text = text.strip()
    try:
        obj = json.loads(text)
        if obj and not isinstance(obj[0][0], list):
            obj = json.loads(f"[{text}]")
    except (json.JSONDecodeError, TypeError, IndexError):
        try:
            obj = json.loads(f"[{text}]")
        except json.JSONDecodeError as exc:
            raise InputError(f"cannot parse polynomial {text!r}: {exc}") from None
    try:
        return LaurentPolynomial.from_terms(obj)
    except (TypeError, IndexError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad polynomial terms {text!r}: {exc}") from None


def cmd_oracle(args):
    if args.which == "mahler":
        if not args.poly:
            raise InputError("oracle mahler needs --poly")
        value = mahler_measure(_parse_poly(args.poly), grid=args.grid)
    else:
        if not args.input:
            raise InputError("oracle finite needs --input")
        value = finite_group_det(formats.load_matrix(args.input))
    if args.format == "csv":
        return f"value\n{value:.12g}\n"
    if args.format == "json":
        return _report(args, {"kind": f"oracle_{args.which}", "value": float(f"{value:.12g}")})
    return f"{value:.12g}\n"


def cmd_validate(args):
    C = formats.load_complex(args.input, validate=False)
    rep = validate(C)
    if not rep.ok:
        v = rep.violation
        raise InputError(f"degree {v.degree}: {v}")
    return _report(args, {"kind": "validation", "ok": True, "ranks": list(C.ranks)})


COMMANDS = {
    "det": cmd_det,
    "torsion": cmd_torsion,
    "betti": cmd_betti,
    "whitehead": cmd_whitehead,
    "density": cmd_density,
    "oracle": cmd_oracle,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="l2", description="L^2 invariants of complexes over group rings.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, schedule=True, formats_=("json", "csv")):
        sp.add_argument("--input", help="input JSON file")
        sp.add_argument("--format", choices=formats_, default=formats_[0])
        sp.add_argument("--out", help="output path (default: stdout)")
        if schedule:
            sp.add_argument("--scheme", choices=("folner", "quotient"), default="folner")
            sp.add_argument("--threshold", type=float, default=1e-10,
                            help="relative kernel threshold (times max(1, lambda_max))")
            sp.add_argument("--cap", type=int, default=None, help="dimension cap (env L2LAB_CAP, default 5000)")
            sp.add_argument("--jobs", type=int, default=1)
            sp.add_argument("--timing", action="store_true", help="record wall-clock times (breaks byte-identity)")
        return sp

    for name in ("det", "torsion", "betti", "whitehead"):
        sp = common(sub.add_parser(name))
        sp.add_argument("--levels", type=_levels, default=(10, 20, 40))
        if name == "det":
            sp.add_argument("--squared", action="store_true", help="force Det(A*A)^(1/2) for self-adjoint input")
    sp = common(sub.add_parser("density"))
    sp.add_argument("--level", type=int, required=True)
    sp = common(sub.add_parser("oracle"), schedule=False, formats_=("text", "json", "csv"))
    sp.add_argument("which", choices=("mahler", "finite"))
    sp.add_argument("--poly", help='terms like "[[1],1,1],[[0],-2,1]"')
    sp.add_argument("--grid", type=int, default=1024)
    common(sub.add_parser("validate"), schedule=False)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    if args.command not in ("oracle",) and not args.input:
        print(f"error: {args.command} needs --input", file=sys.stderr)
        return EXIT_INPUT
    try:
        text = COMMANDS[args.command](args)
        _emit(args, text)
    except L2Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return EXIT_OK


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
