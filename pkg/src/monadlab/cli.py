"""Command-line surface: one subcommand per pipeline, file-based and seeded.

Every subcommand is a pure function of its input file bytes and flags
(plus the MONADLAB_PRIME environment default), so repeated runs produce
byte-identical output.  Exit codes: 0 success, 1 mathematical failure
(validation failure, classification refusal, unrepresentable dims),
2 usage errors and malformed input files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import cohomology, lines_scan, monad, pencil, pointwise
from .errors import MonadDecodeError, MonadLabError
from .exactlin import DEFAULT_PRIME, field_from_name

EXIT_OK = 0
EXIT_MATH = 1
EXIT_USAGE = 2


def _default_prime() -> int:
    raw = os.environ.get("MONADLAB_PRIME", "")
    return int(raw) if raw else DEFAULT_PRIME


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_monad(path: str) -> monad.SpecialMonad:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise MonadDecodeError(f"cannot read {path}: {exc}") from exc
    return monad.decode(data)


def _parse_points(text: str, field):
    try:
        parts = text.split(";")
        if len(parts) != 2:
            raise ValueError("expected two points separated by ';'")
        pts = [[Fraction(x) for x in part.split(",")] for part in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad --points {text!r}: {exc}") from exc
    return pencil.Line.from_points(field, pts[0], pts[1])


def _line_for(args, M) -> pencil.Line:
    if args.points:
        return _parse_points(args.points, M.field)
    return lines_scan.sample_line(args.seed, args.index, M.field, M.ambient_n)


def _budget_from(args) -> pointwise.DegeneracyBudget:
    return pointwise.DegeneracyBudget(prime=args.prime, slices=args.slices,
                                      seed=args.seed)


# ---------------------------------------------------------------------------
# handlers


def _cmd_examples(args) -> int:
    M = monad.example_monad(args.name)
    _emit(monad.encode(M).decode("utf-8"), args.out)
    return EXIT_OK


def _cmd_generate(args) -> int:
    try:
        v, w, vp = (int(x) for x in args.dims.split(","))
    except ValueError as exc:
        raise ValueError(f"bad --dims {args.dims!r}: expected v,w,v'") from exc
    field = field_from_name(args.field)
    M = monad.random_monad(v, w, vp, seed=args.seed, field=field,
                           ambient_n=args.ambient)
    _emit(monad.encode(M).decode("utf-8"), args.out)
    return EXIT_OK


def _cmd_validate(args) -> int:
    M = _load_monad(args.monad)
    report = monad.validate(M)
    if args.format == "json":
        _emit(_dump(report.to_json_obj()), args.out)
    else:
        lines = []
        for check in (report.composition, report.beta_surjective, report.alpha_injective):
            status = "ok" if check.passed else "FAIL"
            extra = f" [{check.confidence}]"
            if check.witness and not check.passed:
                extra += f" witness [{':'.join(check.witness)}]"
            lines.append(f"{check.name}: {status}{extra}")
        lines.append("verdict: " + ("valid monad" if report.overall else "NOT a monad"))
        _emit("\n".join(lines) + "\n", args.out)
    if not report.overall:
        for check in (report.composition, report.beta_surjective, report.alpha_injective):
            if not check.passed:
                msg = f"monadlab: {check.name} failed: {check.detail}"
                if check.witness:
                    msg += f" (witness [{':'.join(check.witness)}])"
                print(msg, file=sys.stderr)
        return EXIT_MATH
    return EXIT_OK


def _cmd_invariants(args) -> int:
    M = _load_monad(args.monad)
    inv = monad.invariants(M)
    if args.format == "json":
        _emit(_dump(inv.to_json_obj()), args.out)
    else:
        _emit(f"rank {inv.rank}, c1 = {inv.c1}, c2 = {inv.c2}, c3 = {inv.c3}\n",
              args.out)
    return EXIT_OK


def _cmd_classify(args) -> int:
    M = _load_monad(args.monad)
    report = pointwise.classify(M, _budget_from(args))
    if args.format == "json":
        _emit(_dump(report.to_json_obj()), args.out)
    else:
        _emit(report.display + "\n", args.out)
    for warning in report.warnings:
        print(f"monadlab: warning: {warning}", file=sys.stderr)
    return EXIT_OK


def _cmd_cohomology(args) -> int:
    M = _load_monad(args.monad)
    table = cohomology.cohomology_table(M, args.kmin, args.kmax)
    if args.format == "csv":
        _emit(table.to_csv(), args.out)
    elif args.format == "json":
        _emit(_dump(table.to_json_obj()), args.out)
    else:
        _emit(table.to_markdown(), args.out)
    return EXIT_OK


def _cmd_admissible(args) -> int:
    M = _load_monad(args.monad)
    report = cohomology.admissibility_check(M, (args.kmin, args.kmax))
    _emit(_dump(report.to_json_obj()), args.out)
    if not report.passed:
        print(f"monadlab: admissibility violated at {report.violations}",
              file=sys.stderr)
        return EXIT_MATH
    return EXIT_OK


def _cmd_stability(args) -> int:
    M = _load_monad(args.monad)
    cls = pointwise.classify(M, _budget_from(args))
    report = cohomology.stability_report(M, cls)
    _emit(_dump(report.to_json_obj()), args.out)
    return EXIT_OK


def _cmd_dualize(args) -> int:
    M = _load_monad(args.monad)
    cls = pointwise.classify(M, _budget_from(args))
    dual = monad.dualize(M, cls)
    _emit(monad.encode(dual).decode("utf-8"), args.out)
    return EXIT_OK


def _cmd_dsum(args) -> int:
    M1 = _load_monad(args.left)
    M2 = _load_monad(args.right)
    _emit(monad.encode(monad.direct_sum(M1, M2)).decode("utf-8"), args.out)
    return EXIT_OK


def _pencil_obj(pc: pencil.PencilComplex, line: pencil.Line):
    f = pc.field
    def mat(m):
        return [[f.fmt(x) for x in row] for row in m.data]
    return {
        "field": f.name,
        "v": pc.v, "w": pc.w, "v_prime": pc.v_prime,
        "line": line.to_json_obj(),
        "A_s": mat(pc.A.coeffs[0]), "A_t": mat(pc.A.coeffs[1]),
        "B_s": mat(pc.B.coeffs[0]), "B_t": mat(pc.B.coeffs[1]),
    }


def _cmd_restrict(args) -> int:
    M = _load_monad(args.monad)
    line = _line_for(args, M)
    pc = pencil.restrict(M, line)
    _emit(_dump(_pencil_obj(pc, line)), args.out)
    return EXIT_OK


def _cmd_splitting(args) -> int:
    M = _load_monad(args.monad)
    line = _line_for(args, M)
    pc = pencil.restrict(M, line)
    status = pencil.line_status(pc)
    if not status.clean:
        obj = {"line": line.to_json_obj(), "status": "degenerate",
               "detail": status.to_json_obj(pc.field)}
        _emit(_dump(obj), args.out)
        print("monadlab: left map degenerates on this line; no splitting",
              file=sys.stderr)
        return EXIT_MATH
    parts = pencil.splitting_type(pc)
    lo, hi = -pc.v - 2, pc.v_prime + 2
    dims = {str(k): list(pencil.p1_cohomology(pc, k)) for k in range(lo, hi + 1)}
    obj = {
        "line": line.to_json_obj(),
        "status": "clean",
        "splitting": list(parts),
        "trivial": parts.is_trivial,
        "twist_dims": dims,
    }
    if M.ambient_n == 3:
        obj["plucker"] = [M.field.fmt(x) for x in line.plucker()]
    _emit(_dump(obj), args.out)
    return EXIT_OK


def _cmd_jumping_scan(args) -> int:
    M = _load_monad(args.monad)
    report = lines_scan.jumping_scan(M, args.prime, args.samples, args.seed,
                                     keep_lines=bool(args.emit_lines))
    if args.emit_lines:
        with open(args.emit_lines, "w", encoding="utf-8") as fh:
            for outcome in report.outcomes:
                fh.write(json.dumps(outcome.to_json_obj(), sort_keys=True) + "\n")
    _emit(_dump(report.to_json_obj()), args.out)
    return EXIT_OK


def _cmd_codim_evidence(args) -> int:
    M = _load_monad(args.monad)
    try:
        primes = [int(x) for x in args.primes.split(",")]
    except ValueError as exc:
        raise ValueError(f"bad --primes {args.primes!r}") from exc
    report = lines_scan.codim_evidence(M, primes, args.samples, args.seed)
    if args.format == "csv":
        _emit(report.to_csv(), args.out)
    else:
        _emit(_dump(report.to_json_obj()), args.out)
    return EXIT_OK


def _cmd_uniformity(args) -> int:
    M = _load_monad(args.monad)
    report = lines_scan.uniformity_evidence(M, args.samples, args.seed)
    _emit(_dump(report.to_json_obj()), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_common(sp, out=True):
    if out:
        sp.add_argument("--out", help="write output to this file instead of stdout")


def _add_classify_knobs(sp):
    sp.add_argument("--prime", type=int, default=_default_prime(),
                    help="prime for finite-field scans (env MONADLAB_PRIME)")
    sp.add_argument("--slices", type=int, default=50,
                    help="random slices per dimension level")
    sp.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monadlab",
        description="Exact calculus for special monads on projective space.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("examples", help="emit one of the built-in monads")
    sp.add_argument("--name", required=True, choices=monad.EXAMPLE_NAMES)
    _add_common(sp)
    sp.set_defaults(func=_cmd_examples)

    sp = sub.add_parser("generate", help="seeded random monad with given dims")
    sp.add_argument("--dims", required=True, help="v,w,v'")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--field", default="Q", help='"Q" or "Fp:<p>"')
    sp.add_argument("--ambient", type=int, default=3, choices=(2, 3))
    _add_common(sp)
    sp.set_defaults(func=_cmd_generate)

    sp = sub.add_parser("validate", help="check the monad conditions")
    sp.add_argument("monad")
    sp.add_argument("--format", choices=("human", "json"), default="human")
    _add_common(sp)
    sp.set_defaults(func=_cmd_validate)

    sp = sub.add_parser("invariants", help="rank and Chern classes")
    sp.add_argument("monad")
    sp.add_argument("--format", choices=("human", "json"), default="human")
    _add_common(sp)
    sp.set_defaults(func=_cmd_invariants)

    sp = sub.add_parser("classify", help="regularity of the cohomology sheaf")
    sp.add_argument("monad")
    sp.add_argument("--format", choices=("human", "json"), default="human")
    _add_classify_knobs(sp)
    _add_common(sp)
    sp.set_defaults(func=_cmd_classify)

    sp = sub.add_parser("cohomology", help="twist cohomology table")
    sp.add_argument("monad")
    sp.add_argument("--kmin", type=int, default=cohomology.DEFAULT_WINDOW[0])
    sp.add_argument("--kmax", type=int, default=cohomology.DEFAULT_WINDOW[1])
    sp.add_argument("--format", choices=("md", "csv", "json"), default="md")
    _add_common(sp)
    sp.set_defaults(func=_cmd_cohomology)

    sp = sub.add_parser("admissible", help="admissibility vanishing pattern")
    sp.add_argument("monad")
    sp.add_argument("--kmin", type=int, default=cohomology.DEFAULT_WINDOW[0])
    sp.add_argument("--kmax", type=int, default=cohomology.DEFAULT_WINDOW[1])
    _add_common(sp)
    sp.set_defaults(func=_cmd_admissible)

    sp = sub.add_parser("stability", help="semistability/stability verdicts")
    sp.add_argument("monad")
    _add_classify_knobs(sp)
    _add_common(sp)
    sp.set_defaults(func=_cmd_stability)

    sp = sub.add_parser("dualize", help="dual monad (locally free only)")
    sp.add_argument("monad")
    _add_classify_knobs(sp)
    _add_common(sp)
    sp.set_defaults(func=_cmd_dualize)

    sp = sub.add_parser("dsum", help="block-diagonal direct sum")
    sp.add_argument("left")
    sp.add_argument("right")
    _add_common(sp)
    sp.set_defaults(func=_cmd_dsum)

    for name, func, help_text in (
        ("restrict", _cmd_restrict, "restrict the monad to a line"),
        ("splitting", _cmd_splitting, "splitting type on a line"),
    ):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("monad")
        sp.add_argument("--points", help="line as 'a0,a1,a2,a3;b0,b1,b2,b3'")
        sp.add_argument("--seed", type=int, default=0, help="seed for a sampled line")
        sp.add_argument("--index", type=int, default=0, help="index of the sampled line")
        _add_common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("jumping-scan", help="jumping-line statistics mod p")
    sp.add_argument("monad")
    sp.add_argument("--prime", type=int, default=_default_prime())
    sp.add_argument("--samples", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--emit-lines", help="write one JSON line per sampled line")
    _add_common(sp)
    sp.set_defaults(func=_cmd_jumping_scan)

    sp = sub.add_parser("codim-evidence", help="jumping-fraction scaling across primes")
    sp.add_argument("monad")
    sp.add_argument("--primes", default="101,1009", help="comma-separated primes")
    sp.add_argument("--samples", type=int, default=20000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    _add_common(sp)
    sp.set_defaults(func=_cmd_codim_evidence)

    sp = sub.add_parser("uniformity", help="uniformity evidence from sampled lines")
    sp.add_argument("monad")
    sp.add_argument("--samples", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    _add_common(sp)
    sp.set_defaults(func=_cmd_uniformity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except MonadDecodeError as exc:
        print(f"monadlab: bad input file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"monadlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MonadLabError as exc:
        print(f"monadlab: {exc}", file=sys.stderr)
        return EXIT_MATH


def console_entry():
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
