"""Command-line interface: ``maxarc <verb> [options]``.

Exit codes: 0 success, 1 verification or library failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from typing import TextIO

from . import arcs, census, singer
from .ff import FieldError, GF2m, default_modulus, format_elem, parse_elem
from .geom import GeometryError, elation_iota, format_point

SWEEP_LIMIT = arcs.SWEEP_LIMIT


class CommandFailed(Exception):
    """Verification failed; message is printed and the exit code is 1."""


def _field(args) -> GF2m:
    h = args.h
    mod = parse_elem(args.mod) if args.mod else default_modulus(h)
    return GF2m(h, mod)


@contextmanager
def _output(path: str | None, stdout: TextIO):
    if path is None or path == "-":
        yield stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _load_arc(args, stdout: TextIO) -> arcs.MathonArc:
    if args.input:
        with open(args.input) as fh:
            return arcs.read_arc(fh)
    if args.kind:
        kind = singer.SingerKind.parse(args.kind)
        F = None if args.h == 7 and not args.mod else _field(args)
        return singer.build_singer_arc(kind, F)
    raise CommandFailed("need --in <path> or --kind I|II")


# ----------------------------------------------------------------------------
# verbs


def cmd_field_info(args, out: TextIO) -> int:
    F = _field(args)
    out.write(f"{F.to_string()}\n")
    out.write(f"order={F.q} primitive={'yes' if F.is_primitive else 'no'}\n")
    if F.h <= 16:
        ones = sum(F.trace(a) for a in F.elements())
        out.write(f"trace0={F.q - ones} trace1={ones}\n")
    return 0


def cmd_build_arc(args, out: TextIO) -> int:
    arc = _load_arc(args, out)
    with _output(args.out, out) as fh:
        arcs.write_arc(arc, fh)
    return 0


def _sweep_summary(arc: arcs.MathonArc) -> tuple[bool, str]:
    F = arc.field
    pts = arcs.arc_points(arc)
    hist = arcs.secant_histogram(F, pts)
    ok = set(hist) <= {0, arc.degree}
    parts = " ".join(f"{k}-secant={n}" for k, n in sorted(hist.items()))
    return ok, f"points={len(pts)} lines={sum(hist.values())} {parts}"


def _verify_arc(arc: arcs.MathonArc, level: str, out: TextIO) -> bool:
    # constructing the MathonArc already checked closure and pairwise disjointness
    out.write(f"{arc.field.to_string()};degree={arc.degree} closed=yes disjoint=yes\n")
    if level == "none" or level == "trace":
        return True
    if arc.field.h <= SWEEP_LIMIT:
        ok, line = _sweep_summary(arc)
        out.write(line + f" verified-by-sweep={'yes' if ok else 'no'}\n")
        return ok
    ok = arcs.certify_by_theorem(arc)
    out.write(f"certified-by-theorem={'yes' if ok else 'no'}\n")
    return ok


def cmd_verify_arc(args, out: TextIO) -> int:
    arc = _load_arc(args, out)
    if not _verify_arc(arc, args.verify or "full", out):
        raise CommandFailed("arc is not maximal")
    return 0


def cmd_singer(args, out: TextIO) -> int:
    kind = singer.SingerKind.parse(args.kind or "I")
    level = args.verify or "trace"
    if args.h != 7:
        return cmd_lift(args, out)
    arc = singer.build_singer_arc(kind)
    F = arc.field
    reports = []
    for p in singer.singer_theta(kind):
        rep = singer.verify_singer_action(arc, singer.theta_matrix(p))
        reports.append(rep)
        record = {
            "kind": kind.value,
            "h": F.h,
            "w": format_elem(p.w),
            "t": format_elem(p.t),
            "t_log_w": F.log(p.t, p.w),
            "sigma_exp": p.sigma_exp,
            "permutation": list(rep.permutation),
            "cycle": singer.labelled_cycle(p),
            "order": rep.order,
            "seventh_power": rep.seventh_power,
            "group_order": rep.group_order,
            "classification": "first" if rep.is_seven_cycle else "none",
        }
        out.write(json.dumps(record) + "\n")
    action_ok = bool(reports) and all(r.ok for r in reports)
    if level != "full":
        out.write(f"7 conics, {'7-cycle action' if action_ok else 'action check FAILED'}\n")
        return 0 if action_ok else 1
    ok, line = _sweep_summary(arc)
    inf = arcs.lines_at_infinity(arc)
    elation = arcs.elation_involution_check(arc, elation_iota(F))
    out.write(line + "\n")
    out.write(
        f"lines at infinity: {inf.distinct} distinct, centre {format_point(inf.center) if inf.center else 'none'}; "
        f"iota fixes every conic: {'yes' if elation else 'no'}\n"
    )
    if not (ok and action_ok and elation and inf.distinct == 7):
        raise CommandFailed("Singer verification failed")
    out.write(f"{len(arcs.arc_points(arc))} points, all lines 0- or 8-secant, 7-cycle action\n")
    return 0


def cmd_lift(args, out: TextIO) -> int:
    kind = singer.SingerKind.parse(args.kind or "I")
    F = _field(args) if args.mod else None
    res = singer.lift_to_extension(kind, args.h, F)
    certified = arcs.certify_by_theorem(res.arc, res.shear)
    record = {
        "kind": kind.value,
        "h": args.h,
        "sigma_exp": res.frob_exp,
        "automorphism_order": res.frob_order,
        "permutation": list(res.permutation),
        "transitive": res.transitive,
        "kernel_fixes_conics": res.kernel_fixes_conics,
        "classification": res.classification,
        "all_in_family": res.arc.all_in_family(),
        "shear": [format_elem(v) for v in res.shear] if res.shear else None,
        "certified_by_theorem": certified,
    }
    out.write(json.dumps(record) + "\n")
    if not (res.transitive and certified):
        raise CommandFailed("lifted arc failed certification")
    return 0


def cmd_census(args, out: TextIO) -> int:
    F = _field(args)
    summary = census.count_8arcs(F)
    out.write(f"{'quantity':<16}{'expected':>10}{'computed':>12}  status\n")
    for name, exp, got, ok in summary.rows():
        tag = " (imported /7)" if name == "normal_classes" else ""
        out.write(f"{name:<16}{'-' if exp is None else exp:>10}{str(got):>12}  {'PASS' if ok else 'FAIL'}{tag}\n")
    out.write(f"quarter step regenerates arcs: {'yes' if summary.quarter_step_ok else 'no'}\n")
    out.write(f"singer arcs by quartic transport agree: {'yes' if summary.singer_cross_check else 'no'}\n")
    status = "PASS" if summary.passed else "FAIL"
    out.write(f"normal={summary.normal_classes} singer={summary.singer_classes} total={summary.total} {status}\n")
    return 0 if summary.passed else 1


def cmd_formula(args, out: TextIO) -> int:
    if args.p is None:
        raise CommandFailed("formula needs --p <prime>")
    out.write(f"{census.formula_8count(args.p)}\n")
    return 0


def cmd_export(args, out: TextIO) -> int:
    arc = _load_arc(args, out)
    with _output(args.out, out) as fh:
        arcs.write_arc(arc, fh)
    if args.points:
        with _output(args.points, out) as fh:
            arcs.write_points(arcs.arc_points(arc), fh)
    return 0


COMMANDS = {
    "field-info": cmd_field_info,
    "build-arc": cmd_build_arc,
    "verify-arc": cmd_verify_arc,
    "singer": cmd_singer,
    "lift": cmd_lift,
    "census": cmd_census,
    "formula": cmd_formula,
    "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maxarc", description="Maximal arcs in PG(2, 2^h).")
    parser.add_argument("verb", choices=sorted(COMMANDS))
    parser.add_argument("--h", type=int, default=7, help="extension degree (default 7)")
    parser.add_argument("--mod", help="modulus polynomial as hex bit pattern")
    parser.add_argument("--kind", choices=["I", "II", "i", "ii"], help="Singer arc kind")
    parser.add_argument("--p", type=int, help="odd prime for the closed-form count")
    parser.add_argument("--in", dest="input", help="arc file to read")
    parser.add_argument("--out", help="arc file to write (default stdout)")
    parser.add_argument("--points", help="export: also write the point set here")
    parser.add_argument("--verify", choices=["none", "trace", "full"])
    return parser


def run(argv: list[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        return COMMANDS[args.verb](args, stdout)
    except CommandFailed as exc:
        stderr.write(f"maxarc {args.verb}: {exc}\n")
        return 1
    except (OSError, FieldError, GeometryError, arcs.ArcError, singer.SingerError, census.CensusError, ValueError) as exc:
        stderr.write(f"maxarc {args.verb}: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
