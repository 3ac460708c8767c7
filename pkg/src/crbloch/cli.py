"""Command-line interface.

Subcommands: validate, invariant, delta, dilog, pachner, catalog.
Paths may be triangulation files or catalog references of the form
``catalog:<name>`` (``catalog:fig8-family?beta=1/2`` for the family).
Exit codes: 0 success, 1 check failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from . import fileio
from .balls import workprec
from .catalog import CATALOG, TORSION_LANGUAGE, get_entry, resolve_path_or_catalog
from .crgeom import GeomContext, Point
from .dilog import D_of_element
from .errors import (
    CRBlochError,
    MissingGeometry,
    NotGeneric,
    ParseError,
    PrecisionExhausted,
    UnsupportedField,
)
from .prebloch import PreBlochElement, reduce_by_certificate, verify_certificate
from .simplicial import (
    Triangulation,
    TetRecord,
    apply_move_14,
    apply_move_23,
    apply_move_32,
    beta_triangulation,
    develop,
    validate_structure,
)
from .wedge import basis_for, delta_map, wedge_reduce

F = Fraction

EXIT_OK, EXIT_CHECK, EXIT_INPUT = 0, 1, 2


def _prec_of(args) -> int:
    if args.prec is not None:
        return args.prec
    env = os.environ.get("CRB_PREC")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"CRB_PREC={env!r} is not an integer")
    return 128


def _emit(args, payload: dict, text_lines: list) -> None:
    if args.json:
        print(json.dumps(payload, indent=1, default=str))
    else:
        for line in text_lines:
            print(line)


def _map_element(z, gen_image):
    out = gen_image.field.from_rational(z.coeffs[0])
    pw = gen_image.field.one
    for c in z.coeffs[1:]:
        pw = pw * gen_image
        out = out + pw * c
    return out


def _map_prebloch(e: PreBlochElement, field, gen_image) -> PreBlochElement:
    if gen_image is None:
        return e
    terms = {}
    for z, n in e.terms.items():
        w = _map_element(z, gen_image)
        terms[w] = terms.get(w, 0) + n
    return PreBlochElement(field, terms, e.cf_mult)


# ----------------------------------------------------------------------
# subcommands

def cmd_validate(args) -> int:
    _, tri = resolve_path_or_catalog(args.path)
    report = validate_structure(tri)
    payload = {"ok": report.ok,
               "checks": [{"id": c.check_id, "status": c.status,
                           "witness": c.witness} for c in report.checks]}
    _emit(args, payload, report.lines())
    return EXIT_OK if report.ok else EXIT_CHECK


def cmd_invariant(args) -> int:
    entry, tri = resolve_path_or_catalog(args.path)
    beta = beta_triangulation(tri)
    lines = [f"beta(M) = {beta}"]
    payload = {"beta": str(beta), "stages": []}
    ok = True
    if args.certificate:
        field, gen_image, target, cert = fileio.load_certificate(
            args.certificate, tri.field)
        start = _map_prebloch(beta, field, gen_image)
        if target is not None:
            good = verify_certificate(start, target, cert, args.mode)
            ok &= good
            lines.append(f"certificate target {target}: "
                         f"{'VERIFIED' if good else 'FAILED'} ({args.mode} mode)")
            payload["stages"].append({"target": str(target), "verified": good})
        else:
            reduced = reduce_by_certificate(start, cert, args.mode)
            lines.append(f"certificate-reduced form: {reduced} "
                         f"(relations admissible, {args.mode} mode)")
            payload["stages"].append({"reduced": str(reduced), "verified": True})
    elif entry is not None:
        current = beta
        shown = []
        for stage in entry.stages:
            start = _map_prebloch(current, stage.field, stage.base_gen_image)
            good = verify_certificate(start, stage.target, stage.certificate,
                                      args.mode)
            ok &= good
            shown.append(stage.label)
            payload["stages"].append({"label": stage.label, "verified": good})
            current = stage.target if stage.base_gen_image is None else current
            if not good:
                break
        if shown:
            verdict = "VERIFIED" if ok else "FAILED"
            lines.append("; ".join(shown) + f"; certificate {verdict} "
                         f"({args.mode} mode)")
        if ok and entry.torsion_stage is not None:
            st = entry.torsion_stage
            good = verify_certificate(3 * beta, st.target, st.certificate,
                                      args.mode)
            ok &= good
            lines.append(f"{st.label}: {'VERIFIED' if good else 'FAILED'}")
            if good:
                lines.append(TORSION_LANGUAGE)
            payload["stages"].append({"label": st.label, "verified": good})
        if entry.notes:
            lines.append(f"note: {entry.notes}")
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_delta(args) -> int:
    _, tri = resolve_path_or_catalog(args.path)
    beta = beta_triangulation(tri)
    basis = basis_for(beta)
    reduced = wedge_reduce(delta_map(beta), basis)
    zero = reduced.is_zero()
    lines = reduced.report().splitlines()
    lines.append(f"IN BLOCH GROUP: {'yes' if zero else 'no'}")
    if not zero and reduced.free_is_zero():
        lines.append("(free part vanishes; only root-of-unity torsion remains)")
    _emit(args, {"canonical_zero": zero, "free_zero": reduced.free_is_zero(),
                 "report": reduced.report()}, lines)
    return EXIT_OK if zero else EXIT_CHECK


def cmd_dilog(args) -> int:
    prec = _prec_of(args)
    _, tri = resolve_path_or_catalog(args.path)
    beta = beta_triangulation(tri)
    enc = D_of_element(beta, prec)
    tol = mpf(10) ** -((25 * prec) // 128)
    good = enc.contains_zero() and enc.rad < tol
    lines = [f"D(beta(M)) = {mpmath.nstr(enc.mid, 20)} +/- {mpmath.nstr(enc.rad, 5)}",
             f"{'PASS' if good else 'FAIL'}: enclosure "
             f"{'contains' if enc.contains_zero() else 'misses'} 0, "
             f"radius {'<' if enc.rad < tol else '>='} {mpmath.nstr(tol, 3)}"]
    sweeps = []
    if tri.field.degree > 1:
        from .balls import RealBall
        from .dilog import bw_D
        for k in range(tri.field.degree):
            if k == tri.field.embedding_index:
                continue
            with mp.workprec(workprec(prec)):
                total = RealBall(0, 0)
                try:
                    for z, n in beta.terms.items():
                        total = total + bw_D(z.embed_at(k, prec), prec) * n
                except PrecisionExhausted:
                    lines.append(f"embedding {k}: D not certifiable "
                                 "(value too close to the real axis)")
                    continue
            sweeps.append((k, total))
            lines.append(f"embedding {k}: D = {mpmath.nstr(total.mid, 20)} "
                         f"+/- {mpmath.nstr(total.rad, 5)}")
    _emit(args, {"mid": str(enc.mid), "rad": str(enc.rad), "pass": good,
                 "sweeps": [(k, str(v.mid)) for k, v in sweeps]}, lines)
    return EXIT_OK if good else EXIT_CHECK


def _attach_points(tri: Triangulation) -> Triangulation:
    if tri.has_points():
        return tri
    pts = develop(tri)
    ctx = GeomContext.for_field(tri.field)
    tets = []
    for tet, p in zip(tri.tets, pts):
        quad = tuple(ctx.embed(z) for z in tet.quad)
        tets.append(TetRecord(tet.verts, quad, tuple(p)))
    return Triangulation(ctx.K, tets, tri.pairings)


def _parse_new_point(spec: str, field) -> Point:
    if spec.strip() in ("inf", "infinity"):
        return Point.infinity(field)
    try:
        blob = json.loads(spec)
    except json.JSONDecodeError as exc:
        raise ParseError(f"--new-point must be 'inf' or a JSON point: {exc}")
    return fileio._parse_point(field, blob)


def cmd_pachner(args) -> int:
    prec = _prec_of(args)
    _, tri = resolve_path_or_catalog(args.path)
    tri = _attach_points(tri)
    before = beta_triangulation(tri)
    if args.move == "23":
        if args.pairing is None:
            raise ParseError("--move 23 needs --pairing N (index into the "
                             f"{len(tri.pairings)} pairings)")
        moved = apply_move_23(tri, args.pairing)
    elif args.move == "32":
        if not args.edge:
            raise ParseError("--move 32 needs --edge 'id,id'")
        x, y = (int(v) for v in args.edge.split(","))
        moved = apply_move_32(tri, (x, y))
    else:
        if args.simplex is None or args.new_point is None:
            raise ParseError("--move 14 needs --simplex I and --new-point")
        field = tri.tets[0].points[0].field
        newp = _parse_new_point(args.new_point, field)
        moved = apply_move_14(tri, args.simplex, newp)
    after = beta_triangulation(moved)
    with mp.workprec(workprec(prec)):
        d_before = D_of_element(before, prec)
        d_after = D_of_element(after, prec)
        diff = d_before - d_after
    out = args.out or "moved.crb.json"
    fileio.save_triangulation(moved, out)
    lines = [f"D before = {mpmath.nstr(d_before.mid, 20)} +/- {mpmath.nstr(d_before.rad, 5)}",
             f"D after  = {mpmath.nstr(d_after.mid, 20)} +/- {mpmath.nstr(d_after.rad, 5)}",
             f"difference = {mpmath.nstr(diff.mid, 10)} +/- {mpmath.nstr(diff.rad, 5)} "
             f"(contains 0: {diff.contains_zero()})",
             f"wrote {out}"]
    _emit(args, {"d_before": str(d_before.mid), "d_after": str(d_after.mid),
                 "diff_contains_zero": diff.contains_zero(), "out": out}, lines)
    return EXIT_OK if diff.contains_zero() else EXIT_CHECK


def cmd_catalog(args) -> int:
    if not args.name:
        lines = [f"{name}: {entry.description}"
                 + (" (parametric: --beta p/q)" if entry.parametric else "")
                 for name, entry in sorted(CATALOG.items())]
        _emit(args, {"entries": {n: e.description for n, e in CATALOG.items()}},
              lines)
        return EXIT_OK
    beta = F(args.beta) if args.beta else None
    data = get_entry(args.name, beta)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        base = os.path.join(args.out, args.name.replace("/", "_"))
        tri_path = base + ".crb.json"
        fileio.save_triangulation(data.triangulation, tri_path)
        written = [tri_path]
        for k, stage in enumerate(data.stages):
            p = f"{base}.cert{k}.json"
            with open(p, "w", encoding="utf-8") as fh:
                fh.write(fileio.dumps_certificate(
                    stage.certificate, stage.field, stage.target,
                    stage.base_gen_image))
            written.append(p)
        if data.torsion_stage is not None:
            p = f"{base}.torsion.json"
            with open(p, "w", encoding="utf-8") as fh:
                fh.write(fileio.dumps_certificate(
                    data.torsion_stage.certificate, data.torsion_stage.field,
                    data.torsion_stage.target))
            written.append(p)
        _emit(args, {"written": written}, [f"wrote {p}" for p in written])
    else:
        print(fileio.dumps_triangulation(data.triangulation))
    return EXIT_OK


# ----------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="crbloch",
        description="exact pre-Bloch invariants of spherical CR triangulations")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, path=True):
        if path:
            p.add_argument("path", help="triangulation file or catalog:<name>")
        p.add_argument("--prec", type=int, default=None,
                       help="working precision in bits (default 128 or CRB_PREC)")
        p.add_argument("--mode", choices=("strict", "extended"),
                       default="extended")
        p.add_argument("--json", action="store_true",
                       help="machine-readable output")

    common(sub.add_parser("validate", help="check structural constraints"))
    p = sub.add_parser("invariant", help="compute and certify beta(M)")
    common(p)
    p.add_argument("--certificate", help="certificate file to verify")
    common(sub.add_parser("delta", help="reduce delta(beta(M)) in the wedge square"))
    common(sub.add_parser("dilog", help="enclose D(beta(M))"))
    p = sub.add_parser("pachner", help="apply an elementary move")
    common(p)
    p.add_argument("--move", choices=("23", "32", "14"), required=True)
    p.add_argument("--pairing", type=int, help="pairing index for --move 23")
    p.add_argument("--edge", help="global ids 'x,y' of the edge for --move 32")
    p.add_argument("--simplex", type=int, help="tetrahedron index for --move 14")
    p.add_argument("--new-point", help="'inf' or JSON point for --move 14")
    p.add_argument("--out", help="output triangulation path")
    p = sub.add_parser("catalog", help="list or extract built-in examples")
    p.add_argument("name", nargs="?", help="entry name")
    p.add_argument("--beta", help="family parameter p/q")
    p.add_argument("--out", help="directory to extract files into")
    p.add_argument("--prec", type=int, default=None)
    p.add_argument("--mode", choices=("strict", "extended"), default="extended")
    p.add_argument("--json", action="store_true")
    return ap


_COMMANDS = {
    "validate": cmd_validate,
    "invariant": cmd_invariant,
    "delta": cmd_delta,
    "dilog": cmd_dilog,
    "pachner": cmd_pachner,
    "catalog": cmd_catalog,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ParseError, UnsupportedField, PrecisionExhausted, MissingGeometry,
            NotGeneric, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CRBlochError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
