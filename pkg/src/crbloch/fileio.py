"""Triangulation and certificate files.

JSON syntax with every number an exact rational string "p/q" (or "p"),
field elements as coefficient arrays in the power basis.  Schema keys:

    {"crb": 1,
     "field": {"minpoly": [...], "embedding": 0, "sigma": [...]},
     "tetrahedra": [{"verts": [..4 ids..],
                     "z01": [...], "z10": [...], "z23": [...], "z32": [...]}],
     "points":   {"<vertex id>": {"inf": true} | {"z": [...], "t": [...]}},
     "pairings": [{"face": [tet, i, j, k], "mate": [tet, i, j, k]}]}

Certificates are either a bare array of relation records
{"kind", "mult", "args"} over the triangulation's field, or an object
{"crb_cert": 1, "field": ..., "base_gen_image": [...], "target": ...,
"relations": [...]} when the chain lives in an extension field.
Emitted files re-parse to equal in-memory structures (no rounding).
"""

from __future__ import annotations

import json
from fractions import Fraction

from .crgeom import Point
from .errors import ParseError
from .numfield import FieldElement, NumberField
from .prebloch import Certificate, PreBlochElement, RelationInstance
from .simplicial import FacePairing, TetRecord, Triangulation

F = Fraction


def parse_rational(s) -> Fraction:
    if isinstance(s, int):
        return F(s)
    if not isinstance(s, str):
        raise ParseError(f"rational must be a string, got {s!r}")
    try:
        q = F(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"malformed rational {s!r}: {exc}")
    return q


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_element(field: NumberField, coeffs) -> FieldElement:
    if not isinstance(coeffs, list):
        raise ParseError(f"field element must be a coefficient array, got {coeffs!r}")
    if len(coeffs) > field.degree:
        raise ParseError(f"element has {len(coeffs)} coefficients in a "
                         f"degree-{field.degree} field")
    return field.element([parse_rational(c) for c in coeffs])


def format_element(a: FieldElement) -> list:
    coeffs = list(a.coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return [format_rational(c) for c in coeffs]


def parse_field(block) -> NumberField:
    try:
        minpoly = [parse_rational(c) for c in block["minpoly"]]
        embedding = int(block.get("embedding", 0))
        sigma = [parse_rational(c) for c in block["sigma"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad field block: {exc}")
    return NumberField(minpoly, embedding, sigma)


def format_field(field: NumberField) -> dict:
    return {"minpoly": [format_rational(c) for c in field.minpoly],
            "embedding": field.embedding_index,
            "sigma": [format_rational(c) for c in field.sigma_image]}


def _parse_point(field: NumberField, blob) -> Point:
    if blob.get("inf"):
        return Point.infinity(field)
    try:
        z = parse_element(field, blob["z"])
        t = parse_element(field, blob["t"])
    except KeyError as exc:
        raise ParseError(f"point needs 'z' and 't' (or 'inf'): missing {exc}")
    try:
        return Point.heisenberg(field, z, t)
    except ValueError as exc:
        raise ParseError(str(exc))


def _format_point(p: Point) -> dict:
    if p.inf:
        return {"inf": True}
    return {"z": format_element(p.z), "t": format_element(p.t)}


def loads_triangulation(text: str) -> Triangulation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno)
    if not isinstance(data, dict) or data.get("crb") != 1:
        raise ParseError('not a triangulation file (missing "crb": 1)')
    field = parse_field(data.get("field", {}))
    points = {}
    for key, blob in (data.get("points") or {}).items():
        points[int(key)] = _parse_point(field, blob)
    tets = []
    for n, blob in enumerate(data.get("tetrahedra", [])):
        try:
            verts = tuple(int(v) for v in blob["verts"])
            quad = tuple(parse_element(field, blob[k])
                         for k in ("z01", "z10", "z23", "z32"))
        except KeyError as exc:
            raise ParseError(f"tetrahedron {n} missing {exc}")
        if len(verts) != 4:
            raise ParseError(f"tetrahedron {n} needs four vertices")
        pts = None
        if points:
            try:
                pts = tuple(points[v] for v in verts)
            except KeyError as exc:
                raise ParseError(f"tetrahedron {n} references unknown vertex {exc}")
        tets.append(TetRecord(verts, quad, pts))
    pairings = []
    for n, blob in enumerate(data.get("pairings") or []):
        try:
            fa = blob["face"]
            fb = blob["mate"]
            pairings.append(FacePairing((int(fa[0]), tuple(int(x) for x in fa[1:4])),
                                        (int(fb[0]), tuple(int(x) for x in fb[1:4]))))
        except (KeyError, IndexError, TypeError) as exc:
            raise ParseError(f"bad pairing {n}: {exc}")
    return Triangulation(field, tets, pairings)


def dumps_triangulation(t: Triangulation) -> str:
    data = {"crb": 1, "field": format_field(t.field)}
    data["tetrahedra"] = [
        {"verts": list(tet.verts),
         "z01": format_element(tet.quad[0]), "z10": format_element(tet.quad[1]),
         "z23": format_element(tet.quad[2]), "z32": format_element(tet.quad[3])}
        for tet in t.tets]
    if all(tet.points is not None for tet in t.tets) and t.tets:
        points = {}
        clash = False
        for tet in t.tets:
            for v, p in zip(tet.verts, tet.points):
                if v in points and points[v] != p:
                    clash = True
                points[v] = p
        if not clash:
            data["points"] = {str(v): _format_point(p)
                              for v, p in sorted(points.items())}
    if t.pairings:
        data["pairings"] = [
            {"face": [p.face[0], *p.face[1]], "mate": [p.mate[0], *p.mate[1]]}
            for p in t.pairings]
    return json.dumps(data, indent=1)


def load_triangulation(path) -> Triangulation:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_triangulation(fh.read())


def save_triangulation(t: Triangulation, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_triangulation(t))
        fh.write("\n")


# ----------------------------------------------------------------------
# certificates

def _parse_relations(field: NumberField, arr) -> Certificate:
    insts = []
    for n, blob in enumerate(arr):
        try:
            kind = blob["kind"]
            mult = int(blob.get("mult", 1))
            args = tuple(parse_element(field, a) for a in blob.get("args", []))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad relation {n}: {exc}")
        insts.append(RelationInstance(kind, args, mult))
    return Certificate(insts)


def _parse_target(field: NumberField, blob) -> PreBlochElement:
    terms = {}
    for item in blob.get("terms", []):
        z = parse_element(field, item["z"])
        terms[z] = terms.get(z, 0) + int(item.get("mult", 1))
    return PreBlochElement(field, terms, int(blob.get("cf", 0)))


def _format_target(e: PreBlochElement) -> dict:
    return {"terms": [{"z": format_element(z), "mult": n}
                      for z, n in sorted(e.terms.items(), key=lambda kv: kv[0].coeffs)],
            "cf": e.cf_mult}


def loads_certificate(text: str, base_field: NumberField):
    """Returns (field, base_gen_image or None, target or None, Certificate)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno)
    if isinstance(data, list):
        return base_field, None, None, _parse_relations(base_field, data)
    if not isinstance(data, dict) or data.get("crb_cert") != 1:
        raise ParseError('not a certificate file (missing "crb_cert": 1)')
    field = parse_field(data["field"]) if "field" in data else base_field
    gen_image = None
    if "base_gen_image" in data:
        gen_image = parse_element(field, data["base_gen_image"])
        # the recorded image must be a root of the base minimal polynomial
        acc = field.zero
        pw = field.one
        for c in base_field.minpoly:
            acc = acc + pw * c
            pw = pw * gen_image
        if not acc.is_zero():
            raise ParseError("base_gen_image is not a root of the base minpoly")
    target = _parse_target(field, data["target"]) if "target" in data else None
    cert = _parse_relations(field, data.get("relations", []))
    return field, gen_image, target, cert


def dumps_certificate(cert: Certificate, field: NumberField = None,
                      target: PreBlochElement = None,
                      base_gen_image: FieldElement = None) -> str:
    arr = [{"kind": i.kind, "mult": i.multiplier,
            "args": [format_element(a) for a in i.args]} for i in cert]
    if field is None and target is None and base_gen_image is None:
        return json.dumps(arr, indent=1)
    data = {"crb_cert": 1}
    if field is not None:
        data["field"] = format_field(field)
    if base_gen_image is not None:
        data["base_gen_image"] = format_element(base_gen_image)
    if target is not None:
        data["target"] = _format_target(target)
    data["relations"] = arr
    return json.dumps(data, indent=1)


def load_certificate(path, base_field: NumberField):
    with open(path, "r", encoding="utf-8") as fh:
        return loads_certificate(fh.read(), base_field)
