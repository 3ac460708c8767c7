"""Triangulations carrying cross-ratio structures.

A tetrahedron record stores four global vertex ids, the invariant
quadruple (z01, z10, z23, z32), and optionally the four vertex points.
Face pairings identify ordered position triples of two tetrahedra.
Stored vertex orders encode the orientation chain: a tetrahedron that
enters the fundamental chain negatively is stored with its first two
vertices swapped.

Provided here: structure validation (value/conjugation constraints,
face triple products, edge-class products), the invariant
beta = sum([z01]+[z10]+[z23]+[z32]), boundary cancellation in terms of
exact Cartan data, normalized development, Pachner 2-3/1-4 moves both
on bare point sets and as surgery on a complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .crgeom import (
    ConfigFour,
    GeomContext,
    Point,
    cartan_tangent,
    is_generic,
    params_from_quadruple,
    side_pairing,
    table_from_quadruple,
    _parity_even,
)
from .errors import (
    DegenerateCrossRatio,
    InconsistentStructure,
    MissingGeometry,
    MissingPairings,
    NotGeneric,
)
from .numfield import FieldElement, NumberField
from .prebloch import PreBlochElement, beta_config


# ----------------------------------------------------------------------
# records

@dataclass
class TetRecord:
    verts: tuple                      # four global vertex ids
    quad: tuple                       # (z01, z10, z23, z32)
    points: Optional[tuple] = None    # four Points, aligned with verts

    def table(self):
        return table_from_quadruple(self.quad)

    def x_value(self, order):
        tab = self.table()
        val = tab[(order[0], order[1])]
        return val if _parity_even(tuple(order)) else val.inverse()


@dataclass
class FacePairing:
    face: tuple    # (tet index, (i, j, k) positions)
    mate: tuple

    def key(self):
        return (self.face[0], frozenset(self.face[1]))

    def mate_key(self):
        return (self.mate[0], frozenset(self.mate[1]))


@dataclass
class Triangulation:
    field: NumberField
    tets: list
    pairings: list = dc_field(default_factory=list)

    def __post_init__(self):
        seen = {}
        for n, p in enumerate(self.pairings):
            for key in (p.key(), p.mate_key()):
                if key in seen:
                    raise InconsistentStructure(
                        f"face {key} paired twice (pairings {seen[key]} and {n})")
                seen[key] = n

    def pairing_lookup(self) -> dict:
        """(tet, frozen face positions) -> (mate tet, position map)."""
        out = {}
        for p in self.pairings:
            (ta, fa), (tb, fb) = p.face, p.mate
            out[(ta, frozenset(fa))] = (tb, dict(zip(fa, fb)))
            out[(tb, frozenset(fb))] = (ta, dict(zip(fb, fa)))
        return out

    def has_points(self) -> bool:
        return all(t.points is not None for t in self.tets)

    def fully_paired(self) -> bool:
        lk = self.pairing_lookup()
        return all((i, frozenset({0, 1, 2, 3} - {v})) in lk
                   for i, _ in enumerate(self.tets) for v in range(4))


# ----------------------------------------------------------------------
# invariants

def beta_triangulation(t: Triangulation) -> PreBlochElement:
    out = PreBlochElement.zero(t.field)
    for tet in t.tets:
        out = out + beta_config(tet.quad)
    return out


# ----------------------------------------------------------------------
# validation

@dataclass
class CheckResult:
    check_id: str
    status: str       # pass | fail | open
    witness: str = ""


@dataclass
class StructureReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def lines(self):
        return [f"{c.check_id}: {c.status.upper()}"
                + (f"  [{c.witness}]" if c.witness else "")
                for c in self.checks]

    def __str__(self):
        return "\n".join(self.lines())


def _eqcr_holds(tab, conj) -> bool:
    pairs = (((0, 1), (2, 3)), ((0, 2), (3, 1)), ((0, 3), (1, 2)))
    return all(tab[(a, b)] * tab[(b, a)] == conj(tab[(c, d)] * tab[(d, c)])
               for (a, b), (c, d) in pairs)


def validate_structure(t: Triangulation) -> StructureReport:
    checks = []
    ctx = None
    for i, tet in enumerate(t.tets):
        try:
            tab = tet.table()
        except DegenerateCrossRatio as exc:
            checks.append(CheckResult(f"tet{i}:values", "fail", str(exc)))
            continue
        checks.append(CheckResult(f"tet{i}:values", "pass"))
        if _eqcr_holds(tab, lambda x: x.conj()):
            checks.append(CheckResult(f"tet{i}:conjugation", "pass"))
        else:
            w = tab[(0, 1)] * tab[(1, 0)]
            checks.append(CheckResult(
                f"tet{i}:conjugation", "fail",
                f"z01*z10 = {w} vs sigma(z23*z32) = {(tab[(2,3)]*tab[(3,2)]).conj()}"))
        if tet.points is not None:
            ctx = ctx or GeomContext.for_field(tet.points[0].field)
            try:
                cfg = ConfigFour(list(tet.points), ctx)
                stored = tuple(ctx.embed(z) for z in tet.quad) \
                    if tet.points[0].field != t.field or ctx.K != t.field \
                    else tet.quad
                same = cfg.quadruple() == tuple(stored)
            except (NotGeneric, DegenerateCrossRatio) as exc:
                checks.append(CheckResult(f"tet{i}:points", "fail", str(exc)))
                continue
            checks.append(CheckResult(
                f"tet{i}:points", "pass" if same else "fail",
                "" if same else "stored quadruple differs from the points'"))
    for n, p in enumerate(t.pairings):
        (ta, fa), (tb, fb) = p.face, p.mate
        va = ({0, 1, 2, 3} - set(fa)).pop()
        vb = ({0, 1, 2, 3} - set(fb)).pop()
        try:
            prod_a = _face_triple_product(t.tets[ta], fa, va)
            prod_b = _face_triple_product(t.tets[tb], fb, vb)
        except DegenerateCrossRatio as exc:
            checks.append(CheckResult(f"pairing{n}:face", "fail", str(exc)))
            continue
        ok = prod_a == prod_b
        checks.append(CheckResult(
            f"pairing{n}:face", "pass" if ok else "fail",
            "" if ok else f"{prod_a} vs {prod_b}"))
    try:
        classes = edge_classes(t)
    except DegenerateCrossRatio as exc:
        checks.append(CheckResult("edges", "fail",
                                  f"cannot walk edge classes: {exc}"))
        return StructureReport(checks)
    for cls in classes:
        eid = "edge[" + ",".join(f"t{s[0]}({s[1]},{s[2]})" for s in cls["steps"]) + "]"
        if cls["closed"]:
            ok = cls["product"] == 1
            checks.append(CheckResult(
                eid, "pass" if ok else "fail",
                f"product = {cls['product']}"))
        else:
            checks.append(CheckResult(eid, "open",
                                      f"partial product = {cls['product']}"))
    return StructureReport(checks)


def _face_triple_product(tet: TetRecord, face, apex):
    f0, f1, f2 = face
    return (tet.x_value((f0, apex, f1, f2))
            * tet.x_value((f1, apex, f2, f0))
            * tet.x_value((f2, apex, f0, f1)))


def edge_classes(t: Triangulation) -> list:
    """Walk every edge orbit; for closed orbits the product of the
    per-tetrahedron values X(a, b, entering, leaving) is the edge
    holonomy, equal to 1 exactly when the structure is compatible."""
    lk = t.pairing_lookup()
    visited = set()
    classes = []
    for ti, tet in enumerate(t.tets):
        for a in range(4):
            for b in range(a + 1, 4):
                if (ti, frozenset((a, b))) in visited:
                    continue
                cls = _walk_edge(t, lk, ti, (a, b), visited)
                classes.append(cls)
    return classes


def _walk_edge(t: Triangulation, lk, ti, edge, visited):
    a, b = edge
    c, d = sorted({0, 1, 2, 3} - {a, b})
    start = (ti, a, b, c)   # entering through face {a, b, c}
    steps = []
    product = t.field.one
    state = start
    closed = False
    while True:
        tet_i, ea, eb, centr = state
        visited.add((tet_i, frozenset((ea, eb))))
        leave = ({0, 1, 2, 3} - {ea, eb, centr}).pop()
        product = product * t.tets[tet_i].x_value((ea, eb, centr, leave))
        steps.append((tet_i, ea, eb))
        nxt = lk.get((tet_i, frozenset((ea, eb, leave))))
        if nxt is None:
            break
        mate_tet, pmap = nxt
        state = (mate_tet, pmap[ea], pmap[eb], pmap[leave])
        if state == start:
            closed = True
            break
        if (state[0], frozenset((state[1], state[2]))) in visited and state != start:
            # singular wrap that does not return to the seed state
            break
    if not closed:
        # extend backwards through the entering face of the seed
        state = start
        while True:
            tet_i, ea, eb, centr = state
            prev = lk.get((tet_i, frozenset((ea, eb, centr))))
            if prev is None:
                break
            mate_tet, pmap = prev
            leave2 = pmap[centr]
            rest = ({0, 1, 2, 3} - {pmap[ea], pmap[eb], leave2}).pop()
            state = (mate_tet, pmap[ea], pmap[eb], rest)
            if (state[0], frozenset((state[1], state[2]))) in visited:
                break
            visited.add((state[0], frozenset((state[1], state[2]))))
            product = product * t.tets[state[0]].x_value(
                (state[1], state[2], rest, leave2))
            steps.insert(0, (state[0], state[1], state[2]))
    return {"steps": steps, "closed": closed, "product": product}


# ----------------------------------------------------------------------
# boundary cancellation

def boundary_check(t: Triangulation) -> bool:
    """Signed multiset of exact Cartan tangents over the face slots of
    all tetrahedra cancels; the boundary of the fundamental chain.

    Reversing an ordered triple negates its tangent, and a chain sign
    absorbed into an odd vertex reordering does the same, so slots are
    accumulated on the canonical representative of {tau, -tau} with the
    sign carried explicitly.  Unglued complexes simply fail the
    cancellation (a single tetrahedron returns False)."""
    pts = ensure_points(t)
    ctx = GeomContext.for_field(pts[0][0].field)
    acc: dict = {}
    for ti in range(len(t.tets)):
        p = pts[ti]
        for v in range(4):
            tri = [p[m] for m in range(4) if m != v]
            tau = cartan_tangent(*tri, ctx)
            sign = 1 if v % 2 == 0 else -1
            neg = -tau
            if tau.coeffs < neg.coeffs:
                tau, sign = neg, -sign
            acc[tau] = acc.get(tau, 0) + sign
    return all(n == 0 for n in acc.values())


# ----------------------------------------------------------------------
# development

def ensure_points(t: Triangulation):
    """Vertex points per tetrahedron: stored ones, or a development."""
    if t.has_points():
        return [t.points_of(i) if hasattr(t, "points_of") else t.tets[i].points
                for i in range(len(t.tets))]
    return develop(t)


def develop(t: Triangulation, seed_t: FieldElement = None):
    """Normalized development: tetrahedron 0 is placed with its first
    face at (infinity, origin, (1, t)); neighbors are propagated through
    the face pairings by exact PU(2,1) side pairings.

    Returns a list of 4-tuples of Points (ambient field = base extended
    by i when needed).  Raises InconsistentStructure when stored data
    contradicts itself, MissingPairings when the complex is not
    connected through its pairings.
    """
    if not t.tets:
        return []
    ctx = GeomContext.for_field(t.field)
    quads = [tuple(ctx.embed(z) for z in tet.quad) for tet in t.tets]

    def place(quad):
        try:
            params = params_from_quadruple(quad, ctx)
            pts = params.points()
            cfg = ConfigFour(pts, GeomContext.for_field(ctx.K))
        except (NotGeneric, DegenerateCrossRatio, ValueError) as exc:
            raise InconsistentStructure(f"quadruple is not geometric: {exc}")
        if cfg.quadruple() != quad:
            raise InconsistentStructure(
                "stored quadruple is not realizable by points")
        return params, pts

    params0, pts0 = place(quads[0])
    if seed_t is not None and ctx.embed(seed_t) != params0.t:
        raise InconsistentStructure(
            f"seed tangent {seed_t} contradicts the first face ({params0.t})")
    placed: dict = {0: list(pts0)}
    lk = t.pairing_lookup()
    kctx = GeomContext.for_field(ctx.K)
    queue = [0]
    while queue:
        cur = queue.pop(0)
        for v in range(4):
            key = (cur, frozenset({0, 1, 2, 3} - {v}))
            nxt = lk.get(key)
            if nxt is None:
                continue
            mate, pmap = nxt
            shared_src = sorted(pmap)  # positions in cur
            tgt_positions = [pmap[s] for s in shared_src]
            tgt_points = [placed[cur][s] for s in shared_src]
            if mate in placed:
                # holonomy face: the Cartan data must still agree
                tri_a = [placed[cur][s] for s in shared_src]
                tri_b = [placed[mate][p] for p in tgt_positions]
                if cartan_tangent(*tri_a, kctx) != cartan_tangent(*tri_b, kctx):
                    raise InconsistentStructure(
                        f"pairing at tets {cur}/{mate} mismatches Cartan data")
                continue
            _, npts = place(quads[mate])
            src_tri = [npts[p] for p in tgt_positions]
            try:
                pm = side_pairing(src_tri, tgt_points, kctx)
            except Exception as exc:
                raise InconsistentStructure(
                    f"cannot glue tet {mate} onto {cur}: {exc}")
            new_pts = [None] * 4
            for p, q in zip(tgt_positions, tgt_points):
                new_pts[p] = q
            apex = ({0, 1, 2, 3} - set(tgt_positions)).pop()
            new_pts[apex] = pm.apply_point(npts[apex], kctx)
            try:
                cfg = ConfigFour(new_pts, kctx)
            except (NotGeneric, DegenerateCrossRatio) as exc:
                raise InconsistentStructure(f"glued tet {mate} degenerates: {exc}")
            if cfg.quadruple() != quads[mate]:
                raise InconsistentStructure(
                    f"development contradicts stored invariants at tet {mate}")
            placed[mate] = new_pts
            queue.append(mate)
    if len(placed) != len(t.tets):
        raise MissingPairings(
            f"complex not connected: developed {sorted(placed)} of {len(t.tets)}")
    return [tuple(placed[i]) for i in range(len(t.tets))]


# ----------------------------------------------------------------------
# Pachner moves on bare point sets

def _signed_config(points, order, ctx):
    return ConfigFour([points[i] for i in order], ctx)


def pachner_23(points: list, ctx: GeomContext = None):
    """Five generic points; returns the signed configuration chains
    ([0123] - [0124],  -[0134] + [0234] - [1234]) whose invariants agree
    after the move.  Edge and face compatibility of the output hold
    exactly (checked in the test suite)."""
    if len(points) != 5:
        raise ValueError("2-3 move needs five points")
    ctx = ctx or GeomContext.for_field(
        next(p for p in points if not p.inf).field)
    if not is_generic(points, ctx):
        raise NotGeneric("five points must be pairwise generic")
    two = [(1, _signed_config(points, (0, 1, 2, 3), ctx)),
           (-1, _signed_config(points, (0, 1, 2, 4), ctx))]
    three = [(-1, _signed_config(points, (0, 1, 3, 4), ctx)),
             (1, _signed_config(points, (0, 2, 3, 4), ctx)),
             (-1, _signed_config(points, (1, 2, 3, 4), ctx))]
    return two, three


def pachner_14(points: list, new_point: Point, ctx: GeomContext = None):
    """One tetrahedron replaced by four around a new interior vertex."""
    if len(points) != 4:
        raise ValueError("1-4 move needs four points")
    ctx = ctx or GeomContext.for_field(
        next(p for p in points if not p.inf).field)
    allp = list(points) + [new_point]
    if not is_generic(allp, ctx):
        raise NotGeneric("new point degenerates the configuration")
    one = [(1, _signed_config(allp, (0, 1, 2, 3), ctx))]
    four = [(1, _signed_config(allp, (0, 1, 2, 4), ctx)),
            (-1, _signed_config(allp, (0, 1, 3, 4), ctx)),
            (1, _signed_config(allp, (0, 2, 3, 4), ctx)),
            (-1, _signed_config(allp, (1, 2, 3, 4), ctx))]
    return one, four


def beta_of_signed(chain, field=None) -> PreBlochElement:
    """Signed sum of beta over (sign, ConfigFour) pairs."""
    field = field or chain[0][1].quadruple()[0].field
    out = PreBlochElement.zero(field)
    for sign, cfg in chain:
        out = out + sign * beta_config(cfg.quadruple())
    return out


def move_compatibility_checks(points: list, ctx: GeomContext = None) -> bool:
    """Exact edge and face compatibility over five generic points:
    (ijkl) = (ijkm)(ijml) and
    (ijkl)(ljik)(kjli) = (imkl)(lmik)(kmli)."""
    from itertools import permutations
    ctx = ctx or GeomContext.for_field(
        next(p for p in points if not p.inf).field)
    cache = {}

    def X(order4):
        key = frozenset(order4)
        cfg = cache.get(key)
        if cfg is None:
            cfg = ConfigFour([points[i] for i in sorted(order4)], ctx)
            cache[key] = cfg
        rel = tuple(sorted(order4).index(i) for i in order4)
        return cfg.x_value(rel)

    for (i, j, k, l, m) in permutations(range(5)):
        if i > j or k > l:   # symmetry pruning: identity is multiplicative
            continue
        if X((i, j, k, l)) != X((i, j, k, m)) * X((i, j, m, l)):
            return False
        lhs = X((i, j, k, l)) * X((l, j, i, k)) * X((k, j, l, i))
        rhs = X((i, m, k, l)) * X((l, m, i, k)) * X((k, m, l, i))
        if lhs != rhs:
            return False
    return True


# ----------------------------------------------------------------------
# Pachner surgery on complexes with points

def _require_surgery_ready(t: Triangulation):
    if not t.has_points():
        raise MissingGeometry("move surgery needs vertex points "
                              "(store them or develop first)")
    for tet in t.tets:
        if len(set(tet.verts)) != 4:
            raise InconsistentStructure(
                "move surgery needs distinct vertex ids per tetrahedron")


def _tet_from_points(verts, points, ctx) -> TetRecord:
    cfg = ConfigFour(list(points), ctx)
    return TetRecord(tuple(verts), cfg.quadruple(), tuple(points))


def _id_pairings(tets: list) -> list:
    """Pair faces whose global id sets coincide (embedded complexes)."""
    owners: dict = {}
    out = []
    for i, tet in enumerate(tets):
        for v in range(4):
            ids = frozenset(tet.verts[m] for m in range(4) if m != v)
            if ids in owners:
                j, poss = owners.pop(ids)
                mposs = tuple(tet.verts.index(tets[j].verts[p]) for p in poss)
                out.append(FacePairing((j, poss), (i, mposs)))
            else:
                owners[ids] = (i, tuple(m for m in range(4) if m != v))
    return out


def _ambient_field_of_points(t: Triangulation):
    return t.tets[0].points[0].field


def apply_move_23(t: Triangulation, pairing_index: int) -> Triangulation:
    """Replace the two tetrahedra across the given internal face by
    three around the new edge; external pairings are re-targeted."""
    _require_surgery_ready(t)
    p = t.pairings[pairing_index]
    (ta, fa), (tb, fb) = p.face, p.mate
    if ta == tb:
        raise InconsistentStructure("2-3 move needs two distinct tetrahedra")
    A, B = t.tets[ta], t.tets[tb]
    ctx = GeomContext.for_field(_ambient_field_of_points(t))
    for sa, sb in zip(fa, fb):
        if A.points[sa] != B.points[sb]:
            raise InconsistentStructure(
                "paired face corners carry different points")
    apex_a = ({0, 1, 2, 3} - set(fa)).pop()
    apex_b = ({0, 1, 2, 3} - set(fb)).pop()
    # order the shared face so that (f0, f1, f2, apex_a) is even in A
    shared = None
    from itertools import permutations as perms
    for cand in perms(fa):
        if _parity_even(tuple(list(cand) + [apex_a])):
            shared = cand
            break
    u_pos = list(shared) + [apex_a]
    u_ids = [A.verts[s] for s in shared] + [A.verts[apex_a], B.verts[apex_b]]
    u_pts = [A.points[s] for s in shared] + [A.points[apex_a], B.points[apex_b]]
    # orientation compatibility: (shared mapped into B) + apex_b must be odd
    mapped = [fb[fa.index(s)] for s in shared]
    if _parity_even(tuple(mapped + [apex_b])):
        raise InconsistentStructure(
            "incoherent orientations across the shared face")
    if not is_generic(u_pts, ctx):
        raise NotGeneric("the five move points are not generic")
    # chain -[0134] + [0234] - [1234], negatives stored first-two-swapped
    new_orders = [(1, 0, 3, 4), (0, 2, 3, 4), (2, 1, 3, 4)]
    new_tets = [_tet_from_points([u_ids[i] for i in order],
                                 [u_pts[i] for i in order], ctx)
                for order in new_orders]
    keep = [tet for i, tet in enumerate(t.tets) if i not in (ta, tb)]
    field = ctx.K
    out = Triangulation(field, _retarget(keep, field) + new_tets, [])
    out.pairings = _id_pairings(out.tets)
    return out


def apply_move_14(t: Triangulation, tet_index: int, new_point: Point,
                  new_id: int = None) -> Triangulation:
    _require_surgery_ready(t)
    tet = t.tets[tet_index]
    ctx = GeomContext.for_field(_ambient_field_of_points(t))
    u_ids = list(tet.verts)
    u_pts = list(tet.points)
    if new_id is None:
        new_id = 1 + max(v for tt in t.tets for v in tt.verts)
    u_ids.append(new_id)
    u_pts.append(new_point)
    if not is_generic(u_pts, ctx):
        raise NotGeneric("new point degenerates the configuration")
    new_orders = [(0, 1, 2, 4), (1, 0, 3, 4), (0, 2, 3, 4), (2, 1, 3, 4)]
    new_tets = [_tet_from_points([u_ids[i] for i in order],
                                 [u_pts[i] for i in order], ctx)
                for order in new_orders]
    keep = [tt for i, tt in enumerate(t.tets) if i != tet_index]
    field = ctx.K
    out = Triangulation(field, _retarget(keep, field) + new_tets, [])
    out.pairings = _id_pairings(out.tets)
    return out


def apply_move_32(t: Triangulation, edge_ids: tuple) -> Triangulation:
    """Inverse of the 2-3 move: collapse the three tetrahedra around the
    common edge (given by its two global ids) back into two.

    The reconstructed tetrahedra are canonicalized with the smallest
    global id of the surrounding cycle first, so a 2-3 move starting
    from that normal form round-trips exactly."""
    _require_surgery_ready(t)
    x, y = edge_ids
    around = [i for i, tet in enumerate(t.tets)
              if x in tet.verts and y in tet.verts]
    if len(around) != 3:
        raise InconsistentStructure(
            f"edge ({x},{y}) is shared by {len(around)} tetrahedra, need 3")
    ctx = GeomContext.for_field(_ambient_field_of_points(t))
    # each stored tet reads (m, n, x, y) up to even reordering; recover the
    # directed cycle n -> m over the three outer vertices
    succ = {}
    point_of = {}
    for i in around:
        tet = t.tets[i]
        pos_x, pos_y = tet.verts.index(x), tet.verts.index(y)
        rest = [p for p in range(4) if p not in (pos_x, pos_y)]
        m_pos, n_pos = rest
        # normalize to an even reordering of (m, n, x, y)
        if not _parity_even((m_pos, n_pos, pos_x, pos_y)):
            m_pos, n_pos = n_pos, m_pos
        succ[tet.verts[n_pos]] = tet.verts[m_pos]
        for p in range(4):
            point_of[tet.verts[p]] = tet.points[p]
    if sorted(succ) != sorted(succ.values()):
        raise InconsistentStructure("tetrahedra around the edge do not chain")
    u0 = min(succ)
    u1 = succ[u0]
    u2 = succ[u1]
    if succ[u2] != u0:
        raise InconsistentStructure("tetrahedra around the edge do not cycle")
    ids = [u0, u1, u2, x, y]
    pts = [point_of[v] for v in ids]
    if not is_generic(pts, ctx):
        raise NotGeneric("collapse would produce a degenerate pair")
    new_orders = [(0, 1, 2, 3), (1, 0, 2, 4)]
    new_tets = [_tet_from_points([ids[i] for i in order],
                                 [pts[i] for i in order], ctx)
                for order in new_orders]
    keep = [tet for i, tet in enumerate(t.tets) if i not in around]
    field = ctx.K
    out = Triangulation(field, _retarget(keep, field) + new_tets, [])
    out.pairings = _id_pairings(out.tets)
    return out


def _retarget(tets, field):
    """Re-express kept tetrahedra over the ambient field of the move."""
    out = []
    for tet in tets:
        ctx = GeomContext.for_field(tet.points[0].field)
        pts = []
        for p in tet.points:
            if p.field == field:
                pts.append(p)
            elif p.inf:
                pts.append(Point.infinity(field))
            else:
                pts.append(Point.heisenberg(field, ctx.embed(p.z), ctx.embed(p.t)))
        out.append(_tet_from_points(tet.verts, pts, GeomContext.for_field(field)))
    return out


def double_complex(points: list, ctx: GeomContext = None) -> Triangulation:
    """The closed two-tetrahedron complex [p0 p1 p2 p3] + [p1 p2 p3 p0]
    whose boundary cancels exactly (each face appears twice, opposite
    signs, equal Cartan data)."""
    ctx = ctx or GeomContext.for_field(
        next(p for p in points if not p.inf).field)
    rot = [points[1], points[2], points[3], points[0]]
    tet_a = _tet_from_points((0, 1, 2, 3), points, ctx)
    tet_b = _tet_from_points((1, 2, 3, 0), rot, ctx)
    tri = Triangulation(ctx.K, [tet_a, tet_b], [])
    tri.pairings = _id_pairings(tri.tets)
    return tri
