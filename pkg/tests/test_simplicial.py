from fractions import Fraction as F

import pytest
from mpmath import mp

from crbloch.balls import workprec
from crbloch.catalog import build_whitehead
from crbloch.crgeom import ConfigFour, GeomContext, Point
from crbloch.dilog import D_of_element
from crbloch.errors import (
    InconsistentStructure,
    MissingGeometry,
    MissingPairings,
    NotGeneric,
)
from crbloch.numfield import QQ
from crbloch.prebloch import PreBlochElement
from crbloch.simplicial import (
    FacePairing,
    TetRecord,
    Triangulation,
    apply_move_14,
    apply_move_23,
    apply_move_32,
    beta_of_signed,
    beta_triangulation,
    boundary_check,
    develop,
    double_complex,
    edge_classes,
    move_compatibility_checks,
    pachner_14,
    pachner_23,
    validate_structure,
)
from crbloch.simplicial import _id_pairings


def two_tet_complex(factory):
    """[u0 u1 u2 u3] + [u1 u0 u2 u4]: the chain [0123] - [0124]."""
    ctx = factory.ctx
    u = factory.generic_points(5)
    t1 = TetRecord((0, 1, 2, 3),
                   ConfigFour([u[0], u[1], u[2], u[3]], ctx).quadruple(),
                   (u[0], u[1], u[2], u[3]))
    t2 = TetRecord((1, 0, 2, 4),
                   ConfigFour([u[1], u[0], u[2], u[4]], ctx).quadruple(),
                   (u[1], u[0], u[2], u[4]))
    tri = Triangulation(ctx.K, [t1, t2], [])
    tri.pairings = _id_pairings(tri.tets)
    assert len(tri.pairings) == 1
    return tri, u


# ----------------------------------------------------------------------
# validation

def test_whitehead_validates():
    tri = build_whitehead().triangulation
    rep = validate_structure(tri)
    assert rep.ok
    # no pairings: every edge is open, reported not enforced
    assert all(c.status == "open" for c in rep.checks if c.check_id.startswith("edge"))
    assert {c.status for c in rep.checks if "conjugation" in c.check_id} == {"pass"}


def test_corrupted_invariant_localized():
    data = build_whitehead()
    tri = data.triangulation
    bad = tri.tets[2]
    K = tri.field
    tri.tets[2] = TetRecord(bad.verts,
                            (K.from_rational(5), bad.quad[1], bad.quad[2],
                             bad.quad[3]), None)
    rep = validate_structure(tri)
    assert not rep.ok
    failing = [c.check_id for c in rep.checks if c.status == "fail"]
    assert failing == ["tet2:conjugation"]


def test_degenerate_value_reported():
    K = QQ()
    tri = Triangulation(K, [TetRecord((0, 1, 2, 3),
                                      (K.one, K.from_rational(2),
                                       K.from_rational(2), K.from_rational(2)))])
    rep = validate_structure(tri)
    assert any(c.check_id == "tet0:values" and c.status == "fail"
               for c in rep.checks)


def test_double_complex_validates(factory):
    pts = factory.generic_points(4)
    dbl = double_complex(pts, factory.ctx)
    rep = validate_structure(dbl)
    assert rep.ok
    edge_checks = [c for c in rep.checks if c.check_id.startswith("edge")]
    assert len(edge_checks) == 6
    assert all(c.status == "pass" for c in edge_checks)
    assert dbl.fully_paired()


def test_pairing_involution_guard(factory):
    pts = factory.generic_points(4)
    dbl = double_complex(pts, factory.ctx)
    with pytest.raises(InconsistentStructure):
        Triangulation(dbl.field, dbl.tets, dbl.pairings + [dbl.pairings[0]])


# ----------------------------------------------------------------------
# invariants

def test_beta_whitehead_formal_sum(K15):
    tri = build_whitehead().triangulation
    beta = beta_triangulation(tri)
    a01 = K15.element([F(-1, 8), F(1, 8)])
    assert beta.terms[K15.from_rational(-2)] == 4
    assert beta.terms[a01] == 2 and beta.terms[a01.conj()] == 2
    assert len(beta.terms) == 7


def test_beta_empty():
    K = QQ()
    assert beta_triangulation(Triangulation(K, [])).is_zero()


# ----------------------------------------------------------------------
# boundary

def test_boundary_double_true(factory):
    pts = factory.generic_points(4)
    assert boundary_check(double_complex(pts, factory.ctx))


def test_boundary_single_tet_false(factory):
    ctx = factory.ctx
    pts = factory.generic_points(4)
    cfg = ConfigFour(pts, ctx)
    tri = Triangulation(ctx.K, [TetRecord((0, 1, 2, 3), cfg.quadruple(),
                                          tuple(pts))])
    assert not boundary_check(tri)


def test_boundary_preserved_by_moves(factory):
    ctx = factory.ctx
    pts = factory.generic_points(5)
    dbl = double_complex(pts[:4], ctx)
    assert boundary_check(dbl)
    grown = apply_move_14(dbl, 0, pts[4])
    assert grown.fully_paired()
    assert boundary_check(grown)
    # a 2-3 move across a pairing joining two distinct tetrahedra
    moved = None
    for n, p in enumerate(grown.pairings):
        try:
            moved = apply_move_23(grown, n)
            break
        except (InconsistentStructure, NotGeneric):
            continue
    assert moved is not None
    assert boundary_check(moved)
    with mp.workprec(workprec(128)):
        d = D_of_element(beta_triangulation(grown), 128) - \
            D_of_element(beta_triangulation(moved), 128)
    assert d.contains_zero() and d.rad < 1e-25


# ----------------------------------------------------------------------
# development

def test_develop_single_tet_normal_form(QQf):
    ctx = GeomContext.for_field(QQf)
    two = QQf.from_rational(2)
    tri = Triangulation(QQf, [TetRecord((0, 1, 2, 3), (two,) * 4)])
    pts = develop(tri)[0]
    K = ctx.K
    assert pts[0].inf
    assert pts[1] == Point.heisenberg(K, K.zero, K.zero)
    assert pts[2] == Point.heisenberg(K, K.one, K.zero)
    assert pts[3] == Point.heisenberg(K, K.from_rational(2), K.zero)


def test_develop_seed_tangent_check(QQf):
    two = QQf.from_rational(2)
    tri = Triangulation(QQf, [TetRecord((0, 1, 2, 3), (two,) * 4)])
    develop(tri, seed_t=QQf.zero)
    with pytest.raises(InconsistentStructure):
        develop(tri, seed_t=QQf.one)


def test_develop_two_tets_consistent(factory):
    tri, u = two_tet_complex(factory)
    bare = Triangulation(tri.field,
                         [TetRecord(t.verts, t.quad) for t in tri.tets],
                         tri.pairings)
    placed = develop(bare)
    kctx = GeomContext.for_field(tri.field)
    for tet, pts in zip(bare.tets, placed):
        assert ConfigFour(list(pts), kctx).quadruple() == tet.quad
    # shared face corners develop to identical points
    pmap = dict(zip(tri.pairings[0].face[1], tri.pairings[0].mate[1]))
    for a, b in pmap.items():
        assert placed[0][a] == placed[1][b]


def test_develop_corrupted_data(QQf):
    two = QQf.from_rational(2)
    five = QQf.from_rational(5)
    tri = Triangulation(QQf, [TetRecord((0, 1, 2, 3), (two, two, two, five))])
    with pytest.raises(InconsistentStructure):
        develop(tri)


def test_develop_disconnected(QQf):
    two = QQf.from_rational(2)
    tri = Triangulation(QQf, [TetRecord((0, 1, 2, 3), (two,) * 4),
                              TetRecord((4, 5, 6, 7), (two,) * 4)])
    with pytest.raises(MissingPairings):
        develop(tri)


# ----------------------------------------------------------------------
# Pachner moves

def test_pachner_23_chains(factory):
    ctx = factory.ctx
    for _ in range(3):
        pts = factory.generic_points(5)
        two, three = pachner_23(pts, ctx)
        with mp.workprec(workprec(128)):
            d = D_of_element(beta_of_signed(two), 128) - \
                D_of_element(beta_of_signed(three), 128)
        assert d.contains_zero() and d.rad < 1e-25
        assert move_compatibility_checks(pts, ctx)


def test_pachner_14_chains(factory):
    ctx = factory.ctx
    for _ in range(3):
        pts = factory.generic_points(5)
        one, four = pachner_14(pts[:4], pts[4], ctx)
        with mp.workprec(workprec(128)):
            d = D_of_element(beta_of_signed(one), 128) - \
                D_of_element(beta_of_signed(four), 128)
        assert d.contains_zero() and d.rad < 1e-25


def test_pachner_14_rejects_degenerate(factory):
    ctx = factory.ctx
    pts = factory.generic_points(4)
    with pytest.raises(NotGeneric):
        pachner_14(pts, pts[0], ctx)


def test_surgery_roundtrip(factory):
    tri, u = two_tet_complex(factory)
    before = beta_triangulation(tri)
    moved = apply_move_23(tri, 0)
    assert len(moved.tets) == 3 and len(moved.pairings) == 3
    assert validate_structure(moved).ok
    back = apply_move_32(moved, (3, 4))
    assert sorted((t.verts, tuple(str(q) for q in t.quad)) for t in back.tets) \
        == sorted((t.verts, tuple(str(q) for q in t.quad)) for t in tri.tets)
    with mp.workprec(workprec(128)):
        d = D_of_element(before, 128) - \
            D_of_element(beta_triangulation(moved), 128)
    assert d.contains_zero() and d.rad < 1e-25


def test_surgery_needs_geometry(factory):
    tri, _ = two_tet_complex(factory)
    bare = Triangulation(tri.field,
                         [TetRecord(t.verts, t.quad) for t in tri.tets],
                         tri.pairings)
    with pytest.raises(MissingGeometry):
        apply_move_23(bare, 0)


def test_edge_classes_on_double(factory):
    pts = factory.generic_points(4)
    dbl = double_complex(pts, factory.ctx)
    classes = edge_classes(dbl)
    assert len(classes) == 6
    for cls in classes:
        assert cls["closed"] and cls["product"] == 1
