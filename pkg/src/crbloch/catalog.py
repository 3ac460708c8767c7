"""Built-in example complexes with their verification data.

Each entry ships the triangulation (invariants-only where only the
cross-ratios are known; with points and pairings where the geometry is
explicit) together with equality certificates encoding the reduction
chains, so every verification step is auditable data.

Entries: whitehead, fig8-rep1, fig8-rep2, fig8-family (parameter beta
with 5 - 8 beta a rational square), synthetic-double.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Optional

from .crgeom import GeomContext, Point
from .errors import ParseError
from .numfield import (
    FieldElement,
    NumberField,
    extend_with_sqrt,
    gaussian_field,
    quadratic_imaginary,
)
from .prebloch import (
    Certificate,
    PreBlochElement,
    RelationInstance,
    figure_eight_family,
)
from .simplicial import TetRecord, Triangulation, double_complex

F = Fraction

TORSION_LANGUAGE = ("order divides 3: VERIFIED; "
                    "order exactly 3: literature claim, not machine-verified")


@dataclass
class CertStage:
    """One certified equality: start (or previous stage) = target."""
    label: str
    target: PreBlochElement
    certificate: Certificate
    field: NumberField = None          # field the chain lives in
    base_gen_image: FieldElement = None  # embedding of the base generator


@dataclass
class CatalogData:
    name: str
    triangulation: Triangulation
    stages: list = dc_field(default_factory=list)
    torsion_stage: Optional[CertStage] = None
    expected_delta: str = "zero"       # zero | free_zero
    notes: str = ""


@dataclass
class CatalogEntry:
    name: str
    description: str
    parametric: bool
    build: Callable


def _invariants_only(field, quads) -> Triangulation:
    tets = []
    base = 0
    for q in quads:
        tets.append(TetRecord(tuple(range(base, base + 4)), tuple(q)))
        base += 4
    return Triangulation(field, tets)


# ----------------------------------------------------------------------
# Whitehead link complement: four tetrahedra over Q(sqrt(-15))

def build_whitehead(beta=None) -> CatalogData:
    K = quadratic_imaginary(15)
    a01 = K.element([F(-1, 8), F(1, 8)])
    a10 = K.from_rational(-2)
    a23 = K.element([F(-3, 4), F(1, 4)])
    a32 = K.element([F(1, 2), F(-1, 6)])
    m2 = K.from_rational(-2)
    quads = [
        (a01, a10, a23, a32),
        (m2, a01.conj(), a32.conj(), a23.conj()),
        (a01.conj(), m2, a23.conj(), a32.conj()),
        (m2, a01, a32, a23),
    ]
    tri = _invariants_only(K, quads)
    half = K.from_rational(F(1, 2))
    quarter = K.from_rational(F(1, 4))
    stage1 = CertStage(
        "beta(W) = 4[1/2]",
        PreBlochElement.generator(half, 4),
        Certificate([
            RelationInstance("one_minus", (a32,), 2),
            RelationInstance("five_term", (a01, quarter), 2),
            RelationInstance("one_minus", (a23.conj().inverse(),), -2),
            RelationInstance("inv_pair", (a23,), 1),
            RelationInstance("inv_pair", (a23.conj(),), 1),
            RelationInstance("square", (half,), 1),
            RelationInstance("inv_pair", (m2,), 2),
        ]), K)
    stage2 = CertStage(
        "4[1/2] = 2*c_F",
        PreBlochElement.c_constant(K, 2),
        Certificate([RelationInstance("one_minus", (half,), 2)]), K)
    torsion_cert = Certificate(
        [RelationInstance(i.kind, i.args, 3 * i.multiplier)
         for i in stage1.certificate] +
        [RelationInstance("one_minus", (half,), 6),
         RelationInstance("six_c", (), 1)])
    torsion = CertStage("3*beta(W) = 0", PreBlochElement.zero(K),
                        torsion_cert, K)
    return CatalogData("whitehead", tri, [stage1, stage2], torsion, "zero")


# ----------------------------------------------------------------------
# figure-eight knot complement, boundary-cyclic representations

def _rep1_chain(K):
    """beta1 = -2 c_F via the five-term instances at x = 1/2, y = b/2."""
    one = K.one
    half = K.from_rational(F(1, 2))
    w12 = K.element([F(3, 8), F(1, 8)])
    w21 = K.element([F(5, 4), F(1, 4)])
    a, b = w12.conj(), w21.conj()
    s = K.element([F(3, 4), F(-1, 4)])
    assert half * b == one - a.conj() and (one - half) / (one - half * b) == s
    return w12, w21, Certificate([
        RelationInstance("one_minus", (a.conj(),), 2),
        RelationInstance("one_minus", (a,), 2),
        RelationInstance("five_term", (half, half * b), 2),
        RelationInstance("five_term", (half, half * b.conj()), 2),
        RelationInstance("inv_pair", (one - s,), 1),
        RelationInstance("inv_pair", (one - s.conj(),), 1),
        RelationInstance("one_minus", (s,), -2),
        RelationInstance("one_minus", (s.conj(),), -2),
        RelationInstance("one_minus", (half,), -2),
    ])


def build_fig8_rep1(beta=None) -> CatalogData:
    K = quadratic_imaginary(7)
    w12, w21, chain = _rep1_chain(K)
    quads = [(w12, w21, w12.conj(), w21.conj())] * 2
    tri = _invariants_only(K, quads)
    stage = CertStage("beta1(K) = -2*c_F", PreBlochElement.c_constant(K, -2),
                      chain, K)
    torsion = CertStage(
        "3*beta1(K) = 0", PreBlochElement.zero(K),
        Certificate([RelationInstance(i.kind, i.args, 3 * i.multiplier)
                     for i in chain] +
                    [RelationInstance("six_c", (), -1)]), K)
    return CatalogData("fig8-rep1", tri, [stage], torsion, "zero")


def build_fig8_rep2(beta=None) -> CatalogData:
    K = quadratic_imaginary(7)
    w12, w21, chain = _rep1_chain(K)
    t12 = K.element([F(3, 2), F(1, 2)])
    t21 = K.element([F(-1, 4), F(-1, 4)])
    quads = [(t12, t21, t12.conj(), t21.conj())] * 2
    tri = _invariants_only(K, quads)
    cert = Certificate(
        [RelationInstance("inv_pair", (w12.conj(),), 1),
         RelationInstance("inv_pair", (w12,), 1),
         RelationInstance("one_minus", (w21,), 2),
         RelationInstance("one_minus", (w21.conj(),), 2),
         RelationInstance("six_c", (), 1)] +
        [RelationInstance(i.kind, i.args, -i.multiplier) for i in chain])
    stage = CertStage("beta2(K) = 0", PreBlochElement.zero(K), cert, K)
    return CatalogData("fig8-rep2", tri, [stage], None, "zero")


# ----------------------------------------------------------------------
# the one-parameter family

def build_fig8_family(beta=F(1, 2)) -> CatalogData:
    fam = figure_eight_family(beta)
    K = fam.field
    tri = _invariants_only(K, fam.tet_quadruples())
    E, emb = extend_with_sqrt(K, F(-3))
    rho = E.sqrt_of(F(-3))
    zeta = (E.one + rho) / E.from_rational(2)
    w = emb(fam.w12)
    one = E.one
    insts = []
    for ww in (w, w.conj()):
        u = ww.inverse()
        insts += [RelationInstance("inv_pair", (ww,), 1),
                  RelationInstance("one_minus", (u,), -2),
                  RelationInstance("inv_pair", (one - u,), 1)]
    insts += [RelationInstance("one_minus", (zeta,), 4),
              RelationInstance("inv_pair", (zeta,), -2)]
    gen_image = emb(K.gen) if E is not K else None
    stage = CertStage("beta(K) = 0", PreBlochElement.zero(E),
                      Certificate(insts), E, gen_image)
    notes = (f"branch parameter beta = {beta}: 5-8*beta = {fam.root}^2, "
             f"alpha^2 = {fam.alpha_sq}")
    if E is not K:
        notes += ("; chain closes after adjoining a sixth root of unity "
                  "(the invariant reduces to 2*c_F over the base field)")
    return CatalogData("fig8-family", tri, [stage], None, "zero", notes)


# ----------------------------------------------------------------------
# a closed synthetic example with explicit geometry

def build_synthetic_double(beta=None) -> CatalogData:
    Qi = gaussian_field()
    ctx = GeomContext.for_field(Qi)
    i = Qi.gen
    pts = [Point.infinity(Qi),
           Point.heisenberg(Qi, Qi.zero, Qi.zero),
           Point.heisenberg(Qi, Qi.one, Qi.one),
           Point.heisenberg(Qi, Qi.from_rational(2) + i, Qi.from_rational(-1))]
    tri = double_complex(pts, ctx)
    return CatalogData(
        "synthetic-double", tri, [], None, "free_zero",
        "two copies of one tetrahedron glued along all four faces with "
        "opposite orientations; a mu-torsion bit survives the reduction")


CATALOG = {
    "whitehead": CatalogEntry(
        "whitehead", "Whitehead link complement, four tetrahedra over "
        "Q(sqrt(-15)); invariant 4[1/2] = 2c_F, a 3-torsion class",
        False, build_whitehead),
    "fig8-rep1": CatalogEntry(
        "fig8-rep1", "figure-eight knot complement, first boundary-cyclic "
        "representation over Q(sqrt(-7)); invariant -2c_F",
        False, build_fig8_rep1),
    "fig8-rep2": CatalogEntry(
        "fig8-rep2", "figure-eight knot complement, second boundary-cyclic "
        "representation over Q(sqrt(-7)); invariant 0",
        False, build_fig8_rep2),
    "fig8-family": CatalogEntry(
        "fig8-family", "figure-eight one-parameter family at rational "
        "parameters with 5-8*beta a rational square; invariant 0",
        True, build_fig8_family),
    "synthetic-double": CatalogEntry(
        "synthetic-double", "closed double of one tetrahedron over Q(i) "
        "with explicit points and pairings", False, build_synthetic_double),
}


def get_entry(name: str, beta=None) -> CatalogData:
    entry = CATALOG.get(name)
    if entry is None:
        raise ParseError(f"unknown catalog entry {name!r}; "
                         f"known: {', '.join(sorted(CATALOG))}")
    if entry.parametric:
        return entry.build(beta if beta is not None else F(1, 2))
    return entry.build()


def resolve_path_or_catalog(path: str):
    """CLI paths may be files or catalog references
    'catalog:<name>[?beta=p/q]'; returns (CatalogData or None, Triangulation)."""
    from .fileio import load_triangulation
    if path.startswith("catalog:"):
        spec = path[len("catalog:"):]
        beta = None
        if "?" in spec:
            spec, _, query = spec.partition("?")
            for term in query.split("&"):
                key, _, val = term.partition("=")
                if key == "beta":
                    beta = F(val)
                else:
                    raise ParseError(f"unknown catalog parameter {key!r}")
        data = get_entry(spec, beta)
        return data, data.triangulation
    return None, load_triangulation(path)
