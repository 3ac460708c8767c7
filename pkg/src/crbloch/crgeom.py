"""Geometry of S^3 as the boundary of complex hyperbolic 2-space.

Points live in the compactified Heisenberg group (complex coordinate z,
real coordinate t, plus a point at infinity) with entries in a number
field.  Lifts to C^{2,1} use the Hermitian form

    <u, v> = v* J u,   J = antidiag(1, 1, 1),

the box product gives polar vectors, and quadruples of generic points
get four cross-ratio invariants (z01, z10, z23, z32) satisfying the
similarity relations and the conjugation constraints

    z_ij z_ji = sigma(z_kl z_lk).

Heisenberg lifts need a square root of -1; fields lacking one are
extended on demand and all derived quantities live in that extension.
Cartan data is kept as the sigma-antifixed element tau = (T - sT)/(T + sT)
(equal to i tan A), so equality of PU(2,1)-classes of triples is exact
field-element equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .balls import disc_overlaps
from .errors import (
    CartanMismatch,
    DegenerateCrossRatio,
    FieldLacksI,
    FieldMismatch,
    InconsistentStructure,
    NotGeneric,
    OutsideK,
    PrecisionExhausted,
)
from .numfield import FieldElement, NumberField, extend_with_sqrt

F = Fraction

_EVEN = {p for p in permutations(range(4))
         if sum(1 for a, b in combinations(range(4), 2)
                if p[a] > p[b]) % 2 == 0}


def _parity_even(order: tuple) -> bool:
    inv = sum(1 for i in range(4) for j in range(i + 1, 4)
              if order[i] > order[j])
    return inv % 2 == 0


# ----------------------------------------------------------------------
# ambient context: the field extended by i when necessary

class GeomContext:
    """Field K containing i, with the inclusion from the base field."""

    _cache: dict = {}

    def __init__(self, base: NumberField):
        self.base = base
        i_elem = base.sqrt_of(F(-1))
        if i_elem is not None:
            self.K, self.embed = base, (lambda a: a)
        else:
            try:
                self.K, self.embed = extend_with_sqrt(base, F(-1))
            except Exception as exc:
                raise FieldLacksI(
                    f"cannot realize sqrt(-1) over {base!r}: {exc}") from exc
            i_elem = self.K.sqrt_of(F(-1))
        self.i = i_elem

    @classmethod
    def for_field(cls, field: NumberField) -> "GeomContext":
        ctx = cls._cache.get(field._key)
        if ctx is None:
            ctx = cls(field)
            cls._cache[field._key] = ctx
        return ctx


# ----------------------------------------------------------------------
# points and lifts

class Point:
    """A point of the compactified Heisenberg group over a field."""

    __slots__ = ("field", "inf", "z", "t")

    def __init__(self, field: NumberField, z: FieldElement = None,
                 t: FieldElement = None, inf: bool = False):
        self.field = field
        self.inf = inf
        if inf:
            self.z = self.t = None
            return
        self.z = z
        self.t = t
        if not t.is_sigma_fixed():
            raise ValueError("Heisenberg height must be sigma-fixed (real)")

    @staticmethod
    def infinity(field: NumberField) -> "Point":
        return Point(field, inf=True)

    @staticmethod
    def heisenberg(field: NumberField, z, t) -> "Point":
        tozen = field.from_rational if isinstance(z, (int, Fraction)) else (lambda x: x)
        toten = field.from_rational if isinstance(t, (int, Fraction)) else (lambda x: x)
        return Point(field, tozen(z), toten(t))

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        if self.inf or other.inf:
            return self.inf and other.inf
        return self.z == other.z and self.t == other.t

    def __hash__(self):
        return hash((self.inf, self.z, self.t))

    def __repr__(self):
        return "Point(inf)" if self.inf else f"Point({self.z}, {self.t})"


Lift = tuple  # 3-tuple of FieldElements in the ambient field


def lift_point(p: Point, ctx: GeomContext = None) -> Lift:
    """Canonical null lift: ((-|z|^2 + i t)/2, z, 1), infinity -> (1,0,0)."""
    ctx = ctx or GeomContext.for_field(p.field)
    K = ctx.K
    if p.inf:
        return (K.one, K.zero, K.zero)
    z = ctx.embed(p.z)
    t = ctx.embed(p.t)
    first = (-(z * z.conj()) + ctx.i * t) / K.from_rational(2)
    return (first, z, K.one)


def herm(u: Lift, v: Lift) -> FieldElement:
    """<u, v> = v* J u = conj(v0) u2 + conj(v1) u1 + conj(v2) u0."""
    if u[0].field != v[0].field:
        raise FieldMismatch("herm over mixed fields")
    return v[0].conj() * u[2] + v[1].conj() * u[1] + v[2].conj() * u[0]


def box(u: Lift, v: Lift) -> Lift:
    """Hermitian cross-product; conjugate-bilinear, orthogonal to u and v."""
    if u[0].field != v[0].field:
        raise FieldMismatch("box over mixed fields")
    a0, a1, a2 = (c.conj() for c in u)
    b0, b1, b2 = (c.conj() for c in v)
    return (a0 * b1 - a1 * b0, a2 * b0 - a0 * b2, a1 * b2 - a2 * b1)


def _triple_product(lifts) -> FieldElement:
    """T = -<v0,v1><v1,v2><v2,v0>; A = arg T, generic iff T + sigma(T) != 0."""
    v0, v1, v2 = lifts
    return -(herm(v0, v1) * herm(v1, v2) * herm(v2, v0))


def cartan_tangent(p0: Point, p1: Point, p2: Point,
                   ctx: GeomContext = None) -> FieldElement:
    """tau = (T - sigma T)/(T + sigma T) = i tan(A); exact and independent
    of the lift choices."""
    ctx = ctx or GeomContext.for_field(p0.field)
    T = _triple_product([lift_point(p, ctx) for p in (p0, p1, p2)])
    denom = T + T.conj()
    if denom.is_zero():
        raise NotGeneric("triple lies on a C-circle (A = +-pi/2)")
    return (T - T.conj()) / denom


def is_generic(points: list, ctx: GeomContext = None) -> bool:
    if len(points) != len(set(points)):
        return False
    if len(points) < 3:
        return True
    ctx = ctx or GeomContext.for_field(points[0].field)
    lifts = [lift_point(p, ctx) for p in points]
    for tri in combinations(range(len(points)), 3):
        T = _triple_product([lifts[i] for i in tri])
        if (T + T.conj()).is_zero():
            return False
    return True


# ----------------------------------------------------------------------
# configurations of four points

_SEED_ORDERS = {(0, 1): (0, 1, 2, 3), (1, 0): (1, 0, 3, 2),
                (2, 3): (2, 3, 0, 1), (3, 2): (3, 2, 1, 0)}

# at vertex i the even-representative cycle j -> k -> l, z_ik = 1/(1 - z_ij)
_VERTEX_CYCLE = {0: (1, 2, 3), 1: (0, 3, 2), 2: (3, 0, 1), 3: (2, 1, 0)}


def cross_ratio_of_ordering(lifts, order) -> FieldElement:
    """X(p_a, p_b, p_c, p_d) = <v_d, c_ab><v_c, v_a> / (<v_c, c_ab><v_d, v_a>)."""
    a, b, c, d = order
    cab = box(lifts[a], lifts[b])
    num = herm(lifts[d], cab) * herm(lifts[c], lifts[a])
    den = herm(lifts[c], cab) * herm(lifts[d], lifts[a])
    if den.is_zero():
        raise NotGeneric("degenerate quadruple (vanishing Hermitian products)")
    return num / den


class ConfigFour:
    """Four generic ordered points with their cross-ratio invariants."""

    def __init__(self, points: list, ctx: GeomContext = None):
        if len(points) != 4:
            raise ValueError("need exactly four points")
        self.ctx = ctx or GeomContext.for_field(points[0].field)
        if not is_generic(points, self.ctx):
            raise NotGeneric("configuration is not generic")
        self.points = tuple(points)
        self.lifts = [lift_point(p, self.ctx) for p in points]
        quad = tuple(cross_ratio_of_ordering(self.lifts, _SEED_ORDERS[key])
                     for key in ((0, 1), (1, 0), (2, 3), (3, 2)))
        for val in quad:
            if val.is_zero() or val == 1:
                raise DegenerateCrossRatio(f"cross-ratio {val} in {{0,1}}")
        self._quad = quad
        self._table = None
        if not _check_eqcr(self.full_table()):
            raise InconsistentStructure(
                "conjugation constraints fail on a geometric quadruple")

    def quadruple(self):
        return self._quad

    def full_table(self) -> dict:
        """All twelve z_ij generated by the similarity relations."""
        if self._table is None:
            self._table = table_from_quadruple(self._quad)
        return self._table

    def x_value(self, order) -> FieldElement:
        """X at any of the 24 orderings (inverse relation on odd ones)."""
        tab = self.full_table()
        i, j = order[0], order[1]
        val = tab[(i, j)]
        return val if _parity_even(tuple(order)) else val.inverse()

    def tangent(self, i, j, k) -> FieldElement:
        return cartan_tangent(self.points[i], self.points[j], self.points[k],
                              self.ctx)

    def face_rotations(self) -> list:
        """-exp(2iA) for the four boundary faces, as exact field elements
        -T/sigma(T); paired with the cross-ratio products z_il z_jl z_kl."""
        out = []
        for tri in ((1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1)):
            T = _triple_product([self.lifts[i] for i in tri])
            denom = T.conj()
            if denom.is_zero():
                raise NotGeneric("face triple on a C-circle")
            out.append(-(T / denom))
        return out


def table_from_quadruple(quad) -> dict:
    z01, z10, z23, z32 = quad
    one = z01.field.one
    tab = {(0, 1): z01, (1, 0): z10, (2, 3): z23, (3, 2): z32}
    for i, cyc in _VERTEX_CYCLE.items():
        j, k, l = cyc
        a = tab[(i, j)]
        if a == 1:
            raise DegenerateCrossRatio("cross-ratio 1 while closing the table")
        b = (one - a).inverse()
        if b.is_zero() or b == 1:
            raise DegenerateCrossRatio("derived cross-ratio in {0,1}")
        c = (one - b).inverse()
        if c.is_zero() or c == 1:
            raise DegenerateCrossRatio("derived cross-ratio in {0,1}")
        tab[(i, k)] = b
        tab[(i, l)] = c
    return tab


def _check_eqcr(tab) -> bool:
    pairs = (((0, 1), (2, 3)), ((0, 2), (3, 1)), ((0, 3), (1, 2)))
    for (a, b), (c, d) in pairs:
        lhs = tab[(a, b)] * tab[(b, a)]
        rhs = tab[(c, d)] * tab[(d, c)]
        if lhs != rhs.conj():
            return False
    return True


def check_similarity_closure(tab) -> bool:
    """Re-derive every entry along the alternative similarity path
    z_ij = 1 - 1/z_il and compare with the table."""
    one = next(iter(tab.values())).field.one
    for i, (j, k, l) in _VERTEX_CYCLE.items():
        for (a, b) in ((j, k), (k, l), (l, j)):
            # cycle sends a -> b; inverse relation: z_ia = 1 - 1/z_ib
            expect = one - tab[(i, b)].inverse()
            if expect != tab[(i, a)]:
                return False
    return True


# ----------------------------------------------------------------------
# normalized parameters

@dataclass(frozen=True)
class NormalizedParams:
    """(z, s, t): p0 = infinity, p1 = 0, p2 = (1, t), p3 = (z, s|z|^2)."""
    z: FieldElement
    s: FieldElement
    t: FieldElement
    ctx: GeomContext

    def points(self) -> list:
        K = self.ctx.K
        zz = self.z * self.z.conj()
        return [Point.infinity(K), Point.heisenberg(K, K.zero, K.zero),
                Point.heisenberg(K, K.one, self.t),
                Point.heisenberg(K, self.z, self.s * zz)]


def invariants_from_params(p: NormalizedParams):
    """Closed-form invariants of the normalized quadruple."""
    K = p.ctx.K
    i = p.ctx.i
    z, s, t = p.z, p.s, p.t
    if z.is_zero() or z == 1:
        raise OutsideK("z must avoid 0 and 1")
    if not (s.is_sigma_fixed() and t.is_sigma_fixed()):
        raise OutsideK("s and t must be sigma-fixed")
    z10 = z.conj() * (s + i) / (t + i)
    if z10 == 1:
        raise OutsideK("sigma(z)(s+i)/(t+i) = 1 excluded")
    gap = (t + i) - z.conj() * (s + i)
    z23 = z * gap / ((z - K.one) * (t - i))
    z32 = z.conj() * (z - K.one) * (s - i) / gap
    for val in (z10, z23, z32):
        if val.is_zero() or val == 1:
            raise DegenerateCrossRatio(f"invariant {val} in {{0,1}}")
    return (z, z10, z23, z32)


def normalize_config(c: ConfigFour) -> NormalizedParams:
    """Parameters (z, s, t) of the PU(2,1)-normal form; the closed-form
    invariants of the result reproduce the configuration's exactly."""
    ctx = c.ctx
    i = ctx.i
    tau_t = c.tangent(0, 1, 2)
    tau_s = c.tangent(0, 1, 3)
    t = tau_t / i
    s = tau_s / i
    params = NormalizedParams(c.quadruple()[0], s, t, ctx)
    if invariants_from_params(params) != c.quadruple():
        raise InconsistentStructure("normalization failed to reproduce invariants")
    return params


def params_from_quadruple(quad, ctx: GeomContext) -> NormalizedParams:
    """Invert the normalization on invariants-only data: tangents are
    recovered from the face rotation numbers -exp(2iA) = z_il z_jl z_kl."""
    tab = table_from_quadruple(quad)
    one = quad[0].field.one

    def tangent_from_rotation(q, odd):
        denom = q + one
        if denom.is_zero():
            raise NotGeneric("face rotation -1: C-circle face")
        tau = (q - one) / denom
        return -tau if odd else tau

    # z_0l z_1l z_2l = -exp(2iA(p_i,p_j,p_k)) for odd completions (i,j,k,l);
    # the even completion (0,1,2,3) therefore carries -exp(-2iA(p0,p1,p2)).
    q_t = -(tab[(0, 3)] * tab[(1, 3)] * tab[(2, 3)])
    tau_t = tangent_from_rotation(q_t, odd=True)
    # (1,0,3,2) is even, so the face {0,1,3} product carries
    # -exp(-2iA(p1,p0,p3)) = -exp(+2iA(p0,p1,p3)).
    q_s = -(tab[(1, 2)] * tab[(0, 2)] * tab[(3, 2)])
    tau_s = tangent_from_rotation(q_s, odd=False)
    z = quad[0]
    return NormalizedParams(z, tau_s / ctx.i, tau_t / ctx.i, ctx)


def is_symmetric(p: NormalizedParams) -> bool:
    """t = s, or t + s - 2(s Re z + Im z) = 0; exactly the configurations
    with |z01| = |z32|."""
    K = p.ctx.K
    i = p.ctx.i
    z, s, t = p.z, p.s, p.t
    if t == s:
        return True
    re_z = (z + z.conj()) / K.from_rational(2)
    im_z = (z - z.conj()) / (2 * i)
    return (t + s - 2 * (s * re_z + im_z)).is_zero()


def verify_face_identity(c: ConfigFour, face, precision_bits: int = 128) -> bool:
    """Numeric check of -exp(2iA(face)) = z_il z_jl z_kl at the given
    precision (both sides exact field elements, embedded as balls).

    The identity holds verbatim when (i,j,k,l) is an odd permutation;
    even orderings carry the conjugate rotation number."""
    if precision_bits < 32:
        raise PrecisionExhausted("precision must be >= 32 bits")
    i, j, k = face
    (l,) = set(range(4)) - {i, j, k}
    tab = c.full_table()
    prod = tab[(i, l)] * tab[(j, l)] * tab[(k, l)]
    T = _triple_product([c.lifts[m] for m in (i, j, k)])
    denom = T.conj()
    if denom.is_zero():
        raise NotGeneric("face triple on a C-circle")
    rot = -(T / denom)
    if _parity_even((i, j, k, l)):
        rot = rot.conj()
    return disc_overlaps(prod.embed(precision_bits), rot.embed(precision_bits))


# ----------------------------------------------------------------------
# moving triples around: PU(2,1) side pairings

@dataclass
class PairingMap:
    """3x3 matrix over the field, an element of U(2,1) up to scalar;
    satisfies M* J M = mu J with the recorded sigma-fixed scalar mu."""
    matrix: tuple
    mu: FieldElement

    def apply_lift(self, v: Lift) -> Lift:
        m = self.matrix
        return tuple(m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2]
                     for r in range(3))

    def apply_point(self, p: Point, ctx: GeomContext) -> Point:
        return point_from_lift(self.apply_lift(lift_point(p, ctx)), ctx)


def _mat_inverse(m):
    det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
           - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
           + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    if det.is_zero():
        raise NotGeneric("lifts do not span (degenerate triple)")
    cof = [[None] * 3 for _ in range(3)]
    idx = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
    for r in range(3):
        for c in range(3):
            r1, r2 = [x for x in range(3) if x != r]
            c1, c2 = [x for x in range(3) if x != c]
            minor = m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]
            sign = 1 if (r + c) % 2 == 0 else -1
            cof[c][r] = minor * sign / det
    return tuple(tuple(row) for row in cof)


def point_from_lift(w: Lift, ctx: GeomContext) -> Point:
    K = ctx.K
    if w[2].is_zero():
        if not w[1].is_zero():
            raise InconsistentStructure("non-null lift (w2 = 0, w1 != 0)")
        return Point.infinity(K)
    z = w[1] / w[2]
    t = (2 * w[0] / w[2] + z * z.conj()) / ctx.i
    if not t.is_sigma_fixed():
        raise InconsistentStructure("lift does not project to S^3")
    return Point.heisenberg(K, z, t)


def side_pairing(src: list, dst: list, ctx: GeomContext = None) -> PairingMap:
    """PU(2,1) element carrying the ordered generic triple src to dst
    (lifts to lifts up to scalars).  Exists over the ambient field iff the
    Cartan invariants agree."""
    ctx = ctx or GeomContext.for_field(src[0].field)
    K = ctx.K
    if cartan_tangent(*src, ctx) != cartan_tangent(*dst, ctx):
        raise CartanMismatch("triples have different Cartan invariants")
    v = [lift_point(p, ctx) for p in src]
    w = [lift_point(p, ctx) for p in dst]
    g = {(i, j): herm(v[i], v[j]) for i, j in ((0, 1), (1, 2), (2, 0))}
    h = {(i, j): herm(w[i], w[j]) for i, j in ((0, 1), (1, 2), (2, 0))}
    a01 = g[(0, 1)] / h[(0, 1)]
    a12 = g[(1, 2)] / h[(1, 2)]
    a20 = g[(2, 0)] / h[(2, 0)]
    mu = a12 / (a01 * a20).conj()
    if mu != mu.conj():
        raise CartanMismatch("triple products disagree beyond a real scalar")
    lam = (K.one, mu * a01.conj(), mu * a20)
    cols = [tuple(lam[i] * w[i][r] for r in range(3)) for i in range(3)]
    vin = _mat_inverse(tuple(tuple(v[i][r] for i in range(3)) for r in range(3)))
    mat = tuple(tuple(sum((cols[k][r] * vin[k][c] for k in range(3)), K.zero)
                      for c in range(3)) for r in range(3))
    return PairingMap(mat, mu)
