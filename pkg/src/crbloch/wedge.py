"""The antisymmetric square of the multiplicative group, and the
membership test delta(beta) = 0 that certifies Bloch-group membership.

A WedgeElement is a raw formal sum of pairs a (x) b; bilinearity and
x^y + y^x = 0 are imposed only at reduction time, against a
MultiplicativeBasis.  The basis realizes the subgroup generated by the
occurring elements inside

    mu(F)  x  Z^k,

with the free part spanned by explicit element generators y_j (products
of the occurring elements whose valuation vectors form a Hermite basis
of the valuation lattice) and the torsion part the finite unit group.
Every element then factors exactly as (root of unity) * prod y_j^n, and
the factorization is re-multiplied as a check.

The canonical form keeps, over this basis: a strictly upper triangular
integer matrix (free part), mod-2 diagonal bits x^x, and mod-m bits for
(root of unity)^generator.  A vanishing canonical form certifies that
the element is zero in the full wedge square, hence that its source
lies in the Bloch group; over Q with a prime basis the form is a
complete invariant of the generated subgroup.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import UnfactoredElement, UnsupportedField, ZeroElement
from .numfield import (
    FieldElement,
    NumberField,
    PrimeIdealLabel,
    factor_int,
    primes_above,
    valuation,
)
from .zlinalg import solve_in_row_lattice

F = Fraction


class WedgeElement:
    """Raw integer combination of ordered pairs (a, b), kept verbatim."""

    __slots__ = ("field", "pairs")

    def __init__(self, field: NumberField, pairs=None):
        self.field = field
        self.pairs = []
        for a, b, n in pairs or []:
            if a.is_zero() or b.is_zero():
                raise ZeroElement("wedge entries must be nonzero")
            if n:
                self.pairs.append((a, b, int(n)))

    def __add__(self, other):
        if self.field != other.field:
            raise UnsupportedField("wedge sum over mixed fields")
        return WedgeElement(self.field, self.pairs + other.pairs)

    def __neg__(self):
        return WedgeElement(self.field, [(a, b, -n) for a, b, n in self.pairs])

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int):
        return WedgeElement(self.field, [(a, b, k * n) for a, b, n in self.pairs])

    __mul__ = __rmul__

    def elements(self):
        out = []
        for a, b, _ in self.pairs:
            out.extend((a, b))
        return out

    def __repr__(self):
        bits = [f"{n}*({a})^({b})" for a, b, n in self.pairs]
        return " + ".join(bits) if bits else "0"


def delta_map(e) -> WedgeElement:
    """delta([z]) = z ^ (1 - z), extended linearly; the c_F part
    contributes x ^ (1-x) + (1-x) ^ x at the stored representative
    x = -1, which reduces to zero."""
    field = e.field
    one = field.one
    pairs = []
    for z, n in e.terms.items():
        pairs.append((z, one - z, n))
    if e.cf_mult:
        x = field.from_rational(-1)
        pairs.append((x, one - x, e.cf_mult))
        pairs.append((one - x, x, e.cf_mult))
    return WedgeElement(field, pairs)


# ----------------------------------------------------------------------
# the basis

@dataclass
class MultiplicativeBasis:
    field: NumberField
    labels: list            # PrimeIdealLabel, sorted
    mu_gen: FieldElement
    mu_order: int
    free_gens: list         # field elements, one per lattice basis vector
    free_vecs: list         # their valuation vectors (HNF rows)
    _coords: dict

    def coordinates(self, a: FieldElement):
        """(mu exponent, free coordinate vector); factors a exactly over
        the basis or raises UnfactoredElement."""
        hit = self._coords.get(a)
        if hit is not None:
            return hit
        if a.is_zero():
            raise ZeroElement("cannot factor 0")
        vec = _valuation_vector(a, self.labels)
        sol = solve_in_row_lattice([list(v) for v in self.free_vecs], vec)
        if sol is None:
            raise UnfactoredElement(f"{a} does not factor over the basis lattice")
        residual = a
        for g, n in zip(self.free_gens, sol):
            if n:
                residual = residual / g ** n
        mu_exp = _unit_exponent(residual, self.mu_gen, self.mu_order)
        if mu_exp is None:
            raise UnfactoredElement(
                f"residual unit {residual} is not a root of unity power")
        coords = (mu_exp, tuple(sol))
        self._coords[a] = coords
        return coords

    def describe(self) -> str:
        lines = [f"mu generator: {self.mu_gen} (order {self.mu_order})"]
        for g, v in zip(self.free_gens, self.free_vecs):
            vals = ", ".join(f"{lab}:{e}" for lab, e in zip(self.labels, v) if e)
            lines.append(f"free generator {g}  [{vals}]")
        return "\n".join(lines)


def _valuation_vector(a: FieldElement, labels) -> list:
    if a.field.degree == 1:
        q = a.rational_value()
        fac_n = factor_int(q.numerator)
        fac_d = factor_int(q.denominator)
        return [fac_n.get(l.p, 0) - fac_d.get(l.p, 0) for l in labels]
    return [valuation(a, l) for l in labels]


def _unit_exponent(u: FieldElement, mu_gen: FieldElement, order: int):
    cur = u.field.one
    for k in range(order):
        if u == cur:
            return k
        cur = cur * mu_gen
    return None


class _Echelon:
    """Hermite-style echelon over Z with element representatives.

    Rows are kept fully size-reduced after every change, so all update
    quotients stay at the scale of the (small) valuation entries; the
    representatives are reduced field elements whose size is bounded by
    their valuation vectors, keeping the arithmetic cheap.  (A global
    HNF transformation matrix can blow up by orders of magnitude.)
    """

    def __init__(self):
        self.rows = []  # (pivot column, vector, representative), sorted

    def insert(self, vec, el):
        """Reduce (vec, el) against the basis; grow the basis if a new
        pivot appears.  Returns the residual unit when vec reduces away."""
        vec = list(vec)
        while True:
            piv = next((c for c, v in enumerate(vec) if v), None)
            if piv is None:
                return el
            idx = next((i for i, r in enumerate(self.rows) if r[0] >= piv),
                       len(self.rows))
            if idx == len(self.rows) or self.rows[idx][0] > piv:
                if vec[piv] < 0:
                    vec = [-v for v in vec]
                    el = el.inverse()
                self.rows.insert(idx, (piv, vec, el))
                self._size_reduce()
                return None
            _, bvec, bel = self.rows[idx]
            while vec[piv] != 0:
                q = bvec[piv] // vec[piv]
                if q:
                    bvec = [x - q * y for x, y in zip(bvec, vec)]
                    bel = bel / el ** q
                vec, bvec = bvec, vec
                el, bel = bel, el
            if bvec[piv] < 0:
                bvec = [-v for v in bvec]
                bel = bel.inverse()
            self.rows[idx] = (piv, bvec, bel)
            self._size_reduce()

    def _size_reduce(self):
        """Reduce every entry sitting in another row's pivot column."""
        changed = True
        sweeps = 0
        while changed:
            sweeps += 1
            if sweeps > 1000:
                raise UnfactoredElement("basis size reduction did not settle")
            changed = False
            for i, (pi, vi, ei) in enumerate(self.rows):
                for j, (pj, vj, ej) in enumerate(self.rows):
                    if i == j or vi[pj] == 0:
                        continue
                    q = vi[pj] // vj[pj]
                    if q:
                        vi = [x - q * y for x, y in zip(vi, vj)]
                        ei = ei / ej ** q
                        self.rows[i] = (pi, vi, ei)
                        changed = True


def build_mult_basis(elements, field: NumberField) -> MultiplicativeBasis:
    """Basis of the subgroup generated by the elements (with the unit
    group); Q and imaginary quadratic fields."""
    mu_gen, mu_order = field.roots_of_unity()
    seen = set()
    uniq = []
    for a in elements:
        if a.is_zero():
            raise ZeroElement("cannot build a basis containing 0")
        if a not in seen:
            seen.add(a)
            uniq.append(a)
    primes = set()
    for a in uniq:
        nrm = a.norm() if field.degree == 2 else a.rational_value()
        primes.update(factor_int(nrm.numerator))
        primes.update(factor_int(nrm.denominator))
    labels = []
    for p in sorted(primes):
        labels.extend(primes_above(field, p))
    labels.sort()
    if field.degree == 1:
        gens = [field.from_rational(l.p) for l in labels]
        vecs = [[1 if i == j else 0 for j in range(len(labels))]
                for i in range(len(labels))]
        return MultiplicativeBasis(field, labels, mu_gen, mu_order, gens, vecs, {})
    echelon = _Echelon()
    for a in uniq:
        echelon.insert(_valuation_vector(a, labels), a)
    vecs = [row[1] for row in echelon.rows]
    gens = [row[2] for row in echelon.rows]
    basis = MultiplicativeBasis(field, labels, mu_gen, mu_order, gens, vecs, {})
    for a in uniq:  # residual check up front: every input factors
        basis.coordinates(a)
    return basis


def basis_for(e_or_elements, field: NumberField = None) -> MultiplicativeBasis:
    """Basis for a pre-Bloch element's delta image (keys, 1-keys and the
    c_F representative pair) or for a plain element list."""
    if hasattr(e_or_elements, "terms"):
        e = e_or_elements
        field = e.field
        one = field.one
        els = []
        for z in e.terms:
            els.extend((z, one - z))
        if e.cf_mult:
            els.extend((field.from_rational(-1), field.from_rational(2)))
        return build_mult_basis(els, field)
    return build_mult_basis(list(e_or_elements), field)


# ----------------------------------------------------------------------
# canonical reduction

@dataclass
class CanonicalWedge:
    """Components over (mu, y_1..y_k): strictly upper triangular free
    part, mod-2 diagonal bits, mod-m mixed bits and the mu^mu bit."""
    basis: MultiplicativeBasis
    free: dict          # (i, j) i < j -> int
    diag: dict          # i -> bit
    mu_mixed: dict      # i -> int mod mu_order
    mu_mu: int          # bit

    def is_zero(self) -> bool:
        return (not any(self.free.values()) and not any(self.diag.values())
                and not any(self.mu_mixed.values()) and self.mu_mu == 0)

    def free_is_zero(self) -> bool:
        return not any(self.free.values())

    def __eq__(self, other):
        if not isinstance(other, CanonicalWedge):
            return NotImplemented
        return (self.basis is other.basis
                and _clean(self.free) == _clean(other.free)
                and _clean(self.diag) == _clean(other.diag)
                and _clean(self.mu_mixed) == _clean(other.mu_mixed)
                and self.mu_mu == other.mu_mu)

    def report(self) -> str:
        lines = [self.basis.describe()]
        entries = [f"y{i}^y{j}: {n}" for (i, j), n in sorted(self.free.items()) if n]
        lines.append("free part: " + ("; ".join(entries) if entries else "0"))
        tor = [f"y{i}^y{i}: {b}" for i, b in sorted(self.diag.items()) if b]
        tor += [f"mu^y{i}: {b}" for i, b in sorted(self.mu_mixed.items()) if b]
        if self.mu_mu:
            tor.append(f"mu^mu: {self.mu_mu}")
        lines.append("torsion bits: " + ("; ".join(tor) if tor else "0"))
        return "\n".join(lines)


def _clean(d):
    return {k: v for k, v in d.items() if v}


def wedge_reduce(w: WedgeElement, basis: MultiplicativeBasis) -> CanonicalWedge:
    m = basis.mu_order
    free: dict = {}
    diag: dict = {}
    mixed: dict = {}
    mu_mu = 0
    for a, b, n in w.pairs:
        ea, ua = basis.coordinates(a)
        eb, ub = basis.coordinates(b)
        mu_mu = (mu_mu + n * ea * eb) % 2
        for j, vb in enumerate(ub):
            if vb or ua[j]:
                mixed[j] = (mixed.get(j, 0) + n * (ea * vb - ua[j] * eb)) % m
        for i, va in enumerate(ua):
            if not va:
                continue
            for j, vb in enumerate(ub):
                if not vb:
                    continue
                if i == j:
                    diag[i] = (diag.get(i, 0) + n * va * vb) % 2
                elif i < j:
                    free[(i, j)] = free.get((i, j), 0) + n * va * vb
                else:
                    free[(j, i)] = free.get((j, i), 0) - n * va * vb
    return CanonicalWedge(basis, _clean(free), _clean(diag), _clean(mixed), mu_mu)


def wedge_is_zero(w: WedgeElement, basis: MultiplicativeBasis = None) -> bool:
    """Vanishing of the canonical form; certifies that the source
    pre-Bloch element lies in the Bloch group."""
    if basis is None:
        basis = build_mult_basis(w.elements(), w.field)
    return wedge_reduce(w, basis).is_zero()


# ----------------------------------------------------------------------
# surface-term cross-check for a single configuration

def surface_term_identity(config) -> WedgeElement:
    """-delta(beta(config)) minus the boundary expansion of it in terms
    of Hermitian products of lifts: four polar terms
    <l, jk> ^ (triangle holonomy ratio) and twelve edge terms
    <i,j> ^ <n,m>.  The difference vanishes in the wedge square of C*
    (the free part of its reduction is zero; root-of-unity torsion may
    survive in a number field)."""
    from .crgeom import box, herm
    from .prebloch import beta_config

    K = config.ctx.K
    v = config.lifts

    def hp(i, j):
        return herm(v[i], v[j])

    def hbox(i, j, k):
        return herm(v[i], box(v[j], v[k]))

    lhs = -1 * delta_map(beta_config(config.quadruple()))
    pairs = []
    type2 = [
        (hbox(3, 0, 1), hp(0, 1) * hp(1, 3) * hp(3, 0) / (hp(0, 3) * hp(3, 1) * hp(1, 0))),
        (hbox(2, 0, 1), hp(0, 2) * hp(2, 1) * hp(1, 0) / (hp(0, 1) * hp(1, 2) * hp(2, 0))),
        (hbox(3, 0, 2), hp(0, 3) * hp(3, 2) * hp(2, 0) / (hp(0, 2) * hp(2, 3) * hp(3, 0))),
        (hbox(2, 3, 1), hp(1, 2) * hp(2, 3) * hp(3, 1) / (hp(1, 3) * hp(3, 2) * hp(2, 1))),
    ]
    for a, b in type2:
        pairs.append((a, b, 1))
    type3 = [
        (hp(2, 0), hp(3, 0)), (hp(1, 0), hp(2, 0)), (hp(3, 0), hp(1, 0)),
        (hp(3, 1), hp(2, 1)), (hp(0, 1), hp(3, 1)), (hp(2, 1), hp(0, 1)),
        (hp(0, 2), hp(1, 2)), (hp(3, 2), hp(0, 2)), (hp(1, 2), hp(3, 2)),
        (hp(1, 3), hp(0, 3)), (hp(2, 3), hp(1, 3)), (hp(0, 3), hp(2, 3)),
    ]
    for a, b in type3:
        pairs.append((a, b, 1))
    rhs = WedgeElement(K, pairs)
    return lhs - rhs


def surface_term_check(config) -> bool:
    """Free part of the reduced surface-term difference vanishes."""
    diff = surface_term_identity(config)
    basis = build_mult_basis(diff.elements(), diff.field)
    return wedge_reduce(diff, basis).free_is_zero()
