"""Formal pre-Bloch group elements and machine-checkable certificates.

An element is an integer combination of generators [z], z in the field
minus {0, 1}, plus an integer multiple of the constant c_F = [x] + [1-x]
(kept symbolic so that the x-independence is exact bookkeeping, not a
choice of representative).

Equality proofs are certificates: ordered lists of relation instances
whose values must sum, exactly as formal elements, to start - end.
Strict mode admits only five-term instances; extended mode (the
default) also admits the catalog identities

    inv_pair(z):   2[z] + 2[1/z] = 0
    one_minus(z):  [z] + [1-z] = c_F
    square(z):     2[z^2] = 4[z] + 4[-z]
    six_c:         6 c_F = 0

each of which is numerically validated by the Bloch-Wigner function in
the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import (
    DegenerateArgument,
    FieldMismatch,
    IllegalRelationInMode,
    OutsideFamily,
)
from .numfield import FieldElement, NumberField, quadratic_imaginary
from .numfield import _sqrt_fraction

F = Fraction


class PreBlochElement:
    """Finite integer combination sum n_z [z] + cf_mult * c_F."""

    __slots__ = ("field", "terms", "cf_mult")

    def __init__(self, field: NumberField, terms=None, cf_mult: int = 0):
        self.field = field
        clean = {}
        for z, n in (terms or {}).items():
            if n == 0:
                continue
            if z.is_zero() or z == 1:
                raise DegenerateArgument("[0] and [1] are not generators")
            clean[z] = clean.get(z, 0) + n
        self.terms = {z: n for z, n in clean.items() if n != 0}
        self.cf_mult = int(cf_mult)

    @staticmethod
    def generator(z: FieldElement, mult: int = 1) -> "PreBlochElement":
        return PreBlochElement(z.field, {z: mult})

    @staticmethod
    def c_constant(field: NumberField, mult: int = 1) -> "PreBlochElement":
        return PreBlochElement(field, {}, mult)

    @staticmethod
    def zero(field: NumberField) -> "PreBlochElement":
        return PreBlochElement(field, {})

    def _require_same(self, other):
        if self.field != other.field:
            raise FieldMismatch("pre-Bloch elements over different fields")

    def __add__(self, other):
        self._require_same(other)
        terms = dict(self.terms)
        for z, n in other.terms.items():
            terms[z] = terms.get(z, 0) + n
        return PreBlochElement(self.field, terms, self.cf_mult + other.cf_mult)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return PreBlochElement(self.field,
                               {z: -n for z, n in self.terms.items()},
                               -self.cf_mult)

    def __rmul__(self, k: int):
        return PreBlochElement(self.field,
                               {z: k * n for z, n in self.terms.items()},
                               k * self.cf_mult)

    __mul__ = __rmul__

    def __eq__(self, other):
        return (isinstance(other, PreBlochElement)
                and self.field == other.field
                and self.terms == other.terms
                and self.cf_mult == other.cf_mult)

    def __hash__(self):
        return hash((self.field._key, frozenset(self.terms.items()), self.cf_mult))

    def is_zero(self) -> bool:
        return not self.terms and self.cf_mult == 0

    def sigma(self) -> "PreBlochElement":
        """Involution induced by conjugating every generator; c_F fixed."""
        terms = {}
        for z, n in self.terms.items():
            zc = z.conj()
            terms[zc] = terms.get(zc, 0) + n
        return PreBlochElement(self.field, terms, self.cf_mult)

    def __repr__(self):
        return self.as_str()

    def as_str(self, gen_symbol="g"):
        bits = []
        for z, n in sorted(self.terms.items(), key=lambda kv: kv[0].coeffs):
            zs = z.as_str(gen_symbol)
            coeff = "" if n == 1 else "-" if n == -1 else f"{n}*"
            bits.append(f"{coeff}[{zs}]")
        if self.cf_mult:
            c = self.cf_mult
            bits.append("c_F" if c == 1 else "-c_F" if c == -1 else f"{c}*c_F")
        if not bits:
            return "0"
        return " + ".join(bits).replace("+ -", "- ")


def beta_config(quad) -> PreBlochElement:
    """[z01] + [z10] + [z23] + [z32] for a cross-ratio quadruple."""
    field = quad[0].field
    out = PreBlochElement.zero(field)
    for z in quad:
        if z.is_zero() or z == 1:
            raise DegenerateArgument(f"cross-ratio {z} in {{0,1}}")
        out = out + PreBlochElement.generator(z)
    return out


def pb_sigma(e: PreBlochElement) -> PreBlochElement:
    return e.sigma()


# ----------------------------------------------------------------------
# relations

_KINDS = ("five_term", "inv_pair", "one_minus", "square", "six_c")
_ARITY = {"five_term": 2, "inv_pair": 1, "one_minus": 1, "square": 1, "six_c": 0}


@dataclass(frozen=True)
class RelationInstance:
    kind: str
    args: tuple = ()
    multiplier: int = 1

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DegenerateArgument(f"unknown relation kind {self.kind!r}")
        if len(self.args) != _ARITY[self.kind]:
            raise DegenerateArgument(
                f"{self.kind} takes {_ARITY[self.kind]} argument(s)")


@dataclass
class Certificate:
    instances: list = dc_field(default_factory=list)

    def __iter__(self):
        return iter(self.instances)

    def __len__(self):
        return len(self.instances)

    def __add__(self, other: "Certificate") -> "Certificate":
        return Certificate(self.instances + other.instances)


def _nondegenerate(*vals):
    for v in vals:
        if v.is_zero() or v == 1:
            raise DegenerateArgument(f"relation argument {v} in {{0,1}}")


def relation_value(r: RelationInstance, field: NumberField = None) -> PreBlochElement:
    """The formal element the relation asserts to be zero (unit multiplier)."""
    if r.kind == "six_c":
        if field is None:
            raise DegenerateArgument("six_c needs an explicit field")
        return PreBlochElement.c_constant(field, 6)
    field = r.args[0].field
    one = field.one
    gen = PreBlochElement.generator
    if r.kind == "five_term":
        x, y = r.args
        _nondegenerate(x, y)
        if x == y:
            raise DegenerateArgument("five_term needs x != y")
        a = y / x
        b = (one - x.inverse()) / (one - y.inverse())
        c = (one - x) / (one - y)
        _nondegenerate(a, b, c)
        return (gen(x) - gen(y) + gen(a) - gen(b) + gen(c))
    if r.kind == "inv_pair":
        (z,) = r.args
        _nondegenerate(z)
        return gen(z, 2) + gen(z.inverse(), 2)
    if r.kind == "one_minus":
        (z,) = r.args
        _nondegenerate(z, one - z)
        return gen(z) + gen(one - z) - PreBlochElement.c_constant(field)
    if r.kind == "square":
        (z,) = r.args
        _nondegenerate(z)
        if z == -1:
            raise DegenerateArgument("square needs z != -1")
        return gen(z * z, 2) - gen(z, 4) - gen(-z, 4)
    raise DegenerateArgument(r.kind)


def verify_certificate(start: PreBlochElement, end: PreBlochElement,
                       cert: Certificate, mode: str = "extended") -> bool:
    """True iff start - end = sum multiplier * relation_value, exactly."""
    if mode not in ("strict", "extended"):
        raise ValueError(f"unknown mode {mode!r}")
    start._require_same(end)
    residual = start - end
    for inst in cert:
        if mode == "strict" and inst.kind != "five_term":
            raise IllegalRelationInMode(
                f"{inst.kind} not admitted in strict mode")
        residual = residual - inst.multiplier * relation_value(inst, start.field)
    return residual.is_zero()


def reduce_by_certificate(start: PreBlochElement, cert: Certificate,
                          mode: str = "extended") -> PreBlochElement:
    """start minus the certified relations (the element the certificate
    proves start equal to)."""
    out = start
    for inst in cert:
        if mode == "strict" and inst.kind != "five_term":
            raise IllegalRelationInMode(
                f"{inst.kind} not admitted in strict mode")
        out = out - inst.multiplier * relation_value(inst, start.field)
    return out


# ----------------------------------------------------------------------
# bounded certificate search (a convenience; verification never searches)

def search_certificate(start: PreBlochElement, end: PreBlochElement,
                       depth: int = 1, max_pool: int = 24):
    """Look for a certificate over a closure of the occurring terms under
    z -> 1-z and z -> 1/z (and pairwise products at depth >= 2).  Solves
    for integer multipliers by lattice membership; returns None when the
    bounded pool does not suffice."""
    from .zlinalg import solve_in_row_lattice

    field = start.field
    target = start - end
    if target.is_zero():
        return Certificate([])
    one = field.one
    pool = set(target.terms)
    for _ in range(max(1, depth)):
        new = set()
        for z in pool:
            if not (one - z).is_zero() and (one - z) != 1:
                new.add(one - z)
            inv = z.inverse()
            if inv != 1:
                new.add(inv)
        pool |= new
        if len(pool) > max_pool:
            break
    if depth >= 2:
        items = sorted(pool, key=lambda z: z.coeffs)[:8]
        for a in items:
            for b in items:
                p = a * b
                if not p.is_zero() and p != 1:
                    pool.add(p)
    pool = sorted(pool, key=lambda z: z.coeffs)[:max_pool]
    candidates = [RelationInstance("six_c")]
    for z in pool:
        for kind in ("inv_pair", "one_minus", "square"):
            try:
                inst = RelationInstance(kind, (z,))
                relation_value(inst, field)
                candidates.append(inst)
            except DegenerateArgument:
                continue
    if depth >= 2:
        for x in pool[:10]:
            for y in pool[:10]:
                try:
                    inst = RelationInstance("five_term", (x, y))
                    relation_value(inst, field)
                    candidates.append(inst)
                except DegenerateArgument:
                    continue
    # build the integer system over the union of occurring generators
    values = [relation_value(c, field) for c in candidates]
    keys = set(target.terms)
    for v in values:
        keys |= set(v.terms)
    keys = sorted(keys, key=lambda z: z.coeffs)
    index = {z: i for i, z in enumerate(keys)}
    ncols = len(keys) + 1

    def vec(e: PreBlochElement):
        row = [0] * ncols
        for z, n in e.terms.items():
            row[index[z]] = n
        row[-1] = e.cf_mult
        return row

    rows = [vec(v) for v in values]
    x = solve_in_row_lattice(rows, vec(target))
    if x is None:
        return None
    insts = [RelationInstance(c.kind, c.args, m)
             for c, m in zip(candidates, x) if m != 0]
    return Certificate(insts)


# ----------------------------------------------------------------------
# the figure-eight one-parameter family

@dataclass(frozen=True)
class FamilySolution:
    """One branch of the two-tetrahedron solutions at parameter beta:
    field Q(sqrt(-alpha^2)) with alpha^2 = 2 - 4 beta^2 + 2 sqrt(5-8 beta),
    first tetrahedron (w, sigma w, w, sigma w), second (z, sigma z, z, sigma z)."""
    beta: Fraction
    root: Fraction          # sqrt(5 - 8 beta)
    alpha_sq: Fraction
    field: NumberField
    w12: FieldElement
    z12: FieldElement

    def tet_quadruples(self):
        w, z = self.w12, self.z12
        return [(w, w.conj(), w, w.conj()), (z, z.conj(), z, z.conj())]

    def invariant(self) -> PreBlochElement:
        out = PreBlochElement.zero(self.field)
        for quad in self.tet_quadruples():
            out = out + beta_config(quad)
        return out


def figure_eight_family(beta) -> FamilySolution:
    """Exact family member; requires 5 - 8 beta to be a rational square
    (so the invariant field is imaginary quadratic)."""
    beta = F(beta)
    r = _sqrt_fraction(5 - 8 * beta)
    if r is None:
        raise OutsideFamily("5 - 8*beta is not a rational square")
    alpha_sq = 2 - 4 * beta * beta + 2 * r
    if alpha_sq <= 0:
        raise OutsideFamily("alpha^2 <= 0: parameter outside the real branch")
    den = r + 3 - 4 * beta
    if den == 0:
        raise OutsideFamily("degenerate branch denominator")
    field = quadratic_imaginary(alpha_sq)
    g = field.gen  # embeds as i*alpha
    w12 = field.from_rational(beta) + g / field.from_rational(2)
    z12 = (field.from_rational(r - 2 * beta + 1) + g) / field.from_rational(den)
    for v in (w12, z12):
        if v.is_zero() or v == 1:
            raise OutsideFamily("degenerate tetrahedron invariant")
    return FamilySolution(beta, r, alpha_sq, field, w12, z12)


def pairing_identity_check(beta) -> bool:
    """Exact check of w12/(w12 - 1) = sigma(z12) on the family branch."""
    fam = figure_eight_family(beta)
    w, z = fam.w12, fam.z12
    return w / (w - fam.field.one) == z.conj()
