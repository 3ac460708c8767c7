"""Exact arithmetic in number fields Q[x]/(m(x)).

A field carries one designated complex embedding (an index into the
roots of the defining polynomial, ordered by decreasing imaginary part
then increasing real part) and a conjugation automorphism sigma whose
embedding realizes complex conjugation.  All element arithmetic is
exact over arbitrary-precision rationals; embeddings return certified
complex balls.

Prime-ideal valuations are provided for Q and imaginary quadratic
fields, which is all the wedge reduction downstream needs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
from mpmath import mp, mpc, mpf

from .balls import ComplexBall, conj_ball, disc_disjoint, disc_overlaps, workprec
from .errors import (
    DivisionByZero,
    FieldMismatch,
    PrecisionExhausted,
    ReducibleError,
    SigmaError,
    UnsupportedField,
    ZeroElement,
)

F = Fraction


# ----------------------------------------------------------------------
# polynomial helpers (coefficient lists over Fraction, ascending degree)

def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_add(p, q):
    n = max(len(p), len(q))
    return _poly_trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                       for i in range(n)])


def _poly_scale(p, c):
    return _poly_trim([c * x for x in p]) if c else []


def _poly_mul(p, q):
    if not p or not q:
        return []
    out = [F(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _poly_trim(out)


def _poly_divmod(p, q):
    p = list(p)
    if not q:
        raise ZeroDivisionError
    quot = [F(0)] * max(0, len(p) - len(q) + 1)
    while len(p) >= len(q) and p:
        c = p[-1] / q[-1]
        k = len(p) - len(q)
        quot[k] = c
        for i, b in enumerate(q):
            p[k + i] -= c * b
        _poly_trim(p)
    return _poly_trim(quot), p


def _poly_gcd(p, q):
    p, q = list(p), list(q)
    while q:
        p, q = q, _poly_divmod(p, q)[1]
    if p:
        lead = p[-1]
        p = [c / lead for c in p]
    return p


def _poly_deriv(p):
    return _poly_trim([i * c for i, c in enumerate(p)][1:])


def _poly_eval(p, x):
    acc = F(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_int_primitive(p):
    """Clear denominators and content; returns integer coefficient list."""
    from math import gcd, lcm
    den = 1
    for c in p:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    return [c // g for c in ints] if g else ints


# ----------------------------------------------------------------------
# integer factorization (small scale: norms of catalog-sized elements)

def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    from math import gcd
    if n % 2 == 0:
        return 2
    for c in range(1, 20):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"failed to factor {n}")


def factor_int(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}; n must be nonzero."""
    if n == 0:
        raise ZeroElement("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = m
        while d == m:
            d = _pollard_rho(m)
        stack.extend([d, m // d])
    return out


def _divisors(n: int) -> list[int]:
    fac = factor_int(n) if n not in (1, -1) else {}
    divs = [1]
    for p, e in fac.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


# ----------------------------------------------------------------------
# irreducibility certification

def _modp_pow(base, exp, mod_poly, p):
    """base^exp mod (mod_poly, p); polynomials as int lists, mod_poly monic."""
    def red(poly):
        poly = [c % p for c in poly]
        d = len(mod_poly) - 1
        while len(poly) > d:
            c = poly[-1]
            if c:
                k = len(poly) - 1 - d
                for i, b in enumerate(mod_poly):
                    poly[k + i] = (poly[k + i] - c * b) % p
            poly.pop()
        while poly and poly[-1] == 0:
            poly.pop()
        return poly

    def pmul(a, b):
        out = [0] * (len(a) + len(b) - 1) if a and b else []
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        return red(out)

    result = [1]
    base = red(list(base))
    while exp:
        if exp & 1:
            result = pmul(result, base)
        base = pmul(base, base)
        exp >>= 1
    return result


def _modp_gcd(a, b, p):
    def red(poly):
        return [c % p for c in poly]

    def trim(poly):
        while poly and poly[-1] == 0:
            poly.pop()
        return poly

    a, b = trim(red(list(a))), trim(red(list(b)))
    while b:
        inv = pow(b[-1], -1, p)
        r = list(a)
        while len(r) >= len(b) and trim(r):
            c = r[-1] * inv % p
            k = len(r) - len(b)
            for i, x in enumerate(b):
                r[k + i] = (r[k + i] - c * x) % p
            trim(r)
        a, b = b, trim(r)
    return a


def _irreducible_mod_p(ints, p) -> bool:
    """Rabin test for an integer polynomial mod p (degree preserved)."""
    if ints[-1] % p == 0:
        return False
    d = len(ints) - 1
    inv = pow(ints[-1] % p, -1, p)
    monic = [c * inv % p for c in ints]
    x = [0, 1]
    # x^(p^d) == x mod f
    h = _modp_pow(x, p**d, monic, p)
    if h != [0, 1]:
        return False
    for q in factor_int(d):
        h = _modp_pow(x, p**(d // q), monic, p)
        diff = [(a - b) % p for a, b in
                itertools.zip_longest(h, x, fillvalue=0)]
        while diff and diff[-1] == 0:
            diff.pop()
        g = _modp_gcd(monic, diff, p)
        if len(g) != 1:
            return False
    return True


def _rational_roots(poly) -> list[Fraction]:
    """All rational roots of a monic rational polynomial."""
    ints = _poly_int_primitive(poly)
    if ints and ints[0] == 0:
        shifted = list(poly)
        while shifted and shifted[0] == 0:
            shifted.pop(0)
        rest = _rational_roots(shifted) if len(shifted) > 1 else []
        return sorted({F(0), *rest})
    lead, const = ints[-1], ints[0]
    roots = []
    for pn in _divisors(abs(const)):
        for qd in _divisors(abs(lead)):
            for s in (1, -1):
                cand = F(s * pn, qd)
                if _poly_eval(poly, cand) == 0 and cand not in roots:
                    roots.append(cand)
    return roots


def _sqrt_fraction(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    import math
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return F(rn, rd)
    return None


def _quartic_quadratic_split(poly) -> bool:
    """True if the monic rational quartic splits into two monic rational
    quadratics.  Uses the resolvent cubic for u = q + s."""
    a, b, c, d = poly[3], poly[2], poly[1], poly[0]
    resolvent = [-(a * a * d - 4 * b * d + c * c), a * c - 4 * d, -b, F(1)]
    for u in _rational_roots(resolvent):
        disc = a * a - 4 * (b - u)
        rt = _sqrt_fraction(disc)
        if rt is None:
            continue
        for pp in ((a + rt) / 2, (a - rt) / 2):
            rr = a - pp
            if pp != rr:
                s = (c - u * rr) / (pp - rr)
                q = u - s
                if q * s == d:
                    return True
            else:
                disc2 = u * u - 4 * d
                rt2 = _sqrt_fraction(disc2)
                if rt2 is not None and pp * u == c:
                    return True
    return False


def _certify_irreducible(poly) -> None:
    """Raise ReducibleError unless the monic rational polynomial is
    certified irreducible over Q.

    Squarefreeness is checked exactly.  A prime with irreducible
    reduction certifies irreducibility quickly when one exists; for
    degree <= 4 (where composita of quadratics never admit such a
    prime) a complete exact factorization test decides the question.
    """
    d = len(poly) - 1
    if d < 1:
        raise ReducibleError("constant polynomial")
    g = _poly_gcd(poly, _poly_deriv(poly))
    if len(g) > 1:
        raise ReducibleError(f"not squarefree: gcd with derivative has degree {len(g) - 1}")
    if d == 1:
        return
    ints = _poly_int_primitive(poly)
    limit = 300 if d <= 4 else 10000
    p = 2
    while p < limit:
        if ints[-1] % p and _irreducible_mod_p(ints, p):
            return
        p = _next_prime(p)
    if d <= 4:
        roots = _rational_roots(poly)
        if roots:
            raise ReducibleError(f"rational root {roots[0]}")
        if d == 4 and _quartic_quadratic_split(poly):
            raise ReducibleError("splits into two rational quadratics")
        if d <= 3:
            return  # cubic/quadratic with no rational root is irreducible
        return
    raise ReducibleError(
        f"no prime below {limit} certifies irreducibility of degree-{d} polynomial")


def _next_prime(p: int) -> int:
    p += 1
    while not _is_probable_prime(p):
        p += 1
    return p


# ----------------------------------------------------------------------
# the field

class NumberField:
    """Q[x]/(m(x)) with a designated complex embedding and conjugation."""

    def __init__(self, minpoly, embedding_index, sigma_image, _validate=True):
        poly = [F(c) for c in minpoly]
        if not poly or poly[-1] != 1:
            raise ReducibleError("defining polynomial must be monic")
        self.minpoly = tuple(poly)
        self.degree = len(poly) - 1
        self.embedding_index = int(embedding_index)
        self.sigma_image = tuple(F(c) for c in sigma_image)
        if len(self.sigma_image) != self.degree:
            raise SigmaError("sigma image must have one coefficient per basis power")
        if not (0 <= self.embedding_index < self.degree):
            raise ValueError("embedding index out of range")
        self._key = (self.minpoly, self.embedding_index, self.sigma_image)
        # reduction table for g^d .. g^(2d-2)
        self._red = []
        d = self.degree
        rem = [-c for c in poly[:-1]]
        cur = list(rem)
        for _ in range(d - 1):
            self._red.append(tuple(cur))
            cur = [F(0)] + cur
            top = cur.pop()
            if top:
                cur = [a + top * b for a, b in zip(cur, rem)]
        self._sigma_pows = None
        self._roots_cache: dict[int, list[ComplexBall]] = {}
        self._sqrts: dict[Fraction, "FieldElement"] = {}
        self._quad_data = None
        self._hensel_cache: dict[tuple, tuple] = {}
        if _validate:
            _certify_irreducible(list(self.minpoly))
            self._validate_sigma()

    # -- identity ------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, NumberField) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"NumberField(deg {self.degree}, minpoly {_poly_str(self.minpoly)})"

    # -- element constructors -------------------------------------------

    def element(self, coeffs) -> "FieldElement":
        coeffs = [F(c) for c in coeffs]
        if len(coeffs) > self.degree:
            raise ValueError("too many coefficients")
        coeffs += [F(0)] * (self.degree - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def from_rational(self, q) -> "FieldElement":
        return self.element([F(q)])

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self.element([-self.minpoly[0]])
        return self.element([0, 1])

    @property
    def zero(self) -> "FieldElement":
        return self.element([])

    @property
    def one(self) -> "FieldElement":
        return self.element([1])

    # -- sigma -----------------------------------------------------------

    def _sigma_powers(self):
        if self._sigma_pows is None:
            s = self.element(self.sigma_image)
            pows = [self.one]
            for _ in range(self.degree - 1):
                pows.append(pows[-1] * s)
            self._sigma_pows = pows
        return self._sigma_pows

    def sigma(self, a: "FieldElement") -> "FieldElement":
        if a.field is not self and a.field != self:
            raise FieldMismatch("sigma of a foreign element")
        out = self.zero
        for c, gp in zip(a.coeffs, self._sigma_powers()):
            if c:
                out = out + gp * c
        return out

    def _validate_sigma(self):
        s = self.element(self.sigma_image)
        # automorphism: minpoly(sigma(gen)) = 0
        acc = self.zero
        pw = self.one
        for c in self.minpoly:
            acc = acc + pw * c
            pw = pw * s
        if not acc.is_zero():
            raise SigmaError("sigma image is not a root of the defining polynomial")
        if self.sigma(s) != self.gen:
            raise SigmaError("sigma is not an involution")
        # embedding compatibility: embed(sigma(gen)) must be the conjugate root
        prec = 192
        roots = self.roots(prec)
        own = roots[self.embedding_index]
        own_conj = conj_ball(own)
        sball = s.embed(prec)
        # sigma(gen) is some root; locate its disc and the disc holding the
        # conjugate of the designated root -- they must be the same one.
        hits = [i for i, r in enumerate(roots) if disc_overlaps(sball, r)]
        conj_hits = [i for i, r in enumerate(roots) if disc_overlaps(own_conj, r)]
        if len(hits) != 1 or hits != conj_hits:
            raise SigmaError("sigma does not realize complex conjugation "
                             "under the designated embedding")

    # -- embedding -------------------------------------------------------

    def roots(self, prec_bits: int) -> list[ComplexBall]:
        """Certified enclosures of all roots of minpoly, ordered by
        (imaginary part descending, real part ascending)."""
        tier = 64
        while tier < prec_bits + 2 * workprec(0):
            tier *= 2
        if tier in self._roots_cache:
            return self._roots_cache[tier]
        balls = _isolate_roots(list(self.minpoly), tier)
        self._roots_cache[tier] = balls
        return balls

    def gen_ball(self, prec_bits: int) -> ComplexBall:
        if self.degree == 1:
            with mp.workprec(workprec(prec_bits)):
                return ComplexBall.from_fractions(-self.minpoly[0])
        return self.roots(prec_bits)[self.embedding_index]

    # -- misc ------------------------------------------------------------

    def sqrt_of(self, d) -> Optional["FieldElement"]:
        """An element with square d (rational), if one exists / is designated."""
        d = F(d)
        hit = self._sqrts.get(d)
        if hit is not None:
            return hit
        if self.degree == 1:
            r = _sqrt_fraction(d)
            return self.from_rational(r) if r is not None else None
        if self.degree == 2:
            b, c = self.minpoly[1], self.minpoly[0]
            # (x + y g)^2 = d  with g^2 = -b g - c
            # cross term: y(2x - by) = 0
            r = _sqrt_fraction(d)
            if r is not None:
                return self.from_rational(r)
            # y != 0, x = b y / 2:  y^2 (b^2/4 - c) = d
            denom = b * b / 4 - c
            if denom == 0:
                return None
            y2 = d / denom
            y = _sqrt_fraction(y2)
            if y is None:
                return None
            el = self.element([b * y / 2, y])
            self._sqrts[d] = el
            return el
        return None

    def roots_of_unity(self) -> tuple["FieldElement", int]:
        """(generator, order) of the torsion of F*; for Q and imaginary
        quadratic fields only."""
        if self.degree == 1:
            return self.from_rational(-1), 2
        if self.degree == 2:
            d0 = self._quadratic_data()["D0"]
            if d0 == -1:
                return self.sqrt_of(F(-1)), 4
            if d0 == -3:
                rho = self.sqrt_of(F(-3))
                return (self.one + rho) / self.from_rational(2), 6
            if d0 < 0:
                return self.from_rational(-1), 2
        raise UnsupportedField("roots of unity computed only over Q and "
                               "imaginary quadratic fields")

    def _quadratic_data(self):
        """D0 (squarefree), sqrt(D0) as element, integral-basis omega and
        its monic integer minimal polynomial; imaginary quadratic only."""
        if self._quad_data is not None:
            return self._quad_data
        if self.degree != 2:
            raise UnsupportedField("quadratic structure requested for a "
                                   f"degree-{self.degree} field")
        b, c = self.minpoly[1], self.minpoly[0]
        draw = b * b - 4 * c
        num_fac = factor_int(draw.numerator)
        den_fac = factor_int(draw.denominator)
        d0 = -1 if draw < 0 else 1
        scale = F(1)
        for p, e in num_fac.items():
            if e % 2:
                d0 *= p
            scale *= F(p) ** (e // 2)
        for p, e in den_fac.items():
            if e % 2:
                d0 *= p
                scale /= p
            scale /= F(p) ** (e // 2)
        # draw = scale^2 * d0
        assert scale * scale * d0 == draw
        rho = (2 * self.gen + self.from_rational(b)) / self.from_rational(scale)
        if d0 % 4 == 1:
            omega = (self.one + rho) / self.from_rational(2)
            omega_poly = (1 - d0) // 4, -1  # x^2 - x + (1-d0)/4
            disc = d0
        else:
            omega = rho
            omega_poly = (-d0, 0)
            disc = 4 * d0
        self._quad_data = {
            "D0": d0, "rho": rho, "omega": omega,
            "omega_norm": omega_poly[0], "omega_trace": -omega_poly[1],
            "disc": disc,
        }
        return self._quad_data

    def omega_coords(self, a: "FieldElement") -> tuple[Fraction, Fraction]:
        """Coordinates (x, y) with a = x + y*omega."""
        qd = self._quadratic_data()
        w0, w1 = qd["omega"].coeffs
        y = a.coeffs[1] / w1
        return a.coeffs[0] - y * w0, y


def _poly_str(poly):
    parts = []
    for i, c in enumerate(poly):
        if c:
            parts.append(f"{c}*x^{i}" if i else f"{c}")
    return " + ".join(parts) or "0"


# ----------------------------------------------------------------------
# certified root isolation

def _isolate_roots(poly, prec_bits):
    d = len(poly) - 1
    if d == 1:
        with mp.workprec(workprec(prec_bits)):
            return [ComplexBall.from_fractions(-poly[0])]
    ints = _poly_int_primitive(poly)
    lead = abs(ints[-1])
    attempt = max(prec_bits + 80, d * (prec_bits + 80) // 2)
    for _ in range(6):
        with mp.workprec(attempt):
            approx = mpmath.polyroots([mpf(c) for c in reversed(ints)],
                                      maxsteps=200, extraprec=attempt // 2)
        with mp.workprec(attempt):
            balls = []
            for x in approx:
                x = mpc(x)
                # distance to the nearest root <= (|f(x)|/lead)^(1/d)
                fx = ComplexBall.exact(x)
                acc = ComplexBall.exact(0)
                for c in reversed(ints):
                    acc = acc * fx + ComplexBall.exact(c)
                bound = (acc.abs_upper() / lead) ** F(1, d)
                balls.append(ComplexBall(x, bound * mpf("1.0001")))
            ok = all(disc_disjoint(ComplexBall(a.mid, 2 * a.rad),
                                   ComplexBall(b.mid, 2 * b.rad))
                     for a, b in itertools.combinations(balls, 2))
            ok = ok and all(b.rad < mpf(2) ** (-prec_bits - 10) for b in balls)
        if ok:
            break
        attempt *= 2
    else:
        raise PrecisionExhausted("failed to isolate roots")
    # canonical ordering: conjugate-pair aware
    with mp.workprec(attempt):
        canon = []
        for b in balls:
            im = b.mid.imag
            if abs(im) <= b.rad:  # real root of a real polynomial
                canon.append(ComplexBall(mpc(b.mid.real, 0), b.rad))
            else:
                canon.append(b)
        canon.sort(key=lambda b: (-b.mid.imag, b.mid.real))
    return canon


# ----------------------------------------------------------------------
# elements

class FieldElement:
    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: NumberField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    # -- housekeeping ----------------------------------------------------

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field == self.field:
                return other
            raise FieldMismatch(
                f"elements of {self.field!r} and {other.field!r}")
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        return (isinstance(other, FieldElement)
                and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field._key, self.coeffs))
        return self._hash

    def __repr__(self):
        return self.as_str()

    def as_str(self, gen_symbol="g"):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                sym = gen_symbol if i == 1 else f"{gen_symbol}^{i}"
                parts.append(sym if c == 1 else f"-{sym}" if c == -1 else f"{c}*{sym}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in
                                              zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, tuple(a - b for a, b in
                                              zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self.field.degree
        conv = [F(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        conv[i + j] += a * b
        out = list(conv[:d])
        for k, c in enumerate(conv[d:]):
            if c:
                red = self.field._red[k]
                for i, r in enumerate(red):
                    out[i] += c * r
        return FieldElement(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        # extended euclid: s*a + t*m = 1
        a = _poly_trim(list(self.coeffs))
        m = list(self.field.minpoly)
        r0, r1 = m, a
        s0, s1 = [], [F(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_add(s0, _poly_scale(_poly_mul(q, s1), F(-1)))
        # r0 = gcd (a constant since minpoly is irreducible)
        c = r0[0]
        inv = [x / c for x in s0]
        return self.field.element(inv[:self.field.degree])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- predicates / maps -------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def conj(self) -> "FieldElement":
        return self.field.sigma(self)

    def is_sigma_fixed(self) -> bool:
        return self.conj() == self

    def norm(self) -> Fraction:
        """Field norm to Q (degree <= 2)."""
        if self.field.degree == 1:
            return self.coeffs[0]
        if self.field.degree == 2:
            n = self * self.conj()
            return n.rational_value()
        raise UnsupportedField("norm implemented for degree <= 2")

    def embed(self, prec_bits: int = 128) -> ComplexBall:
        """Certified complex ball containing the embedded value."""
        if prec_bits < 32:
            raise PrecisionExhausted("embedding precision must be >= 32 bits")
        with mp.workprec(workprec(prec_bits)):
            if self.is_rational():
                return ComplexBall.from_fractions(self.coeffs[0])
            g = self.field.gen_ball(prec_bits)
            acc = ComplexBall.exact(0)
            for c in reversed(self.coeffs):
                acc = acc * g + ComplexBall.from_fractions(c)
            return acc

    def embed_at(self, root_index: int, prec_bits: int = 128) -> ComplexBall:
        """Value under the embedding sending the generator to another
        root of the defining polynomial (for regulator-style sweeps)."""
        if prec_bits < 32:
            raise PrecisionExhausted("embedding precision must be >= 32 bits")
        with mp.workprec(workprec(prec_bits)):
            if self.is_rational():
                return ComplexBall.from_fractions(self.coeffs[0])
            g = self.field.roots(prec_bits)[root_index]
            acc = ComplexBall.exact(0)
            for c in reversed(self.coeffs):
                acc = acc * g + ComplexBall.from_fractions(c)
            return acc


# ----------------------------------------------------------------------
# public constructors / operations

def define_field(minpoly, embedding_index=0, sigma_image=None) -> NumberField:
    """Validated number field; sigma defaults to the identity map (only
    sound for fields with a real designated embedding, e.g. Q)."""
    poly = [F(c) for c in minpoly]
    if sigma_image is None:
        d = len(poly) - 1
        sigma_image = [F(0)] * d
        if d == 1:
            sigma_image[0] = -poly[0]
        else:
            sigma_image[1] = F(1)
    return NumberField(poly, embedding_index, sigma_image)


_QQ = None


def QQ() -> NumberField:
    global _QQ
    if _QQ is None:
        _QQ = define_field([0, 1], 0, [0])
    return _QQ


def gaussian_field() -> NumberField:
    """Q(i), i the root with positive imaginary part."""
    return define_field([1, 0, 1], 0, [0, -1])


def quadratic_imaginary(n: int) -> NumberField:
    """Q(sqrt(-n)) for a positive rational n, generator embedding i*sqrt(n)."""
    n = F(n)
    if n <= 0:
        raise UnsupportedField("quadratic_imaginary expects n > 0")
    return define_field([n, 0, 1], 0, [0, -1])


def extend_with_sqrt(field: NumberField, d) -> tuple[NumberField, "callable"]:
    """Smallest extension of ``field`` containing sqrt(d) for rational d.

    Returns (E, embed) where embed maps field elements into E.  When the
    square root already exists, E is the field itself.  The base field
    must be Q or presented as x^2 - m; the composite case produces the
    biquadratic quartic with generator sqrt(m) + sqrt(d).
    """
    d = F(d)
    if field.sqrt_of(d) is not None:
        return field, lambda a: a
    if field.degree == 1:
        ext = define_field([-d, 0, 1], 0, [0, -1]) if d < 0 else \
            define_field([-d, 0, 1], 0, [0, 1])
        ext._sqrts[d] = ext.gen
        return ext, lambda a, _E=ext: _E.from_rational(a.rational_value())
    if field.degree != 2 or field.minpoly[1] != 0:
        raise UnsupportedField("sqrt adjunction needs a pure quadratic base")
    m = -field.minpoly[0]  # gen^2 = m
    if m >= 0 or d >= 0:
        raise UnsupportedField("sqrt adjunction implemented for imaginary "
                               "quadratics and negative d")
    # gamma = sqrt(m) + sqrt(d); minpoly x^4 - 2(m+d) x^2 + (m-d)^2
    quartic = [(m - d) ** 2, F(0), -2 * (m + d), F(0), F(1)]
    # designated embedding: i(sqrt|m| + sqrt|d|), located among the roots
    tmp = NumberField(quartic, 0, [0, -1, 0, 0], _validate=False)
    prec = 160
    roots = tmp.roots(prec)
    with mp.workprec(workprec(prec)):
        target = field.gen_ball(prec).mid + mpc(0, 1) * mpmath.sqrt(
            mpf(abs(d.numerator)) / mpf(d.denominator))
        idx = min(range(4), key=lambda i: abs(roots[i].mid - target))
        if abs(roots[idx].mid - target) > mpf(2) ** (-40):
            raise PrecisionExhausted("could not locate the composite embedding root")
    ext = NumberField(quartic, idx, [0, -1, 0, 0])
    gamma = ext.gen
    s = (gamma ** 3 - (3 * m + d) * gamma) / ext.from_rational(2 * (d - m))
    t = gamma - s
    assert (s * s).rational_value() == m and (t * t).rational_value() == d
    ext._sqrts[m] = s
    ext._sqrts[d] = t

    def embed(a, _E=ext, _s=s):
        return _E.from_rational(a.coeffs[0]) + _s * a.coeffs[1]

    # embedding compatibility with the base field
    assert embed(field.gen).embed(96).contains(field.gen_ball(96).mid)
    return ext, embed


# ----------------------------------------------------------------------
# prime ideals and valuations (Q and imaginary quadratic fields)

@dataclass(frozen=True, order=True)
class PrimeIdealLabel:
    """Names one prime above p.  For split primes the residue of omega
    identifies the ideal (p, omega - residue)."""
    p: int
    kind: str  # rational | split | inert | ramified
    residue: Optional[int] = None

    def __str__(self):
        if self.kind == "rational":
            return f"({self.p})"
        if self.kind == "split":
            return f"({self.p}, w-{self.residue})"
        return f"({self.p}, {self.kind})"


def _require_supported(field: NumberField):
    if field.degree == 1:
        return "Q"
    if field.degree == 2 and field._quadratic_data()["D0"] < 0:
        return "quad"
    raise UnsupportedField(
        "valuations support Q and imaginary quadratic fields only")


def primes_above(field: NumberField, p: int) -> list[PrimeIdealLabel]:
    kind = _require_supported(field)
    if kind == "Q":
        return [PrimeIdealLabel(p, "rational")]
    qd = field._quadratic_data()
    tr, nm = qd["omega_trace"], qd["omega_norm"]
    if qd["disc"] % p == 0:
        return [PrimeIdealLabel(p, "ramified")]
    roots = sorted(r for r in range(p) if (r * r - tr * r + nm) % p == 0)
    if not roots:
        return [PrimeIdealLabel(p, "inert")]
    return [PrimeIdealLabel(p, "split", r) for r in roots]


def _hensel_root(field: NumberField, p: int, r0: int, prec_exp: int) -> tuple[int, int]:
    """Root of the omega polynomial mod p^K with K >= prec_exp."""
    qd = field._quadratic_data()
    tr, nm = qd["omega_trace"], qd["omega_norm"]
    key = (p, r0)
    cached = field._hensel_cache.get(key)
    if cached and cached[1] >= prec_exp:
        r, k = cached
        return r % p ** prec_exp, prec_exp
    r, k = (r0, 1) if not cached else cached
    while k < prec_exp:
        k = min(2 * k, prec_exp) if 2 * k >= prec_exp else 2 * k
        mod = p ** k
        fr = (r * r - tr * r + nm) % mod
        dfr = (2 * r - tr) % mod
        r = (r - fr * pow(dfr, -1, mod)) % mod
    field._hensel_cache[key] = (r, k)
    return r % p ** prec_exp, prec_exp


def _vp_fraction(q: Fraction, p: int) -> int:
    v = 0
    n = q.numerator
    while n % p == 0:
        n //= p
        v += 1
    if v:
        return v
    m = q.denominator
    while m % p == 0:
        m //= p
        v -= 1
    return v


def valuation(a: FieldElement, label: PrimeIdealLabel) -> int:
    if a.is_zero():
        raise ZeroElement("valuation of zero")
    kind = _require_supported(a.field)
    p = label.p
    if kind == "Q":
        return _vp_fraction(a.rational_value(), p)
    if a.is_rational():
        base = _vp_fraction(a.rational_value(), p)
        return 2 * base if label.kind == "ramified" else base
    nv = _vp_fraction(a.norm(), p)
    if label.kind == "ramified":
        return nv
    if label.kind == "inert":
        if nv % 2:
            raise ArithmeticError("odd norm valuation at an inert prime")
        return nv // 2
    # split: p-adic evaluation of x + y*omega at the Hensel root
    x, y = a.field.omega_coords(a)
    t = min(_vp_fraction(x, p) if x else 10**9, _vp_fraction(y, p) if y else 10**9)
    x, y = x / F(p) ** t, y / F(p) ** t
    bound = nv - 2 * t + 1
    K = max(bound + 1, 2)
    r, K = _hensel_root(a.field, p, label.residue, K)
    mod = p ** K
    num = (x.numerator * pow(x.denominator, -1, mod)
           + y.numerator * pow(y.denominator, -1, mod) * r) % mod
    if num == 0:
        v = K  # value exceeds the certified window; grow it
        r, K = _hensel_root(a.field, p, label.residue, 2 * K)
        mod = p ** K
        num = (x.numerator * pow(x.denominator, -1, mod)
               + y.numerator * pow(y.denominator, -1, mod) * r) % mod
        if num == 0:
            raise ArithmeticError("valuation window exhausted")
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    return v + t


def valuations(a: FieldElement, labels: list[PrimeIdealLabel]) -> list[int]:
    return [valuation(a, lab) for lab in labels]
