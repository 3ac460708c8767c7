"""Certified real/complex ball arithmetic on top of mpmath.

A ball is a midpoint plus an error radius that certifiably contains the
true value.  Midpoints are computed with ``GUARD`` extra bits beyond the
requested precision; every operation widens the radius by propagated
input radii plus a rounding bound of a few ulps, with radius arithmetic
rounded upward throughout.  The bounds are deliberately generous: the
target tolerances (1e-25 .. 1e-30 at 128 bits) leave ample slack.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf

from .errors import PrecisionExhausted

GUARD = 30


def workprec(prec_bits: int) -> int:
    return prec_bits + GUARD


def _up(*terms):
    """Sum of nonnegative mpf terms, rounded upward."""
    total = mpf(0)
    for t in terms:
        total = mpmath.fadd(total, t, prec=mp.prec, rounding="u")
    return total


def _upmul(a, b):
    return mpmath.fmul(a, b, prec=mp.prec, rounding="u")


def _ulp(x) -> mpf:
    """Upper bound for a few ulps of x at the current working precision."""
    m = mpmath.mag(x)
    if m == mpmath.ninf:
        m = -mp.prec
    return mpf(2) ** (int(m) - mp.prec + 3)


def _op_slop(*values) -> mpf:
    """Rounding bound based on operand magnitudes.

    mpmath's addition truncates shifted operands to the working
    precision, so cancellation leaves errors at the scale of the
    operands (not of the result); complex multiplication and division
    round their internal cross terms the same way.  Any deviation is
    below 2^(mag_max - prec + 4)."""
    m = None
    for v in values:
        mv = mpmath.mag(v)
        if mv != mpmath.ninf and (m is None or mv > m):
            m = mv
    if m is None:
        m = -mp.prec
    return mpf(2) ** (int(m) - mp.prec + 4)


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = x._mpf_
    if man == 0 and exp == 0:
        return Fraction(0)
    return Fraction(-man if sign else man) * Fraction(2) ** exp


def _from_fraction(q: Fraction):
    val = mpmath.fdiv(mpf(q.numerator), mpf(q.denominator), prec=mp.prec)
    rad = mpf(0) if _mpf_to_fraction(val) == q else _ulp(val)
    return val, rad


class RealBall:
    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        self.mid = mpf(mid)
        self.rad = mpf(rad)

    @staticmethod
    def from_fraction(q: Fraction) -> "RealBall":
        mid, rad = _from_fraction(Fraction(q))
        return RealBall(mid, rad)

    @staticmethod
    def exact(x) -> "RealBall":
        return RealBall(mpf(x), 0)

    def __repr__(self):
        return f"RealBall({mpmath.nstr(self.mid, 20)} +/- {mpmath.nstr(self.rad, 5)})"

    def __add__(self, other):
        other = _as_real(other)
        if other.mid == 0 and other.rad == 0:
            return self
        if self.mid == 0 and self.rad == 0:
            return other
        mid = self.mid + other.mid
        return RealBall(mid, _up(self.rad, other.rad,
                                 _op_slop(self.mid, other.mid)))

    __radd__ = __add__

    def __neg__(self):
        return RealBall(-self.mid, self.rad)

    def __sub__(self, other):
        return self + (-_as_real(other))

    def __rsub__(self, other):
        return _as_real(other) + (-self)

    def __mul__(self, other):
        other = _as_real(other)
        mid = self.mid * other.mid
        rad = _up(
            _upmul(abs(self.mid), other.rad),
            _upmul(abs(other.mid), self.rad),
            _upmul(self.rad, other.rad),
            _ulp(mid),
        )
        return RealBall(mid, rad)

    __rmul__ = __mul__

    def contains_zero(self) -> bool:
        return abs(self.mid) <= self.rad

    def abs_upper(self) -> mpf:
        return _up(abs(self.mid), self.rad)

    def abs_lower(self) -> mpf:
        lo = abs(self.mid) - self.rad
        return lo if lo > 0 else mpf(0)


def _as_real(x) -> RealBall:
    if isinstance(x, RealBall):
        return x
    if isinstance(x, Fraction):
        return RealBall.from_fraction(x)
    return RealBall(mpf(x), 0)


class ComplexBall:
    """Disc |z - mid| <= rad in the complex plane."""

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        self.mid = mpc(mid)
        self.rad = mpf(rad)

    @staticmethod
    def from_fractions(re: Fraction, im: Fraction = Fraction(0)) -> "ComplexBall":
        rm, rr = _from_fraction(Fraction(re))
        im_, ir = _from_fraction(Fraction(im))
        return ComplexBall(mpc(rm, im_), _up(rr, ir))

    @staticmethod
    def exact(x) -> "ComplexBall":
        return ComplexBall(mpc(x), 0)

    def __repr__(self):
        return f"ComplexBall({mpmath.nstr(self.mid, 20)} +/- {mpmath.nstr(self.rad, 5)})"

    def __add__(self, other):
        other = _as_complex(other)
        mid = self.mid + other.mid
        return ComplexBall(mid, _up(self.rad, other.rad,
                                    _op_slop(self.mid, other.mid)))

    __radd__ = __add__

    def __neg__(self):
        return ComplexBall(-self.mid, self.rad)

    def __sub__(self, other):
        return self + (-_as_complex(other))

    def __rsub__(self, other):
        return _as_complex(other) + (-self)

    def __mul__(self, other):
        other = _as_complex(other)
        mid = self.mid * other.mid
        scale = _upmul(_up(abs(self.mid)), _up(abs(other.mid)))
        rad = _up(
            _upmul(abs(self.mid), other.rad),
            _upmul(abs(other.mid), self.rad),
            _upmul(self.rad, other.rad),
            _op_slop(scale),
        )
        return ComplexBall(mid, rad)

    __rmul__ = __mul__

    def inverse(self) -> "ComplexBall":
        lo = abs(self.mid) - self.rad
        if lo <= 0:
            raise PrecisionExhausted("division by a ball containing zero")
        mid = 1 / self.mid
        rad = _up(mpmath.fdiv(self.rad, abs(self.mid) * lo, prec=mp.prec, rounding="u"),
                  _op_slop(abs(mid)))
        return ComplexBall(mid, rad)

    def __truediv__(self, other):
        return self * _as_complex(other).inverse()

    def conj(self) -> "ComplexBall":
        return ComplexBall(mpmath.conj(self.mid), self.rad)

    def real(self) -> RealBall:
        return RealBall(self.mid.real, self.rad)

    def imag(self) -> RealBall:
        return RealBall(self.mid.imag, self.rad)

    def abs_upper(self) -> mpf:
        return _up(abs(self.mid), self.rad)

    def abs_lower(self) -> mpf:
        lo = abs(self.mid) - self.rad
        return lo if lo > 0 else mpf(0)

    def contains(self, value) -> bool:
        """Exact test |value - mid| <= rad (value an mpf/mpc/Fraction/int)."""
        if isinstance(value, (Fraction, int)):
            vre, vim = Fraction(value), Fraction(0)
        elif isinstance(value, mpc):
            vre, vim = _mpf_to_fraction(value.real), _mpf_to_fraction(value.imag)
        else:
            vre, vim = _mpf_to_fraction(mpf(value)), Fraction(0)
        dre = _mpf_to_fraction(self.mid.real) - vre
        dim = _mpf_to_fraction(self.mid.imag) - vim
        r = _mpf_to_fraction(self.rad)
        return dre * dre + dim * dim <= r * r

    def is_exact_zero(self) -> bool:
        return self.mid == 0 and self.rad == 0

    def log_abs(self) -> RealBall:
        """Enclosure of log|z|."""
        lo = abs(self.mid) - self.rad
        if lo <= 0:
            raise PrecisionExhausted("log of a ball containing zero")
        mid = mpmath.log(abs(self.mid))
        rad = _up(mpmath.fdiv(self.rad, lo, prec=mp.prec, rounding="u"), _ulp(mid))
        return RealBall(mid, rad)

    def arg(self) -> RealBall:
        """Enclosure of the principal argument; fails if the disc meets
        the branch cut (negative real axis) or contains zero."""
        if abs(self.mid) <= self.rad:
            raise PrecisionExhausted("arg of a ball containing zero")
        if self.mid.real < 0 and abs(self.mid.imag) <= self.rad:
            raise PrecisionExhausted("arg ball crosses the branch cut")
        mid = mpmath.arg(self.mid)
        # asin(r/|m|) <= r/(|m|-r) for r < |m|
        rad = _up(
            mpmath.fdiv(self.rad, abs(self.mid) - self.rad, prec=mp.prec, rounding="u"),
            _ulp(mid),
        )
        return RealBall(mid, rad)

    def log(self) -> "ComplexBall":
        """Enclosure of the principal log (modulus and argument parts
        bounded separately; radius is their hypot upper bound)."""
        la = self.log_abs()
        ar = self.arg()
        mid = mpc(la.mid, ar.mid)
        rad = _up(la.rad, ar.rad, _ulp(abs(mid)))
        return ComplexBall(mid, rad)


def _as_complex(x) -> ComplexBall:
    if isinstance(x, ComplexBall):
        return x
    if isinstance(x, RealBall):
        return ComplexBall(mpc(x.mid, 0), x.rad)
    if isinstance(x, Fraction):
        return ComplexBall.from_fractions(x)
    return ComplexBall(mpc(x), 0)


def conj_ball(b: ComplexBall) -> ComplexBall:
    """Exact conjugate of a ball (constructed at full mantissa width;
    mpf/mpc constructors round to the ambient precision otherwise)."""
    re, im = b.mid.real, b.mid.imag
    bits = max(re._mpf_[3], im._mpf_[3], 16) + 16
    with mp.workprec(bits):
        return ComplexBall(mpc(re, -im), b.rad)


def disc_overlaps(a: ComplexBall, b: ComplexBall) -> bool:
    """Exact test whether two discs intersect (squared-distance compare
    over rationals; immune to working-precision rounding)."""
    dre = _mpf_to_fraction(a.mid.real) - _mpf_to_fraction(b.mid.real)
    dim = _mpf_to_fraction(a.mid.imag) - _mpf_to_fraction(b.mid.imag)
    r = _mpf_to_fraction(a.rad) + _mpf_to_fraction(b.rad)
    return dre * dre + dim * dim <= r * r


def disc_disjoint(a: ComplexBall, b: ComplexBall) -> bool:
    return not disc_overlaps(a, b)


def atan_ball(x: RealBall) -> RealBall:
    """atan is 1-Lipschitz."""
    mid = mpmath.atan(x.mid)
    return RealBall(mid, _up(x.rad, _ulp(mid)))


def pi_ball() -> RealBall:
    p = +mp.pi
    return RealBall(p, _ulp(p))
