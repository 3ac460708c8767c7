"""Certified evaluation of Li2 and the Bloch-Wigner function D.

Li2 is evaluated by its power series after moving the argument into the
disc |z| <= 1/2 with the inversion and reflection functional equations.
Near the unit circle (where no image under the six-element orbit of
z -> 1/z, z -> 1-z is small; the worst points are exp(+-i pi/3)) the
series in w = log z with zeta(2-m) = Bernoulli coefficients takes over.
Real arguments use the real Landen/inversion route, and D short-circuits
exact reals to zero.

All results are enclosures: midpoints carry GUARD extra bits and radii
collect series tails, rounding slop and propagated input radii.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, log

import mpmath
from mpmath import mp, mpc, mpf

from .balls import ComplexBall, RealBall, _ulp, _up, pi_ball, workprec
from .errors import NotGeneric, PrecisionExhausted

F = Fraction


# ----------------------------------------------------------------------
# exact Bernoulli numbers

_BERNOULLI: list[Fraction] = [F(1)]


def bernoulli(m: int) -> Fraction:
    while len(_BERNOULLI) <= m:
        k = len(_BERNOULLI)
        acc = F(0)
        for j in range(k):
            acc += comb(k + 1, j) * _BERNOULLI[j]
        _BERNOULLI.append(-acc / (k + 1))
    return _BERNOULLI[m]


# ----------------------------------------------------------------------
# power series pieces

def _series_li2(z: ComplexBall) -> ComplexBall:
    """Li2 by its defining series; requires |z| bounded away from 1
    (callers stay below 0.81)."""
    wp = mp.prec
    r = z.abs_upper()
    if r >= mpf("0.81"):
        raise PrecisionExhausted("series radius exceeded")
    n_terms = int((wp + 10) * log(2) / -log(float(r))) + 2 if r > 0 else 1
    m = z.mid
    acc = mpc(0)
    zk = mpc(1)
    for k in range(1, n_terms + 1):
        zk *= m
        acc += zk / (k * k)
    tail = _up(r ** (n_terms + 1) / (1 - r))
    slop = mpf(2) ** (-wp + 8) * n_terms
    # |Li2'(z)| = |log(1-z)/z| <= 2.5 on |z| <= 0.81
    rad = _up(tail, slop, mpf("2.5") * z.rad, _ulp(abs(acc)))
    return ComplexBall(acc, rad)


def _crown_li2(z: ComplexBall) -> ComplexBall:
    """Li2 near the unit circle via the log-series
    pi^2/6 + w(1 - log(-w)) - w^2/4 + sum_k zeta(1-2k) w^(2k+1)/(2k+1)!
    with w = Log z; valid for |w| < 2 pi off the real axis."""
    wp = mp.prec
    if abs(z.mid.imag) <= z.rad:
        raise PrecisionExhausted("log-series needs an argument off the real axis")
    w = z.log()
    wa = w.abs_upper()
    q = _up((wa / (2 * mp.pi)) ** 2)
    if q >= mpf("0.5"):
        raise PrecisionExhausted("argument outside the log-series region")
    n_terms = int((wp + 10) * log(2) / -log(float(q))) + 2
    wm = w.mid
    w2 = wm * wm
    acc = mpc(0)
    wk = wm  # w^(2k+1), starting k=1 -> w^3
    fact = 6  # (2k+1)! running value
    for k in range(1, n_terms + 1):
        wk *= w2
        coeff = bernoulli(2 * k) / (-2 * k)
        acc += (mpf(coeff.numerator) / mpf(coeff.denominator)) * wk / fact
        fact *= (2 * k + 2) * (2 * k + 3)
    tail = _up(4 * wa * q ** (n_terms + 1) / (1 - q))
    slop = mpf(2) ** (-wp + 8) * n_terms
    series = ComplexBall(acc, _up(tail, slop, 6 * w.rad))
    pi2_6 = _sq(pi_ball()) * F(1, 6)
    main = ComplexBall(wm, w.rad) * (ComplexBall(mpc(1), 0) - (-w).log())
    quad = ComplexBall(w2, _up(2 * wa * w.rad, _ulp(abs(w2)))) * F(-1, 4)
    return _c(pi2_6) + main + quad + series


def _sq(r: RealBall) -> RealBall:
    return r * r


def _c(r: RealBall) -> ComplexBall:
    return ComplexBall(mpc(r.mid), r.rad)


# ----------------------------------------------------------------------
# dispatch

def _orbit_moduli(z):
    one = mpc(1)
    vals = {}
    vals["z"] = abs(z)
    vals["inv"] = abs(1 / z) if z != 0 else mpf("inf")
    vals["refl"] = abs(one - z)
    vals["refl_inv"] = abs(1 / (one - z)) if z != 1 else mpf("inf")
    vals["inv_refl"] = abs(one - 1 / z) if z != 0 else mpf("inf")
    vals["landen"] = abs(z / (z - one)) if z != 1 else mpf("inf")
    return vals


def _li2_dispatch(z: ComplexBall, depth: int) -> ComplexBall:
    if depth > 6:
        raise PrecisionExhausted("li2 transform recursion exceeded")
    one = ComplexBall(mpc(1), 0)
    # exact-real arguments take the real route (branch cuts on the axis)
    if z.rad == 0 and z.mid.imag == 0:
        x = z.mid.real
        if x >= 1:
            raise PrecisionExhausted("li2 on the cut [1, oo)")
        if x <= -2:
            inner = _li2_dispatch(z.inverse(), depth + 1)
            lg = (-z).log()
            return -inner - _c(_sq(pi_ball()) * F(1, 6)) - lg * lg * F(1, 2)
        if x < mpf("-0.5"):
            # Landen toward (0, 1): Li2(x) = -Li2(x/(x-1)) - log(1-x)^2/2
            w = z / (z - one)
            inner = _li2_dispatch(w, depth + 1)
            lg = (one - z).log()
            return -inner - lg * lg * F(1, 2)
        if x > mpf("0.5"):
            inner = _li2_dispatch(one - z, depth + 1)
            lga = z.log()
            lgb = (one - z).log()
            return _c(_sq(pi_ball()) * F(1, 6)) - lga * lgb - inner
        return _series_li2(z)
    if z.rad > 0 and abs(z.mid.imag) <= z.rad and z.mid.real + z.rad >= 1:
        raise PrecisionExhausted("li2 ball touches the cut [1, oo)")
    mods = _orbit_moduli(z.mid)
    half = mpf("0.5")
    if mods["z"] <= half:
        return _series_li2(z)
    if min(mods.values()) > half:
        return _crown_li2(z)
    if mods["inv"] <= half:
        inner = _li2_dispatch(z.inverse(), depth + 1)
        lg = (-z).log()
        return -inner - _c(_sq(pi_ball()) * F(1, 6)) - lg * lg * F(1, 2)
    if mods["refl"] <= half or mods["refl_inv"] <= half:
        inner = _li2_dispatch(one - z, depth + 1)
        return _c(_sq(pi_ball()) * F(1, 6)) - z.log() * (one - z).log() - inner
    # remaining small member sits under an initial inversion
    inner = _li2_dispatch(z.inverse(), depth + 1)
    lg = (-z).log()
    return -inner - _c(_sq(pi_ball()) * F(1, 6)) - lg * lg * F(1, 2)


def li2_ball(z: ComplexBall, prec_bits: int = 128) -> ComplexBall:
    """Certified enclosure of the principal dilogarithm."""
    if prec_bits < 32:
        raise PrecisionExhausted("precision must be >= 32 bits")
    with mp.workprec(workprec(prec_bits) + 10):
        return _li2_dispatch(z, 0)


# ----------------------------------------------------------------------
# Bloch-Wigner

def bw_D(z: ComplexBall, prec_bits: int = 128) -> RealBall:
    """D(z) = Im Li2(z) + arg(1-z) log|z|, the single-valued dilogarithm.

    Exactly-real inputs (including 0 and 1, where the continuous
    extension vanishes) return an exact zero.
    """
    if prec_bits < 32:
        raise PrecisionExhausted("precision must be >= 32 bits")
    if z.rad == 0 and z.mid.imag == 0:
        return RealBall(0, 0)
    if abs(z.mid.imag) <= z.rad:
        raise PrecisionExhausted(
            "cannot certify D on a ball straddling the real axis")
    with mp.workprec(workprec(prec_bits) + 10):
        li = _li2_dispatch(z, 0)
        one = ComplexBall(mpc(1), 0)
        term = (one - z).arg() * z.log_abs()
        return li.imag() + term


def D_of_element(e, prec_bits: int = 128) -> RealBall:
    """D extended by linearity to a formal pre-Bloch element.

    Terms with sigma-fixed (real-embedded) keys vanish exactly.  The
    c_F part contributes D(x) + D(1-x) at the stored representative
    x = -1, both terms exactly zero.
    """
    total = RealBall(0, 0)
    with mp.workprec(workprec(prec_bits)):
        for z, n in e.terms.items():
            if n == 0 or z.is_sigma_fixed():
                continue
            total = total + RealBall(n, 0) * bw_D(z.embed(prec_bits), prec_bits)
        if e.cf_mult:
            # representative x = -1: D(-1) + D(2), exactly 0 + 0
            total = total + RealBall(0, 0)
    return total


def face_D_identity(config, prec_bits: int = 128) -> RealBall:
    """Enclosure of 2 sum(D(cross-ratios)) - sum(D(face rotation numbers));
    the value must contain 0 for every generic configuration."""
    lhs = RealBall(0, 0)
    with mp.workprec(workprec(prec_bits)):
        for z in config.quadruple():
            lhs = lhs + bw_D(z.embed(prec_bits), prec_bits) * 2
        rhs = RealBall(0, 0)
        for w in config.face_rotations():
            rhs = rhs + bw_D(w.embed(prec_bits), prec_bits)
        return lhs - rhs


def D_of_field_element(z, prec_bits: int = 128) -> RealBall:
    """D at the designated embedding of one field element."""
    if z.is_sigma_fixed():
        return RealBall(0, 0)
    return bw_D(z.embed(prec_bits), prec_bits)
