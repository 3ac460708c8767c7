from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from crbloch.balls import conj_ball, disc_overlaps
from crbloch.errors import (
    DivisionByZero,
    FieldMismatch,
    ReducibleError,
    SigmaError,
    UnsupportedField,
    ZeroElement,
)
from crbloch.numfield import (
    NumberField,
    define_field,
    extend_with_sqrt,
    factor_int,
    gaussian_field,
    primes_above,
    quadratic_imaginary,
    valuation,
    valuations,
)

rationals = st.fractions(min_value=-30, max_value=30, max_denominator=12)


def elem(field, coeffs):
    return field.element(coeffs)


# ----------------------------------------------------------------------
# construction

def test_define_catalog_fields(K15, K7):
    assert K15.degree == 2 and K7.degree == 2
    # designated root has positive imaginary part (index 0)
    assert K15.gen_ball(96).mid.imag > 0
    assert K7.gen_ball(96).mid.imag > 0


def test_reducible_rejected():
    with pytest.raises(ReducibleError):
        define_field([-1, 0, 1])          # (x-1)(x+1)
    with pytest.raises(ReducibleError):
        define_field([0, 0, 1])           # x^2 not squarefree
    with pytest.raises(ReducibleError):
        define_field([0, -1, 0, 1], 0, [0, 1, 0])  # x^3 - x = x(x-1)(x+1)
    with pytest.raises(ReducibleError):
        define_field([4, 0, 0, 0, 1], 0, [0, 1, 0, 0])  # x^4+4 splits


def test_biquadratic_quartic_certified(K7):
    # x^4 + 20x^2 + 16 = minpoly of sqrt(-7)+sqrt(-3): no prime has an
    # irreducible reduction, the exact quartic test must decide it
    E, emb = extend_with_sqrt(K7, F(-3))
    assert E.degree == 4
    assert emb(K7.gen) ** 2 == -7
    assert (E.sqrt_of(F(-3)) ** 2) == -3


def test_cubic_irreducible():
    # x^3 - 2 with the real root designated (index 1 in the imaginary-
    # descending ordering), so the identity works as conjugation
    f = define_field([-2, 0, 0, 1], 1, [0, 1, 0])
    assert f.degree == 3
    assert f.gen_ball(96).mid.imag == 0


def test_sigma_validation():
    with pytest.raises(SigmaError):
        NumberField([15, 0, 1], 0, [0, 1])   # identity is not conjugation here
    with pytest.raises(SigmaError):
        NumberField([15, 0, 1], 0, [1, 1])   # not even an automorphism


# ----------------------------------------------------------------------
# arithmetic oracles

def test_whitehead_arithmetic_values(K15):
    a32 = elem(K15, [F(1, 2), F(-1, 6)])
    assert a32 * a32.conj() == F(2, 3)
    a01 = elem(K15, [F(-1, 8), F(1, 8)])
    assert a01 + a01.conj() == F(-1, 4)
    assert K15.from_rational(-2).inverse() == F(-1, 2)
    assert a01.conj() == elem(K15, [F(-1, 8), F(-1, 8)])


def test_division_roundtrip(K15, factory):
    for _ in range(50):
        a = factory.element(K15)
        b = factory.element(K15, nonzero=True)
        assert (a * b) / b == a
    with pytest.raises(DivisionByZero):
        K15.one / K15.zero


def test_field_mismatch(K15, K7):
    with pytest.raises(FieldMismatch):
        K15.one + K7.one


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=2, max_size=2),
       st.lists(rationals, min_size=2, max_size=2))
def test_sigma_is_field_automorphism(c1, c2):
    K = quadratic_imaginary(15)
    a, b = K.element(c1), K.element(c2)
    assert (a + b).conj() == a.conj() + b.conj()
    assert (a * b).conj() == a.conj() * b.conj()
    assert a.conj().conj() == a


def test_commutativity_and_zero(K15, factory):
    for _ in range(20):
        a = factory.element(K15)
        b = factory.element(K15)
        assert (a * b - b * a).is_zero()


# ----------------------------------------------------------------------
# embeddings

def test_embed_sqrt15(K15):
    ball = K15.gen.embed(128)
    with mp.workprec(300):
        target = mpmath.mpc(0, mpmath.sqrt(15))
    assert ball.contains(target)
    assert ball.rad < mpmath.mpf(2) ** -100


def test_embed_zero_exact(K15):
    assert K15.zero.embed(64).is_exact_zero()


def test_embed_conjugation(K15, factory):
    for _ in range(10):
        a = factory.element(K15)
        assert disc_overlaps(a.conj().embed(96), conj_ball(a.embed(96)))


def test_embed_respects_arithmetic(K15, factory):
    for _ in range(10):
        a, b = factory.element(K15), factory.element(K15)
        lhs = (a * b).embed(96)
        rhs = a.embed(96) * b.embed(96)
        assert disc_overlaps(lhs, rhs)


def test_embed_min_precision(K15):
    from crbloch.errors import PrecisionExhausted
    with pytest.raises(PrecisionExhausted):
        K15.gen.embed(8)


# ----------------------------------------------------------------------
# valuations

def test_valuation_examples(QQf, K15):
    labs = primes_above(K15, 2)
    assert [str(l) for l in labs] == ["(2, w-0)", "(2, w-1)"]
    assert valuations(K15.from_rational(4), labs) == [2, 2]
    assert valuations(K15.from_rational(-1), labs) == [0, 0]
    assert valuation(QQf.from_rational(F(1, 2)), primes_above(QQf, 2)[0]) == -1
    with pytest.raises(ZeroElement):
        valuation(K15.zero, labs[0])


def test_valuation_splitting_classification(K15, K7):
    assert {l.kind for l in primes_above(K15, 3)} == {"ramified"}
    assert {l.kind for l in primes_above(K15, 5)} == {"ramified"}
    assert {l.kind for l in primes_above(K15, 7)} == {"inert"}
    assert {l.kind for l in primes_above(K7, 2)} == {"split"}
    assert {l.kind for l in primes_above(K7, 5)} == {"inert"}


def test_valuation_additivity_100_pairs(K15, factory):
    labs = [l for p in (2, 3, 5, 7) for l in primes_above(K15, p)]
    done = 0
    while done < 100:
        a = factory.element(K15)
        b = factory.element(K15)
        if a.is_zero() or b.is_zero():
            continue
        va, vb, vab = (valuations(x, labs) for x in (a, b, a * b))
        assert vab == [x + y for x, y in zip(va, vb)]
        done += 1


def test_valuation_unsupported_fields():
    real_quad = define_field([-2, 0, 1], 0, [0, 1])  # Q(sqrt 2), sigma = id
    with pytest.raises(UnsupportedField):
        primes_above(real_quad, 2)
    quartic, _ = extend_with_sqrt(quadratic_imaginary(7), F(-3))
    with pytest.raises(UnsupportedField):
        primes_above(quartic, 2)


def test_factor_int():
    assert factor_int(2 ** 5 * 3 * 49) == {2: 5, 3: 1, 7: 2}
    assert factor_int(-15) == {3: 1, 5: 1}
    with pytest.raises(ZeroElement):
        factor_int(0)


# ----------------------------------------------------------------------
# extensions

def test_extension_tower(K7):
    E, emb = extend_with_sqrt(K7, F(-3))
    rho = E.sqrt_of(F(-3))
    zeta = (E.one + rho) / E.from_rational(2)
    assert zeta ** 6 == 1 and zeta ** 3 == -1 and zeta ** 2 != 1
    # embedding compatibility
    assert disc_overlaps(emb(K7.gen).embed(96), K7.gen.embed(96))
    # sigma commutes with the inclusion
    a = K7.element([F(2, 3), F(-1, 5)])
    assert emb(a.conj()) == emb(a).conj()


def test_sqrt_already_present():
    K3 = quadratic_imaginary(3)
    E, emb = extend_with_sqrt(K3, F(-3))
    assert E is K3 and emb(K3.gen) == K3.gen


def test_roots_of_unity_orders(QQf, K15, Qi):
    assert QQf.roots_of_unity()[1] == 2
    assert K15.roots_of_unity()[1] == 2
    assert Qi.roots_of_unity()[1] == 4
    assert quadratic_imaginary(3).roots_of_unity()[1] == 6
