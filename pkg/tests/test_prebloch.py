from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from crbloch.balls import workprec
from crbloch.catalog import build_fig8_rep1, build_whitehead
from crbloch.crgeom import GeomContext, NormalizedParams, invariants_from_params
from crbloch.dilog import D_of_element
from crbloch.errors import (
    DegenerateArgument,
    FieldMismatch,
    IllegalRelationInMode,
    OutsideFamily,
)
from crbloch.numfield import QQ, gaussian_field, quadratic_imaginary
from crbloch.prebloch import (
    Certificate,
    PreBlochElement,
    RelationInstance,
    beta_config,
    figure_eight_family,
    pairing_identity_check,
    pb_sigma,
    relation_value,
    search_certificate,
    verify_certificate,
)


@pytest.fixture(scope="module")
def W():
    return build_whitehead()


def test_element_invariants(K15):
    with pytest.raises(DegenerateArgument):
        PreBlochElement.generator(K15.zero)
    with pytest.raises(DegenerateArgument):
        PreBlochElement.generator(K15.one)
    e = PreBlochElement(K15, {K15.from_rational(2): 1,
                              K15.from_rational(3): 0})
    assert K15.from_rational(3) not in e.terms
    assert (e - e).is_zero()


def test_beta_config_examples(K15):
    a01 = K15.element([F(-1, 8), F(1, 8)])
    a23 = K15.element([F(-3, 4), F(1, 4)])
    a32 = K15.element([F(1, 2), F(-1, 6)])
    b = beta_config((a01, K15.from_rational(-2), a23, a32))
    assert b.terms[a01] == 1 and b.terms[K15.from_rational(-2)] == 1
    two = K15.from_rational(2)
    assert beta_config((two,) * 4) == PreBlochElement.generator(two, 4)
    fam = figure_eight_family(F(1, 2))
    inv = fam.invariant()
    zeta = fam.field.element([F(1, 2), F(1, 2)])
    assert inv.terms == {zeta: 4, zeta.conj(): 4}


def test_sigma_involution(W, K15):
    from crbloch.simplicial import beta_triangulation
    beta = beta_triangulation(W.triangulation)
    assert pb_sigma(beta) == beta
    assert pb_sigma(pb_sigma(beta)) == beta
    single = PreBlochElement.generator(K15.element([F(1, 3), F(2, 5)]))
    assert pb_sigma(single) != single


def test_relation_values(K15):
    a01 = K15.element([F(-1, 8), F(1, 8)])
    a23 = K15.element([F(-3, 4), F(1, 4)])
    ft = relation_value(RelationInstance("five_term",
                                         (a01, K15.from_rational(F(1, 4)))))
    assert a23.inverse() in ft.terms
    assert (K15.one - a23.conj().inverse()) in ft.terms
    z = K15.element([F(2, 3), F(1, 7)])
    ip = relation_value(RelationInstance("inv_pair", (z,)))
    assert ip.terms == {z: 2, z.inverse(): 2} and ip.cf_mult == 0
    om = relation_value(RelationInstance("one_minus",
                                         (K15.from_rational(F(1, 2)),)))
    assert om.terms == {K15.from_rational(F(1, 2)): 2} and om.cf_mult == -1
    with pytest.raises(DegenerateArgument):
        relation_value(RelationInstance("five_term", (z, z)))
    with pytest.raises(DegenerateArgument):
        relation_value(RelationInstance("square", (K15.from_rational(-1),)))


def test_whitehead_certificate_chain(W):
    from crbloch.simplicial import beta_triangulation
    beta = beta_triangulation(W.triangulation)
    K = W.triangulation.field
    stage1, stage2 = W.stages
    assert verify_certificate(beta, stage1.target, stage1.certificate)
    assert verify_certificate(stage1.target, stage2.target, stage2.certificate)
    assert stage2.target == PreBlochElement.c_constant(K, 2)
    # torsion: 3 beta = 0 through six_c
    tor = W.torsion_stage
    assert verify_certificate(3 * beta, tor.target, tor.certificate)
    # concatenation soundness
    joint = stage1.certificate + stage2.certificate
    assert verify_certificate(beta, stage2.target, joint)
    # strict mode refuses the catalog identities
    with pytest.raises(IllegalRelationInMode):
        verify_certificate(beta, stage1.target, stage1.certificate, "strict")


def test_empty_certificate():
    K = QQ()
    e = PreBlochElement.generator(K.from_rational(2), 3)
    assert verify_certificate(e, e, Certificate([]))
    assert not verify_certificate(e, PreBlochElement.zero(K), Certificate([]))


def test_strict_mode_five_term_only(K15):
    x = K15.element([F(1, 3), F(1, 5)])
    y = K15.element([F(2, 7), F(-1, 4)])
    inst = RelationInstance("five_term", (x, y), 1)
    val = relation_value(inst)
    assert verify_certificate(val, PreBlochElement.zero(K15),
                              Certificate([inst]), "strict")


def test_relation_values_vanish_under_D(factory):
    Qi = gaussian_field()
    with mp.workprec(workprec(128)):
        for _ in range(12):
            x = factory.element(Qi, nonzero=True)
            y = factory.element(Qi, nonzero=True)
            for kind, args in (("five_term", (x, y)), ("inv_pair", (x,)),
                               ("one_minus", (x,)), ("square", (x,)),
                               ("six_c", ())):
                try:
                    val = relation_value(RelationInstance(kind, args), Qi)
                except DegenerateArgument:
                    continue
                d = D_of_element(val, 128)
                assert d.contains_zero() and d.rad < 1e-25, (kind, x, y)


def test_symmetric_configs_land_in_plus_part(factory):
    # weak form: D(sigma(T) - T) ~ 0 for symmetric (z, t, t) configurations
    ctx = factory.ctx
    K = ctx.K
    with mp.workprec(workprec(128)):
        done = 0
        while done < 10:
            z = factory.element(K)
            t = K.from_rational(factory.rational())
            if z.is_zero() or z == 1:
                continue
            try:
                quad = invariants_from_params(NormalizedParams(z, t, t, ctx))
            except Exception:
                continue
            T = beta_config(quad)
            d = D_of_element(pb_sigma(T) - T, 128)
            assert d.contains_zero() and d.rad < 1e-25
            done += 1


def test_pairing_identity_family():
    for beta in (F(1, 2), F(-1, 2), F(1, 8)):
        assert pairing_identity_check(beta)
    with pytest.raises(OutsideFamily):
        pairing_identity_check(F(1, 3))       # 5 - 8/3 not a square
    with pytest.raises(OutsideFamily):
        pairing_identity_check(F(-5, 2))      # alpha^2 = -13 <= 0


def test_family_certificates_close():
    from crbloch.catalog import build_fig8_family
    from crbloch.cli import _map_prebloch
    for beta in (F(1, 2), F(-1, 2), F(1, 8)):
        data = build_fig8_family(beta)
        from crbloch.simplicial import beta_triangulation
        b = beta_triangulation(data.triangulation)
        stage = data.stages[0]
        start = _map_prebloch(b, stage.field, stage.base_gen_image)
        assert verify_certificate(start, stage.target, stage.certificate)


def test_rep_certificates(K7):
    r1 = build_fig8_rep1()
    from crbloch.simplicial import beta_triangulation
    beta1 = beta_triangulation(r1.triangulation)
    st1 = r1.stages[0]
    assert verify_certificate(beta1, st1.target, st1.certificate)
    assert st1.target == PreBlochElement.c_constant(K7, -2)
    assert verify_certificate(3 * beta1, PreBlochElement.zero(K7),
                              r1.torsion_stage.certificate)
    from crbloch.catalog import build_fig8_rep2
    r2 = build_fig8_rep2()
    beta2 = beta_triangulation(r2.triangulation)
    st2 = r2.stages[0]
    assert st2.target.is_zero()
    assert verify_certificate(beta2, st2.target, st2.certificate)


def test_field_mismatch(K15, K7):
    a = PreBlochElement.generator(K15.from_rational(2))
    b = PreBlochElement.generator(K7.from_rational(2))
    with pytest.raises(FieldMismatch):
        verify_certificate(a, b, Certificate([]))


def test_search_certificate(K15):
    half = K15.from_rational(F(1, 2))
    start = PreBlochElement.generator(half, 4)
    end = PreBlochElement.c_constant(K15, 2)
    cert = search_certificate(start, end)
    assert cert is not None and verify_certificate(start, end, cert)
    assert search_certificate(start, start) is not None
    hopeless = PreBlochElement.generator(K15.element([F(1, 9), F(5, 11)]))
    assert search_certificate(hopeless, PreBlochElement.zero(K15)) is None


@settings(max_examples=30, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 3))
def test_certificate_concatenation_property(n1, n2, mult):
    K = quadratic_imaginary(15)
    half = K.from_rational(F(1, 2))
    e0 = PreBlochElement.generator(half, 2 * mult) + \
        PreBlochElement.generator(K.from_rational(2), n1)
    c1 = Certificate([RelationInstance("one_minus", (half,), mult)])
    e1 = e0 - mult * relation_value(RelationInstance("one_minus", (half,)), K)
    c2 = Certificate([RelationInstance("inv_pair", (K.from_rational(2),), n2)])
    e2 = e1 - n2 * relation_value(RelationInstance("inv_pair",
                                                   (K.from_rational(2),)), K)
    assert verify_certificate(e0, e1, c1)
    assert verify_certificate(e1, e2, c2)
    assert verify_certificate(e0, e2, c1 + c2)
