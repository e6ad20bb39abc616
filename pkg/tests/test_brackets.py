"""Bracket evaluations and the exhaustive identity drivers."""

from fractions import Fraction

import pytest

from jsalg.brackets import (
    BracketSpec,
    DerivationD,
    bracket,
    check_gen_leibniz,
    check_jacobi,
    check_kmc,
    d_modified,
    gauge_twist,
    mul_by_inverse,
)
from jsalg.superpoly import SuperPoly, even_var, monomials, mul, odd_var


def xiv(m, n, j):
    return SuperPoly.variable(m, n, odd_var(j))


def xv(m, n, i):
    return SuperPoly.variable(m, n, even_var(i))


def test_pairing_on_generators():
    spec = BracketSpec.h_type(1, 0)
    p, q = xv(2, 0, 0), xv(2, 0, 1)
    assert bracket(spec, p, q) == SuperPoly.one(2, 0)
    assert bracket(spec, q, p) == -SuperPoly.one(2, 0)


def test_contact_bracket_on_constants():
    spec = BracketSpec.k_type(0, 3)
    one = SuperPoly.one(1, 3)
    g = mul(xv(1, 3, 0), xiv(1, 3, 0))
    # {1, g} = 2 dg/dt
    assert bracket(spec, one, g) == xiv(1, 3, 0).scale(2)


def test_contact_bracket_t_against_generator():
    spec = BracketSpec.k_type(0, 3)
    t = xv(1, 3, 0)
    assert bracket(spec, t, xiv(1, 3, 0)) == -xiv(1, 3, 0)


def test_h_bracket_lowers_even_degree_by_two():
    # on even monomials of degree <= 1 the value is a scalar
    spec = BracketSpec.h_type(2, 0)
    monos = monomials(4, 0, 1)
    for m1 in monos:
        for m2 in monos:
            val = bracket(
                spec,
                SuperPoly(4, 0, {m1: Fraction(1)}),
                SuperPoly(4, 0, {m2: Fraction(1)}),
            )
            assert val.is_zero() or val.degree() == 0


def test_bracket_parity_preserving():
    spec = BracketSpec.h_type(1, 2)
    monos = monomials(2, 2, 2)
    for m1 in monos:
        for m2 in monos:
            f = SuperPoly(2, 2, {m1: Fraction(1)})
            g = SuperPoly(2, 2, {m2: Fraction(1)})
            v = bracket(spec, f, g)
            if not v.is_zero():
                assert v.parity() == (f.parity() + g.parity()) % 2


def test_signature_mismatch_rejected():
    spec = BracketSpec.h_type(1, 0)
    with pytest.raises(ValueError):
        bracket(spec, SuperPoly.one(1, 0), SuperPoly.one(1, 0))


def test_superskew_recognition():
    assert BracketSpec.h_type(1, 3).is_superskew()
    assert BracketSpec.k_type(1, 2).is_superskew()
    bad = BracketSpec.custom(2, 0, [[0, 1], [1, 0]])
    assert not bad.is_superskew()


def test_d_modified_poisson_case_is_plain_bracket():
    spec = BracketSpec.h_type(1, 1)
    D0 = DerivationD.zero(2, 1)
    monos = monomials(2, 1, 2)
    for m1 in monos:
        for m2 in monos:
            f = SuperPoly(2, 1, {m1: Fraction(1)})
            g = SuperPoly(2, 1, {m2: Fraction(1)})
            assert d_modified(spec, D0, f, g) == bracket(spec, f, g)


def test_d_modified_contact_constant():
    # {1, g}_D = dg/dt
    spec = BracketSpec.k_type(0, 2)
    D = DerivationD.multiple_of_dt(1, 2)
    one = SuperPoly.one(1, 2)
    g = mul(xv(1, 2, 0), xv(1, 2, 0))
    assert d_modified(spec, D, one, g) == xv(1, 2, 0).scale(2)
    assert d_modified(spec, D, one, one).is_zero()


def test_check_jacobi_passes_builtin():
    assert check_jacobi(BracketSpec.h_type(1, 2), 2).passed
    assert check_jacobi(BracketSpec.k_type(0, 3), 2).passed


def test_check_jacobi_negative_control():
    bad = BracketSpec.custom(2, 0, [[0, 1], [1, 0]])
    r = check_jacobi(bad, 2)
    assert not r.passed
    assert r.counterexample["identity"] == "antisymmetry"


def test_gen_leibniz_h_and_k():
    spec = BracketSpec.h_type(1, 1)
    assert check_gen_leibniz(spec, DerivationD.zero(2, 1), 2).passed
    speck = BracketSpec.k_type(0, 2)
    assert check_gen_leibniz(speck, DerivationD.multiple_of_dt(1, 2), 2).passed
    # D = 0 on the contact bracket must fail
    assert not check_gen_leibniz(speck, DerivationD.zero(1, 2), 2).passed


def test_kmc_identities():
    speck = BracketSpec.k_type(0, 2)
    assert check_kmc(speck, DerivationD.multiple_of_dt(1, 2), 2).passed
    # trivially-modified bracket degenerates to plain Leibniz facts
    spech = BracketSpec.h_type(1, 0)
    assert check_kmc(spech, DerivationD.zero(2, 0), 3).passed
    # corrupted derivation (d/dt instead of 2 d/dt) must fail
    r = check_kmc(speck, DerivationD.multiple_of_dt(1, 2, c=1), 2)
    assert not r.passed


def test_gauge_identity_element_is_noop():
    spec = BracketSpec.h_type(1, 0)
    phi = SuperPoly.one(2, 0)
    tw = gauge_twist(spec, phi)
    monos = monomials(2, 0, 3)
    for m1 in monos:
        for m2 in monos:
            f = SuperPoly(2, 0, {m1: Fraction(1)})
            g = SuperPoly(2, 0, {m2: Fraction(1)})
            assert bracket(tw, f, g, budget=8) == bracket(spec, f, g)


def test_gauge_twist_preserves_identities():
    spec = BracketSpec.h_type(1, 0)
    phi = SuperPoly.one(2, 0) + xv(2, 0, 0)
    tw = gauge_twist(spec, phi)
    assert check_jacobi(tw, 2).passed
    assert check_gen_leibniz(tw, tw.derivation(), 2).passed


def test_gauge_derivation_of_identity_twist():
    # for phi = 1 the twisted derivation equals the original on generators
    speck = BracketSpec.k_type(0, 1)
    tw = gauge_twist(speck, SuperPoly.one(1, 1))
    D = speck.derivation()
    Dp = tw.derivation()
    for v in (even_var(0), odd_var(0)):
        z = SuperPoly.variable(1, 1, v)
        assert D.apply(z) == Dp.apply(z)


def test_gauge_requires_even_invertible():
    spec = BracketSpec.h_type(0, 2)
    with pytest.raises(ValueError):
        gauge_twist(spec, xiv(0, 2, 0))
    with pytest.raises(ValueError):
        gauge_twist(spec, mul(xiv(0, 2, 0), xiv(0, 2, 1)))  # zero constant term


def test_gauge_preserves_failure_verdict():
    bad = BracketSpec.custom(2, 0, [[0, 1], [1, 0]])
    phi = SuperPoly.one(2, 0) + xv(2, 0, 0)
    tw = gauge_twist(bad, phi)
    assert not check_jacobi(bad, 2).passed
    assert not check_jacobi(tw, 2).passed


def test_series_inverse():
    phi = SuperPoly.one(1, 0) + xv(1, 0, 0)
    one = SuperPoly.one(1, 0)
    inv = mul_by_inverse(phi, one, 4)
    assert mul(phi, inv).truncate(4) == one


def test_k_type_requires_time_slot():
    with pytest.raises(ValueError):
        # custom contact spec over a signature without even variables
        BracketSpec.custom(0, 2, [[Fraction(-1), 0], [0, Fraction(-1)]],
                           has_time=True)


def test_derivation_leibniz_against_product():
    D = DerivationD.multiple_of_dt(1, 2)
    monos = monomials(1, 2, 2)
    for m1 in monos:
        for m2 in monos:
            f = SuperPoly(1, 2, {m1: Fraction(1)})
            g = SuperPoly(1, 2, {m2: Fraction(1)})
            assert D.apply(mul(f, g)) == mul(D.apply(f), g) + mul(f, D.apply(g))
