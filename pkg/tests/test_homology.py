import random
from fractions import Fraction

import pytest

from ayrel.errors import GuardExceeded
from ayrel.field import NFElem, alpha_power
from ayrel.geom import Vec2, g_tilde
from ayrel.homology import (RelHomClass, generator_coords,
                            hol_closed_form, phi_push, expand_in_window,
                            window_labels)


def test_basis_units():
    assert RelHomClass.beta(0).coeffs == (1, 0, 0, 0, 0, 0, 0)
    assert RelHomClass.gamma(2).coeffs == (0, 0, 0, 0, 0, 1, 0)


def test_gamma3_relation():
    # beta_0 + gamma_0 = sum of the k=1..3 pairs
    assert RelHomClass.gamma(3).coeffs == (1, 1, -1, -1, -1, -1, -1)
    lhs = RelHomClass.beta(0) + RelHomClass.gamma(0)
    rhs = RelHomClass.zero()
    for i in (1, 2, 3):
        rhs = rhs + RelHomClass.beta(i) + RelHomClass.gamma(i)
    assert lhs == rhs


def test_beta4_from_inductive_rule():
    expect = (RelHomClass.gamma(0) - RelHomClass.beta(2)
              - RelHomClass.gamma(2) - 2 * RelHomClass.gamma(3))
    assert RelHomClass.beta(4) == expect


def test_boundary_coeffs():
    for k in range(-10, 11):
        assert RelHomClass.beta(k).boundary_coeff == -1
        assert RelHomClass.gamma(k).boundary_coeff == 1
        assert RelHomClass.core(k).boundary_coeff == 0


def test_closed_form_examples():
    # beta_3 at r=1 has zero x-part
    b, g = hol_closed_form(3, 1)
    assert b == Vec2(0, alpha_power(3) + alpha_power(5))
    b, g = hol_closed_form(0, 0)
    assert b == Vec2(alpha_power(3), NFElem(1) + alpha_power(2))
    b, g = hol_closed_form(2, 0)
    assert g == Vec2(-alpha_power(1), alpha_power(2) + alpha_power(4))


def test_closed_form_matches_basis_expansion():
    # the recursion and the closed forms agree for far-out indices
    rng = random.Random(5)
    for k in range(-12, 13):
        r = NFElem(Fraction(rng.randint(-4, 4), rng.randint(1, 7)),
                   Fraction(rng.randint(-2, 2), 3), 0)
        direct_b, direct_g = hol_closed_form(k, r)
        via_basis = RelHomClass.beta(k).holonomy(r)
        assert via_basis == direct_b
        via_basis = RelHomClass.gamma(k).holonomy(r)
        assert via_basis == direct_g


def test_eigen_relation():
    # g~ . hol(beta_k, x_r) = hol(beta_{k+1}, x_{r/alpha'}) with the
    # renormalized rel time alpha^(-1) * r... applied as r -> alpha^{-1} r
    g = g_tilde()
    for k in range(-8, 9):
        for r in (NFElem(0), NFElem(Fraction(3, 2)), alpha_power(2)):
            b, ga = hol_closed_form(k, r)
            b2, ga2 = hol_closed_form(k + 1, alpha_power(-1) * r)
            assert g.apply(b) == b2
            assert g.apply(ga) == ga2


def test_phi_push_shift():
    for k in range(-6, 7):
        assert phi_push(RelHomClass.beta(k)) == RelHomClass.beta(k + 1)
        assert phi_push(RelHomClass.gamma(k)) == RelHomClass.gamma(k + 1)
    # linearity example
    assert (phi_push(RelHomClass.beta(0) + RelHomClass.gamma(0))
            == RelHomClass.beta(1) + RelHomClass.gamma(1))


def test_phi_preserves_boundary_coeff():
    rng = random.Random(6)
    for _ in range(50):
        c = RelHomClass([rng.randint(-3, 3) for _ in range(7)])
        assert phi_push(c).boundary_coeff == c.boundary_coeff


def test_guard():
    with pytest.raises(GuardExceeded):
        generator_coords("beta", 99)
    with pytest.raises(GuardExceeded):
        hol_closed_form(70, 0)


def test_window_expansion_round_trip():
    rng = random.Random(7)
    for k in (-3, -1, 0, 2, 5):
        labels = window_labels(k)
        for _ in range(20):
            weights = [rng.randint(-3, 3) for _ in range(7)]
            cls = RelHomClass.zero()
            for w, (kind, kk) in zip(weights, labels):
                gen = (RelHomClass.beta(kk) if kind == "beta"
                       else RelHomClass.gamma(kk))
                cls = cls + w * gen
            assert expand_in_window(cls, k) == weights


def test_dominant_recursion():
    # hol_x(beta_k, x_0) = alpha * hol_x(beta_{k+1}, x_0) for |k| <= 30
    for k in range(-30, 31):
        xk = hol_closed_form(k, 0)[0].x
        xk1 = hol_closed_form(k + 1, 0)[0].x
        assert xk == alpha_power(1) * xk1 * NFElem(1)
        assert xk1 == alpha_power(-1) * xk


def test_hol_class_missing_representative():
    from ayrel.errors import MissingRepresentative
    from ayrel.family import build_xr
    from ayrel.homology import PathTable, hol_class
    ay = build_xr(1)
    empty = PathTable(0, {})
    with pytest.raises(MissingRepresentative):
        hol_class(ay.surface, RelHomClass.beta(0), empty)
