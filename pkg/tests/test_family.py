import random
from fractions import Fraction

import pytest

from ayrel.canonical import iso_check
from ayrel.errors import PreconditionViolated
from ayrel.family import (build_x0, build_xr, circumference,
                          derive_x0_surface, width_in_window, window_of)
from ayrel.field import NFElem, ONE, ZERO, alpha_power
from ayrel.geom import Vec2, g_tilde, minus_identity
from ayrel.homology import ChainComplex, RelHomClass, hol_closed_form


def sample_r(rng, lo=None, hi=None):
    """Random field element in the window (lo, hi), mildly irrational."""
    lo = NFElem.coerce(lo if lo is not None else 0)
    hi = NFElem.coerce(hi if hi is not None else alpha_power(-4))
    for _ in range(200):
        r = NFElem(Fraction(rng.randint(0, 24), rng.randint(1, 12)),
                   Fraction(rng.randint(-3, 3), rng.randint(1, 6)),
                   Fraction(rng.randint(-3, 3), rng.randint(1, 6)))
        if (r - lo).sign() > 0 and (r - hi).sign() < 0:
            return r
    raise AssertionError("sampling failed")


def test_window_of():
    assert window_of(ONE) == (0, ONE)
    k, s = window_of(NFElem(Fraction(3, 2)))
    assert k == 0 and s == NFElem(Fraction(3, 2))
    k, s = window_of(alpha_power(-1))
    assert k == 1 and s == ONE
    k, s = window_of(alpha_power(3))
    assert k == -3 and s == ONE
    with pytest.raises(PreconditionViolated):
        window_of(ZERO)


def test_widths_match_lemma_cases():
    # at s=1 the two branches agree: alpha^-1 - 1 = 1 - alpha^3
    assert width_in_window(0, 1) == alpha_power(-1) - 1
    assert width_in_window(1, 1) == ONE - alpha_power(2)
    assert width_in_window(2, 1) == ONE - alpha_power(1)
    assert width_in_window(3, 1) == ZERO


def test_x0_fixture_valid():
    x0 = build_x0()
    s = x0.surface
    assert s.stratum_check() == (3, (2, 2))
    for idx in s.singular_classes():
        assert s.cone_angle(idx) == 6
    assert s.area() == NFElem(-4, 16, -4)
    assert x0.verify_closed_forms() is None
    cc = ChainComplex(s)
    assert cc.holonomy_module_rank() == 6


def test_x0_fixture_matches_derivation():
    fresh = derive_x0_surface()
    assert iso_check(fresh, build_x0().surface) is not None


def test_basis_paths_are_a_homology_basis_on_x0():
    x0 = build_x0()
    cc = ChainComplex(x0.surface)
    vecs = [cc.path_to_chain(x0.table.paths[lab])
            for lab in (("beta", 0), ("gamma", 0), ("beta", 1),
                        ("gamma", 1), ("beta", 2), ("gamma", 2),
                        ("beta", 3))]
    # each vector decomposes over the family with a unit coefficient
    for i, v in enumerate(vecs):
        coeffs = cc.decompose(v, vecs)
        assert coeffs is not None
        expect = [0] * 7
        expect[i] = 1
        assert coeffs == expect
    # the dependent generator satisfies the basis relation on the nose
    g3 = cc.path_to_chain(x0.table.paths[("gamma", 3)])
    assert cc.decompose(g3, vecs) == [1, 1, -1, -1, -1, -1, -1]


def test_closed_forms_random_sample():
    rng = random.Random(11)
    for _ in range(25):
        r = sample_r(rng)
        ay = build_xr(r)
        assert ay.verify_closed_forms() is None


def test_closed_forms_negative_and_deep_windows():
    for r in (NFElem(Fraction(-3, 2)), NFElem(Fraction(-1, 9)),
              alpha_power(5) * NFElem(Fraction(7, 5)),
              alpha_power(-5) * NFElem(Fraction(6, 5))):
        ay = build_xr(r)
        assert ay.verify_closed_forms() is None
        assert ay.surface.area() == NFElem(-4, 16, -4)


def test_hol_class_via_table():
    ay = build_xr(NFElem(Fraction(3, 2)))
    got = ay.hol_class(RelHomClass.beta(0) + RelHomClass.gamma(0))
    assert got == Vec2(ZERO, circumference(0))
    # a far-out class still evaluates through the window expansion
    got = ay.hol_class(RelHomClass.beta(-5))
    b, _ = hol_closed_form(-5, NFElem(Fraction(3, 2)))
    assert got == b


def test_renormalization_and_hyperelliptic():
    x1 = build_xr(ONE)
    xinv = build_xr(alpha_power(-1))
    moved = x1.surface.linear_apply(g_tilde())
    assert iso_check(moved, xinv.surface) is not None
    x0 = build_x0()
    assert iso_check(x0.surface.linear_apply(g_tilde()),
                     x0.surface) is not None
    r = NFElem(Fraction(7, 6))
    assert iso_check(build_xr(r).surface.linear_apply(minus_identity()),
                     build_xr(-r).surface) is not None


def test_non_periodicity_of_the_trajectory():
    # x_r is never isomorphic to x_0 for r > 0
    rng = random.Random(3)
    for _ in range(3):
        r = sample_r(rng, 0, alpha_power(-1))
        assert iso_check(build_xr(r).surface, build_x0().surface) is None


def test_route_consistency():
    # surgery from x_1 agrees with the assembled window model
    from ayrel.rel import rel_h_slit
    x1 = build_xr(ONE)
    for target in (Fraction(5, 4), Fraction(8, 5)):
        moved = rel_h_slit(x1.surface, NFElem(target) - ONE)
        model = build_xr(NFElem(target))
        assert iso_check(moved, model.surface) is not None


def test_verify_divergence_values():
    from ayrel.family import verify_divergence
    rows = verify_divergence(6)
    assert [row["k"] for row in rows] == list(range(1, 7))
    for row in rows:
        assert row["max_circumference"] == circumference(row["k"])
    for prev, cur in zip(rows, rows[1:]):
        assert cur["max_circumference"] == \
            prev["max_circumference"] * alpha_power(1)


def test_remark_pair_is_symmetric():
    x1 = build_xr(ONE)
    xinv = build_xr(alpha_power(-1))
    moved = x1.surface.linear_apply(g_tilde())
    assert iso_check(moved, xinv.surface) is not None
    assert iso_check(xinv.surface, moved) is not None
    assert x1.surface.stratum_check() == (3, (2, 2))


def test_core_holonomy_at_one():
    x1 = build_xr(ONE)
    got = x1.hol_class(RelHomClass.core(0))
    assert got == Vec2(ZERO, NFElem(2, 0, 2))


def test_minus_one_is_flipped_x1():
    xm1 = build_xr(-ONE)
    flipped = build_xr(ONE).surface.linear_apply(minus_identity())
    assert iso_check(xm1.surface, flipped) is not None
