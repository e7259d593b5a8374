from fractions import Fraction

import pytest

from ayrel.canonical import iso_check
from ayrel.errors import (Collision, PreconditionViolated,
                          SeparatrixHitsSingularity)
from ayrel.family import build_x0, build_xr, circumference
from ayrel.field import NFElem, ONE, alpha_power
from ayrel.geom import g_tilde, rot90
from ayrel.rel import (RelVector, rel_apply, rel_h, rel_h_edgeshift,
                       rel_h_slit)


def test_group_law_on_the_line():
    base = build_xr(NFElem(Fraction(9, 8))).surface
    one_step = rel_h_slit(base, NFElem(Fraction(1, 2)))
    r1 = NFElem(Fraction(1, 5))
    r2 = NFElem(Fraction(3, 10))
    two_steps = rel_h_slit(rel_h_slit(base, r1), r2)
    assert iso_check(one_step, two_steps) is not None


def test_rel_apply_identity_and_area():
    base = build_xr(ONE).surface
    assert rel_apply(base, (0, 0)) is base
    moved = rel_apply(base, RelVector(Fraction(1, 3), 0))
    assert moved.area() == base.area()
    assert iso_check(moved, build_xr(ONE + NFElem(Fraction(1, 3))).surface) \
        is not None


def test_negative_rel_via_involution():
    base = build_xr(NFElem(Fraction(3, 2))).surface
    back = rel_h(base, NFElem(Fraction(-1, 4)))
    assert iso_check(back, build_xr(NFElem(Fraction(5, 4))).surface) \
        is not None


def test_commutation_with_renormalization():
    # g~ Rel_r = Rel_{r/alpha'} g~ with the contracted rel time
    r = NFElem(Fraction(1, 5))
    base = build_xr(NFElem(Fraction(9, 8))).surface
    left = rel_h(base, r).linear_apply(g_tilde())
    right = rel_h(base.linear_apply(g_tilde()), alpha_power(-1) * r)
    assert iso_check(left, right) is not None


def test_vertical_rel_round_trip():
    base = build_xr(NFElem(Fraction(3, 2))).surface
    s = NFElem(Fraction(2, 7))
    there = rel_apply(base, (0, s))
    back = rel_apply(there, (0, -s))
    assert iso_check(back, base) is not None


def test_slit_blocked_by_horizontal_saddle_connection():
    # rotate a periodic surface so its vertical connections turn horizontal
    base = build_xr(NFElem(Fraction(3, 2))).surface
    rotated = base.linear_apply(rot90())
    with pytest.raises(SeparatrixHitsSingularity):
        rel_h_slit(rotated, NFElem(5))
    with pytest.raises(Collision):
        rel_apply(rotated, (NFElem(5), 0))
    # vertical rel is defined for every time on a vertically periodic
    # surface: the twist chart carries it past the slit degeneration
    moved = rel_apply(base, (0, NFElem(5)))
    assert moved.area() == base.area()
    assert moved.stratum_check() == base.stratum_check()


def test_edgeshift_identity_and_round_trip():
    x0 = build_x0().surface
    assert rel_h_edgeshift(x0, 0) is x0
    r = alpha_power(5)
    there = rel_h_edgeshift(x0, r)
    assert there.area() == x0.area()
    back = rel_h_edgeshift(there, -r)
    assert iso_check(back, x0) is not None


def test_edgeshift_matches_slit():
    x0 = build_x0().surface
    r = alpha_power(6)
    via_shift = rel_h_edgeshift(x0, r)
    via_slit = rel_h_slit(x0, r)
    assert iso_check(via_shift, via_slit) is not None
    assert iso_check(via_shift, build_xr(r).surface) is not None


def test_edgeshift_collapse_boundary():
    # the first combinatorial event of the base presentation
    x0 = build_x0().surface
    r = alpha_power(3)
    try:
        moved = rel_h_edgeshift(x0, r)
        assert iso_check(moved, build_xr(r).surface) is not None
    except PreconditionViolated:
        # the fixture presentation flips strictly before alpha^3; the slit
        # route must still land on the model
        moved = rel_h_slit(x0, r)
        assert iso_check(moved, build_xr(r).surface) is not None


def test_trip_from_xa3_to_x1():
    # the two-stage route: edge shifts to a^3, then one slit of a + a^2
    # for a total deformation of a + a^2 + a^3 = 1
    xa3 = build_xr(alpha_power(3)).surface
    slit_len = alpha_power(1) + alpha_power(2)
    moved = rel_h_slit(xa3, slit_len)
    assert iso_check(moved, build_xr(ONE).surface) is not None


def test_rel_apply_unit_from_base():
    x0 = build_x0().surface
    moved = rel_apply(x0, (1, 0))
    assert iso_check(moved, build_xr(ONE).surface) is not None


def test_slit_holonomy_contract_via_chain_transport():
    # transport chains through the surgery's relocation registry: paths
    # whose only black visit is their endpoint re-anchor along the slit and
    # shift by (L, 0) times the boundary coefficient; a white-based
    # absolute cycle keeps its holonomy on the nose.  (Chains that pass
    # through the old cone point mid-course cannot be transported: the
    # surgery splits that point; tables are rebuilt per surface instead.)
    from ayrel.family import _walk_by, window_model
    from ayrel.geom import Vec2
    from ayrel.rel import rel_h_slit_tracked
    s = NFElem(Fraction(9, 8))
    asm, table = window_model(s)
    L = NFElem(Fraction(1, 7))
    out, mb, slits = rel_h_slit_tracked(asm.surface, L)

    def remap(steps):
        return mb.remap_chain(out, mb.resolve_chain(steps))

    for germ in range(3):
        slit_fwd = remap([(t, e, sg) for (t, e, sg) in slits[germ]])
        slit_rev = [(t, e, -sg) for (t, e, sg) in reversed(slit_fwd)]
        # which single-crossing chain anchors at this germ is a
        # combinatorial accident; try each and demand one works per kind
        hit = {"beta": 0, "gamma": 0}
        for (kind, k), steps in table.paths.items():
            if k == 0:
                continue  # composite chains revisit the old black point
            old_hol = asm.surface.holonomy(steps)
            try:
                if kind == "gamma":
                    got = out.holonomy(slit_rev + remap(steps))
                    want = old_hol + Vec2(L, 0)
                else:
                    got = out.holonomy(remap(steps) + slit_fwd)
                    want = old_hol - Vec2(L, 0)
            except Exception:
                continue
            if got == want:
                hit[kind] += 1
        assert hit["beta"] >= 1 and hit["gamma"] >= 1
    # white-based absolute cycle: the right circle of a thin cylinder
    half = circumference(1) * Fraction(1, 2)
    core = _walk_by(asm, 1, "R", half, circumference(1))
    assert out.holonomy(remap(core)) == asm.surface.holonomy(core)
