import random
from fractions import Fraction

import pytest

from ayrel.field import (ALPHA, ONE, ZERO, IsolatingInterval, NFElem,
                         ParseError, alpha_power, nf_embed, nf_inv, nf_mul,
                         nf_parse, nf_sign)


def poly_mul_reduce(a, b):
    """Independent oracle: multiply in Q[t], reduce mod t^3 + t^2 + t - 1."""
    coeffs = [Fraction(0)] * 5
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            coeffs[i + j] += Fraction(x) * Fraction(y)
    # long division: t^3 -> 1 - t - t^2
    for deg in range(4, 2, -1):
        c = coeffs[deg]
        if c:
            coeffs[deg] = Fraction(0)
            coeffs[deg - 3] += c
            coeffs[deg - 2] -= c
            coeffs[deg - 1] -= c
    return tuple(coeffs[:3])


def rand_elem(rng, nonzero=False):
    while True:
        v = NFElem(Fraction(rng.randint(-20, 20), rng.randint(1, 12)),
                   Fraction(rng.randint(-20, 20), rng.randint(1, 12)),
                   Fraction(rng.randint(-20, 20), rng.randint(1, 12)))
        if not nonzero or not v.is_zero():
            return v


def test_defining_relation():
    assert ALPHA + ALPHA**2 + ALPHA**3 == ONE


def test_mul_basis_cases():
    # alpha * alpha^2 = alpha^3 = 1 - alpha - alpha^2
    assert ALPHA * ALPHA**2 == NFElem(1, -1, -1)
    # alpha * (1 + alpha + alpha^2) = 1
    assert ALPHA * NFElem(1, 1, 1) == ONE
    # alpha * alpha^3 = 2*alpha - 1, by the repeated-reduction oracle
    assert poly_mul_reduce((0, 1, 0), (1, -1, -1)) == (-1, 2, 0)
    assert ALPHA * NFElem(1, -1, -1) == NFElem(-1, 2, 0)


def test_mul_against_poly_oracle():
    rng = random.Random(7)
    for _ in range(300):
        a = rand_elem(rng)
        b = rand_elem(rng)
        expect = poly_mul_reduce(a.as_fractions(), b.as_fractions())
        assert (a * b).as_fractions() == expect


def test_field_axioms_random():
    rng = random.Random(1)
    for _ in range(1000):
        a = rand_elem(rng)
        b = rand_elem(rng)
        c = rand_elem(rng)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_inverse_round_trip():
    assert nf_inv(ONE) == ONE
    assert nf_inv(ALPHA) == NFElem(1, 1, 1)
    v = 2 * ALPHA * (ONE + ALPHA**2)
    assert nf_mul(v, nf_inv(v)) == ONE
    rng = random.Random(2)
    for _ in range(1000):
        a = rand_elem(rng, nonzero=True)
        assert a * nf_inv(a) == ONE


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        nf_inv(ZERO)


def test_power_identities():
    for k in range(-60, 61):
        assert alpha_power(k) * alpha_power(-k) == ONE
        assert (alpha_power(k) + alpha_power(k + 1) + alpha_power(k + 2)
                == alpha_power(k - 1))


def test_sign_examples():
    assert nf_sign(ZERO) == 0
    # 2*alpha - 1 > 0 since alpha ~ 0.5437
    assert nf_sign(NFElem(-1, 2, 0)) == 1
    # 1 - alpha - alpha^2 = alpha^3 > 0
    assert nf_sign(NFElem(1, -1, -1)) == 1
    assert nf_sign(-ALPHA) == -1


def test_sign_consistent_with_embed():
    rng = random.Random(3)
    for _ in range(200):
        a = rand_elem(rng)
        lo, hi = nf_embed(a, Fraction(1, 10**12))
        s = nf_sign(a)
        if lo > 0:
            assert s == 1
        elif hi < 0:
            assert s == -1
        else:
            assert s == 0 or (hi - lo) > 0


def test_sign_tiny_difference():
    # alpha^40 vs alpha^40 scaled by (1 + 1/10^30): float screen must not lie
    tiny = alpha_power(40)
    a = tiny * NFElem(Fraction(10**30 + 1, 10**30))
    assert (a - tiny).sign() == 1


def test_embed_examples():
    # alpha ~ 0.5437 (to four places); the interval must sit within 1e-4 of it
    lo, hi = nf_embed(ALPHA, Fraction(1, 10**4))
    assert hi - lo < Fraction(1, 10**4)
    assert abs(Fraction((lo + hi) / 2) - Fraction(5437, 10000)) < Fraction(1, 10**4)
    assert nf_embed(ZERO, Fraction(1, 100)) == (0, 0)
    # alpha^-1 ~ 1.8393 is the reciprocal root
    lo, hi = nf_embed(nf_inv(ALPHA), Fraction(1, 10**4))
    assert abs(Fraction((lo + hi) / 2) - Fraction(18393, 10000)) < Fraction(1, 10**4)


def test_isolating_interval():
    iv = IsolatingInterval(Fraction(1, 2), Fraction(5, 9))
    narrow = iv.refined(Fraction(1, 10**6))
    assert narrow.width() < Fraction(1, 10**6)
    assert narrow.lo < narrow.hi
    # p changes sign across the interval
    p = lambda t: t**3 + t**2 + t - 1
    assert p(Fraction(narrow.lo)) < 0 < p(Fraction(narrow.hi))


def test_parse_examples():
    assert nf_parse("1 - a") == NFElem(1, -1, 0)
    assert nf_parse("2*a + 2*a^2") == NFElem(0, 2, 2)
    assert nf_parse("a^3") == NFElem(1, -1, -1)
    assert nf_parse("3/2") == NFElem(Fraction(3, 2))
    assert nf_parse("-a + 1/4*a^2") == NFElem(0, -1, Fraction(1, 4))
    assert nf_parse("  a ") == ALPHA
    assert nf_parse("0") == ZERO


def test_parse_round_trips_str():
    rng = random.Random(4)
    for _ in range(100):
        a = rand_elem(rng)
        assert nf_parse(str(a)) == a


def test_parse_errors_carry_position():
    for bad in ["", "1 +", "a^", "b", "1//2", "2**a", "1 2"]:
        with pytest.raises(ParseError) as err:
            nf_parse(bad)
        assert err.value.pos >= 0


def test_json_round_trip():
    v = NFElem(Fraction(-3, 7), 2, Fraction(5, 11))
    assert NFElem.from_json(v.to_json()) == v
    assert v.to_json() == {"c0": "-3/7", "c1": "2", "c2": "5/11"}


def test_order_operators():
    assert ALPHA < ONE
    assert ALPHA > ZERO
    assert alpha_power(-1) > ONE
    assert abs(-ALPHA) == ALPHA
    assert max(ALPHA, ALPHA**2) == ALPHA
