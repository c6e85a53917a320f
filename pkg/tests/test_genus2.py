import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superspecial.classnum import table_class_numbers
from superspecial.ellcurve import LegendreCurve, is_supersingular_oracle
from superspecial.ffield import FieldError, frobenius, is_square, lift, make_field, primes_below
from superspecial.genus2 import (
    Genus2Curve,
    lambda_coordinates,
    lambda_to_pair,
    is_superspecial,
    morphism_check,
    morphism_image,
    morphism_targets,
    psi,
    sample_points,
    sigma_set,
    superspecial_mask,
    theorem_a_predict,
)

PRIMES = [int(p) for p in primes_below(2000) if p >= 5]


def lam_in_field(p):
    return st.integers(2, p - 2).map(make_field(p))


def test_genus2_curve_rejects_degenerate():
    K = make_field(7)
    for lam in (0, 1, -1):
        with pytest.raises(FieldError):
            Genus2Curve(K(lam))
        with pytest.raises(FieldError):
            Genus2Curve(lam)


def test_genus2_reduce():
    C = Genus2Curve(Fraction(3, 5))
    assert C.reduce(5) is None
    assert C.reduce(7).lam == make_field(7)(3) / 5
    assert Genus2Curve(6).reduce(5) is None  # 6 = 1 mod 5
    assert Genus2Curve(4).reduce(5) is None  # 4 = -1 mod 5
    assert Genus2Curve(2).reduce(11).lam == 2


def test_genus2_rhs_roots():
    K = make_field(13)
    C = Genus2Curve(K(5))
    for r in (K(0), K(1), K(-1), K(5), 1 / K(5)):
        assert C.rhs(r) == 0


@pytest.mark.parametrize("p", [5, 7, 11, 13, 29])
def test_pair_invariants_exhaustive(p):
    K = make_field(p)
    for s in range(2, p - 1):
        pair = lambda_to_pair(K(s))
        assert pair.Lam * pair.Lam_prime == 1
        assert pair.root * pair.root == lift(K(s * s - 1), pair.root.field)
        assert pair.in_base_field == is_square(K(s * s - 1))
        if not pair.in_base_field:
            assert frobenius(pair.Lam) == pair.Lam_prime
            assert pair.Lam ** (p + 1) == 1


def test_pair_p7_lam2():
    pair = lambda_to_pair(make_field(7)(2))
    assert not pair.in_base_field
    assert not pair.Lam.in_base_field()
    assert pair.Lam**8 == 1


@given(st.sampled_from([11, 13, 19, 37]).flatmap(lam_in_field))
def test_negation_swaps_pair(lam):
    a, b = lambda_to_pair(lam), lambda_to_pair(-lam)
    assert (b.Lam, b.Lam_prime) == (a.Lam_prime, a.Lam)


def test_lambda_to_pair_rejects():
    K = make_field(11)
    for s in (0, 1, -1):
        with pytest.raises(FieldError):
            lambda_to_pair(K(s))
    with pytest.raises(FieldError):
        lambda_to_pair(make_field(11, 2)(3))


@pytest.mark.parametrize("p", [5, 7, 11, 13, 101, 103])
def test_lambda_coordinates_match_scalar(p):
    lam = np.arange(2, p - 1)
    re, im, split = lambda_coordinates(p, lam)
    K2 = make_field(p, 2)
    for i, s in enumerate(lam.tolist()):
        pair = lambda_to_pair(make_field(p)(s))
        assert lift(pair.Lam, K2) == K2((int(re[i]), int(im[i])))
        assert bool(split[i]) == pair.in_base_field


def test_is_superspecial_examples():
    assert is_superspecial(make_field(5)(2))
    assert not is_superspecial(make_field(7)(2))
    K = make_field(11)
    assert sum(is_superspecial(K(s)) for s in range(2, 10)) == 4


def supersingular_by_count(s):
    # #E(F_q) = q + 1 - a with a = 0 mod p exactly for supersingular E
    K = s.field
    total = K.q + 1
    for x in K.elements():
        fx = x * (x - 1) * (x - s)
        if not fx.is_zero():
            total += 1 if is_square(fx) else -1
    return (K.q + 1 - total) % K.p == 0


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_is_superspecial_against_point_counts(p):
    K = make_field(p)
    for s in range(2, p - 1):
        pair = lambda_to_pair(K(s))
        expected = supersingular_by_count(pair.Lam)
        assert expected == supersingular_by_count(pair.Lam_prime)
        if pair.in_base_field:
            assert expected == is_supersingular_oracle(LegendreCurve(pair.Lam))
        assert is_superspecial(K(s), verify=True) == expected


def test_psi_examples(reference_table):
    assert psi(5) == 2 and psi(13) == 2 and psi(29) == 6
    assert psi(43) == 4 and psi(47) == 8
    for row in reference_table:
        assert psi(row["p"]) == row["psi"]


def test_sigma_5():
    assert sigma_set(5) == (2, 3)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47])
def test_mask_matches_scalar_route(p):
    K = make_field(p)
    scalar = [s for s in range(2, p - 1) if is_superspecial(K(s))]
    assert list(sigma_set(p)) == scalar
    assert list(sigma_set(p, "hasse")) == scalar


def test_hasse_and_deuring_routes_agree():
    for p in PRIMES:
        assert np.array_equal(superspecial_mask(p, "deuring"), superspecial_mask(p, "hasse")), p


def test_unknown_method():
    with pytest.raises(ValueError):
        superspecial_mask(11, "magic")


def test_sigma_closed_under_negation_and_psi_even():
    for p in PRIMES[:150]:
        sigma = set(sigma_set(p))
        assert {p - s for s in sigma} == sigma
        assert psi(p) % 2 == 0
        assert not sigma & {0, 1, p - 1}


def test_lambda_squared_minus_one_nonsquare_for_p_1_mod_4():
    for p in (q for q in PRIMES if q < 1000 and q % 4 == 1):
        K = make_field(p)
        for s in sigma_set(p):
            assert not is_square(K(s * s - 1)), (p, s)


def test_theorem_a_predict_examples():
    assert theorem_a_predict(41, 0, 8) == 8
    assert theorem_a_predict(19, 1, 3) == 4
    assert theorem_a_predict(7, 1, 1) == 0


def test_theorem_a_small_primes():
    for p in PRIMES[:60]:
        assert psi(p) == theorem_a_predict(p, *table_class_numbers(p)), p


# the degree-2 maps


def test_morphism_special_points():
    K = make_field(11)
    lam = K(3)
    K4 = make_field(11, 4)
    zero = (K4(0), K4(0))
    for which in (1, 2):
        assert morphism_image(lam, zero, which) == zero
        assert morphism_check(lam, zero, which)
        assert morphism_image(lam, (lift(lam, K4), K4(0)), which) is None


def test_morphism_rejects():
    K = make_field(7)
    K4 = make_field(7, 4)
    with pytest.raises(FieldError):
        morphism_check(K(3), (K4(2), K4(1)), 1)  # not on the curve
    with pytest.raises(ValueError):
        morphism_image(K(3), (K4(0), K4(0)), 3)
    with pytest.raises(FieldError):
        morphism_image(K(3), (make_field(7, 2)(0), make_field(7, 2)(0)), 1)


@pytest.mark.parametrize("p", [7, 11, 19])
def test_morphism_all_lambda_both_maps_all_signs(p):
    rng = random.Random(p)
    K = make_field(p)
    for s in range(2, p - 1):
        lam = K(s)
        for P in sample_points(lam, 4, rng):
            for which in (1, 2):
                for signs in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                    assert morphism_check(lam, P, which, *signs)
                    target = "Lam" if which == 1 else "Lam_prime"
                    assert target in morphism_targets(lam, P, which, *signs)
