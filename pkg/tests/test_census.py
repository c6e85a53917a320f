import json

import pytest

from superspecial.census import (
    CENSUS_HEADER,
    SUITES,
    Report,
    build_sets,
    census_primes,
    census_record,
    inversion_class,
    inversion_quotient,
    lemma25_count,
    lemma25_count_by_points,
    negation_quotient,
    nu,
    phi_map,
    psi_map,
    run_suite,
    structural_props,
    suite_applies,
    verify_lemma25,
    verify_maps,
    verify_section3,
    verify_theorem_a,
)
from superspecial.classnum import class_number
from superspecial.ffield import FieldError, frobenius, is_square, make_field
from superspecial.genus2 import is_superspecial, lambda_to_pair

PRIMES_500 = census_primes(499)


def test_build_sets_examples():
    s11 = build_sets(11)
    assert len(s11.T) == 3 and len(s11.U) == 3
    assert len(build_sets(7).U) == 1
    assert len(build_sets(5).S) == 2


def test_build_sets_p23():
    sets = build_sets(23)
    assert len(sets.T) == 9
    assert len(sets.U) == 3
    assert len(sets.Theta) == 2


def test_build_sets_rejects_small_and_composite():
    for p in (3, 9, 15):
        with pytest.raises(FieldError):
            build_sets(p)


def test_primed_sets_drop_minus_one():
    for p in (7, 11, 13, 23):
        sets = build_sets(p)
        minus_one = make_field(p)(-1)
        assert sets.T_prime == sets.T - {minus_one}
        assert sets.U_prime == sets.U - {minus_one}
        assert sets.U <= sets.T


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 29, 31, 37])
def test_S_coset_representatives_match_full_enumeration(p):
    assert build_sets(p).S == build_sets(p, exhaustive=True).S


@pytest.mark.parametrize("p", [7, 11, 19, 23, 31, 43])
def test_theta_by_independent_scan(p):
    # Lam and Lam' for every lam with lam^2 - 1 non-square and both sides supersingular
    K = make_field(p)
    expected = set()
    for s in range(2, p - 1):
        pair = lambda_to_pair(K(s))
        if not pair.in_base_field and is_superspecial(K(s), verify=True):
            expected |= {pair.Lam, pair.Lam_prime}
    assert build_sets(p).Theta == expected


def test_sets_closed_under_inversion():
    for p in (13, 23, 29, 47, 103):
        sets = build_sets(p)
        for X in (sets.S, sets.T, sets.Theta):
            assert all(1 / x in X for x in X)
        assert all(-l in sets.Sigma for l in sets.Sigma)


def test_quotients():
    K = make_field(11)
    assert inversion_class(K(3)) == inversion_class(K(4))  # 3 * 4 = 1 mod 11
    assert len(inversion_quotient([K(3), K(4), K(2)])) == 2
    assert len(negation_quotient([K(3), K(8), K(5), K(6)])) == 2


def test_lemma25_examples():
    assert lemma25_count(5) == 8
    assert lemma25_count(13) == 24
    assert lemma25_count(17) == 64


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23])
def test_lemma25_three_routes_agree(p):
    count = lemma25_count(p)
    assert lemma25_count(p, exhaustive=True) == count
    assert lemma25_count_by_points(p) == count
    if p % 4 == 1:
        assert count == (p - 1) * class_number(-4 * p)


def test_lemma25_reported_not_asserted_for_p_3_mod_4():
    rep = verify_lemma25(7)
    assert rep.checks == [] and rep.passed
    assert rep.notes["count"] == 6
    assert verify_lemma25(11).notes["count"] == 30
    assert verify_lemma25(23).notes["count"] == 66


def test_section3_examples():
    def observed(p, claim):
        return next(c.observed for c in verify_section3(p).checks if c.claim == claim)

    assert observed(11, "#Theta = 3 h(-p) - 1") == 2
    assert observed(7, "#Theta = h(-p) - 1") == 0
    assert observed(23, "#U = h(-p)") == 3
    assert observed(23, "#Theta = h(-p) - 1") == 2


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_suites_pass_below_500(suite):
    failures = []
    for p in PRIMES_500:
        if suite_applies(suite, p):
            rep = run_suite(suite, p)
            failures += [(p, c.claim) for c in rep.failures()]
    assert failures == []


def test_structure_suite_residue_class():
    assert not suite_applies("structure", 13)
    with pytest.raises(FieldError):
        structural_props(13)


def test_structure_p7_and_p23():
    K = make_field(7)
    assert build_sets(7).U == {K(-1)}
    assert is_square(K(1 + 1))
    rep = structural_props(23)
    assert rep.passed
    claims = {c.claim for c in rep.checks}
    assert any("t^2 + 1 square" in c for c in claims)


def test_phi_map():
    K = make_field(13)
    sigma = sorted(build_sets(13).Sigma, key=int)
    lam = sigma[0]
    assert phi_map(lam) == phi_map(-lam)
    assert len(phi_map(lam)) == 2
    with pytest.raises(FieldError):
        phi_map(next(K(s) for s in range(2, 12) if K(s) not in sigma))


def test_psi_map_p11():
    sets = build_sets(11)
    assert len(sets.U_prime) == 2 and len(sets.Theta) == 2
    images = {psi_map(s, sets) for s in sets.U_prime}
    assert images == inversion_quotient(sets.Theta)


def test_psi_map_t_and_minus_t():
    K = make_field(19)
    for t in range(1, 19):
        v, w = nu(K(t)), nu(-K(t))
        assert inversion_class(frobenius(v) / v) == inversion_class(frobenius(w) / w)


def test_psi_map_rejects():
    with pytest.raises(FieldError):
        psi_map(make_field(13)(-1))
    K = make_field(11)
    with pytest.raises(FieldError):
        psi_map(K(-1))  # -1 is in U but not in U'


def test_report_and_json():
    rep = Report(7, "demo")
    rep.add("ok", 1, 1)
    rep.add("bad", 1, 2)
    assert not rep.passed
    assert [c.claim for c in rep.failures()] == ["bad"]
    json.dumps(verify_maps(23).as_dict())
    json.dumps(verify_section3(13).as_dict())


def test_census_table(reference_table):
    records = verify_theorem_a(50)
    assert [r.p for r in records] == [row["p"] for row in reference_table]
    for r, row in zip(records, reference_table):
        assert r.match
        assert (r.psi_observed, r.h_minus_p, r.h_minus_4p) == (row["psi"], row["h_minus_p"], row["h_minus_4p"])


def test_census_examples():
    r29 = census_record(29)
    assert (r29.psi_observed, r29.class_number, r29.discriminant) == (6, 6, -116)
    r31 = census_record(31)
    assert r31.psi_observed == 4 == 2 * 3 - 2
    assert r31.row() == [31, 7, -31, 3, 4, 4, "true"]
    assert len(CENSUS_HEADER.split(",")) == len(r31.row())


def test_census_threads_deterministic():
    assert verify_theorem_a(300, threads=2) == verify_theorem_a(300)
    assert verify_theorem_a(300, method="hasse") == verify_theorem_a(300)


def test_census_primes():
    assert census_primes(4) == []
    assert census_primes(13) == [5, 7, 11, 13]
