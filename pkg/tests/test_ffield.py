import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from superspecial.ffield import (
    FieldError,
    evaluate_on_field,
    frobenius,
    is_eighth_power,
    is_square,
    legendre_symbol,
    lift,
    make_field,
    primes_below,
    sqrt,
    sqrt_table,
    tonelli_shanks,
)

from conftest import squares_by_enumeration

SMALL_PRIMES = [5, 7, 11, 13, 17, 19, 23, 29, 31]


def elements(p, degree):
    return st.tuples(*[st.integers(0, p - 1)] * degree).map(make_field(p, degree))


def field_and_elements(count):
    return st.sampled_from([(7, 1), (7, 2), (11, 2), (13, 2), (5, 4), (7, 4)]).flatmap(
        lambda pd: st.tuples(*[elements(*pd)] * count)
    )


def test_make_field_nonresidue_for_5():
    K = make_field(5, 2)
    assert K.tower_nonresidues == ((2,),)
    assert make_field(7, 1).tower_nonresidues == ()


@pytest.mark.parametrize("p, degree", [(4, 2), (9, 1), (3, 2), (2, 1), (7, 3), (11, 8)])
def test_make_field_rejects(p, degree):
    with pytest.raises(FieldError):
        make_field(p, degree)


def test_make_field_is_deterministic():
    assert make_field(13, 4) == make_field(13, 4)
    K4 = make_field(13, 4)
    n, m = K4.tower_nonresidues
    assert legendre_symbol(n[0], 13) == -1
    assert not is_square(make_field(13, 2)(m))


def test_degree4_nonresidue_is_first_nonsquare():
    K2 = make_field(7, 2)
    m = make_field(7, 4).tower_nonresidues[1]
    earlier = [c for c in product(range(7), repeat=2) if c < m]
    assert all(is_square(K2(c)) for c in earlier)


def test_basic_arithmetic():
    K = make_field(5)
    assert K(2).inverse() == 3
    assert K(2) / K(4) == 3
    K2 = make_field(7, 2)
    s = K2.gen()
    assert s * s == K2.tower_nonresidues[0][0]


def test_zero_division_and_mismatch():
    K = make_field(7)
    with pytest.raises(ZeroDivisionError):
        K(0).inverse()
    with pytest.raises(ZeroDivisionError):
        K(3) / 0
    with pytest.raises(FieldError):
        K(1) + make_field(11)(1)
    with pytest.raises(FieldError):
        K(1) * make_field(7, 2)(1)


@given(field_and_elements(1))
def test_inverse_and_group_order(xs):
    (x,) = xs
    if x.is_zero():
        return
    assert x * x.inverse() == 1
    assert x ** (x.field.q - 1) == 1
    assert x**-3 * x**3 == 1


@given(field_and_elements(3))
def test_ring_axioms(xs):
    x, y, z = xs
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x - y + y == x
    assert -(-x) == x


@given(elements(7, 2), elements(7, 2))
def test_frobenius_is_automorphism(x, y):
    assert frobenius(x * y) == frobenius(x) * frobenius(y)
    assert frobenius(x + y) == frobenius(x) + frobenius(y)
    assert frobenius(frobenius(x)) == x
    assert frobenius(x) == x**7


@pytest.mark.parametrize("p", [7, 11])
def test_frobenius_fixed_field_exhaustive(p):
    K2 = make_field(p, 2)
    fixed = [x for x in K2.elements() if frobenius(x) == x]
    assert len(fixed) == p
    assert all(x.in_base_field() for x in fixed)


def test_frobenius_needs_degree_two():
    with pytest.raises(FieldError):
        frobenius(make_field(7)(3))


def test_legendre_examples():
    assert legendre_symbol(4, 5) == 1
    assert legendre_symbol(3, 7) == -1
    assert legendre_symbol(14, 7) == 0


@given(st.sampled_from(SMALL_PRIMES), st.integers(), st.integers())
def test_legendre_multiplicative(p, a, b):
    assert legendre_symbol(a * b, p) == legendre_symbol(a, p) * legendre_symbol(b, p)


@pytest.mark.parametrize("p", [int(q) for q in primes_below(101) if q >= 5])
def test_is_square_matches_enumeration(p):
    squares = squares_by_enumeration(p)
    K = make_field(p)
    assert all(is_square(K(a)) == (a in squares or a == 0) for a in range(p))


def test_is_square_examples():
    assert is_square(make_field(7)(2))
    K = make_field(13)
    n = make_field(13, 2).tower_nonresidues[0][0]
    assert not is_square(K(n))
    K2 = make_field(13, 2)
    assert all(is_square(lift(K(a), K2)) for a in range(13))


@pytest.mark.parametrize("p, degree", [(5, 2), (7, 2), (11, 2), (13, 2), (23, 2), (47, 2), (5, 4), (7, 4)])
def test_square_count(p, degree):
    K = make_field(p, degree)
    count = sum(1 for x in K.elements() if not x.is_zero() and is_square(x))
    assert count == (K.q - 1) // 2


def test_sqrt_examples():
    assert sqrt(make_field(5)(4)) == 2
    assert sqrt(make_field(7)(3)) is None
    K2 = make_field(7, 2)
    r = sqrt(K2(3))
    assert r is not None and r * r == 3


@given(field_and_elements(1))
def test_sqrt_round_trip_and_canonical(xs):
    (x,) = xs
    r = sqrt(x)
    assert (r is not None) == is_square(x)
    if r is not None:
        assert r * r == x
        assert r.coords <= (-r).coords


def test_tonelli_shanks_against_brute_force():
    rng = random.Random(5)
    for p in [17, 41, 97, 113, 257, 65537, 1000003]:
        for _ in range(20):
            a = rng.randrange(p)
            r = tonelli_shanks(a, p)
            if legendre_symbol(a, p) == -1:
                assert r is None
            else:
                assert r * r % p == a


def test_sqrt_table_matches_sqrt():
    p = 31
    table = sqrt_table(p)
    K = make_field(p)
    for c in range(p):
        r = sqrt(K(c))
        assert table[c] == (-1 if r is None else int(r))


def test_eighth_powers():
    K2 = make_field(7, 2)
    assert is_eighth_power(K2(1))
    gen = next(x for x in K2.elements()
               if not x.is_zero() and all(x ** (48 // q) != 1 for q in (2, 3)))
    assert not is_eighth_power(gen)
    # T_7 = {-1, 2, 4}: the supersingular Legendre parameters mod 7
    for s in (-1, 2, 4):
        assert is_eighth_power(-K2(s))
    with pytest.raises(FieldError):
        is_eighth_power(K2(0))


def test_evaluate_on_field_matches_horner():
    rng = np.random.default_rng(3)
    for p in [5, 7, 101, 1009, 9973]:
        coeffs = rng.integers(0, p, size=min(p - 2, 40))
        values = evaluate_on_field(coeffs, p)
        for c in rng.integers(0, p, size=10).tolist() + [0, 1, p - 1]:
            acc = 0
            for a in coeffs[::-1]:
                acc = (acc * c + int(a)) % p
            assert values[c] == acc


def test_primes_below():
    assert primes_below(2).tolist() == []
    assert primes_below(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
