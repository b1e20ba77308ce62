import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pseudochar.rings import (ExtensionField, InconsistentSystemError, Integers, IntegersMod, PolynomialRing,
                              PrimeField, Rationals, RingMismatchError, adjoin, embed, factorize, finite_field,
                              fresh_names, is_prime, is_unit, radical, ring_from_json, ring_from_name,
                              solve_rational)

from conftest import standard_rings

Z = Integers()


def test_modular_addition_wraps():
    R = IntegersMod(6)
    assert R(4) + R(5) == R(3)


def test_f4_cube_roots_of_unity():
    F4 = finite_field(4)
    w = F4.generator()
    assert w * w * w == 1
    assert w * (w * w) == F4.one()
    assert w * w + w + 1 == 0


def test_polynomial_difference_of_squares():
    R = ring_from_name("Z[t1,t2]")
    t1, t2 = R.var("t1"), R.var("t2")
    assert (t1 + t2) * (t1 - t2) == t1 ** 2 - t2 ** 2


def test_unit_in_nilpotent_extension():
    R = adjoin(IntegersMod(4), ["t"])
    u = 1 + 2 * R.var("t")
    ok, inv = is_unit(u)
    assert ok and inv == u
    assert u * u == 1


def test_two_is_not_a_unit_in_z():
    assert is_unit(Z(2)) == (False, None)
    assert is_unit(Z(-1))[0]


def test_ring_mismatch_is_an_error():
    with pytest.raises(RingMismatchError):
        PrimeField(5)(1) + PrimeField(7)(1)


def test_embed_along_canonical_maps():
    assert embed(Z(7), PrimeField(5)) == 2
    assert embed(IntegersMod(25)(7), PrimeField(5)) == 2
    assert embed(PrimeField(2)(1), finite_field(4)) == 1


def test_factorize_and_radical():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert radical(360) == 30
    n = 1_000_003 * 999_983
    assert factorize(n) == {999_983: 1, 1_000_003: 1}
    assert is_prime(1_000_003) and not is_prime(n)


def test_fresh_names_avoid_existing_variables():
    R = ring_from_name("Z[t,t0]")
    names = fresh_names(R, "t", 2)
    assert not set(names) & {"t", "t0"}


def test_ring_names_round_trip_through_json():
    for name in ["Z", "Q", "Z/25", "F5", "F4", "F9", "Z[t1,t2]", "F4[t]"]:
        R = ring_from_name(name)
        assert ring_from_json(R.to_json()) == R


def test_unknown_ring_name_lists_catalog():
    with pytest.raises(ValueError, match="expected"):
        ring_from_name("W7")


def test_solve_rational_prefers_early_pivots():
    sol = solve_rational([[1, 1], [1, 1]], [1, 1])
    assert sol.solution == (1, 0)
    assert sol.nullspace == ((-1, 1),)
    with pytest.raises(InconsistentSystemError):
        solve_rational([[1, 1], [1, 1]], [1, 2])
    assert solve_rational([[2, 0], [0, 3]], [1, 1]).solution == (Fraction(1, 2), Fraction(1, 3))


def test_extension_field_elements_are_all_distinct():
    F9 = finite_field(9)
    elems = list(F9.elements())
    assert len(set(elems)) == 9
    assert all(x.is_unit() for x in elems if x)


@pytest.mark.parametrize("ring", standard_rings(), ids=str)
def test_ring_axioms_on_random_samples(ring):
    rng = random.Random(7)
    for _ in range(40):
        a, b, c = (ring.random_element(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a - a == ring.zero()
        assert a * ring.one() == a


@pytest.mark.parametrize("ring", [PrimeField(7), IntegersMod(25), finite_field(4), finite_field(9)], ids=str)
def test_inverse_of_every_unit(ring):
    for x in ring.elements():
        if x.is_unit():
            assert x * x.inverse() == 1


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_integers_embed_into_rationals(a, b):
    Q = Rationals()
    assert embed(Z(a) * Z(b), Q) == embed(Z(a), Q) * embed(Z(b), Q)


@given(st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_polynomial_substitution_is_a_homomorphism(coeffs):
    R = PolynomialRing(PrimeField(5), ("x",))
    x = R.var("x")
    p = sum((R(c) * x ** i for i, c in enumerate(coeffs)), R.zero())
    q = p * p + x
    for v in range(5):
        val = {"x": PrimeField(5)(v)}
        assert R.substitute(q, val, PrimeField(5)) == R.substitute(p, val, PrimeField(5)) ** 2 + v


def test_coefficient_extraction():
    R = ring_from_name("Z[t,T]")
    t, T = R.var("t"), R.var("T")
    p = 3 * t * T ** 2 + 5 * T + 7
    S = R.without(("T",))
    assert R.coefficient(p, "T", 2) == 3 * S.var("t")
    assert R.coefficient(p, "T", 0) == 7


def test_extension_field_modulus_is_irreducible():
    F8 = finite_field(8)
    assert isinstance(F8, ExtensionField) and F8.degree == 3
    assert all(x ** 7 == 1 for x in F8.elements() if x)
