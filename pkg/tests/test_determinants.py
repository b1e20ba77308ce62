import json
import random

import pytest

from pseudochar.correspondence import compare_on_supports
from pseudochar.determinants import (ExpansionTable, TableUnavailableError, amitsur_table,
                                     candidate_products, check_multiplicative_homogeneous, compute_amitsur_table,
                                     det_from_letters, det_from_rep, det_from_theta, det_product, det_pullback,
                                     generic_determinant, is_gl_valued, lambda_of, multidegrees, verify_table,
                                     verify_table_numeric)
from pseudochar.groups_words import (FreeAlgebraElement, GroupAlgebraElement, GroupMorphism, Representation,
                                     all_characters, builtin_group, cyclic, random_representation, symmetric)
from pseudochar.lafforgue import DonkinExpression, LambdaGen, harvest_theta
from pseudochar.matrices import SquareMatrix, charpoly
from pseudochar.rings import Integers, IntegersMod, PrimeField, finite_field, ring_from_name

Z = Integers()
F4 = finite_field(4)
W = F4.generator()


def swap_rep(ring=Z):
    return Representation.from_generators(cyclic(2), ring, {1: SquareMatrix(ring, [[0, 1], [1, 0]])})


def chi_plus_chi2():
    G = cyclic(3)
    return Representation.character(G, F4, [1, W, W * W]).direct_sum(Representation.character(G, F4, [1, W * W, W]))


# evaluation examples

def test_trivial_rep_is_degree_two_on_scalars():
    D = det_from_rep(Representation.trivial(cyclic(3), Z, 2))
    assert D(GroupAlgebraElement.basis(Z, cyclic(3), 0, 7)) == 49
    R = ring_from_name("Z[t1]")
    assert D(GroupAlgebraElement.basis(R, cyclic(3), 0, R.var("t1"))) == R.var("t1") ** 2


def test_swap_rep_examples():
    G = cyclic(2)
    D = det_from_rep(swap_rep())
    assert D(GroupAlgebraElement(Z, G, {0: 1, 1: 1})) == 0
    R = ring_from_name("Z[t1,t2]")
    t1, t2 = R.var("t1"), R.var("t2")
    assert D(GroupAlgebraElement(R, G, {0: t1, 1: t2})) == t1 ** 2 - t2 ** 2


def test_generic_single_letter():
    D = generic_determinant(2, 1)
    v = D.ring.var
    assert D(FreeAlgebraElement.letter(Z, 1, 1)) == v("x1_11") * v("x1_22") - v("x1_12") * v("x1_21")


def test_data_backed_f4_example():
    rho = chi_plus_chi2()
    D = det_from_theta(cyclic(3), F4, 2, harvest_theta(rho))
    x = GroupAlgebraElement(F4, cyclic(3), {0: 1, 1: 1})
    assert D(x) == 1
    assert D(x) == det_from_rep(rho)(x)


def test_data_backed_limits():
    G = cyclic(6)
    rho = Representation.trivial(G, PrimeField(5), 2)
    D = det_from_theta(G, rho.ring, 2, harvest_theta(rho))
    with pytest.raises(TableUnavailableError):
        D(GroupAlgebraElement(rho.ring, G, {0: 1, 1: 1, 2: 1, 3: 1}))
    bad = harvest_theta(rho)
    bad[(2, 0)] = PrimeField(5)(2)
    with pytest.raises(ValueError):
        det_from_theta(G, rho.ring, 2, bad)


def test_unsupported_extension():
    D = det_from_rep(swap_rep(PrimeField(5)))
    with pytest.raises(ValueError, match="unsupported extension"):
        D(GroupAlgebraElement(PrimeField(7), cyclic(2), {0: 1}))


# lambda_of

def test_lambda_of_zero_and_identity():
    D = det_from_rep(Representation.trivial(cyclic(2), Z, 2))
    zero = GroupAlgebraElement(Z, cyclic(2))
    assert [lambda_of(D, zero, i) for i in range(3)] == [1, 0, 0]
    assert [lambda_of(D, D.basis(0), i) for i in range(3)] == [1, -2, 1]


@pytest.mark.parametrize("ring", [Z, PrimeField(5), IntegersMod(4), ring_from_name("Z[t]")], ids=str)
def test_lambda_of_matches_charpoly(ring):
    G = symmetric(3)
    rho = random_representation(G, ring, 3, random.Random(6))
    D = det_from_rep(rho)
    for g in G.elements():
        lam = charpoly(rho(g)).lambdas
        assert tuple(lambda_of(D, D.basis(g), i) for i in range(4)) == lam
        assert lambda_of(D, D.basis(g), 1) == -rho(g).trace()


def test_lambda_of_range():
    D = det_from_rep(swap_rep())
    with pytest.raises(ValueError):
        lambda_of(D, D.basis(1), 3)


# products and pullbacks

def test_product_of_trivial_characters():
    G = cyclic(3)
    one = det_from_rep(Representation.trivial(G, Z, 1))
    two = det_from_rep(Representation.trivial(G, Z, 2))
    P = det_product(one, one)
    assert P.d == 2
    rng = random.Random(0)
    for _ in range(20):
        x = GroupAlgebraElement(Z, G, {g: rng.randint(-4, 4) for g in G.elements()})
        assert P(x) == two(x)
        assert P(x.scale(3)) == 9 * P(x)


def test_product_equals_direct_sum_exhaustively():
    G = cyclic(3)
    chars = all_characters(G, F4)
    chi, psi = chars[1], chars[2]
    P = det_product(det_from_rep(chi), det_from_rep(psi))
    S = det_from_rep(chi.direct_sum(psi))
    checked, bad = compare_on_supports(P, S)
    assert bad is None and checked == 63


def test_product_needs_matching_rings():
    with pytest.raises(ValueError):
        det_product(det_from_rep(swap_rep(Z)), det_from_rep(swap_rep(PrimeField(5))))


def test_pullback_along_reduction():
    C6, C3 = cyclic(6), cyclic(3)
    u = GroupMorphism(C6, C3, tuple(g % 3 for g in C6.elements()))
    chi = all_characters(C3, F4)[1]
    pulled = det_pullback(det_from_rep(chi), u)
    direct = det_from_rep(chi.compose(u.images, C6))
    for g in C6.elements():
        assert pulled(pulled.basis(g)) == direct(direct.basis(g))
    assert compare_on_supports(pulled, direct, max_support=2)[1] is None


def test_pullback_identity_and_trivial():
    G = symmetric(3)
    rho = random_representation(G, PrimeField(5), 2, random.Random(1))
    D = det_from_rep(rho)
    ident = det_pullback(D, GroupMorphism(G, G, tuple(G.elements())))
    assert compare_on_supports(D, ident, max_support=2)[1] is None
    const = det_pullback(D, GroupMorphism(G, G, (G.identity,) * 6))
    for g in G.elements():
        assert [lambda_of(const, const.basis(g), i) for i in range(3)] == [1, -2, 1]


# property checks

@pytest.mark.parametrize("name,ring_name,d", [
    ("C4", "Z", 2), ("S3", "F5", 3), ("V4", "Z/4", 2), ("C3", "F4", 2), ("S3", "Z/9", 1), ("C2", "Z[t]", 2)])
def test_rep_backed_laws_are_accepted(name, ring_name, d):
    G, ring = builtin_group(name), ring_from_name(ring_name)
    D = det_from_rep(random_representation(G, ring, d, random.Random(3)))
    v = check_multiplicative_homogeneous(D, seed=2, trials=60)
    assert v.accepted and v.checked == 60


def test_generic_law_is_accepted():
    assert check_multiplicative_homogeneous(generic_determinant(2, 2), trials=10).accepted


def test_free_rep_law_is_accepted():
    D = det_from_letters(PrimeField(7), [SquareMatrix(PrimeField(7), [[1, 2], [3, 4]]),
                                         SquareMatrix(PrimeField(7), [[0, 1], [1, 1]])])
    assert check_multiplicative_homogeneous(D, trials=40).accepted


def test_corrupted_data_rejected_with_witness():
    th = harvest_theta(chi_plus_chi2())
    th[(1, 2)] = th[(1, 2)] + 1
    v = check_multiplicative_homogeneous(det_from_theta(cyclic(3), F4, 2, th), trials=100)
    assert not v.accepted
    assert v.witness["check"] in ("multiplicative", "homogeneous")


def test_gl_valued_criterion():
    assert is_gl_valued(det_from_rep(swap_rep())).accepted
    zero_letter = det_from_letters(Z, [SquareMatrix(Z, [[1, 0], [0, 0]])])
    assert not is_gl_valued(zero_letter).accepted
    six = det_from_letters(Z, [SquareMatrix(Z, [[2, 0], [0, 3]])])
    v = is_gl_valued(six)
    assert not v.accepted and v.witness["value"] == "6"


# expansion tables

def test_d1_table():
    t = amitsur_table(1, 2)
    assert t.coefficients[(1, 0)] == -LambdaGen(2, 1, (1,))
    assert t.coefficients[(0, 1)] == -LambdaGen(2, 1, (2,))


def test_d2_tables():
    assert amitsur_table(2, 1).coefficients[(2,)] == LambdaGen(1, 2, (1,))
    mixed = amitsur_table(2, 2).coefficients[(1, 1)]
    assert mixed == LambdaGen(2, 1, (1,)) * LambdaGen(2, 1, (2,)) + LambdaGen(2, 1, (1, 2))
    assert amitsur_table(2, 2).to_json()["coefficients"]["1,1"] == [
        [1, ["L", 1, [1]], ["L", 1, [2]]], [1, ["L", 1, [1, 2]]]]


def test_d3_adjugate_coefficient():
    # coefficient of t1^2 t2 is tr(adj(A) B)
    f = amitsur_table(3, 2).coefficients[(2, 1)]
    L = lambda k, w: LambdaGen(2, k, w)  # noqa: E731
    assert f == -L(1, (1, 1, 2)) - L(1, (1,)) * L(1, (1, 2)) - L(2, (1,)) * L(1, (2,))


def test_candidates_have_the_right_multidegree():
    for cand in candidate_products((2, 1), 3):
        deg = [0, 0]
        for k, w in cand:
            for x in w:
                deg[x - 1] += k
        assert tuple(deg) == (2, 1)
    assert multidegrees(2, 2) == [(2, 0), (1, 1), (0, 2)]


def test_table_json_round_trip(tmp_path):
    t = amitsur_table(3, 2)
    path = tmp_path / "t.json"
    path.write_text(json.dumps(t.to_json()))
    assert ExpansionTable.from_json(json.loads(path.read_text())) == t


def test_corrupted_table_fails_verification():
    t = amitsur_table(2, 2)
    coeffs = dict(t.coefficients)
    coeffs[(1, 1)] = coeffs[(1, 1)] + LambdaGen(2, 1, (1, 2))
    bad = ExpansionTable(2, 2, coeffs)
    assert verify_table(bad, trials=5)


def test_table_cache_directory(tmp_path, monkeypatch):
    from pseudochar import determinants
    t = compute_amitsur_table(2, 3)
    (tmp_path / "amitsur_d2_n3.json").write_text(json.dumps(t.to_json()))
    monkeypatch.setenv("PSEUDOCHAR_TABLE_CACHE", str(tmp_path))
    monkeypatch.setattr(determinants, "_TABLES", {})
    assert amitsur_table(2, 3) == t


def test_table_budget():
    with pytest.raises(TableUnavailableError):
        amitsur_table(4, 1)


@pytest.mark.parametrize("dn", [(2, 3), (3, 3)])
def test_tables_under_specialization(dn):
    t = amitsur_table(*dn)
    for ring in (Z, IntegersMod(4), PrimeField(5)):
        assert verify_table_numeric(t, ring, trials=10, seed=1) == []
