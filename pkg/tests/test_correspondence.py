import random

import pytest

from pseudochar.correspondence import (NotGLValuedError, alpha, alpha_inverse, all_homomorphisms_gl2,
                                       char_p_separation_demo, compare_on_supports, conjugacy_witness,
                                       is_semisimple_2d, roundtrip_check, semisimple_bijection_check,
                                       stable_lines, taylor_bridge)
from pseudochar.determinants import check_multiplicative_homogeneous, det_from_letters, det_from_rep, det_from_theta
from pseudochar.groups_words import (GroupAlgebraElement, Representation, builtin_group, cyclic,
                                     random_representation, symmetric)
from pseudochar.lafforgue import (LambdaGen, generator_expressions, harvest_theta, lpc_from_rep, lpc_from_theta,
                                  theta_evaluate)
from pseudochar.matrices import SquareMatrix
from pseudochar.rings import Integers, PrimeField, finite_field, ring_from_name
from pseudochar.taylor import is_taylor_pc

Z = Integers()
F4 = finite_field(4)
F5 = PrimeField(5)
W = F4.generator()


def swap_rep(ring=Z):
    return Representation.from_generators(cyclic(2), ring, {1: SquareMatrix(ring, [[0, 1], [1, 0]])})


def chi_plus_chi2():
    G = cyclic(3)
    return Representation.character(G, F4, [1, W, W * W]).direct_sum(Representation.character(G, F4, [1, W * W, W]))


def test_alpha_on_trivial_rep():
    G = cyclic(3)
    D = alpha(lpc_from_rep(Representation.trivial(G, Z, 2)))
    assert D(GroupAlgebraElement.basis(Z, G, 0, 5)) == 25


def test_alpha_swap_rep():
    rho = swap_rep()
    x = GroupAlgebraElement(Z, cyclic(2), {0: 1, 1: 1})
    assert alpha(lpc_from_rep(rho))(x) == det_from_rep(rho)(x) == 0


def test_alpha_of_harvest_is_a_law():
    pc = lpc_from_theta(cyclic(3), F4, 2, harvest_theta(chi_plus_chi2()))
    assert check_multiplicative_homogeneous(alpha(pc), trials=60).accepted


@pytest.mark.parametrize("name,ring_name", [("C3", "F5"), ("S3", "Z"), ("V4", "Z/4")])
def test_alpha_matches_rep_determinant(name, ring_name):
    G, ring = builtin_group(name), ring_from_name(ring_name)
    rho = random_representation(G, ring, 2, random.Random(8))
    assert compare_on_supports(alpha(lpc_from_rep(rho)), det_from_rep(rho), seed=3)[1] is None


@pytest.mark.parametrize("name", ["C3", "S3"])
def test_alpha_inverse_agrees_on_all_generators(name):
    G = builtin_group(name)
    rho = random_representation(G, F5, 2, random.Random(5))
    direct, back = lpc_from_rep(rho), alpha_inverse(det_from_rep(rho))
    for n in (1, 2):
        gens = generator_expressions(n, 2, max_len=3)
        tuples = [(a,) for a in G.elements()] if n == 1 else [(a, b) for a in G.elements() for b in G.elements()]
        for tup in tuples:
            for f in gens:
                assert theta_evaluate(direct, f, tup) == theta_evaluate(back, f, tup)


def test_alpha_inverse_of_augmentation():
    G = symmetric(3)
    pc = alpha_inverse(det_from_rep(Representation.trivial(G, Z, 1)))
    assert all(pc.theta[(1, g)] == -1 for g in G.elements())


def test_alpha_inverse_free_domain():
    with pytest.raises(NotGLValuedError, match="not GL-valued"):
        alpha_inverse(det_from_letters(Z, [SquareMatrix(Z, [[1, 0], [0, 0]])]))
    ok = alpha_inverse(det_from_letters(Z, [SquareMatrix(Z, [[1, 1], [0, 1]]), SquareMatrix(Z, [[0, 1], [1, 0]])]))
    # Lambda_1 of the product of the two letters: trace [[1,1],[1,0]] = 1
    assert theta_evaluate(ok, LambdaGen(2, 1, (1, 2)), ((1,), (2,))) == -1


@pytest.mark.parametrize("name,ring_name,d", [
    ("S3", "F5", 2), ("C3", "F4", 2), ("C2", "Z", 1), ("V4", "Z/4", 2), ("C2", "Z[t]", 2), ("S3", "F2", 3)])
def test_roundtrip_is_clean(name, ring_name, d):
    G, ring = builtin_group(name), ring_from_name(ring_name)
    rho = random_representation(G, ring, d, random.Random(11))
    report = roundtrip_check(rho, seed=2, samples=60, lpc_trials=200)
    assert report.ok, report.defects
    assert report.to_json()["defects"] == []


def test_roundtrip_trivial_d1():
    assert roundtrip_check(Representation.trivial(cyclic(4), Z, 1), samples=30, lpc_trials=100).ok


def test_roundtrip_of_corrupted_theta():
    th = harvest_theta(chi_plus_chi2())
    th[(2, 1)] = th[(2, 1)] + W
    report = roundtrip_check(det_from_theta(cyclic(3), F4, 2, th))
    assert not report.ok
    assert any("witness" in d or "element" in d for d in report.defects)


def test_taylor_bridge():
    assert taylor_bridge(det_from_rep(Representation.trivial(cyclic(3), F5, 2))).values == (F5(2),) * 3
    with pytest.raises(ValueError, match="2 not a unit"):
        taylor_bridge(det_from_rep(swap_rep(Z)))
    T = taylor_bridge(det_from_rep(swap_rep(F5)))
    assert T.values == (F5(2), F5(0))
    assert is_taylor_pc(T).accepted
    with pytest.raises(ValueError, match="2 not a unit"):
        taylor_bridge(det_from_rep(swap_rep(PrimeField(2))))


@pytest.mark.parametrize("name", ["C3", "S3", "V4"])
def test_bridge_output_passes_identity(name):
    G = builtin_group(name)
    for d in (1, 2, 3):
        rho = random_representation(G, PrimeField(7), d, random.Random(d))
        assert is_taylor_pc(taylor_bridge(det_from_rep(rho)), mode="sampled", trials=100).accepted


def test_char_p_demo_values():
    report = char_p_separation_demo()
    out = report.to_json()
    assert report.ok
    assert out["traces_equal"] is True and out["determinants_equal"] is False
    assert out["fingerprint"]["rho1"]["theta2"] == {"e": "1", "g": "1", "g^2": "1"}
    # theta(2, g) = det(psi(g) I) = w^2
    assert out["fingerprint"]["rho2"]["theta2"]["g"] == str(W * W)
    assert out["control"]["traces_equal"] is False


def test_equal_reps_have_equal_fingerprints():
    rho = chi_plus_chi2()
    assert harvest_theta(rho) == harvest_theta(rho.conjugate(SquareMatrix(F4, [[1, 1], [0, 1]])))


def test_semisimplicity_by_stable_lines():
    F2 = PrimeField(2)
    unipotent = Representation.from_generators(cyclic(2), F2, {1: SquareMatrix(F2, [[1, 1], [0, 1]])})
    assert len(stable_lines([unipotent(1)])) == 1
    assert not is_semisimple_2d(unipotent)
    triv = Representation.trivial(cyclic(2), F2, 2)
    assert is_semisimple_2d(triv)
    assert harvest_theta(unipotent) == harvest_theta(triv)


def test_conjugacy_witness_found():
    rho = random_representation(symmetric(3), F5, 2, random.Random(3))
    P = SquareMatrix(F5, [[1, 2], [0, 1]])
    sigma = rho.conjugate(P)
    k, X = conjugacy_witness(rho, sigma)
    assert k == 1
    for g in rho.group.elements():
        assert X * rho(g) == sigma(g) * X


def test_conjugacy_over_f2_scalar_reps():
    F2 = PrimeField(2)
    triv = Representation.trivial(cyclic(3), F2, 2)
    assert conjugacy_witness(triv, triv)[0] == 1


def test_homomorphism_count_c2_over_f3():
    assert len(all_homomorphisms_gl2(cyclic(2), PrimeField(3))) == 14


@pytest.mark.parametrize("name,q,classes", [("C2", 3, 3), ("C3", 4, 6), ("C2", 2, 1)])
def test_census_counts(name, q, classes):
    report = semisimple_bijection_check(builtin_group(name), q)
    assert report.ok and report.counts["classes"] == classes


def test_census_limits():
    with pytest.raises(ValueError):
        semisimple_bijection_check(builtin_group("C3"), 11)
    with pytest.raises(NotImplementedError):
        semisimple_bijection_check(builtin_group("C3"), 4, d=3)
