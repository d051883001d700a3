import numpy as np
import pytest

from grado import fixtures
from grado.algebra import SearchBudgetExceeded, array_eq, center
from grado.graded import (EpsilonSystem, GradedRing, NotEpsilonStrong,
                          check_remark_identities, detect_epsilon, find_epsilon_invertible,
                          find_generator_element, generator_condition_holds,
                          is_epsilon_crossed_product, is_strongly_graded,
                          is_symmetrically_graded, matcro_decide, matrix_grading)
from grado.groups import FreeAbelian, cyclic
from grado.linalg import GF

from oracle import o_eps_invertible_pairs, o_epsilon_by_enumeration


@pytest.fixture(scope="module")
def endv():
    return fixtures.endv()


@pytest.fixture(scope="module")
def tri():
    return fixtures.tri()


@pytest.fixture(scope="module")
def endv_eps(endv):
    return detect_epsilon(endv)


@pytest.fixture(scope="module")
def tri_eps(tri):
    return detect_epsilon(tri)


def test_homogeneity_validation_rejects_bad_degrees():
    ga = fixtures.group_algebra(GF(3), cyclic(4))
    # delta_1 * delta_2 = delta_3 lands outside the declared degree
    with pytest.raises(ValueError, match="homogeneous"):
        GradedRing(ga.algebra, cyclic(2), [0, 1, 0, 0])
    with pytest.raises(ValueError, match="identity degree"):
        GradedRing(ga.algebra, cyclic(2), [1, 1, 1, 1])
    # the trivial coarsening is a perfectly good grading
    GradedRing(ga.algebra, cyclic(2), [0, 0, 0, 0])


def test_component_and_support_group_algebra():
    ga = fixtures.group_algebra(GF(3), cyclic(2))
    assert ga.support() == [0, 1]
    assert ga.component(0).dim == 1
    assert ga.component(1).dim == 1


def test_components_endv(endv):
    assert endv.support() == [(-2,), (-1,), (0,), (1,), (2,)]
    assert endv.component_dim((0,)) == 3
    assert endv.component_dim((3,)) == 0
    assert endv.component_dim((1,)) == 2


def test_symmetric_gradings(endv, tri):
    assert is_symmetrically_graded(endv)
    assert is_symmetrically_graded(tri)
    assert is_symmetrically_graded(fixtures.group_algebra(GF(3), cyclic(4)))
    assert not is_symmetrically_graded(fixtures.nilpotent())
    assert not is_symmetrically_graded(fixtures.tri_matrix())


def test_detect_epsilon_endv_exact_operators(endv, endv_eps):
    # operators written as 3x3 matrices over the graded coordinates of V
    expected = {
        (0,): np.eye(3, dtype=int),
        (1,): np.diag([1, 1, 0]),
        (2,): np.diag([1, 0, 0]),
        (-1,): np.diag([0, 1, 1]),
        (-2,): np.diag([0, 0, 1]),
    }
    assert not isinstance(endv_eps, NotEpsilonStrong)
    for g, mat in expected.items():
        assert np.array_equal(fixtures.endv_operator(endv_eps.of(g)), mat)


def test_detect_epsilon_tri(tri, tri_eps):
    assert not isinstance(tri_eps, NotEpsilonStrong)
    # eps_1 = diag(1_S, 1_I) with S the first two corner coordinates
    assert tri_eps.of(1).tolist() == [1, 1, 1, 0, 0, 0, 0]
    assert array_eq(tri_eps.of(0), tri.algebra.unit)


def test_detect_epsilon_matches_enumeration_oracle(tri):
    # brute-force the identity element of A_1 A_1 over GF(2)
    found = o_epsilon_by_enumeration(tri.algebra.table.tolist(), 2,
                                     tri.component_indices(1), tri.component_indices(1),
                                     tri.component_indices(0), tri.algebra.unit.tolist())
    assert found == [1, 1, 1, 0, 0, 0, 0]


def test_detect_epsilon_strongly_graded_group_algebra():
    ga = fixtures.group_algebra(GF(3), cyclic(4))
    eps = detect_epsilon(ga)
    for g in ga.support():
        assert array_eq(eps.of(g), ga.algebra.unit)
    assert is_strongly_graded(ga, eps)


def test_detect_epsilon_failures():
    res = detect_epsilon(fixtures.nilpotent())
    assert isinstance(res, NotEpsilonStrong)
    res2 = detect_epsilon(fixtures.tri_matrix())
    assert isinstance(res2, NotEpsilonStrong)


def test_epsilon_zero_off_support(endv, endv_eps):
    assert not endv_eps.of((3,)).any()


def test_remark_identities(endv, endv_eps, tri, tri_eps):
    assert check_remark_identities(endv, endv_eps).ok
    assert check_remark_identities(tri, tri_eps).ok


def test_remark_identities_tri_value(tri, tri_eps):
    from grado.algebra import Subspace, product_span
    span = product_span(tri.component(1), tri.component(1))
    eps1 = tri_eps.of(1)
    lhs = [tri.algebra.mul(eps1, r) for r in tri.component(0).basis]
    assert span == Subspace(tri.algebra, np.array(lhs))
    assert span.dim == 3


def test_find_epsilon_invertible_endv(endv, endv_eps):
    dec = find_epsilon_invertible(endv, endv_eps, (1,), strategy="exhaustive")
    assert dec.is_yes
    w = dec.witness
    assert w.verify(endv, endv_eps)
    # the shift operators are among the valid witnesses
    s = fixtures.endv_operator(w.element)
    assert np.linalg.matrix_rank(s.astype(float)) == 2


def test_find_epsilon_invertible_routes_agree_on_endv(endv, endv_eps):
    for g in endv.support():
        a = find_epsilon_invertible(endv, endv_eps, g, strategy="exhaustive")
        b = find_epsilon_invertible(endv, endv_eps, g, strategy="module-iso")
        assert a.status == b.status == "yes"


def test_find_epsilon_invertible_group_algebra():
    ga = fixtures.group_algebra(GF(3), cyclic(2))
    eps = detect_epsilon(ga)
    dec = find_epsilon_invertible(ga, eps, 1, strategy="exhaustive")
    assert dec.is_yes
    # delta_g is a witness: s=(0,1) with inverse (0,1)
    assert array_eq(ga.algebra.mul(ga.algebra.element([0, 1]), ga.algebra.element([0, 1])),
                    ga.algebra.unit)


def test_no_generator_on_block_fixture():
    m = fixtures.m3block()
    eps = detect_epsilon(m)
    dec = find_epsilon_invertible(m, eps, 1, strategy="auto")
    assert dec.is_no  # dimension obstruction: component 4, corner 5
    gen = find_generator_element(m, 1)
    assert gen.is_no


def test_exhaustive_pair_oracle_agrees_on_tri(tri, tri_eps):
    # independent two-sided pair enumeration over all of A_1 x A_1
    found, count = o_eps_invertible_pairs(
        tri.algebra.table.tolist(), 2, tri.component_indices(1),
        tri.component_indices(1), tri_eps.of(1).tolist(), tri_eps.of(1).tolist())
    dec = find_epsilon_invertible(tri, tri_eps, 1, strategy="exhaustive")
    assert (found is not None) == dec.is_yes
    assert count == 2 ** (2 * tri.component_dim(1))


def test_is_epsilon_crossed_product(endv, tri):
    assert is_epsilon_crossed_product(endv).status == "yes"
    assert is_epsilon_crossed_product(tri).status == "yes"
    assert is_epsilon_crossed_product(fixtures.m3block()).status == "no"
    assert is_epsilon_crossed_product(fixtures.group_algebra(GF(3), cyclic(4))).status == "yes"


def test_crossed_witnesses_satisfy_generator_condition(endv):
    dec = is_epsilon_crossed_product(endv)
    for g, w in dec.witnesses.items():
        assert generator_condition_holds(endv, g, w.element)


def test_matrix_grading_scalar_case(tri, tri_eps):
    m1 = matrix_grading(tri, 1)
    assert m1.algebra.dim == tri.algebra.dim
    eps1 = detect_epsilon(m1)
    assert array_eq(eps1.of(1), tri_eps.of(1))


def test_matrix_grading_epsilon_blocks(tri, tri_eps):
    m2 = matrix_grading(tri, 2)
    assert m2.algebra.dim == 28
    eps2 = detect_epsilon(m2)
    assert not isinstance(eps2, NotEpsilonStrong)
    # E_g = eps_g I_n entrywise
    f = tri.algebra.field
    expected = f.zeros((28,))
    for t in range(7):
        if tri_eps.of(1)[t]:
            expected[t * 4 + 0] = 1  # e_11 slot
            expected[t * 4 + 3] = 1  # e_22 slot
    assert array_eq(eps2.of(1), expected)


def test_matrix_grading_strongly_graded():
    ga = fixtures.group_algebra(GF(2), cyclic(2))
    m2 = matrix_grading(ga, 2)
    eps = detect_epsilon(m2)
    assert is_strongly_graded(m2, eps)


def test_matcro_reduces_to_crossed_at_n1(tri):
    res = matcro_decide(tri, 1)
    assert res["agreement"]
    assert res["crossed"].status == is_epsilon_crossed_product(tri).status


def test_matcro_endv_n2(endv):
    res = matcro_decide(endv, 2)
    assert res["agreement"]
    assert res["crossed"].status == "yes"
    assert res["generator_status"] == "yes"


def test_matcro_tri_n2(tri):
    res = matcro_decide(tri, 2)
    assert res["agreement"]
    assert res["crossed"].status == res["generator_status"] == "yes"


def test_matcro_block_fixture_routes_agree():
    m = fixtures.m3block()
    res = matcro_decide(m, 1)
    assert res["agreement"]
    assert res["crossed"].status == "no"
    assert res["generator_status"] == "no"


def test_free_abelian_group_elements(endv):
    g = endv.group
    assert g.op((1,), (2,)) == (3,)
    assert g.inverse((2,)) == (-2,)
    assert not g.is_finite()


def test_exhaustive_budget_guard(endv, endv_eps):
    with pytest.raises(SearchBudgetExceeded):
        find_epsilon_invertible(endv, endv_eps, (1,), strategy="exhaustive", budget=3)


def test_random_strategy_reproducible(endv, endv_eps):
    a = find_epsilon_invertible(endv, endv_eps, (1,), strategy="random", seed=11, trials=200)
    b = find_epsilon_invertible(endv, endv_eps, (1,), strategy="random", seed=11, trials=200)
    assert a.status == b.status
    if a.is_yes:
        assert array_eq(a.witness.element, b.witness.element)
