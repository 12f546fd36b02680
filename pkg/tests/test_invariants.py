import pytest

from src.errors import NotUnipotentError
from src.gfq import field_of_size
from src.invariants import (WEIGHT_CASES, coset_check, dickson, dickson_invariance, dickson_recursive,
                            h_invariants, h_polynomial_check, invariant_dim_bruteforce,
                            invariant_generator_weights, invariant_hilbert_check, invariant_rings_table,
                            k0_constant, m_operator, n_operator, reynolds_sum, unipotent_dim_formula,
                            weighted_monomial_count, wp_regular, wp_weights)
from src.linalg import group_elements, p_subgroups, standard_generators
from src.ratfun import LinFrac, MPoly
from src.rvring import RVRing


def test_weighted_monomial_count():
    assert weighted_monomial_count([1, 3], 6) == 3
    assert weighted_monomial_count([1, 1], 4) == 5
    assert weighted_monomial_count([2], 3) == 0
    assert weighted_monomial_count([1], -1) == 0


def test_generator_weights():
    assert invariant_generator_weights("G", 2, 2) == [1, 3]
    assert invariant_generator_weights("G'", 2, 3) == [2, 4]
    assert invariant_generator_weights("U", 3, 2) == [1, 1, 1]


@pytest.mark.parametrize("which", ["G", "G'", "U"])
def test_invariant_hilbert_functions(ring_2_2, ring_3_2, which):
    for ring in (ring_2_2, ring_3_2):
        rows = invariant_hilbert_check(ring, which, 2 * (ring.q ** 2 - 1))
        assert all(row["ok"] for row in rows), [row for row in rows if not row["ok"]]


@pytest.mark.parametrize("n", range(5))
def test_unipotent_formula_matches_bruteforce(ring_2_2, F2, n):
    for H in p_subgroups(group_elements("GL", 2, F2)):
        assert unipotent_dim_formula(H, n, 2, F2) == invariant_dim_bruteforce(ring_2_2, H, n)


def test_unipotent_formula_upper_triangular(F2):
    U = group_elements("U", 2, F2)
    assert [unipotent_dim_formula(U, n, 2, F2) for n in range(4)] == [1, 2, 3, 4]


def test_unipotent_formula_rejects_gl(F2):
    with pytest.raises(NotUnipotentError):
        unipotent_dim_formula(group_elements("GL", 2, F2), 1, 2, F2)


def test_dickson_binary_rank_two(F2):
    data = dickson(2, F2)
    x1, x2 = MPoly.variable(F2, 2, 0), MPoly.variable(F2, 2, 1)
    assert data.k[0] == x1 * x2 * (x1 + x2)
    assert data.k[1] == x1 ** 2 + x1 * x2 + x2 ** 2
    assert data.k0_prime == data.k[0]
    assert k0_constant(data) == 1


def test_k0_constant_odd_characteristic(F3):
    # k(T) = T^3 - X^2 T for r = 1
    assert k0_constant(dickson(1, F3)) == F3.neg(1)


@pytest.mark.parametrize("q, r", [(2, 2), (3, 2), (2, 3)])
def test_dickson_matches_recursion(q, r):
    field = field_of_size(q)
    assert dickson(r, field).k_of_T == dickson_recursive(r, field)


@pytest.mark.parametrize("q, r", [(2, 1), (3, 1), (2, 2), (3, 2)])
def test_dickson_invariance(q, r):
    rows = dickson_invariance(dickson(r, field_of_size(q)))
    assert all(row["ok"] for row in rows)


@pytest.mark.parametrize("q", [2, 3])
def test_h_polynomial(q):
    ring = RVRing(field_of_size(q), 2)
    rows = h_polynomial_check(ring)
    assert all(row["ok"] for row in rows), [row for row in rows if not row["ok"]]


def test_h_invariants_degrees(F2):
    hs = h_invariants(2, F2)
    assert [h.degree() for h in hs] == [-1, -3]


def test_operators_on_constants(ring_2_2, F2):
    one = LinFrac.one(F2, 2)
    # |W_2| = |U_2| = 2 kills constants in characteristic 2
    assert m_operator(ring_2_2, one).is_zero()
    assert n_operator(ring_2_2, one).is_zero()


def test_wp_weights():
    assert wp_weights("a", 3, 2) == [1, 1, 1]
    assert wp_weights("b", 3, 2) == [1, 2, 4]
    assert wp_weights("c", 3, 2) == [1, 3, 7]
    assert wp_weights("d", 3, 2) == [7, 6, 4]
    assert wp_weights("e", 3, 3) == [2, 8, 13]
    assert wp_weights("f", 2, 3) == [4, 6]
    with pytest.raises(ValueError):
        wp_weights("z", 2, 2)


@pytest.mark.parametrize("q", [2, 3])
def test_wp_regularity(q):
    for case in WEIGHT_CASES:
        assert wp_regular(wp_weights(case, 2, q))
        assert wp_regular(wp_weights(case, 3, q)) == (case == "a")


def test_wp_regular_rejects_bad_weights():
    with pytest.raises(ValueError):
        wp_regular([1, 0])


@pytest.mark.parametrize("q, r", [(2, 2), (3, 2), (2, 3)])
def test_coset_check(q, r):
    rows = coset_check(r, field_of_size(q))
    assert [row["s"] for row in rows] == list(range(1, r + 1))
    assert all(row["ok"] for row in rows), rows


def test_reynolds_sum_over_upper_triangular(ring_2_2, F2):
    U = group_elements("U", 2, F2)
    x2 = LinFrac.reciprocal(F2, (0, 1))
    assert reynolds_sum(U, x2) == ring_2_2.f_elem(2)


def test_invariant_rings_table(ring_2_2):
    rows = invariant_rings_table(ring_2_2, 3)
    assert {row["group"] for row in rows} == {"G", "G'", "U"}
    assert len(rows) == 12
    assert all(row["ok"] for row in rows)


@pytest.mark.parametrize("n", range(4))
def test_u_invariant_monomials(ring_2_2, F2, n):
    span = ring_2_2.u_invariant_monomials(n)
    assert span.rank() == n + 1
    assert span.fixed_space_dim(standard_generators("U", 2, F2)) == n + 1
