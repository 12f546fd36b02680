from fractions import Fraction

import pytest

from src.gfq import field_of_size
from src.linalg import unit_vector
from src.ratfun import LinFrac
from src.rvring import (RVRing, a_rs, coh_dim, cohomology_identity, hilbert_h, hilbert_polynomial,
                        hilbert_value)


@pytest.mark.parametrize("n", range(8))
def test_hilbert_h_rank_two_binary(n):
    assert hilbert_h(2, 2, n) == 1 + 2 * n


def test_hilbert_h_values():
    assert hilbert_h(3, 2, 2) == 21
    assert hilbert_h(1, 5, 7) == 1
    assert hilbert_h(3, 2, -1) == 0


def test_hilbert_polynomial():
    assert hilbert_polynomial(2, 2) == (Fraction(1), Fraction(2))
    for n in range(6):
        assert hilbert_value(3, 3, n) == hilbert_h(3, 3, n)


def test_a_rs():
    assert [a_rs(3, 2, s) for s in range(3)] == [1, 4, 3]
    with pytest.raises(ValueError):
        a_rs(3, 2, 3)


@pytest.mark.parametrize("r", range(1, 6))
@pytest.mark.parametrize("q", [2, 3, 4])
def test_cohomology_identity(r, q):
    for n in range(21):
        lhs, rhs = cohomology_identity(r, q, n)
        assert lhs == rhs


def test_coh_dim():
    assert coh_dim(0, 3, 2, 2) == 7
    assert coh_dim(1, 3, 2, 2) == 0
    assert coh_dim(0, -1, 2, 2) == 0
    assert coh_dim(1, -1, 2, 2) == 1
    assert coh_dim(1, -2, 2, 2) == 3
    with pytest.raises(ValueError):
        coh_dim(2, 0, 2, 2)


def test_f_elements(ring_2_2, F2):
    assert ring_2_2.f_elem(1) == LinFrac.reciprocal(F2, (1, 0))
    f2 = LinFrac.reciprocal(F2, (0, 1)) + LinFrac.reciprocal(F2, (1, 1))
    assert ring_2_2.f_elem(2) == f2
    with pytest.raises(ValueError):
        ring_2_2.f_elem(3)


@pytest.mark.parametrize("q, r", [(2, 2), (3, 2), (2, 3)])
def test_delta_sets(q, r):
    ring = RVRing(field_of_size(q), r)
    for i in range(1, r + 1):
        assert len(ring.delta_set(i)) == q ** (i - 1)
        assert len(ring.e_set(i)) == q ** (i - 1)


@pytest.mark.parametrize("q, r", [(2, 2), (3, 2), (2, 3)])
def test_relations_vanish(q, r):
    ring = RVRing(field_of_size(q), r)
    residues = ring.relation_residues()
    assert residues
    assert all(x.ok for x in residues)


@pytest.mark.parametrize("n", range(4))
def test_graded_basis_is_a_basis(ring_2_2, n):
    basis = ring_2_2.graded_basis(n)
    assert len(basis) == basis.rank() == hilbert_h(2, 2, n)


@pytest.mark.parametrize("n", range(3))
def test_graded_basis_odd_characteristic(ring_3_2, n):
    basis = ring_3_2.graded_basis(n)
    assert basis.rank() == hilbert_h(2, 3, n)


def test_freeness(ring_2_2, ring_3_2):
    for ring in (ring_2_2, ring_3_2):
        rows = ring.freeness_check(3)
        assert [row["n"] for row in rows] == [0, 1, 2, 3]
        assert all(row["ok"] for row in rows)


@pytest.mark.slow
def test_freeness_rank_three():
    ring = RVRing(field_of_size(2), 3)
    assert all(row["ok"] for row in ring.freeness_check(2))


def test_coords_in_basis(ring_2_2):
    x = ring_2_2.gen_recip((1, 1))
    assert ring_2_2.coords_in_basis(x, 1) is not None
    assert ring_2_2.coords_in_basis(x, 2) is None
    assert ring_2_2.coords_in_basis(x, -1) is None


def test_gen_recip_needs_nonzero(ring_2_2):
    with pytest.raises(ValueError):
        ring_2_2.gen_recip((0, 0))


def test_shifted(ring_3_2):
    assert ring_3_2.shifted(2, (2, 0)) == (2, 1)
    assert ring_3_2.shifted(1, (0, 0)) == unit_vector(2, 0)


def test_coh_table(ring_2_2):
    table = ring_2_2.coh_table(range(-1, 1))
    assert [(row["i"], row["n"], row["dim"]) for row in table] == [(0, -1, 0), (1, -1, 1), (0, 0, 1), (1, 0, 0)]
