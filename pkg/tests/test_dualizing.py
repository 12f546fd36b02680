import pytest

from src.dualizing import (DualizingIdeal, hat_bijection, hat_delta_set, hat_of, ideal_closure_check,
                           iv_dim_formula, iv_dim_generators, iv_dimension_check, iv_generators,
                           iv_membership, mr_orthogonality, pairing_table)
from src.errors import InfeasibleError
from src.gfq import field_of_size
from src.ratfun import LinFrac
from src.rvring import RVRing


def test_generators_rank_two(F2):
    gens = iv_generators(2, F2)
    assert len(gens) == 1
    assert set(gens[0].vectors) == {(1, 0), (0, 1), (1, 1)}
    assert gens[0].degree == -3


def test_generators_rank_three(F2):
    gens = iv_generators(3, F2)
    # complements of the seven lines of the Fano plane
    assert len(gens) == 7
    assert all(g.is_admissible() and g.degree == -4 for g in gens)


def test_generators_without_dedupe(F2):
    gens = iv_generators(2, F2, dedupe=False)
    assert len(gens) == 6


def test_generator_cap(F2):
    with pytest.raises(InfeasibleError):
        iv_generators(3, F2, cap=10)


@pytest.mark.parametrize("r, q, n, expected", [
    (1, 2, 1, 0),
    (1, 2, 5, 1),
    (2, 2, 2, 0),
    (2, 2, 3, 1),
    (2, 2, 4, 3),
    (2, 2, 5, 5),
    (2, 3, 3, 2),
])
def test_iv_dim_formula(r, q, n, expected):
    assert iv_dim_formula(r, q, n) == expected


@pytest.mark.parametrize("q, r", [(2, 2), (3, 2), (2, 3)])
def test_hat_delta_sizes(q, r):
    ring = RVRing(field_of_size(q), r)
    for i in range(1, r + 1):
        assert len(hat_delta_set(ring, i)) == q ** (i - 1)
        assert [d for d, _ in hat_bijection(ring, i)] == ring.delta_set(i)


def test_hat_of(ring_2_2, F2):
    x1 = LinFrac.reciprocal(F2, (1, 0))
    assert hat_of(ring_2_2, 1, None) == x1 * x1
    assert hat_of(ring_2_2, 2, (1, 0)).degree() == -1


@pytest.mark.parametrize("q, r", [(2, 1), (2, 2), (3, 2)])
def test_iv_dimension_check(q, r):
    ring = RVRing(field_of_size(q), r)
    rows = iv_dimension_check(ring, 5)
    assert rows
    assert all(row["ok"] for row in rows), [row for row in rows if not row["ok"]]


def test_membership(ring_2_2):
    gen = iv_generators(2, ring_2_2.field)[0]
    assert iv_membership(ring_2_2, gen.fraction, 3) is not None
    # I_V has nothing in degrees above -(r+1)
    assert iv_membership(ring_2_2, ring_2_2.gen_recip((1, 0)), 1) is None
    assert iv_membership(ring_2_2, gen.fraction, 4) is None


def test_dim_generators(ring_2_2):
    ideal = DualizingIdeal(ring_2_2)
    assert ideal.dim_generators(2) == 0
    assert [ideal.dim_generators(n) for n in (3, 4, 5)] == [1, 3, 5]


def test_ideal_closure(ring_2_2):
    rows = ideal_closure_check(ring_2_2, samples=6)
    assert len(rows) == 6
    assert all(row["ok"] for row in rows)


@pytest.mark.parametrize("q, r", [
    (2, 1),
    (2, 2),
    (3, 2),
    pytest.param(2, 3, marks=pytest.mark.slow),
])
def test_pairing_table_is_identity(q, r):
    result = pairing_table(RVRing(field_of_size(q), r))
    size = q ** (r * (r - 1) // 2)
    table = result["table"]
    assert table.shape == (size, size)
    assert len(result["labels"]) == size
    assert [[table[a, b] for b in range(size)] for a in range(size)] == \
        [[1 if a == b else 0 for b in range(size)] for a in range(size)]
    assert result["ok"]


@pytest.mark.parametrize("q", [2, 3])
def test_mr_orthogonality(q):
    rows = mr_orthogonality(RVRing(field_of_size(q), 2))
    assert len(rows) == q * q
    assert all(row["ok"] for row in rows), [row for row in rows if not row["ok"]]


def test_dim_generators_matches_formula(ring_2_2):
    assert iv_dim_generators(ring_2_2, 4) == iv_dim_formula(2, 2, 4) == 3
