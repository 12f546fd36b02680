import pytest

from src.errors import InfeasibleError
from src.graded import GradedSpan, evaluation_field, monomials
from src.linalg import small_generators
from src.ratfun import LinFrac


def test_monomials():
    assert monomials(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(monomials(3, 4)) == 15
    assert monomials(0, 0) == [()]
    assert monomials(0, 1) == []


def test_evaluation_field_size(F2, F3):
    assert evaluation_field(F2).q == 4096
    assert evaluation_field(F3).q >= 4096


def test_reciprocals_span_degree_one(ring_2_2):
    span = ring_2_2.reciprocals_span()
    assert len(span) == 3
    assert span.rank() == ring_2_2.hilbert_h(1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_methods_agree(ring_2_2, n):
    numerator = ring_2_2.graded_basis(n, "numerator")
    evaluation = ring_2_2.graded_basis(n, "evaluation")
    assert numerator.method == "numerator"
    assert evaluation.method == "evaluation"
    assert numerator.rank() == evaluation.rank() == ring_2_2.hilbert_h(n)


@pytest.mark.parametrize("method", ["numerator", "evaluation"])
def test_solve_roundtrip(ring_2_2, method):
    basis = ring_2_2.graded_basis(2, method)
    x = ring_2_2.gen_recip((1, 1)) * ring_2_2.gen_recip((0, 1))
    coeffs = basis.solve(x)
    assert coeffs is not None
    combo = LinFrac.sum([basis.element(j).scale(c) for j, c in enumerate(coeffs) if c])
    assert combo == x


def test_solve_rejects_wrong_degree(ring_2_2):
    basis = ring_2_2.graded_basis(2)
    assert basis.solve(ring_2_2.gen_recip((1, 0))) is None


def test_fixed_space_under_unipotent_group(ring_2_2, F2):
    gens = small_generators("U", 2, F2)
    # the U-invariants of degree -n are the f-monomials of that degree
    for n in range(4):
        assert ring_2_2.graded_basis(n).fixed_space_dim(gens) == n + 1


def test_group_matrix_shape(ring_2_2, F2):
    g = small_generators("U", 2, F2)[0]
    basis = ring_2_2.graded_basis(2)
    C = basis.matrix_of(g)
    assert C.shape == (len(basis), len(basis))


def test_unknown_method(ring_2_2):
    with pytest.raises(ValueError):
        GradedSpan.from_elements(ring_2_2.field, 2, 1, [ring_2_2.gen_recip((1, 0))], method="guess")


def test_cap(ring_2_2):
    atoms = [ring_2_2.gen_recip((1, 0))]
    with pytest.raises(InfeasibleError):
        GradedSpan(ring_2_2.field, 2, 1, atoms, [(0,)] * 5, cap=4)
