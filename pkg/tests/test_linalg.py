import pytest

from src.errors import InfeasibleError, NotClosedError
from src.gfq import field_of_size
from src.linalg import (Flag, GroupElem, Subspace, coordinates_in, count_orbits_on_frames,
                        double_cosets, flags, frames, gaussian_binomial, generating_set, gl_order,
                        group_elements, index_P_UL, normalize, nullspace, p_subgroups,
                        projective_reps, rank, solve, standard_generators, subgroup_closure,
                        subspaces, vec_add, vec_scale)


@pytest.mark.parametrize("r, s, q, expected", [
    (3, 1, 2, 7),
    (3, 2, 2, 7),
    (4, 2, 2, 35),
    (2, 1, 3, 4),
    (3, 0, 5, 1),
    (2, 3, 2, 0),
])
def test_gaussian_binomial(r, s, q, expected):
    assert gaussian_binomial(r, s, q) == expected


@pytest.mark.parametrize("q, r", [(2, 3), (3, 2), (4, 2)])
def test_subspace_counts(q, r):
    field = field_of_size(q)
    subs = subspaces(r, field)
    assert len(subs) == sum(gaussian_binomial(r, s, q) for s in range(r + 1))
    assert len(set(subs)) == len(subs)
    for s in range(r + 1):
        assert len(subspaces(r, field, s)) == gaussian_binomial(r, s, q)


def test_projective_reps(F3):
    reps = projective_reps(2, F3)
    assert len(reps) == 4
    assert all(next(a for a in v if a) == 1 for v in reps)


def test_normalize(F3):
    alpha, rep = normalize(F3, (2, 1))
    assert rep == (1, 2)
    assert vec_scale(F3, alpha, rep) == (2, 1)
    with pytest.raises(ValueError):
        normalize(F3, (0, 0))


def test_rank_solve_nullspace(F3):
    A = [[1, 2, 0], [2, 1, 0], [0, 0, 1]]
    # second row is twice the first over F_3
    assert rank(A, F3) == 2
    kernel = nullspace(A, F3)
    assert len(kernel) == 1
    x = kernel[0]
    for row in A:
        assert F3.dot(row, x) == 0
    assert solve(A, (1, 2, 1), F3) is not None
    assert solve(A, (1, 0, 0), F3) is None


def test_coordinates_in(F2):
    vectors = [(1, 0, 1), (0, 1, 1)]
    assert coordinates_in(vectors, (1, 1, 0), F2) == (1, 1)
    assert coordinates_in(vectors, (0, 0, 1), F2) is None


def test_subspace_operations(F2):
    plane = Subspace.span(F2, 3, [(1, 1, 0), (0, 1, 1)])
    assert plane.dim == 2
    assert plane.contains((1, 0, 1))
    assert not plane.contains((1, 0, 0))
    line = Subspace.span(F2, 3, [(1, 0, 1)])
    assert line < plane
    assert (line + Subspace.coordinate(F2, 3, 1)).dim == 2
    assert (plane & Subspace.coordinate(F2, 3, 2)).dim == 1
    assert len(plane.projective_reps()) == 3
    comp = plane.complement_basis(line)
    assert len(comp) == 1
    v = vec_add(F2, comp[0], (1, 0, 1))
    assert plane.quotient_coordinates(line, comp, v) == (1,)


def test_flags(F2):
    assert len(flags(2, F2)) == 4
    complete = flags(3, F2, complete_only=True)
    assert len(complete) == 21
    assert all(F.is_complete for F in complete)
    assert Flag.standard(F2, 3) in complete
    F = Flag.of(F2, 3, [Subspace.coordinate(F2, 3, 1)])
    assert F.jumps == [1, 2]
    assert F.minimal_nonzero == Subspace.coordinate(F2, 3, 1)


def test_flag_must_increase(F2):
    zero, full = Subspace.zero(F2, 2), Subspace.full(F2, 2)
    with pytest.raises(ValueError):
        Flag((zero, full, full))


@pytest.mark.parametrize("kind, r, q, size", [
    ("GL", 2, 2, 6),
    ("GL", 2, 3, 48),
    ("SL", 2, 3, 24),
    ("U", 3, 2, 8),
    ("W", 3, 2, 4),
])
def test_group_elements(kind, r, q, size):
    G = group_elements(kind, r, field_of_size(q))
    assert len(G) == size
    assert len(set(G)) == size


def test_parabolic_and_levi(F2):
    assert len(group_elements("P", 3, F2, s=1)) == 4 * gl_order(2, 2)
    assert len(group_elements("L", 3, F2, s=1)) == 4 * gl_order(2, 2)


def test_group_cap(F3):
    with pytest.raises(InfeasibleError):
        group_elements("GL", 3, F3, cap=100)


def test_group_element_inverse(F3):
    for g in group_elements("GL", 2, F3):
        assert (g * g.inverse()).is_identity()


def test_p_subgroups_of_gl2_f2(F2):
    found = p_subgroups(group_elements("GL", 2, F2))
    # trivial group and the three subgroups of order 2
    assert sorted(len(H) for H in found) == [1, 2, 2, 2]


def test_generating_set_reproduces_group(F2):
    U = group_elements("U", 3, F2)
    gens = generating_set(U)
    assert set(subgroup_closure(gens)) == set(U)


def test_generating_set_rejects_non_subgroup(F2):
    G = group_elements("GL", 2, F2)
    not_closed = [GroupElem.identity(F2, 2)] + [g for g in G if g.order() == 3][:1]
    with pytest.raises(NotClosedError):
        generating_set(not_closed)


@pytest.mark.parametrize("s, expected", [(1, 1), (2, 3), (3, 21)])
def test_parabolic_index(F2, s, expected):
    # prod_{i<=s} (2^i - 1)
    assert index_P_UL(3, F2, s) == expected


def test_frames_are_cosets_of_levi(F2):
    G = group_elements("GL", 3, F2)
    for s in (1, 2):
        L = group_elements("L", 3, F2, s)
        assert len(frames(3, F2, s)) * len(L) == len(G)
    assert len(frames(3, F2, 2)) == 42


def test_orbits_on_frames_match_double_cosets(F2):
    G = group_elements("GL", 3, F2)
    U = group_elements("U", 3, F2)
    trivial = [GroupElem.identity(F2, 3)]
    for s in (1, 2, 3):
        L = group_elements("L", 3, F2, s)
        assert count_orbits_on_frames(U, 3, F2, s) == double_cosets(U, G, L)
        assert double_cosets(trivial, G, L) == len(G) // len(L)
    # nonzero vectors up to U: one orbit per leading position
    assert count_orbits_on_frames(U, 3, F2, 1) == 3


@pytest.mark.parametrize("kind, r, q, size", [("GL", 2, 3, 48), ("SL", 2, 3, 24), ("U", 3, 2, 8), ("GL", 2, 4, 180)])
def test_standard_generators(kind, r, q, size):
    assert len(subgroup_closure(standard_generators(kind, r, field_of_size(q)))) == size
    with pytest.raises(ValueError):
        standard_generators("W", r, field_of_size(q))


def test_annihilator(F2):
    line = Subspace.span(F2, 3, [(1, 0, 0)])
    assert line.annihilator() == Subspace.span(F2, 3, [(0, 1, 0), (0, 0, 1)])
    assert Subspace.full(F2, 3).annihilator().dim == 0
