import pytest

from src.bvariety import (BPoint, adapted_basis, blowup_fibers, boundary_order, boundary_orders_check,
                          bv_count_formula, bv_count_strata, bv_points, bv_points_bruteforce,
                          chart_from_point, chart_lambda, chart_roundtrip_check, chart_to_point,
                          charts_containing, divisor_boundary_check, in_BF, in_UF, is_bpoint,
                          mu_decompose, nonzero_subspaces, nu_compose, omega_bpoint, pi_P, pi_Q,
                          pi_Q_check, pi_Q_via_chart, stratification_check, stratum_flag)
from src.errors import InvalidPointError, NotInChartError
from src.gfq import extension, field_of_size
from src.linalg import Flag, Subspace, flags
from src.modular import omega_points, stratum_of


@pytest.mark.parametrize("q, r, m, expected", [
    (2, 2, 1, 3),
    (2, 2, 2, 5),
    (2, 3, 1, 21),
    (2, 3, 2, 49),
])
def test_bv_count_formula(q, r, m, expected):
    assert bv_count_formula(field_of_size(q), r, m) == expected


@pytest.mark.parametrize("m, expected", [(1, 21), (2, 49)])
def test_bv_points_rank_three(F2, m, expected):
    points = bv_points(F2, 3, extension(F2, m))
    assert len(points) == len(set(points)) == expected
    assert all(is_bpoint(pt)[0] for pt in points)


def test_strata_of_rank_three_over_f4(F2):
    counts = bv_count_strata(bv_points(F2, 3, extension(F2, 2)))
    by_jumps = {}
    for F, c in counts.items():
        by_jumps[tuple(F.jumps)] = by_jumps.get(tuple(F.jumps), 0) + c
    assert by_jumps == {(1, 2): 14, (2, 1): 14, (1, 1, 1): 21}


@pytest.mark.parametrize("r, m", [(2, 2), (2, 3), (3, 1)])
def test_bruteforce_agrees(F2, r, m):
    k = extension(F2, m)
    assert set(bv_points_bruteforce(F2, r, k)) == set(bv_points(F2, r, k))


def test_normalization(F2):
    k = extension(F2, 2)
    with pytest.raises(InvalidPointError):
        BPoint.from_functionals(F2, k, 2, lambda sub: (0,) * sub.dim)


def test_omega_point_lies_on_open_stratum(F2):
    k = extension(F2, 2)
    lam = omega_points(F2, 2, k)[0]
    pt = omega_bpoint(lam)
    assert is_bpoint(pt)[0]
    F = stratum_flag(pt)
    assert len(F.members) == 2
    assert in_BF(pt, F) and in_UF(pt, F)
    assert pi_P(pt) == lam


def test_rational_hyperplane_leaves_standard_chart(F2):
    k = extension(F2, 2)
    subs = nonzero_subspaces(2, F2)
    # E_V = X_2
    phis = []
    for sub in subs:
        if sub.dim == 2:
            phis.append((1, 0))
        else:
            phis.append((1,))
    pt = BPoint(F2, k, 2, tuple(phis))
    assert is_bpoint(pt)[0]
    assert not in_UF(pt, Flag.standard(F2, 2))
    assert stratum_flag(pt) == Flag.of(F2, 2, [Subspace.span(F2, 2, [(0, 1)])])


@pytest.mark.parametrize("r, m", [(2, 2), (3, 1), (3, 2)])
def test_mu_nu_roundtrip(F2, r, m):
    k = extension(F2, m)
    for pt in bv_points(F2, r, k):
        F = stratum_flag(pt)
        parts = mu_decompose(pt, F)
        assert len(parts) == len(F.members) - 1
        assert nu_compose(parts, F) == pt


def test_mu_decompose_needs_closed_stratum(F2):
    k = extension(F2, 2)
    pt = omega_bpoint(omega_points(F2, 2, k)[0])
    with pytest.raises(InvalidPointError):
        mu_decompose(pt, Flag.standard(F2, 2))


@pytest.mark.parametrize("r, m", [(2, 2), (3, 2)])
def test_stratification_check(F2, r, m):
    rows = stratification_check(F2, r, extension(F2, m))
    assert all(row["ok"] for row in rows), rows


def test_adapted_basis(F2):
    assert adapted_basis(Flag.standard(F2, 3)) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    with pytest.raises(ValueError):
        adapted_basis(Flag.of(F2, 3))


def test_standard_chart_rank_two(F2):
    k = extension(F2, 2)
    F = Flag.standard(F2, 2)
    boundary = chart_to_point(F, (0,), k)
    assert stratum_flag(boundary) == F
    assert chart_from_point(boundary, F) == (0,)
    inner = chart_to_point(F, (2,), k)
    assert len(stratum_flag(inner).members) == 2
    # a rational nonzero coordinate puts E_V on the rational line X_1 + X_2
    with pytest.raises(NotInChartError):
        chart_to_point(F, (1,), k)


def test_chart_coordinate_count(F2):
    with pytest.raises(ValueError):
        chart_to_point(Flag.standard(F2, 3), (0,), F2)


@pytest.mark.parametrize("r, m", [(2, 2), (3, 1), (3, 2)])
def test_chart_roundtrip_and_cover(F2, r, m):
    rows = chart_roundtrip_check(F2, r, extension(F2, m))
    assert [row["check"] for row in rows] == ["chart roundtrip", "chart cover"]
    assert all(row["ok"] for row in rows), rows


def test_every_point_has_a_chart(F2):
    for pt in bv_points(F2, 3, F2):
        assert charts_containing(pt) == [stratum_flag(pt)]


@pytest.mark.parametrize("r, m", [(2, 2), (3, 2)])
def test_pi_Q(F2, r, m):
    rows = pi_Q_check(F2, r, extension(F2, m))
    assert all(row["ok"] for row in rows), rows


def test_pi_Q_on_closed_point(F2):
    F = Flag.standard(F2, 3)
    pt = chart_to_point(F, (0, 0), F2)
    image = pi_Q(pt)
    assert stratum_of(image) == Subspace.coordinate(F2, 3, 1)
    assert pi_Q_via_chart(pt, F) == image


def test_chart_lambda(F2, F3):
    # lambda(X_1) = (-a_1)(-a_2), lambda(X_3) = 1
    assert chart_lambda(F3, 3, (1, 0, 0)).terms == {(1, 1): 1}
    assert chart_lambda(F3, 3, (0, 0, 1)).terms == {(0, 0): 1}
    assert chart_lambda(F3, 3, (0, 1, 0)).terms == {(0, 1): F3.neg(1)}
    assert chart_lambda(F2, 2, (1, 1)).terms == {(1,): 1, (0,): 1}


def test_boundary_order(F2):
    ref = (1, 0, 0)
    assert boundary_order(F2, 3, (0, 0, 1), ref, 1) == 1
    assert boundary_order(F2, 3, (1, 0, 0), ref, 1) == 0
    assert boundary_order(F2, 3, (1, 1, 0), ref, 2) == 0
    with pytest.raises(ValueError):
        boundary_order(F2, 3, (0, 0, 1), (0, 1, 0), 1)


@pytest.mark.parametrize("q, r", [(2, 2), (2, 3), (3, 3)])
def test_boundary_orders_check(q, r):
    rows = boundary_orders_check(field_of_size(q), r)
    assert rows[-1]["check"] == "I_V generators"
    assert all(row["ok"] for row in rows), rows


@pytest.mark.parametrize("r", [2, 3])
def test_divisor_boundary(F2, r):
    rows = divisor_boundary_check(F2, r, extension(F2, 2))
    assert all(row["ok"] for row in rows), rows


@pytest.mark.parametrize("r, m", [(2, 2), (3, 1)])
def test_blowup_fibers(F2, r, m):
    rows = blowup_fibers(F2, r, extension(F2, m))
    assert all(row["ok"] for row in rows), rows


def test_blowup_fibre_sizes_rank_three(F2):
    rows = blowup_fibers(F2, 3, F2)
    assert len(rows) == 7
    assert all(row["kernel_dim"] == 2 and row["fibre"] == 3 for row in rows)


def test_flags_index_the_strata(F2):
    assert len(flags(3, F2)) == 1 + 7 + 7 + 21
