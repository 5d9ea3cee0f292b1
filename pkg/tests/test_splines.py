import numpy as np
import pytest
from scipy.interpolate import BSpline

from accesslens.splines import (bspline_basis, center_basis,
                                curvature_penalty, full_rank_penalty,
                                tensor_interaction)


def test_basis_partition_of_unity():
    x = np.linspace(0.0, 10.0, 200)
    for n_basis in (4, 5, 8):
        B, _ = bspline_basis(x, n_basis)
        assert B.shape == (200, n_basis)
        assert np.allclose(B.sum(axis=1), 1.0, atol=1e-12)
        assert (B >= -1e-14).all()


def test_curvature_penalty_matches_numerical_quadrature():
    x = np.linspace(-2.0, 3.0, 50)
    n_basis = 6
    B, knots = bspline_basis(x, n_basis)
    P = curvature_penalty(knots, n_basis)
    # oracle: dense trapezoid integration of second-derivative products
    grid = np.linspace(knots[3], knots[-4], 20001)
    degree = 3
    second = np.empty((grid.size, n_basis))
    for j in range(n_basis):
        coef = np.zeros(n_basis)
        coef[j] = 1.0
        second[:, j] = BSpline(knots, coef, degree).derivative(2)(grid)
    oracle = np.trapezoid(second[:, :, None] * second[:, None, :],
                          grid, axis=0)
    assert np.allclose(P, oracle, atol=1e-6)
    # symmetric positive semidefinite with the linear-polynomial null space
    assert np.allclose(P, P.T)
    eigvals = np.linalg.eigvalsh(P)
    assert eigvals[0] > -1e-10
    assert (eigvals < 1e-8).sum() == 2  # constants and linears bend nothing


def test_curvature_penalty_zero_for_linear_functions():
    x = np.linspace(0.0, 1.0, 30)
    n_basis = 5
    B, knots = bspline_basis(x, n_basis)
    # coefficients reproducing f(x) = 2x + 1 (linear => zero curvature)
    coef = np.linalg.lstsq(B, 2 * x + 1, rcond=None)[0]
    assert float(coef @ curvature_penalty(knots, n_basis) @ coef) == \
        pytest.approx(0.0, abs=1e-8)


def test_center_basis_columns_sum_to_zero():
    x = np.linspace(0.0, 1.0, 40)
    B, knots = bspline_basis(x, 5)
    P = curvature_penalty(knots, 5)
    Bc, Pc, _ = center_basis(B, P)
    assert Bc.shape == (40, 4)
    assert np.allclose(Bc.mean(axis=0), 0.0, atol=1e-12)
    assert Pc.shape == (4, 4)
    assert np.allclose(Pc, Pc.T)


def test_tensor_interaction_shapes_and_rowwise_product():
    rng = np.random.default_rng(0)
    x1, x2 = rng.uniform(0, 1, 60), rng.uniform(0, 1, 60)
    B1, k1 = bspline_basis(x1, 5)
    B2, k2 = bspline_basis(x2, 5)
    P1 = curvature_penalty(k1, 5)
    P2 = curvature_penalty(k2, 5)
    B1c, P1c, _ = center_basis(B1, P1)
    B2c, P2c, _ = center_basis(B2, P2)
    T, S = tensor_interaction(B1c, P1c, B2c, P2c)
    assert T.shape == (60, 16) and S.shape == (16, 16)
    # row-wise Kronecker structure
    assert np.allclose(T[7], np.kron(B1c[7], B2c[7]), atol=1e-12)


def test_tensor_penalty_full_rank_positive_definite():
    rng = np.random.default_rng(1)
    x1, x2 = rng.uniform(0, 1, 80), rng.uniform(0, 1, 80)
    B1, k1 = bspline_basis(x1, 5)
    B2, k2 = bspline_basis(x2, 5)
    B1c, P1c, _ = center_basis(B1, curvature_penalty(k1, 5))
    B2c, P2c, _ = center_basis(B2, curvature_penalty(k2, 5))
    _, S = tensor_interaction(B1c, P1c, B2c, P2c)
    eigvals = np.linalg.eigvalsh(S)
    assert eigvals[0] > 0  # floored: no null space survives
    assert np.allclose(S, S.T)


def test_full_rank_penalty_floors_null_space():
    S = np.diag([0.0, 1e-20, 2.0, 5.0])
    fixed = full_rank_penalty(S)
    eigvals = np.linalg.eigvalsh(fixed)
    assert eigvals[0] > 0
    # the positive part of the spectrum is untouched
    assert {2.0, 5.0} <= {round(v, 9) for v in eigvals}
