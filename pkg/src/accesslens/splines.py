"""Cubic spline bases, curvature penalties, and the interaction-only
tensor-product construction used by the regional regression."""

from __future__ import annotations

import numpy as np
from scipy.interpolate import BSpline
from scipy.linalg import null_space

# 3-point Gauss-Legendre on [-1, 1]: exact for degree-5 polynomials,
# more than enough for products of piecewise-linear second derivatives.
_GAUSS_X = np.array([-np.sqrt(3.0 / 5.0), 0.0, np.sqrt(3.0 / 5.0)])
_GAUSS_W = np.array([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])


def _knot_vector(lo: float, hi: float, n_basis: int, degree: int) -> np.ndarray:
    n_interior = n_basis - degree - 1
    if n_interior < 0:
        raise ValueError(f"n_basis must be >= {degree + 1}")
    interior = np.linspace(lo, hi, n_interior + 2)[1:-1]
    return np.concatenate([
        np.full(degree + 1, lo), interior, np.full(degree + 1, hi)
    ])


def bspline_basis(x: np.ndarray, n_basis: int, degree: int = 3
                  ) -> tuple[np.ndarray, np.ndarray]:
    """Open-uniform B-spline design matrix over the data range.

    Returns (B, knots) with B of shape (len(x), n_basis).  Data exactly at
    the upper boundary is supported.
    """
    x = np.asarray(x, dtype=float)
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        raise ValueError("degenerate coordinate range")
    knots = _knot_vector(lo, hi, n_basis, degree)
    B = BSpline.design_matrix(x, knots, degree, extrapolate=False).toarray()
    return B, knots


def curvature_penalty(knots: np.ndarray, n_basis: int,
                      degree: int = 3) -> np.ndarray:
    """Exact integrated squared-second-derivative penalty matrix."""
    unique = np.unique(knots)
    quad_x = []
    quad_w = []
    for a, b in zip(unique[:-1], unique[1:]):
        half = (b - a) / 2.0
        quad_x.append((a + b) / 2.0 + half * _GAUSS_X)
        quad_w.append(half * _GAUSS_W)
    xq = np.concatenate(quad_x)
    wq = np.concatenate(quad_w)
    D2 = np.empty((len(xq), n_basis))
    for j in range(n_basis):
        coeffs = np.zeros(n_basis)
        coeffs[j] = 1.0
        D2[:, j] = BSpline(knots, coeffs, degree).derivative(2)(xq)
    return (D2 * wq[:, None]).T @ D2


def center_basis(B: np.ndarray, P: np.ndarray
                 ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Apply the sum-to-zero constraint over the observed data.

    Reparameterizes so the constant function is removed from the span;
    returns (B_centered, P_centered, Z) where Z maps constrained
    coefficients back to the original basis.
    """
    mean_row = B.mean(axis=0, keepdims=True)
    Z = null_space(mean_row)
    return B @ Z, Z.T @ P @ Z, Z


def tensor_interaction(B1: np.ndarray, P1: np.ndarray,
                       B2: np.ndarray, P2: np.ndarray
                       ) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise tensor product of two centered marginal bases.

    Because each marginal excludes the constant, the product spans only
    functions that vary in both coordinates: the marginal main effects
    are excluded by construction.  Penalty: P1 (x) I + I (x) P2, made
    full-rank by flooring its null eigenvalues (see below), so sending
    the smoothing parameter to infinity shrinks the whole block to zero.
    """
    n = B1.shape[0]
    B = np.einsum("ni,nj->nij", B1, B2).reshape(n, -1)
    S = np.kron(P1, np.eye(P2.shape[0])) + np.kron(np.eye(P1.shape[0]), P2)
    return B, full_rank_penalty(S)


def full_rank_penalty(S: np.ndarray, rel_tol: float = 1e-10) -> np.ndarray:
    """Floor near-zero penalty eigenvalues to the smallest positive one.

    The tensor penalty's null space (functions linear in both coordinates)
    would otherwise escape penalization entirely, breaking the
    penalty -> infinity limit used as a diagnostic.
    """
    eigvals, eigvecs = np.linalg.eigh(S)
    floor = eigvals[eigvals > rel_tol * eigvals.max()].min()
    eigvals = np.maximum(eigvals, floor)
    return (eigvecs * eigvals) @ eigvecs.T
