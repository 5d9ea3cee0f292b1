"""Penalized additive regression of regional sentiment on covariates.

Model: y = [1, X] beta + B_ti(lat, lng) alpha + Z_state gamma + eps, with

* an unpenalized linear block over standardized covariates,
* a tensor-product interaction smoother over region centroids built from
  cubic spline marginals with their main effects removed, and
* state random intercepts realized as a ridge-penalized indicator block
  (the usual random-intercept-as-penalized-spline equivalence).

Smoothing parameters are chosen by generalized cross-validation with a
golden-section search per penalty block.  Effective degrees of freedom
are traces of the corresponding influence-matrix blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg, stats

from .regions import RegionRecord
from .splines import bspline_basis, center_basis, curvature_penalty, \
    tensor_interaction

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class GamError(RuntimeError):
    pass


def _golden_section(fun, lo: float, hi: float, tol: float = 1e-3,
                    max_iter: int = 60) -> float:
    """Minimize a unimodal scalar function on [lo, hi]."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(max_iter):
        if abs(b - a) < tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fun(d)
    return (a + b) / 2.0


class PenalizedGam:
    """Penalized least squares fit with GCV-selected smoothing.

    ``lambda_ti`` / ``lambda_state`` fix a block's smoothing parameter
    when given (useful for the penalty -> infinity diagnostic); None
    selects it by GCV.
    """

    def __init__(self, n_marginal_basis: int = 5,
                 lambda_ti: float | None = None,
                 lambda_state: float | None = None,
                 log10_lambda_bounds: tuple[float, float] = (-6.0, 12.0),
                 gcv_sweeps: int = 2) -> None:
        self.n_marginal_basis = n_marginal_basis
        self.lambda_ti = lambda_ti
        self.lambda_state = lambda_state
        self.log10_lambda_bounds = log10_lambda_bounds
        self.gcv_sweeps = gcv_sweeps

    def get_params(self, deep: bool = True) -> dict:
        return {k: v for k, v in vars(self).items() if not k.endswith("_")}

    # -- fitting -----------------------------------------------------------

    def fit(self, X: np.ndarray, y: np.ndarray, lat: np.ndarray,
            lng: np.ndarray, states: Sequence[str]) -> "PenalizedGam":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        n = len(y)
        lin = np.hstack([np.ones((n, 1)), X])

        B_lat, knots_lat = bspline_basis(lat, self.n_marginal_basis)
        B_lng, knots_lng = bspline_basis(lng, self.n_marginal_basis)
        P_lat = curvature_penalty(knots_lat, self.n_marginal_basis)
        P_lng = curvature_penalty(knots_lng, self.n_marginal_basis)
        B_lat, P_lat, _ = center_basis(B_lat, P_lat)
        B_lng, P_lng, _ = center_basis(B_lng, P_lng)
        B_ti, S_ti = tensor_interaction(B_lat, P_lat, B_lng, P_lng)

        self.state_levels_ = sorted(set(states))
        state_index = {s: j for j, s in enumerate(self.state_levels_)}
        Z = np.zeros((n, len(self.state_levels_)))
        for i, s in enumerate(states):
            Z[i, state_index[s]] = 1.0

        C = np.hstack([lin, B_ti, Z])
        p_lin, p_ti, p_state = lin.shape[1], B_ti.shape[1], Z.shape[1]
        if n <= p_lin + p_ti + p_state:
            raise GamError(
                f"sample size {n} too small for {p_lin + p_ti + p_state} "
                "model dimensions")
        self._slices_ = {
            "linear": slice(0, p_lin),
            "spatial": slice(p_lin, p_lin + p_ti),
            "state": slice(p_lin + p_ti, p_lin + p_ti + p_state),
        }
        CtC = C.T @ C
        Cty = C.T @ y
        yty = float(y @ y)

        def penalty(lam_ti: float, lam_state: float) -> np.ndarray:
            S = np.zeros_like(CtC)
            sl = self._slices_["spatial"]
            S[sl, sl] = lam_ti * S_ti
            st = self._slices_["state"]
            S[st, st] = lam_state * np.eye(p_state)
            return S

        def solve(lam_ti: float, lam_state: float):
            A = CtC + penalty(lam_ti, lam_state)
            try:
                cho = linalg.cho_factor(A)
            except linalg.LinAlgError as exc:
                raise GamError(
                    f"singular penalized system ({self._culprit(A)})"
                ) from exc
            theta = linalg.cho_solve(cho, Cty)
            M = linalg.cho_solve(cho, CtC)
            rss = yty - 2.0 * theta @ Cty + theta @ CtC @ theta
            rss = max(float(rss), 0.0)
            return theta, rss, M, cho

        def gcv(lam_ti: float, lam_state: float) -> float:
            _, rss, M, _ = solve(lam_ti, lam_state)
            edf = float(np.trace(M))
            return n * rss / (n - edf) ** 2

        lo, hi = self.log10_lambda_bounds
        log_ti = math.log10(self.lambda_ti) if self.lambda_ti else 0.0
        log_state = math.log10(self.lambda_state) if self.lambda_state else 0.0
        for _ in range(self.gcv_sweeps):
            if self.lambda_ti is None:
                log_ti = _golden_section(
                    lambda v: gcv(10.0 ** v, 10.0 ** log_state), lo, hi)
            if self.lambda_state is None:
                log_state = _golden_section(
                    lambda v: gcv(10.0 ** log_ti, 10.0 ** v), lo, hi)
            if self.lambda_ti is not None and self.lambda_state is not None:
                break
        self.lambda_ti_ = 10.0 ** log_ti
        self.lambda_state_ = 10.0 ** log_state

        theta, rss, M, cho = solve(self.lambda_ti_, self.lambda_state_)
        self.coef_ = theta
        self.fitted_ = C @ theta
        self.residuals_ = y - self.fitted_
        self.edf_ = {name: float(np.trace(M[sl, sl]))
                     for name, sl in self._slices_.items()}
        self.edf_total_ = float(np.trace(M))
        dof_resid = n - self.edf_total_
        self.sigma2_ = rss / dof_resid
        Ainv = linalg.cho_solve(cho, np.eye(CtC.shape[0]))
        self.cov_ = self.sigma2_ * Ainv
        se = np.sqrt(np.diag(self.cov_))
        lin_sl = self._slices_["linear"]
        self.se_lin_ = se[lin_sl]
        z = theta[lin_sl] / self.se_lin_
        self.pvalues_lin_ = 2.0 * stats.norm.sf(np.abs(z))
        self.leverage_ = np.einsum("ij,ij->i", C @ Ainv, C)
        tss = float(((y - y.mean()) ** 2).sum())
        self.r2_ = 1.0 - rss / tss if tss > 0 else float("nan")
        self.adj_r2_ = 1.0 - (rss / dof_resid) / (tss / (n - 1)) \
            if tss > 0 else float("nan")
        self.rss_ = rss
        self.n_ = n
        self.state_effects_ = dict(zip(self.state_levels_,
                                       theta[self._slices_["state"]]))
        return self

    @staticmethod
    def _culprit(A: np.ndarray) -> str:
        eigvals, eigvecs = np.linalg.eigh(A)
        j = int(np.abs(eigvecs[:, 0]).argmax())
        return f"smallest eigenvalue {eigvals[0]:.3e} at column {j}"

    @property
    def linear_coef_(self) -> np.ndarray:
        return self.coef_[self._slices_["linear"]]


# -- influence diagnostics --------------------------------------------------

def cooks_threshold(n: int, k: int) -> float:
    """4 / (n - k - 1), k = number of independent variables."""
    return 4.0 / (n - k - 1)


def cooks_distance(model: PenalizedGam) -> np.ndarray:
    """Per-observation influence from the penalized fit's leverage and
    standardized residuals."""
    h = np.clip(model.leverage_, 0.0, 1.0 - 1e-12)
    r2 = model.residuals_ ** 2 / (model.sigma2_ * (1.0 - h))
    return r2 * h / (model.edf_total_ * (1.0 - h))


# -- high-level fitting over region records ---------------------------------

@dataclass
class GamSpec:
    covariates: list[str]
    n_marginal_basis: int = 5
    lambda_ti: float | None = None
    lambda_state: float | None = None
    prune_outliers: bool = True
    gcv_sweeps: int = 2


@dataclass(frozen=True)
class CoefficientRow:
    name: str
    estimate: float
    se: float
    pvalue: float
    stars: str


@dataclass
class GamFit:
    coefficients: list[CoefficientRow]
    edf_spatial: float
    edf_state: float
    r2: float
    adj_r2: float
    n: int
    removed_outliers: int
    lambda_ti: float
    lambda_state: float
    cooks_threshold: float | None = None
    standardization: dict = field(default_factory=dict)

    def coefficient(self, name: str) -> CoefficientRow:
        for row in self.coefficients:
            if row.name == name:
                return row
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "coefficients": [vars(c) for c in self.coefficients],
            "edf": {"spatial": self.edf_spatial, "state": self.edf_state},
            "r2": self.r2,
            "adj_r2": self.adj_r2,
            "n": self.n,
            "removed_outliers": self.removed_outliers,
            "lambda": {"spatial": self.lambda_ti, "state": self.lambda_state},
            "cooks_threshold": self.cooks_threshold,
            "standardization": self.standardization,
        }


def significance_stars(p: float) -> str:
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""


def _design_from_regions(regions: Sequence[RegionRecord],
                         covariates: list[str]):
    rows = [r for r in regions if r.included and r.sentiment is not None]
    if not rows:
        raise GamError("no included regions to fit")
    for r in rows:
        if not r.state:
            raise GamError(f"region {r.region_id} has no state code")
        missing = [c for c in covariates if c not in r.covariates]
        if missing:
            raise GamError(f"region {r.region_id} missing covariates "
                           f"{missing}")
    X = np.array([[r.covariates[c] for c in covariates] for r in rows])
    y = np.array([r.sentiment for r in rows])
    lat = np.array([r.centroid_lat for r in rows])
    lng = np.array([r.centroid_lng for r in rows])
    states = [r.state for r in rows]
    return X, y, lat, lng, states


def standardize(X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    mean = X.mean(axis=0)
    sd = X.std(axis=0)
    if np.any(sd == 0):
        raise GamError("constant covariate column cannot be standardized")
    return (X - mean) / sd, mean, sd


def _fit_arrays(X, y, lat, lng, states, spec: GamSpec) -> PenalizedGam:
    model = PenalizedGam(
        n_marginal_basis=spec.n_marginal_basis,
        lambda_ti=spec.lambda_ti,
        lambda_state=spec.lambda_state,
        gcv_sweeps=spec.gcv_sweeps,
    )
    return model.fit(X, y, lat, lng, states)


def fit_gam(regions: Sequence[RegionRecord], spec: GamSpec
            ) -> tuple[GamFit, PenalizedGam]:
    """Standardize covariates, fit, optionally prune influential points
    once (fit -> prune -> refit, single pass), and package the report."""
    X_raw, y, lat, lng, states = _design_from_regions(regions,
                                                      spec.covariates)
    X, mean, sd = standardize(X_raw)
    model = _fit_arrays(X, y, lat, lng, states, spec)
    removed = 0
    threshold = None
    if spec.prune_outliers:
        threshold = cooks_threshold(len(y), len(spec.covariates))
        distances = cooks_distance(model)
        keep = distances <= threshold
        removed = int((~keep).sum())
        if removed:
            X_raw = X_raw[keep]
            y = y[keep]
            lat = lat[keep]
            lng = lng[keep]
            states = [s for s, k in zip(states, keep) if k]
            X, mean, sd = standardize(X_raw)
            model = _fit_arrays(X, y, lat, lng, states, spec)
    names = ["(Intercept)", *spec.covariates]
    coefficients = [
        CoefficientRow(name=name, estimate=float(est), se=float(se),
                       pvalue=float(p), stars=significance_stars(float(p)))
        for name, est, se, p in zip(names, model.linear_coef_,
                                    model.se_lin_, model.pvalues_lin_)
    ]
    fit = GamFit(
        coefficients=coefficients,
        edf_spatial=model.edf_["spatial"],
        edf_state=model.edf_["state"],
        r2=model.r2_,
        adj_r2=model.adj_r2_,
        n=model.n_,
        removed_outliers=removed,
        lambda_ti=model.lambda_ti_,
        lambda_state=model.lambda_state_,
        cooks_threshold=threshold,
        standardization={c: {"mean": float(m), "sd": float(s)}
                         for c, m, s in zip(spec.covariates, mean, sd)},
    )
    return fit, model


@dataclass
class SensitivityResult:
    rows: list  # (threshold, n, {coef name: estimate})
    skipped: list[tuple[int, int]]  # (threshold, n available)
    stability: float  # max coefficient change between consecutive fits >= 10


def threshold_sensitivity(regions: Sequence[RegionRecord],
                          spec: GamSpec,
                          thresholds: Sequence[int] = tuple(range(0, 51, 5)),
                          floor: int | None = None) -> SensitivityResult:
    """Refit the linear coefficients while sweeping the minimum-review
    threshold; thresholds leaving too few regions are skipped."""
    rows = []
    skipped = []
    for t in thresholds:
        subset = []
        for r in regions:
            if r.sentiment is None or r.n_reviews < t:
                continue
            clone = RegionRecord(**{**vars(r), "included": True})
            subset.append(clone)
        min_n = floor if floor is not None else (
            len(spec.covariates) + 1
            + (spec.n_marginal_basis - 1) ** 2
            + len({r.state for r in subset}) + 5
        )
        if len(subset) < min_n:
            skipped.append((t, len(subset)))
            continue
        sweep_spec = GamSpec(**{**vars(spec), "prune_outliers": False})
        fit, _ = fit_gam(subset, sweep_spec)
        rows.append((t, fit.n,
                     {c.name: c.estimate for c in fit.coefficients}))
    stability = 0.0
    fitted = [(t, coefs) for t, _, coefs in rows if t >= 10]
    for (_, prev), (_, cur) in zip(fitted, fitted[1:]):
        delta = max(abs(cur[name] - prev[name]) for name in cur)
        stability = max(stability, delta)
    return SensitivityResult(rows=rows, skipped=skipped, stability=stability)


def format_fit_report(fit: GamFit, title: str = "Regression outcomes "
                      "(standardized)") -> str:
    """Human-readable coefficient table with significance codes."""
    lines = [title, "=" * len(title)]
    lines.append(f"{'Variable':<24}{'Estimate':>12}{'Std.Err':>12}"
                 f"{'p-value':>12}  ")
    for row in fit.coefficients:
        lines.append(f"{row.name:<24}{row.estimate:>12.4f}{row.se:>12.4f}"
                     f"{row.pvalue:>12.4g}  {row.stars}")
    lines.append(f"{'ti(Lat,Lng) e.d.f.':<24}{fit.edf_spatial:>12.3f}")
    lines.append(f"{'s(State) e.d.f.':<24}{fit.edf_state:>12.3f}")
    lines.append(f"{'Adjusted R2':<24}{fit.adj_r2:>12.4f}")
    lines.append(f"{'R2':<24}{fit.r2:>12.4f}")
    lines.append(f"{'Sample size':<24}{fit.n:>12d}")
    lines.append(f"{'Outliers removed':<24}{fit.removed_outliers:>12d}")
    lines.append("Significance codes: 0 '***' 0.001 '**' 0.01 '*' 0.05 '' 1")
    return "\n".join(lines) + "\n"
