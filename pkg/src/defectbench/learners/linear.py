"""Linear-family learners: logistic regression, ridge regression, linear SVM.

All three operate on standardized features with an explicit intercept and
score with the linear predictor, so higher scores mean more likely faulty.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

MAX_IRLS_ITER = 100
IRLS_TOL = 1e-8
RIDGE_JITTER = 1e-8


@dataclass
class LinearModel:
    coef: np.ndarray       # weights on standardized features
    intercept: float
    converged: bool = True
    iterations: int = 0

    def score(self, x_std: np.ndarray) -> np.ndarray:
        return x_std @ self.coef + self.intercept


def _sigmoid(eta: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(eta, -35.0, 35.0)))


def fit_logistic(x_std: np.ndarray, labels: np.ndarray, hp: dict, rng_seed: int) -> LinearModel:
    """Iteratively reweighted least squares with a small ridge jitter.

    The jitter keeps the normal equations solvable on separable data; the
    model is still returned (flagged) if the deviance has not settled after
    the iteration cap.
    """
    y = (labels == 1).astype(float)
    n, p = x_std.shape
    design = np.column_stack([np.ones(n), x_std])
    beta = np.zeros(p + 1)
    jitter = RIDGE_JITTER * np.eye(p + 1)
    prev_dev = np.inf
    converged = False
    it = 0
    for it in range(1, MAX_IRLS_ITER + 1):
        eta = design @ beta
        mu = _sigmoid(eta)
        wgt = np.maximum(mu * (1.0 - mu), 1e-10)
        z = eta + (y - mu) / wgt
        wx = design * wgt[:, None]
        beta = np.linalg.solve(design.T @ wx + jitter, wx.T @ z)
        mu = _sigmoid(design @ beta)
        dev = -2.0 * float(np.sum(y * np.log(np.maximum(mu, 1e-300))
                                  + (1.0 - y) * np.log(np.maximum(1.0 - mu, 1e-300))))
        if abs(prev_dev - dev) < IRLS_TOL:
            converged = True
            break
        prev_dev = dev
    return LinearModel(coef=beta[1:], intercept=float(beta[0]),
                       converged=converged, iterations=it)


def fit_ridge(x_std: np.ndarray, labels: np.ndarray, hp: dict, rng_seed: int) -> LinearModel:
    """Closed-form ridge regression on the ±1 labels; intercept unpenalized."""
    lam = float(hp.get("lambda", 1.0))
    n, p = x_std.shape
    design = np.column_stack([np.ones(n), x_std])
    penalty = lam * np.eye(p + 1)
    penalty[0, 0] = 0.0
    beta = np.linalg.solve(design.T @ design + penalty, design.T @ labels.astype(float))
    return LinearModel(coef=beta[1:], intercept=float(beta[0]))


def fit_linear_svm(x_std: np.ndarray, labels: np.ndarray, hp: dict, rng_seed: int) -> LinearModel:
    """L2-regularized squared-hinge SVM, solved with L-BFGS."""
    c = float(hp.get("c", 1.0))
    y = labels.astype(float)
    n, p = x_std.shape

    def objective(theta):
        w, b = theta[:p], theta[p]
        margin = 1.0 - y * (x_std @ w + b)
        active = np.maximum(margin, 0.0)
        obj = 0.5 * w @ w + c * np.sum(active**2)
        g_margin = -2.0 * c * active * y
        grad_w = w + x_std.T @ g_margin
        grad_b = np.sum(g_margin)
        return obj, np.concatenate([grad_w, [grad_b]])

    res = minimize(objective, np.zeros(p + 1), jac=True, method="L-BFGS-B",
                   options={"maxiter": 500, "ftol": 1e-12, "gtol": 1e-9})
    return LinearModel(coef=res.x[:p], intercept=float(res.x[p]),
                       converged=bool(res.success), iterations=int(res.nit))
