"""Independent reference implementations used to pin expected test values.

Everything here is deliberately written with different algorithms than the
package: projected gradient instead of coordinate descent, dense triple
loops instead of sparse contraction, active-set enumeration instead of
bisection.  Slow and simple on purpose.
"""

from __future__ import annotations

from itertools import product

import numpy as np


def pg_lasso(X: np.ndarray, y: np.ndarray, lam: float, *,
             fit_intercept: bool = True, iters: int = 40000,
             ) -> tuple[np.ndarray, float, float]:
    """Projected gradient for min_{w>=0,b} 1/2||y - Xw - b||^2 + lam*sum(w).

    The intercept is eliminated exactly by centering, so the iteration is
    plain projected gradient on a convex quadratic with step 1/L.
    Returns (w, b, objective).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if fit_intercept:
        Xc = X - X.mean(axis=0)
        yc = y - y.mean()
    else:
        Xc, yc = X, y
    m = X.shape[1]
    w = np.zeros(m)
    if Xc.size:
        L = float(np.linalg.norm(Xc, 2)) ** 2
    else:
        L = 0.0
    if L > 0:
        step = 1.0 / L
        for _ in range(iters):
            grad = Xc.T @ (Xc @ w - yc) + lam
            w_new = np.maximum(0.0, w - step * grad)
            if np.max(np.abs(w_new - w)) < 1e-14:
                w = w_new
                break
            w = w_new
    b = float(np.mean(y - X @ w)) if fit_intercept else 0.0
    r = y - X @ w - b
    return w, b, 0.5 * float(r @ r) + lam * float(w.sum())


def dense_tensor(entries: dict, C: int, G: int) -> np.ndarray:
    """Materialize the sparse entries into a dense C x C x G array."""
    W = np.zeros((C, C, G))
    for (n, m, l), count in entries.items():
        W[n, m, l - C] = count
    return W


def acq_dense(W: np.ndarray, x: np.ndarray) -> float:
    """Literal ordered triple sum over the dense tensor."""
    C, _, G = W.shape
    total = 0.0
    for n in range(C):
        for m in range(C):
            for l in range(G):
                total += W[n, m, l] * x[n] * x[m] * x[C + l]
    return total


def fd_gradient(f, x: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central finite differences of a scalar function."""
    g = np.zeros_like(x, dtype=float)
    for i in range(len(x)):
        e = np.zeros_like(g)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def qp_project(y: np.ndarray, w: np.ndarray, c: float) -> np.ndarray:
    """Exact projection onto {x in [0,1]^N : w.x <= c} by face enumeration.

    For every pattern assigning each coordinate to {at 0, at 1, free},
    solve the equality-constrained minimizer with the budget inactive and
    active, keep the feasible candidates, and return the closest to y.
    Exponential in N; intended for N <= 6.
    """
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    n = len(y)
    best, best_d = None, np.inf

    def consider(x: np.ndarray) -> None:
        nonlocal best, best_d
        if np.any(x < -1e-12) or np.any(x > 1 + 1e-12):
            return
        if float(w @ x) > c + 1e-12:
            return
        d = float(np.sum((x - y) ** 2))
        if d < best_d - 1e-15:
            best, best_d = x.copy(), d

    for pattern in product((0, 1, 2), repeat=n):
        pattern = np.array(pattern)
        free = pattern == 2
        x = np.where(pattern == 1, 1.0, 0.0)
        # budget inactive on this face
        x_try = x.copy()
        x_try[free] = y[free]
        consider(x_try)
        # budget active: x_free = y_free - mu * w_free with w.x = c
        wf = w[free]
        denom = float(wf @ wf)
        if denom > 0:
            fixed_cost = float(w[~free] @ x[~free])
            mu = (float(wf @ y[free]) + fixed_cost - c) / denom
            if mu >= -1e-12:
                x_try = x.copy()
                x_try[free] = y[free] - mu * wf
                consider(x_try)
    assert best is not None, "projection oracle found no feasible point"
    return best


def confusion_metrics(tp: int, fp: int, tn: int, fn: int) -> tuple[float, float]:
    """(accuracy, f1) by the textbook formulas."""
    total = tp + fp + tn + fn
    accuracy = (tp + tn) / total if total else 0.0
    prec = tp / (tp + fp) if tp + fp else 0.0
    rec = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
    return accuracy, f1
