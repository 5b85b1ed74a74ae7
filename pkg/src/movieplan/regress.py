"""Non-negative Lasso budget and gross estimators.

Both models are linear with an unpenalized intercept and coefficients
constrained to be >= 0:

    budget(x) = w_b . x + b_b              (M = N)
    gross(B, x) = w_g[0]*B + w_g[1:] . x + b_g   (M = N + 1)

fitted by minimizing

    f(w, b) = 1/2 ||y - X w - b||^2 + lam * sum(w)

with cyclic coordinate descent.  The per-coordinate minimizer under
w_j >= 0 is the non-negative soft threshold

    w_j <- max(0, (rho_j - lam) / z_j),   rho_j = x_j . (r + w_j x_j)

with z_j = x_j . x_j; the intercept is refreshed to the residual mean at
the start of every sweep, so a constant target is absorbed by b alone.
Binary features are left unstandardized on purpose: each weight reads
directly as a per-person (or per-genre) contribution in million USD.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .library import CREW_ROLES, FeatureIndex, KnowledgeLibrary, MovieRecord, vectorize

MODEL_KINDS = ("budget", "gross")

# Ablation groups: model name -> role block (None = all feature columns).
FEATURE_GROUPS = ("ALL", "Genre", "Actor", "Actress", "Writer", "Director")
_GROUP_ROLE = {"Genre": "genre", "Actor": "actor", "Actress": "actress",
               "Writer": "writer", "Director": "director"}


@dataclass(frozen=True)
class FitConfig:
    """Solver settings: l1 strength, sweep cap, convergence threshold."""

    lam: float = 0.1
    max_iters: int = 1000
    tol: float = 1e-7

    def __post_init__(self) -> None:
        if self.lam < 0:
            raise ValueError("lam must be >= 0")
        if self.tol <= 0:
            raise ValueError("tol must be > 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass(frozen=True)
class LinearModel:
    """Fitted non-negative linear model.

    ``kind`` is "budget" or "gross"; gross models carry one extra leading
    weight for the budget feature, so ``weights[0]`` multiplies B and
    ``weights[1:]`` align with the feature index.
    """

    kind: str
    weights: np.ndarray
    intercept: float
    lam: float
    block_sizes: tuple[int, int, int, int, int] | None = None
    n_sweeps: int = field(default=0, compare=False)
    objective_trace: tuple[float, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"bad model kind {self.kind!r}")
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be a finite non-negative vector")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "intercept", float(self.intercept))

    @property
    def n_features(self) -> int:
        """Configuration dimension N (excludes the gross budget slot)."""
        return len(self.weights) - (1 if self.kind == "gross" else 0)

    def feature_weights(self) -> np.ndarray:
        """Weights aligned with the feature index (budget slot stripped)."""
        return self.weights[1:] if self.kind == "gross" else self.weights


def _check_design(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ValueError("X must be n x M with matching length-n targets")
    if X.shape[0] < 2:
        raise ValueError("need at least 2 samples")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValueError("non-finite values in input")
    return X, y


def fit_nn_lasso(
    X: np.ndarray,
    y: np.ndarray,
    cfg: FitConfig,
    *,
    kind: str = "budget",
    block_sizes: tuple[int, int, int, int, int] | None = None,
    fit_intercept: bool = True,
) -> LinearModel:
    """Cyclic coordinate descent for the non-negative Lasso.

    Stops when the largest parameter change in a sweep drops below
    ``cfg.tol`` or after ``cfg.max_iters`` sweeps.  The recorded
    ``objective_trace`` holds f after every sweep and is non-increasing.
    """
    X, y = _check_design(X, y)
    n, m = X.shape
    z = np.einsum("ij,ij->j", X, X)  # column squared norms
    w = np.zeros(m)
    b = 0.0
    r = y - b  # residual y - Xw - b, maintained incrementally
    trace: list[float] = []
    sweeps = 0
    for sweeps in range(1, cfg.max_iters + 1):
        delta = 0.0
        if fit_intercept:
            shift = float(np.mean(r))
            b += shift
            r -= shift
            delta = abs(shift)
        for j in range(m):
            if z[j] == 0.0:
                continue  # all-zero column keeps weight 0
            rho = X[:, j] @ r + z[j] * w[j]
            wj = max(0.0, (rho - cfg.lam) / z[j])
            if wj != w[j]:
                r -= (wj - w[j]) * X[:, j]
                delta = max(delta, abs(wj - w[j]))
                w[j] = wj
        trace.append(0.5 * float(r @ r) + cfg.lam * float(w.sum()))
        if delta < cfg.tol:
            break
    return LinearModel(kind=kind, weights=w, intercept=b, lam=cfg.lam,
                       block_sizes=block_sizes, n_sweeps=sweeps,
                       objective_trace=tuple(trace))


def lasso_objective(X: np.ndarray, y: np.ndarray, w: np.ndarray, b: float,
                    lam: float) -> float:
    """f(w, b) = 1/2 ||y - Xw - b||^2 + lam * sum(w)."""
    r = y - X @ w - b
    return 0.5 * float(r @ r) + lam * float(np.sum(w))


def predict(model: LinearModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != len(model.weights):
        raise ValueError("design width does not match model")
    return X @ model.weights + model.intercept


def design_matrix(lib: KnowledgeLibrary, index: FeatureIndex,
                  movies: Sequence[MovieRecord] | None = None,
                  ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stack trainable records into (X, budgets, grosses)."""
    rows = list(lib.trainable if movies is None else movies)
    X = np.zeros((len(rows), index.n))
    for i, movie in enumerate(rows):
        X[i] = vectorize(movie, index).values
    budgets = np.array([m.budget for m in rows], dtype=float)
    grosses = np.array([m.gross for m in rows], dtype=float)
    return X, budgets, grosses


def train_budget_model(lib: KnowledgeLibrary, index: FeatureIndex,
                       cfg: FitConfig) -> LinearModel:
    """Fit budget(x) = w_b . x + b_b on the trainable records."""
    if len(lib.trainable) < 2:
        raise ValueError("need at least 2 trainable records")
    X, budgets, _ = design_matrix(lib, index)
    return fit_nn_lasso(X, budgets, cfg, kind="budget",
                        block_sizes=index.block_sizes)


def train_gross_model(lib: KnowledgeLibrary, index: FeatureIndex,
                      cfg: FitConfig) -> LinearModel:
    """Fit gross(B, x) = w_g[0] B + w_g[1:] . x + b_g; budget is column 0."""
    if len(lib.trainable) < 2:
        raise ValueError("need at least 2 trainable records")
    X, budgets, grosses = design_matrix(lib, index)
    return fit_nn_lasso(np.column_stack([budgets, X]), grosses, cfg,
                        kind="gross", block_sizes=index.block_sizes)


def mape(actual: np.ndarray, estimated: np.ndarray) -> float:
    """(100/n) * sum |A_t - E_t| / |A_t|; zero actuals are an error."""
    a = np.asarray(actual, dtype=float)
    e = np.asarray(estimated, dtype=float)
    if a.ndim != 1 or a.shape != e.shape or len(a) < 1:
        raise ValueError("actual and estimated must be equal-length vectors")
    zero = np.flatnonzero(a == 0.0)
    if len(zero):
        raise ValueError(f"undefined MAPE at index {int(zero[0])}")
    return float(100.0 * np.mean(np.abs(a - e) / np.abs(a)))


@dataclass(frozen=True)
class EvalReport:
    """MAPE of one model kind on one split, with optional ablations.

    ``split`` is "fold<i>" or "test"; ``per_group`` maps feature-group
    ablations (ALL/Genre/...) to their MAPE where computed.
    """

    kind: str
    split: str
    mape: float
    n: int
    per_group: dict[str, float] | None = None

    def __post_init__(self) -> None:
        if self.mape < 0 or self.n < 1:
            raise ValueError("mape must be >= 0 and n >= 1")

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "split": self.split,
               "mape": self.mape, "n": self.n}
        if self.per_group is not None:
            out["per_group"] = dict(self.per_group)
        return out


def _group_columns(group: str, index: FeatureIndex) -> np.ndarray:
    if group == "ALL":
        return np.arange(index.n)
    block = index.block_slice(_GROUP_ROLE[group])
    return np.arange(block.start, block.stop)


def _fit_eval(X_tr, y_tr, X_te, y_te, cfg, kind) -> float:
    model = fit_nn_lasso(X_tr, y_tr, cfg, kind=kind)
    return mape(y_te, predict(model, X_te))


def cross_validate(lib: KnowledgeLibrary, index: FeatureIndex, cfg: FitConfig,
                   k: int = 5, seed: int = 0) -> list[EvalReport]:
    """80/20 holdout plus k-fold CV on the training portion.

    Returns budget and gross reports for every fold and for the held-out
    test split; the test reports carry per-feature-group ablation MAPEs.
    Records with zero budget or gross are dropped first (MAPE is undefined
    on zero actuals).
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    movies = [m for m in lib.trainable if m.budget > 0 and m.gross > 0]
    if len(movies) < k:
        raise ValueError("fewer trainable records than folds")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(movies))
    X, budgets, grosses = design_matrix(lib, index, [movies[i] for i in order])
    Xg = np.column_stack([budgets, X])  # gross design: leading budget column

    n_train = max(k, int(round(0.8 * len(movies))))
    n_train = min(n_train, len(movies) - 1)
    train_idx = np.arange(n_train)
    test_idx = np.arange(n_train, len(movies))

    reports: list[EvalReport] = []
    folds = np.array_split(train_idx, k)
    for f, fold in enumerate(folds, start=1):
        fit = np.setdiff1d(train_idx, fold)
        reports.append(EvalReport(
            "budget", f"fold{f}",
            _fit_eval(X[fit], budgets[fit], X[fold], budgets[fold], cfg, "budget"),
            len(fold)))
        reports.append(EvalReport(
            "gross", f"fold{f}",
            _fit_eval(Xg[fit], grosses[fit], Xg[fold], grosses[fold], cfg, "gross"),
            len(fold)))

    for kind, M, y in (("budget", X, budgets), ("gross", Xg, grosses)):
        per_group: dict[str, float] = {}
        for group in FEATURE_GROUPS:
            cols = _group_columns(group, index)
            if kind == "gross":
                cols = np.concatenate([[0], cols + 1])  # keep the budget slot
            per_group[group] = _fit_eval(M[np.ix_(train_idx, cols)], y[train_idx],
                                         M[np.ix_(test_idx, cols)], y[test_idx],
                                         cfg, kind)
        reports.append(EvalReport(kind, "test", per_group["ALL"], len(test_idx),
                                  per_group=per_group))
    return reports


def save_model(model: LinearModel, path: str | Path) -> None:
    if model.block_sizes is None:
        raise ValueError("model has no feature layout to serialize")
    payload = {
        "kind": model.kind,
        "intercept": model.intercept,
        "weights": [float(v) for v in model.weights],
        "lambda": model.lam,
        "feature_block_sizes": list(model.block_sizes),
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_model(path: str | Path) -> LinearModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return LinearModel(
        kind=payload["kind"],
        weights=np.asarray(payload["weights"], dtype=float),
        intercept=float(payload["intercept"]),
        lam=float(payload["lambda"]),
        block_sizes=tuple(payload["feature_block_sizes"]),  # type: ignore[arg-type]
    )
