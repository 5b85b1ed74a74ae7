"""Blockbuster planning: maximize alpha*gross + beta*acquaintance under a budget.

The binary problem is relaxed to the box [0,1]^N intersected with the
budget halfspace w_b . x <= B - b_b, solved by projected gradient ascent
with backtracking, then rounded at a confidence threshold theta with a
feasibility repair pass.  Baselines: MaxG (beta=0), MaxA (alpha=0), a
gross/cost ratio greedy, and brute-force enumeration for small candidate
sets.

All methods honor three kinds of pins: ``locked`` features are forced
into the plan, ``excluded`` features are forced out, and features outside
``candidates`` (when a candidate pool is given) are never selected.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .library import ConfigVector, FeatureIndex, ROLES
from .regress import LinearModel
from .tensor import AcquaintanceTensor, acquaintance, acquaintance_gradient

METHODS = ("bigmovie", "maxg", "maxa", "greedy", "exact")

BUDGET_SLACK = 1e-9  # absolute tolerance on the budget bound


class InfeasibleError(Exception):
    """The pinned part of the problem already violates the budget."""


@dataclass(frozen=True)
class PlanProblem:
    """One planning instance over fitted models and a tensor.

    ``candidates`` limits which feature indices may be selected
    (None = every feature); ``locked`` forces features in, ``excluded``
    forces them out, ``team_cap`` bounds the number of selected non-locked
    crew features.
    """

    budget_cap: float
    alpha: float
    beta: float
    gross_model: LinearModel
    budget_model: LinearModel
    tensor: AcquaintanceTensor
    candidates: frozenset[int] | None = None
    locked: frozenset[int] = frozenset()
    excluded: frozenset[int] = frozenset()
    theta: float = 0.5
    team_cap: int | None = None

    def __post_init__(self) -> None:
        if self.budget_model.kind != "budget" or self.gross_model.kind != "gross":
            raise ValueError("models passed in the wrong slots")
        n = self.budget_model.n_features
        if self.gross_model.n_features != n or self.tensor.n != n:
            raise ValueError("model/tensor dimensions disagree")
        if self.budget_cap < 0 or self.alpha < 0 or self.beta < 0:
            raise ValueError("budget_cap, alpha, beta must be >= 0")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError("theta must lie in [0, 1]")
        if self.team_cap is not None and self.team_cap < 1:
            raise ValueError("team_cap must be a positive integer")
        for name in ("locked", "excluded"):
            object.__setattr__(self, name,
                               frozenset(int(i) for i in getattr(self, name)))
        if self.candidates is not None:
            object.__setattr__(self, "candidates",
                               frozenset(int(i) for i in self.candidates))
        if self.locked & self.excluded:
            raise ValueError("locked and excluded overlap")
        pool = self.locked | (self.candidates or frozenset())
        if pool and (min(pool) < 0 or max(pool) >= n):
            raise ValueError("feature index out of range")
        if self.excluded and (min(self.excluded) < 0 or max(self.excluded) >= n):
            raise ValueError("feature index out of range")

    @property
    def n(self) -> int:
        return self.budget_model.n_features

    @cached_property
    def locked_idx(self) -> np.ndarray:
        return np.array(sorted(self.locked), dtype=int)

    @cached_property
    def zero_idx(self) -> np.ndarray:
        """Indices pinned to 0: excluded plus everything outside the pool."""
        if self.candidates is None:
            out = self.excluded
        else:
            allowed = self.candidates | self.locked
            out = (set(range(self.n)) - allowed) | self.excluded
        return np.array(sorted(out), dtype=int)

    @cached_property
    def free_idx(self) -> np.ndarray:
        """Selectable, undecided coordinates."""
        pool = set(range(self.n)) if self.candidates is None else set(self.candidates)
        return np.array(sorted(pool - self.locked - self.excluded), dtype=int)


@dataclass(frozen=True)
class PlanResult:
    """A rounded plan with its score breakdown and solve diagnostics."""

    config: ConfigVector
    relaxed: ConfigVector
    est_gross: float
    est_budget: float
    acquaintance_score: float
    objective: float
    feasible: bool
    iterations: int
    method: str

    @property
    def selected(self) -> tuple[int, ...]:
        return self.config.selected


def evaluate_objective(p: PlanProblem, x) -> tuple[float, float, float, float]:
    """(objective, est_gross, est_budget, acq) at configuration x.

    The gross estimate feeds the problem's budget cap B through the gross
    model's leading budget weight, a constant with respect to x.
    """
    v = x.values if isinstance(x, ConfigVector) else np.asarray(x, dtype=float)
    if v.shape != (p.n,):
        raise ValueError("configuration dimension mismatch")
    wg = p.gross_model.weights
    est_gross = float(wg[1:] @ v) + p.gross_model.intercept + wg[0] * p.budget_cap
    est_budget = float(p.budget_model.weights @ v) + p.budget_model.intercept
    acq = acquaintance(p.tensor, v)
    return p.alpha * est_gross + p.beta * acq, est_gross, est_budget, acq


def project_feasible(y, w, c, locked=(), excluded=()) -> np.ndarray:
    """Euclidean projection of y onto {x in [0,1]^N : w . x <= c}, w >= 0.

    Locked coordinates are pinned to 1 and excluded ones to 0; the free
    block is projected under the remaining cap.  The projection is
    clip(y - mu*w, 0, 1) for the smallest mu >= 0 meeting the cap, found
    by bisection on the monotone map mu -> w . x(mu).
    """
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    if y.shape != w.shape or y.ndim != 1:
        raise ValueError("y and w must be equal-length vectors")
    if np.any(w < 0):
        raise ValueError("projection weights must be non-negative")
    locked = np.asarray(sorted(locked), dtype=int)
    excluded = np.asarray(sorted(excluded), dtype=int)

    locked_cost = float(w[locked].sum()) if len(locked) else 0.0
    if locked_cost - c > BUDGET_SLACK:
        raise InfeasibleError("locked set exceeds budget")
    cap = max(c - locked_cost, 0.0)

    x = np.clip(y, 0.0, 1.0)
    if len(locked):
        x[locked] = 1.0
    if len(excluded):
        x[excluded] = 0.0
    pinned = np.zeros(len(y), dtype=bool)
    pinned[locked] = True
    pinned[excluded] = True
    free = ~pinned

    yf, wf = y[free], w[free]
    xf = np.clip(yf, 0.0, 1.0)
    if float(wf @ xf) <= cap:
        x[free] = xf
        return x

    def budget_at(mu: float) -> float:
        return float(wf @ np.clip(yf - mu * wf, 0.0, 1.0))

    lo, hi = 0.0, 1.0
    while budget_at(hi) > cap:  # w >= 0 drives the budget to 0 as mu grows
        lo, hi = hi, hi * 2.0
    for _ in range(100):
        if hi - lo < 1e-14 * (1.0 + hi):
            break
        mid = 0.5 * (lo + hi)
        if budget_at(mid) > cap:
            lo = mid
        else:
            hi = mid
    x[free] = np.clip(yf - hi * wf, 0.0, 1.0)  # feasible side of the bracket
    return x


def _project(p: PlanProblem, y: np.ndarray) -> np.ndarray:
    return project_feasible(y, p.budget_model.weights,
                            p.budget_cap - p.budget_model.intercept,
                            locked=p.locked_idx, excluded=p.zero_idx)


def _ascend(p: PlanProblem, trace: list | None = None) -> tuple[np.ndarray, int]:
    """Projected gradient ascent with backtracking; monotone by construction."""
    grad_lin = p.alpha * p.gross_model.weights[1:]
    x = _project(p, np.full(p.n, 0.5))
    obj = evaluate_objective(p, x)[0]
    if trace is not None:
        trace.append((obj, x.copy()))
    iters = 0
    for iters in range(1, 501):
        grad = grad_lin
        if p.beta != 0.0:
            grad = grad_lin + p.beta * acquaintance_gradient(p.tensor, x)
        eta = 1.0
        for _ in range(60):
            x_new = _project(p, x + eta * grad)
            obj_new = evaluate_objective(p, x_new)[0]
            if obj_new >= obj:
                break
            eta *= 0.5
        else:
            x_new, obj_new = x, obj  # line search exhausted: stationary point
        step = float(np.max(np.abs(x_new - x))) if p.n else 0.0
        x, obj = x_new, obj_new
        if trace is not None:
            trace.append((obj, x.copy()))
        if step < 1e-6:
            break
    return x, iters


def solve_relaxed(p: PlanProblem, trace: list | None = None) -> ConfigVector:
    """Relaxed solve of the planning objective; see module docstring.

    ``trace``, when given, collects (objective, iterate) pairs including
    the projected start point.
    """
    x, _ = _ascend(p, trace)
    return ConfigVector(x, mode="relaxed")


def binarize(relaxed: ConfigVector, p: PlanProblem) -> ConfigVector:
    """Threshold at theta (strict), then repair budget and team size.

    Repair drops the selected non-locked feature with the smallest relaxed
    score until the budget holds; the team cap keeps the top-scoring
    non-locked crew selections.
    """
    scores = relaxed.values
    if scores.shape != (p.n,):
        raise ValueError("configuration dimension mismatch")
    x = (scores > p.theta).astype(float)
    x[p.zero_idx] = 0.0
    x[p.locked_idx] = 1.0

    wb = p.budget_model.weights
    budget = float(wb @ x) + p.budget_model.intercept
    if p.budget_cap - (float(wb[p.locked_idx].sum()) + p.budget_model.intercept) \
            < -BUDGET_SLACK:
        raise InfeasibleError("locked set exceeds budget")
    droppable = [i for i in np.flatnonzero(x == 1.0) if i not in p.locked]
    droppable.sort(key=lambda i: (scores[i], i))  # worst score first
    while budget > p.budget_cap + BUDGET_SLACK:
        if not droppable:
            raise InfeasibleError("locked set exceeds budget")
        i = droppable.pop(0)
        x[i] = 0.0
        budget -= wb[i]

    if p.team_cap is not None:
        crew = [i for i in np.flatnonzero(x == 1.0)
                if i < p.tensor.C and i not in p.locked]
        if len(crew) > p.team_cap:
            crew.sort(key=lambda i: (-scores[i], i))  # stable: best first
            for i in crew[p.team_cap:]:
                x[i] = 0.0
    return ConfigVector(x, mode="binary")


def _finalize(p: PlanProblem, config: ConfigVector, relaxed: ConfigVector,
              iterations: int, method: str) -> PlanResult:
    objective, est_gross, est_budget, acq = evaluate_objective(p, config)
    selected = set(config.selected)
    assert p.locked <= selected and not (p.excluded & selected)
    return PlanResult(config=config, relaxed=relaxed, est_gross=est_gross,
                      est_budget=est_budget, acquaintance_score=acq,
                      objective=objective,
                      feasible=est_budget <= p.budget_cap + BUDGET_SLACK,
                      iterations=iterations, method=method)


def _relax_and_round(p: PlanProblem, method: str) -> PlanResult:
    x, iters = _ascend(p)
    relaxed = ConfigVector(x, mode="relaxed")
    config = binarize(relaxed, p)
    return _finalize(p, config, relaxed, iters, method)


def plan(p: PlanProblem) -> PlanResult:
    """Relax, round, repair: the full planning pipeline."""
    return _relax_and_round(p, "bigmovie")


def maxg_plan(p: PlanProblem) -> PlanResult:
    """Gross-only baseline: alpha=1, beta=0."""
    return _relax_and_round(replace(p, alpha=1.0, beta=0.0), "maxg")


def maxa_plan(p: PlanProblem) -> PlanResult:
    """Acquaintance-only baseline: alpha=0, beta=1."""
    return _relax_and_round(replace(p, alpha=0.0, beta=1.0), "maxa")


def greedy_plan(p: PlanProblem) -> PlanResult:
    """Knapsack-style greedy on the gross/cost ratio.

    Zero-cost positive-gross features rank first; zero-gross features are
    never chosen; unaffordable features are skipped without stopping.
    """
    wb = p.budget_model.weights
    wg = p.gross_model.weights[1:]
    x = np.zeros(p.n)
    x[p.locked_idx] = 1.0
    budget = float(wb @ x) + p.budget_model.intercept
    if budget > p.budget_cap + BUDGET_SLACK:
        raise InfeasibleError("locked set exceeds budget")

    ranked = sorted((i for i in p.free_idx if wg[i] > 0),
                    key=lambda i: (-(np.inf if wb[i] == 0 else wg[i] / wb[i]), i))
    crew_room = np.inf if p.team_cap is None else p.team_cap
    for i in ranked:
        if i < p.tensor.C and crew_room <= 0:
            continue
        if budget + wb[i] > p.budget_cap + BUDGET_SLACK:
            continue
        x[i] = 1.0
        budget += wb[i]
        if i < p.tensor.C:
            crew_room -= 1
    config = ConfigVector(x, mode="binary")
    return _finalize(p, config, ConfigVector(x.copy(), mode="relaxed"), 0, "greedy")


def exact_plan(p: PlanProblem) -> PlanResult:
    """Brute-force enumeration of every assignment of the free candidates.

    Ties break toward smaller estimated budget, then the lexicographically
    smallest selected-index tuple.
    """
    free = p.free_idx
    if len(free) > 20:
        raise ValueError("candidate set too large for exact enumeration")
    k = len(free)
    wb = p.budget_model.weights
    wg = p.gross_model.weights[1:]

    base = np.zeros(p.n)
    base[p.locked_idx] = 1.0
    base_budget = float(wb @ base) + p.budget_model.intercept
    if base_budget > p.budget_cap + BUDGET_SLACK:
        raise InfeasibleError("locked set exceeds budget")
    base_gross = (float(wg @ base) + p.gross_model.intercept
                  + p.gross_model.weights[0] * p.budget_cap)

    bits = ((np.arange(1 << k)[:, None] >> np.arange(k)) & 1).astype(bool)
    budgets = base_budget + bits @ wb[free]
    gross = base_gross + bits @ wg[free]

    # Acquaintance per assignment: each tensor entry contributes where all
    # three of its slots are on (locked slot = always on, free = its column).
    pos = {int(i): j for j, i in enumerate(free)}
    acq = np.zeros(1 << k)
    locked = p.locked
    for (n, m, l), count in p.tensor.entries.items():
        mask: np.ndarray | None = None
        dead = False
        for idx in (n, m, l):
            if idx in locked:
                continue
            j = pos.get(idx)
            if j is None:
                dead = True  # pinned to zero: entry can never fire
                break
            mask = bits[:, j] if mask is None else mask & bits[:, j]
        if dead:
            continue
        acq += count if mask is None else count * mask

    objective = p.alpha * gross + p.beta * acq
    feasible = budgets <= p.budget_cap + BUDGET_SLACK
    if p.team_cap is not None:
        crew_cols = np.array([j for j, i in enumerate(free) if i < p.tensor.C],
                             dtype=int)
        if len(crew_cols):
            feasible &= bits[:, crew_cols].sum(axis=1) <= p.team_cap
    if not feasible.any():
        raise InfeasibleError("locked set exceeds budget")

    best = np.where(feasible, objective, -np.inf)
    tied = np.flatnonzero(best == best.max())
    tied = tied[budgets[tied] == budgets[tied].min()]
    if len(tied) > 1:
        def key(a: int) -> tuple:
            return tuple(free[np.flatnonzero(bits[a])])
        tied = [min(tied, key=key)]
    choice = int(tied[0])

    x = base.copy()
    x[free[bits[choice]]] = 1.0
    config = ConfigVector(x, mode="binary")
    return _finalize(p, config, ConfigVector(x.copy(), mode="relaxed"), 0, "exact")


_RUNNERS = {"bigmovie": plan, "maxg": maxg_plan, "maxa": maxa_plan,
            "greedy": greedy_plan, "exact": exact_plan}


def run_method(p: PlanProblem, method: str) -> PlanResult:
    try:
        runner = _RUNNERS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}") from None
    return runner(p)


def selected_by_role(config: ConfigVector, index: FeatureIndex) -> dict[str, list[str]]:
    """Group a binary configuration's selections by role, names sorted."""
    out: dict[str, list[str]] = {role: [] for role in ROLES}
    for i in config.selected:
        role, name = index.feature_at(i)
        out[role].append(name)
    return out
