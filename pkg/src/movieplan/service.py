"""HTTP facade over the planner: plan, what-if, feature search, model info.

Feature identity on the wire is the "role:name" string; indices stay
internal.  All state (library, index, models, tensor) is loaded once and
immutable, so identical requests produce identical responses.  Errors
are always ``{"error": ..., "detail": ...}``: 400 for bad input or
unknown features, 422 when the locked set cannot fit the budget, 500
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .library import (FeatureIndex, KnowledgeLibrary, ROLES, UnknownFeatureError,
                      load_index, load_library)
from .planner import (InfeasibleError, PlanProblem, PlanResult,
                      evaluate_objective, run_method, selected_by_role)
from .regress import LinearModel, load_model, mape, predict, design_matrix
from .tensor import AcquaintanceTensor, load_tensor

SERVICE_METHODS = ("bigmovie", "maxg", "maxa", "greedy")
DEFAULT_CANDIDATE_CAP = 2000


@dataclass(frozen=True)
class ServiceState:
    """Everything a request handler needs, loaded once."""

    lib: KnowledgeLibrary
    index: FeatureIndex
    budget_model: LinearModel
    gross_model: LinearModel
    tensor: AcquaintanceTensor
    candidate_cap: int = DEFAULT_CANDIDATE_CAP
    training_mape: dict = field(default_factory=dict)


def compute_training_mape(state_lib: KnowledgeLibrary, index: FeatureIndex,
                          budget_model: LinearModel,
                          gross_model: LinearModel) -> dict:
    movies = [m for m in state_lib.trainable if m.budget > 0 and m.gross > 0]
    if len(movies) < 2:
        return {}
    X, budgets, grosses = design_matrix(state_lib, index, movies)
    return {
        "budget": mape(budgets, predict(budget_model, X)),
        "gross": mape(grosses, predict(gross_model, np.column_stack([budgets, X]))),
    }


def load_state(models_dir: str | Path, tensor_path: str | Path,
               lib_path: str | Path,
               candidate_cap: int = DEFAULT_CANDIDATE_CAP) -> ServiceState:
    models_dir = Path(models_dir)
    lib, _ = load_library(lib_path)
    index = load_index(models_dir / "features.json")
    budget_model = load_model(models_dir / "budget.json")
    gross_model = load_model(models_dir / "gross.json")
    tensor = load_tensor(tensor_path, index)
    return ServiceState(
        lib=lib, index=index, budget_model=budget_model,
        gross_model=gross_model, tensor=tensor, candidate_cap=candidate_cap,
        training_mape=compute_training_mape(lib, index, budget_model,
                                            gross_model))


class PlanRequestBody(BaseModel):
    budget_cap: float
    alpha: float = 1.0
    beta: float = 1e-4
    theta: float = 0.5
    team_cap: int | None = None
    locked: list[str] = []
    excluded: list[str] = []
    candidate_pool: list[str] | None = None
    method: str = "bigmovie"


class WhatIfRequestBody(BaseModel):
    base: PlanRequestBody
    toggles: list[tuple[str, int]] = []


class _BadRequest(Exception):
    def __init__(self, error: str, detail: str):
        self.error = error
        self.detail = detail


def _build_problem(state: ServiceState, body: PlanRequestBody) -> PlanProblem:
    if body.method not in SERVICE_METHODS:
        raise _BadRequest("invalid method",
                          f"method must be one of {', '.join(SERVICE_METHODS)}")
    locked = frozenset(state.index.resolve(s) for s in body.locked)
    excluded = frozenset(state.index.resolve(s) for s in body.excluded)
    if body.candidate_pool is None:
        candidates = frozenset(range(state.index.n))
    else:
        candidates = frozenset(state.index.resolve(s)
                               for s in body.candidate_pool)
    if len(candidates) > state.candidate_cap:
        raise _BadRequest(
            "candidate pool too large",
            f"{len(candidates)} candidates exceed the cap of "
            f"{state.candidate_cap}; pass a smaller candidate_pool")
    try:
        return PlanProblem(
            budget_cap=body.budget_cap, alpha=body.alpha, beta=body.beta,
            gross_model=state.gross_model, budget_model=state.budget_model,
            tensor=state.tensor, candidates=candidates, locked=locked,
            excluded=excluded, theta=body.theta, team_cap=body.team_cap)
    except ValueError as exc:
        raise _BadRequest("invalid request", str(exc)) from None


def _plan_payload(state: ServiceState, result: PlanResult) -> dict:
    index = state.index
    wg = state.gross_model.weights
    wb = state.budget_model.weights
    scores = []
    for i in result.selected:
        role, name = index.feature_at(i)
        scores.append({
            "feature": f"{role}:{name}", "role": role, "name": name,
            "w_g": float(wg[1 + i]), "w_b": float(wb[i]),
            "relaxed": float(result.relaxed.values[i]),
        })
    return {
        "method": result.method,
        "selected": selected_by_role(result.config, index),
        "selected_scores": scores,
        "est_gross": result.est_gross,
        "est_budget": result.est_budget,
        "acquaintance": result.acquaintance_score,
        "objective": result.objective,
        "feasible": result.feasible,
        "iterations": result.iterations,
    }


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="movieplan service")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    def _error(status: int, error: str, detail: str) -> JSONResponse:
        return JSONResponse({"error": error, "detail": detail},
                            status_code=status)

    @app.exception_handler(_BadRequest)
    async def bad_request(request: Request, exc: _BadRequest):
        return _error(400, exc.error, exc.detail)

    @app.exception_handler(UnknownFeatureError)
    async def unknown_feature(request: Request, exc: UnknownFeatureError):
        return _error(400, "unknown feature", str(exc))

    @app.exception_handler(InfeasibleError)
    async def infeasible(request: Request, exc: InfeasibleError):
        return _error(422, "infeasible plan", str(exc))

    @app.exception_handler(RequestValidationError)
    async def invalid_body(request: Request, exc: RequestValidationError):
        return _error(400, "invalid request", str(exc.errors()))

    @app.exception_handler(Exception)
    async def internal(request: Request, exc: Exception):
        return _error(500, "internal error", str(exc))

    @app.post("/plan")
    async def post_plan(body: PlanRequestBody):
        problem = _build_problem(state, body)
        result = run_method(problem, body.method)
        return _plan_payload(state, result)

    @app.post("/whatif")
    async def post_whatif(body: WhatIfRequestBody):
        for spec, value in body.toggles:
            if value not in (0, 1):
                raise _BadRequest("invalid toggle",
                                  f"toggle value for {spec!r} must be 0 or 1")
        problem = _build_problem(state, body.base)
        result = run_method(problem, body.base.method)
        x = result.config.values.copy()
        for spec, value in body.toggles:
            x[state.index.resolve(spec)] = float(value)
        objective, est_gross, est_budget, acq = evaluate_objective(problem, x)
        base = {"est_gross": result.est_gross, "est_budget": result.est_budget,
                "acquaintance": result.acquaintance_score,
                "objective": result.objective}
        now = {"est_gross": est_gross, "est_budget": est_budget,
               "acquaintance": acq, "objective": objective}
        return {**now, "base": base,
                "deltas": {k: now[k] - base[k] for k in now}}

    @app.get("/library/features")
    async def get_features(role: str = "", prefix: str = "", limit: int = 50):
        if role and role not in ROLES:
            raise _BadRequest("invalid role",
                              f"role must be one of {', '.join(ROLES)}")
        if limit < 0:
            raise _BadRequest("invalid limit", "limit must be >= 0")
        index = state.index
        wg = state.gross_model.weights
        wb = state.budget_model.weights
        out = []
        for i, (r, name) in enumerate(index.features):
            if len(out) >= limit:
                break
            if role and r != role:
                continue
            if prefix and not name.startswith(prefix):
                continue
            out.append({"feature": f"{r}:{name}", "role": r, "name": name,
                        "w_g": float(wg[1 + i]), "w_b": float(wb[i])})
        return {"features": out}

    @app.get("/model/info")
    async def get_info():
        index = state.index
        return {
            "n_features": index.n,
            "block_sizes": list(index.block_sizes),
            "lambda": state.budget_model.lam,
            "training_mape": state.training_mape,
            "tensor_entries": state.tensor.n_entries,
            "n_movies": len(state.lib),
        }

    return app
