"""HTTP facade: endpoints, error mapping, determinism, wire formats."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

import movieplan.service as service
from movieplan import (PlanProblem, evaluate_objective, plan, save_library,
                       save_model, save_tensor)
from movieplan.library import save_index
from movieplan.service import (ServiceState, compute_training_mape,
                               create_app, load_state)


@pytest.fixture(scope="module")
def state(small_bundle):
    b = small_bundle
    return ServiceState(
        lib=b.lib, index=b.index, budget_model=b.budget_model,
        gross_model=b.gross_model, tensor=b.tensor,
        training_mape=compute_training_mape(b.lib, b.index, b.budget_model,
                                            b.gross_model))


@pytest.fixture(scope="module")
def client(state):
    return TestClient(create_app(state), raise_server_exceptions=False)


def feature_name(index, i):
    role, name = index.feature_at(i)
    return f"{role}:{name}"


def crew_count(payload):
    return sum(len(v) for r, v in payload["selected"].items() if r != "genre")


class TestPlan:
    def test_greedy_selects_with_generous_budget(self, client):
        r = client.post("/plan", json={"budget_cap": 1e6, "method": "greedy"})
        assert r.status_code == 200
        body = r.json()
        assert body["method"] == "greedy"
        assert sum(len(v) for v in body["selected"].values()) > 0
        assert body["feasible"] is True

    def test_response_shape_and_weight_signs(self, client):
        r = client.post("/plan", json={"budget_cap": 100.0, "beta": 1e-4})
        body = r.json()
        assert set(body) == {"method", "selected", "selected_scores",
                             "est_gross", "est_budget", "acquaintance",
                             "objective", "feasible", "iterations"}
        for s in body["selected_scores"]:
            assert s["w_g"] >= 0 and s["w_b"] >= 0
            assert s["feature"] == f"{s['role']}:{s['name']}"
        assert body["est_budget"] <= 100.0 + 1e-9

    def test_replay_is_identical(self, client):
        req = {"budget_cap": 80.0, "beta": 1e-3, "locked": [],
               "method": "bigmovie"}
        one = client.post("/plan", json=req)
        two = client.post("/plan", json=req)
        assert one.json() == two.json()

    def test_locked_feature_always_selected(self, client, state):
        name = feature_name(state.index, 0)
        r = client.post("/plan", json={"budget_cap": 1e4, "locked": [name]})
        assert r.status_code == 200
        role, bare = name.split(":")
        assert bare in r.json()["selected"][role]

    def test_excluded_feature_never_selected(self, client, state):
        base = client.post("/plan", json={"budget_cap": 1e4,
                                          "method": "greedy"}).json()
        target = base["selected_scores"][0]
        r = client.post("/plan", json={"budget_cap": 1e4, "method": "greedy",
                                       "excluded": [target["feature"]]})
        assert target["name"] not in \
            r.json()["selected"].get(target["role"], [])

    def test_team_cap(self, client):
        r = client.post("/plan", json={"budget_cap": 1e4, "team_cap": 1})
        assert crew_count(r.json()) <= 1

    def test_candidate_pool_restricts_selection(self, client, state):
        pool = [feature_name(state.index, i) for i in range(4)]
        r = client.post("/plan", json={"budget_cap": 1e4,
                                       "candidate_pool": pool})
        chosen = {f"{role}:{n}" for role, names in r.json()["selected"].items()
                  for n in names}
        assert chosen <= set(pool)

    def test_locked_over_budget_is_422(self, client, state):
        wb = state.budget_model.weights
        i = int(np.argmax(wb))
        cap = state.budget_model.intercept + wb[i] / 2
        r = client.post("/plan", json={"budget_cap": cap,
                                       "locked": [feature_name(state.index, i)]})
        assert r.status_code == 422
        assert r.json() == {"error": "infeasible plan",
                            "detail": "locked set exceeds budget"}

    def test_unknown_feature_is_400(self, client):
        r = client.post("/plan", json={"budget_cap": 10.0,
                                       "locked": ["actor:Nobody Here"]})
        assert r.status_code == 400
        assert r.json()["error"] == "unknown feature"
        assert "actor:Nobody Here" in r.json()["detail"]

    def test_invalid_method_is_400(self, client):
        r = client.post("/plan", json={"budget_cap": 10.0, "method": "exact"})
        assert r.status_code == 400
        assert r.json()["error"] == "invalid method"

    def test_missing_budget_cap_is_400(self, client):
        r = client.post("/plan", json={"alpha": 1.0})
        assert r.status_code == 400
        assert r.json()["error"] == "invalid request"

    def test_malformed_body_is_400(self, client):
        r = client.post("/plan", content=b"not json",
                        headers={"content-type": "application/json"})
        assert r.status_code == 400

    def test_candidate_cap_applies_to_default_pool(self, state):
        capped = ServiceState(
            lib=state.lib, index=state.index,
            budget_model=state.budget_model, gross_model=state.gross_model,
            tensor=state.tensor, candidate_cap=5)
        client = TestClient(create_app(capped))
        r = client.post("/plan", json={"budget_cap": 10.0})
        assert r.status_code == 400
        assert r.json()["error"] == "candidate pool too large"

    def test_internal_error_is_500(self, state, monkeypatch):
        def boom(problem, method):
            raise RuntimeError("solver exploded")
        monkeypatch.setattr(service, "run_method", boom)
        client = TestClient(create_app(state), raise_server_exceptions=False)
        r = client.post("/plan", json={"budget_cap": 10.0})
        assert r.status_code == 500
        assert r.json()["error"] == "internal error"


class TestWhatIf:
    def test_zero_toggles_zero_deltas(self, client):
        r = client.post("/whatif", json={"base": {"budget_cap": 80.0},
                                         "toggles": []})
        assert r.status_code == 200
        assert all(v == 0 for v in r.json()["deltas"].values())

    def test_base_matches_plain_plan(self, client):
        base_req = {"budget_cap": 90.0, "beta": 1e-4}
        planned = client.post("/plan", json=base_req).json()
        whatif = client.post("/whatif", json={"base": base_req,
                                              "toggles": []}).json()
        for key in ("est_gross", "est_budget", "acquaintance", "objective"):
            assert whatif["base"][key] == planned[key]

    def test_toggle_off_crew_drops_acquaintance(self, client, state):
        planned = client.post("/plan", json={"budget_cap": 1e4,
                                             "beta": 1e-4}).json()
        crew = [s for s in planned["selected_scores"] if s["role"] != "genre"]
        assert crew, "expected some crew selected under a generous budget"
        r = client.post("/whatif", json={
            "base": {"budget_cap": 1e4, "beta": 1e-4},
            "toggles": [[crew[0]["feature"], 0]]})
        assert r.json()["deltas"]["acquaintance"] <= 0

    def test_toggle_off_subtracts_exact_linear_weights(self, client, state):
        planned = client.post("/plan", json={"budget_cap": 1e4,
                                             "beta": 0.0}).json()
        target = planned["selected_scores"][0]
        i = state.index.resolve(target["feature"])
        r = client.post("/whatif", json={
            "base": {"budget_cap": 1e4, "beta": 0.0},
            "toggles": [[target["feature"], 0]]})
        deltas = r.json()["deltas"]
        assert deltas["est_budget"] == pytest.approx(
            -float(state.budget_model.weights[i]), abs=1e-9)
        assert deltas["est_gross"] == pytest.approx(
            -float(state.gross_model.weights[1 + i]), abs=1e-9)

    def test_matches_fresh_objective_evaluation(self, client, state):
        body = {"budget_cap": 120.0, "beta": 1e-3}
        toggle_target = feature_name(state.index, 2)
        r = client.post("/whatif", json={"base": body,
                                         "toggles": [[toggle_target, 0]]})
        problem = PlanProblem(
            budget_cap=120.0, alpha=1.0, beta=1e-3,
            gross_model=state.gross_model, budget_model=state.budget_model,
            tensor=state.tensor, candidates=frozenset(range(state.index.n)))
        x = plan(problem).config.values.copy()
        x[2] = 0.0
        objective, est_gross, est_budget, acq = evaluate_objective(problem, x)
        got = r.json()
        assert got["objective"] == pytest.approx(objective, abs=1e-9)
        assert got["est_gross"] == pytest.approx(est_gross, abs=1e-9)
        assert got["est_budget"] == pytest.approx(est_budget, abs=1e-9)
        assert got["acquaintance"] == pytest.approx(acq, abs=1e-9)

    def test_unresolvable_toggle_is_400(self, client):
        r = client.post("/whatif", json={"base": {"budget_cap": 10.0},
                                         "toggles": [["genre:Nope", 1]]})
        assert r.status_code == 400
        assert r.json()["error"] == "unknown feature"

    def test_bad_toggle_value_is_400(self, client, state):
        name = feature_name(state.index, 0)
        r = client.post("/whatif", json={"base": {"budget_cap": 10.0},
                                         "toggles": [[name, 2]]})
        assert r.status_code == 400
        assert r.json()["error"] == "invalid toggle"


class TestFeatures:
    def test_limit(self, client):
        r = client.get("/library/features", params={"limit": 5})
        assert len(r.json()["features"]) <= 5

    def test_role_filter_and_order(self, client):
        r = client.get("/library/features",
                       params={"role": "genre", "limit": 50})
        rows = r.json()["features"]
        assert rows and all(row["role"] == "genre" for row in rows)
        names = [row["name"] for row in rows]
        assert names == sorted(names)

    def test_prefix_without_match_is_empty(self, client):
        r = client.get("/library/features", params={"prefix": "zzz-none"})
        assert r.json()["features"] == []

    def test_weights_are_non_negative(self, client):
        r = client.get("/library/features", params={"limit": 50})
        for row in r.json()["features"]:
            assert row["w_g"] >= 0 and row["w_b"] >= 0

    def test_bad_role_is_400(self, client):
        r = client.get("/library/features", params={"role": "villain"})
        assert r.status_code == 400
        assert r.json()["error"] == "invalid role"

    def test_zero_limit(self, client):
        r = client.get("/library/features", params={"limit": 0})
        assert r.json()["features"] == []


class TestModelInfo:
    def test_matches_loaded_state(self, client, state):
        info = client.get("/model/info").json()
        assert info["n_features"] == state.index.n
        assert sum(info["block_sizes"]) == info["n_features"]
        assert info["lambda"] == state.budget_model.lam
        assert info["tensor_entries"] == state.tensor.n_entries
        assert info["n_movies"] == len(state.lib)
        assert set(info["training_mape"]) == {"budget", "gross"}
        assert all(v >= 0 for v in info["training_mape"].values())


class TestLoadState:
    def test_round_trip_through_files(self, tmp_path, small_bundle, state):
        b = small_bundle
        models = tmp_path / "models"
        models.mkdir()
        save_library(b.lib, tmp_path / "lib.jsonl")
        save_index(b.index, models / "features.json")
        save_model(b.budget_model, models / "budget.json")
        save_model(b.gross_model, models / "gross.json")
        save_tensor(b.tensor, tmp_path / "tensor.jsonl")

        loaded = load_state(models, tmp_path / "tensor.jsonl",
                            tmp_path / "lib.jsonl")
        client = TestClient(create_app(loaded))
        info = client.get("/model/info").json()
        n_lines = sum(1 for line in
                      (tmp_path / "tensor.jsonl").read_text().splitlines()
                      if line.strip())
        assert info["tensor_entries"] == 2 * n_lines
        assert info["n_features"] == b.index.n
        assert info["training_mape"]["budget"] == pytest.approx(
            state.training_mape["budget"])

    def test_loaded_state_plans_identically(self, tmp_path, small_bundle,
                                            client):
        b = small_bundle
        models = tmp_path / "models"
        models.mkdir()
        save_library(b.lib, tmp_path / "lib.jsonl")
        save_index(b.index, models / "features.json")
        save_model(b.budget_model, models / "budget.json")
        save_model(b.gross_model, models / "gross.json")
        save_tensor(b.tensor, tmp_path / "tensor.jsonl")
        loaded = load_state(models, tmp_path / "tensor.jsonl",
                            tmp_path / "lib.jsonl")
        fresh = TestClient(create_app(loaded))
        req = {"budget_cap": 75.0, "beta": 1e-4}
        assert fresh.post("/plan", json=req).json() == \
            client.post("/plan", json=req).json()
