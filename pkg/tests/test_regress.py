"""Non-negative Lasso fitting, MAPE, cross-validation."""

import json

import numpy as np
import pytest

from movieplan import (FitConfig, LinearModel, build_feature_index,
                       cross_validate, fit_nn_lasso, mape, parse_library,
                       predict, train_budget_model, train_gross_model)
from movieplan.harness import SyntheticSpec, generate_synthetic_library
from movieplan.regress import (design_matrix, lasso_objective, load_model,
                               save_model)

from oracles import pg_lasso


def test_constant_target_absorbed_by_intercept():
    m = fit_nn_lasso(np.array([[1.0], [1.0]]), np.array([5.0, 5.0]),
                     FitConfig(lam=0.0))
    assert m.weights.tolist() == [0.0]
    assert m.intercept == pytest.approx(5.0)


def test_exact_interpolation_without_intercept():
    m = fit_nn_lasso(np.array([[1.0], [0.0]]), np.array([3.0, 0.0]),
                     FitConfig(lam=0.0), fit_intercept=False)
    assert m.intercept == 0.0
    assert m.weights[0] == pytest.approx(3.0)


def test_input_validation():
    with pytest.raises(ValueError, match="at least 2"):
        fit_nn_lasso(np.array([[1.0]]), np.array([1.0]), FitConfig())
    with pytest.raises(ValueError, match="non-finite"):
        fit_nn_lasso(np.array([[1.0], [np.nan]]), np.array([1.0, 2.0]),
                     FitConfig())
    with pytest.raises(ValueError):
        FitConfig(lam=-1)
    with pytest.raises(ValueError):
        FitConfig(tol=0)


def test_all_zero_column_gets_zero_weight():
    X = np.array([[1.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
    m = fit_nn_lasso(X, np.array([2.0, 0.0, 2.0]), FitConfig(lam=0.0),
                     fit_intercept=False)
    assert m.weights[1] == 0.0


def test_matches_projected_gradient_oracle(rng):
    for _ in range(5):
        X = rng.normal(size=(50, 5))
        w_true = np.abs(rng.normal(size=5))
        y = X @ w_true + 0.1 * rng.normal(size=50)
        m = fit_nn_lasso(X, y, FitConfig(lam=0.1, tol=1e-10, max_iters=5000))
        _, _, oracle_obj = pg_lasso(X, y, 0.1)
        ours = lasso_objective(X, y, m.weights, m.intercept, 0.1)
        assert ours == pytest.approx(oracle_obj, abs=1e-6)


def test_weights_always_nonnegative(rng):
    for _ in range(10):
        X = rng.normal(size=(30, 8))
        y = rng.normal(size=30)  # includes strongly negative targets
        m = fit_nn_lasso(X, y, FitConfig(lam=rng.uniform(0, 1)))
        assert np.all(m.weights >= 0)
        assert np.all(np.isfinite(m.weights))


def test_objective_trace_non_increasing(rng):
    X = rng.normal(size=(40, 6))
    y = X @ np.abs(rng.normal(size=6)) + rng.normal(size=40)
    m = fit_nn_lasso(X, y, FitConfig(lam=0.2))
    trace = np.array(m.objective_trace)
    assert np.all(np.diff(trace) <= 1e-12)


def test_lambda_monotonicity(rng):
    for _ in range(10):
        X = rng.normal(size=(25, 6))
        y = X @ np.abs(rng.normal(size=6)) + 0.1 * rng.normal(size=25)
        lams = sorted(rng.uniform(0.0, 2.0, size=2))
        l1 = [float(fit_nn_lasso(X, y, FitConfig(lam=lam)).weights.sum())
              for lam in lams]
        assert l1[0] >= l1[1] - 1e-8


def test_train_budget_on_identical_movies():
    text = "\n".join(
        json.dumps({"id": f"m{i}", "title": "T", "year": 2000,
                    "genres": ["G"], "actors": ["A"], "budget": 10.0,
                    "gross": 30.0}) for i in range(2))
    lib, _ = parse_library(text)
    index = build_feature_index(lib)
    m = train_budget_model(lib, index, FitConfig(lam=0.0))
    X, _, _ = design_matrix(lib, index)
    assert predict(m, X)[0] == pytest.approx(10.0)


def test_train_gross_on_identical_movies():
    text = "\n".join(
        json.dumps({"id": f"m{i}", "title": "T", "year": 2000,
                    "genres": ["G"], "actors": ["A"], "budget": 100.0,
                    "gross": 50.0}) for i in range(2))
    lib, _ = parse_library(text)
    index = build_feature_index(lib)
    m = train_gross_model(lib, index, FitConfig(lam=0.0))
    X, budgets, _ = design_matrix(lib, index)
    assert predict(m, np.column_stack([budgets, X]))[0] == pytest.approx(50.0)


def test_insufficient_records():
    lib, _ = parse_library(json.dumps(
        {"id": "m", "title": "T", "year": 2000, "genres": ["G"],
         "actors": ["A"], "budget": 1.0, "gross": 1.0}))
    index = build_feature_index(lib)
    with pytest.raises(ValueError, match="trainable"):
        train_budget_model(lib, index, FitConfig())


def test_planted_recovery_under_one_percent(small_bundle):
    lib, index = small_bundle.lib, small_bundle.index
    cfg = FitConfig(lam=0.0)
    bm = train_budget_model(lib, index, cfg)
    gm = train_gross_model(lib, index, cfg)
    X, budgets, grosses = design_matrix(lib, index)
    assert mape(budgets, predict(bm, X)) < 1.0
    assert mape(grosses, predict(gm, np.column_stack([budgets, X]))) < 1.0
    assert np.all(bm.weights >= 0) and np.all(gm.weights >= 0)


class TestMape:
    def test_direct(self):
        assert mape([100.0], [90.0]) == pytest.approx(10.0)
        assert mape([1.0, 2.0], [1.0, 2.0]) == 0.0
        assert mape([100.0, 200.0], [110.0, 150.0]) == pytest.approx(17.5)

    def test_zero_actual_is_an_error(self):
        with pytest.raises(ValueError, match="undefined MAPE at index 1"):
            mape([1.0, 0.0, 2.0], [1.0, 1.0, 1.0])

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            mape([1.0], [1.0, 2.0])


@pytest.fixture(scope="module")
def cv_bundle():
    spec = SyntheticSpec(
        n_movies=100, n_actors=15, n_actresses=8, n_writers=5,
        n_directors=4, n_genres=3,
        sparsity={"actor": 3, "actress": 2, "director": 1, "writer": 1,
                  "genre": 1.5},
        seed=11)
    lib, _ = generate_synthetic_library(spec)
    return lib, build_feature_index(lib)


class TestCrossValidate:
    def test_report_structure(self, cv_bundle):
        lib, index = cv_bundle
        reports = cross_validate(lib, index, FitConfig(lam=0.01), k=5, seed=0)
        # 5 folds x 2 kinds + 2 held-out test reports
        assert len(reports) == 12
        folds = [r for r in reports if r.split.startswith("fold")]
        tests = [r for r in reports if r.split == "test"]
        assert len(folds) == 10 and len(tests) == 2
        assert {r.kind for r in tests} == {"budget", "gross"}
        for r in tests:
            assert set(r.per_group) == {"ALL", "Genre", "Actor", "Actress",
                                        "Writer", "Director"}
        assert all(r.mape >= 0 and r.n >= 1 for r in reports)

    def test_same_seed_same_folds(self, cv_bundle):
        lib, index = cv_bundle
        a = cross_validate(lib, index, FitConfig(lam=0.05), k=4, seed=9)
        b = cross_validate(lib, index, FitConfig(lam=0.05), k=4, seed=9)
        assert [(r.kind, r.split, r.mape) for r in a] \
            == [(r.kind, r.split, r.mape) for r in b]

    def test_k_validation(self, cv_bundle):
        lib, index = cv_bundle
        with pytest.raises(ValueError, match="k must be >= 2"):
            cross_validate(lib, index, FitConfig(), k=1)

    def test_planted_ablation_prefers_signal_group(self):
        spec = SyntheticSpec(
            n_movies=120, n_actors=12, n_actresses=8, n_writers=5,
            n_directors=6, n_genres=3,
            sparsity={"actor": 3, "actress": 2, "director": 1.5, "writer": 1,
                      "genre": 1.5},
            active_roles=("director",), weight_density=1.0, seed=21)
        lib, _ = generate_synthetic_library(spec)
        index = build_feature_index(lib)
        reports = cross_validate(lib, index, FitConfig(lam=0.01), k=3, seed=1)
        for kind in ("budget", "gross"):
            groups = next(r.per_group for r in reports
                          if r.split == "test" and r.kind == kind)
            others = [groups[g] for g in ("Genre", "Actor", "Actress", "Writer")]
            assert groups["Director"] < min(others)


class TestModelFile:
    def test_round_trip(self, tmp_path, small_bundle):
        path = tmp_path / "budget.json"
        save_model(small_bundle.budget_model, path)
        loaded = load_model(path)
        assert loaded.kind == "budget"
        assert loaded.intercept == small_bundle.budget_model.intercept
        assert np.array_equal(loaded.weights, small_bundle.budget_model.weights)
        assert loaded.block_sizes == small_bundle.index.block_sizes

    def test_schema_keys(self, tmp_path, small_bundle):
        path = tmp_path / "gross.json"
        save_model(small_bundle.gross_model, path)
        payload = json.loads(path.read_text())
        assert set(payload) == {"kind", "intercept", "weights", "lambda",
                                "feature_block_sizes"}
        assert payload["kind"] == "gross"
        assert len(payload["weights"]) == small_bundle.index.n + 1

    def test_invalid_model_rejected(self):
        with pytest.raises(ValueError):
            LinearModel(kind="budget", weights=np.array([-1.0]),
                        intercept=0.0, lam=0.1)
        with pytest.raises(ValueError):
            LinearModel(kind="other", weights=np.array([1.0]),
                        intercept=0.0, lam=0.1)
