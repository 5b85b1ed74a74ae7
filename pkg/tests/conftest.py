"""Shared fixtures: a small synthetic corpus with trained models and tensor."""

from __future__ import annotations

from types import SimpleNamespace

import numpy as np
import pytest

from movieplan import (FitConfig, build_feature_index, build_tensor,
                       train_budget_model, train_gross_model)
from movieplan.harness import SyntheticSpec, generate_synthetic_library

SMALL_SPEC = SyntheticSpec(
    n_movies=60, n_actors=20, n_actresses=10, n_writers=6, n_directors=5,
    n_genres=4,
    sparsity={"actor": 3, "actress": 2, "director": 1, "writer": 1, "genre": 1.5},
    seed=3)


@pytest.fixture(scope="session")
def small_bundle():
    """60-movie synthetic library with index, models (lam=0.01) and tensor."""
    lib, truth = generate_synthetic_library(SMALL_SPEC)
    index = build_feature_index(lib)
    cfg = FitConfig(lam=0.01)
    budget_model = train_budget_model(lib, index, cfg)
    gross_model = train_gross_model(lib, index, cfg)
    tensor = build_tensor(lib, index)
    return SimpleNamespace(lib=lib, truth=truth, index=index, cfg=cfg,
                           budget_model=budget_model, gross_model=gross_model,
                           tensor=tensor)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
