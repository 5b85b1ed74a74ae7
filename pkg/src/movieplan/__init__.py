"""Data-driven movie configuration planning.

Learn non-negative budget and gross regressors from a movie corpus,
measure production-team acquaintance with a sparse collaboration tensor,
and search for a movie configuration maximizing estimated gross plus
acquaintance under a budget cap.
"""

from .library import (ConfigVector, FeatureIndex, KnowledgeLibrary,
                      LibraryError, MovieRecord, ParseReport,
                      UnknownFeatureError, build_feature_index, dump_library,
                      load_library, parse_library, save_library, vectorize)
from .planner import (InfeasibleError, PlanProblem, PlanResult, binarize,
                      evaluate_objective, exact_plan, greedy_plan, maxa_plan,
                      maxg_plan, plan, project_feasible, run_method,
                      solve_relaxed)
from .regress import (EvalReport, FitConfig, LinearModel, cross_validate,
                      fit_nn_lasso, load_model, mape, predict, save_model,
                      train_budget_model, train_gross_model)
from .tensor import (AcquaintanceTensor, acquaintance, acquaintance_gradient,
                     build_tensor, load_tensor, save_tensor)
from .harness import (CaseReport, PlanningMetrics, SyntheticSpec, beta_sweep,
                      evaluate_planning, format_sweep,
                      generate_collab_library, generate_synthetic_library,
                      run_case_study)

__version__ = "0.1.0"
