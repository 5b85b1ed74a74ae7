"""Synthetic corpora with planted ground truth and the planning evaluations.

Three pieces live here:

* generators — a size-configurable synthetic library whose budgets and
  grosses are exact (optionally noised) linear functions of planted
  non-negative weights, and a smaller "collaboration" library with
  recurring ensemble teams whose members carry no gross signal at all,
  so acquaintance is the only way to find them;
* mask-and-recover evaluation — hide one movie's team (or genres), lock
  the rest to truth, mix the true features with sampled negatives, plan,
  and score the recovery with pool-relative accuracy/F1;
* the case-study runner — retrain everything without one target movie,
  then plan that movie from a candidate pool and report the overlap with
  its actual production team.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .library import (CREW_ROLES, FeatureIndex, KnowledgeLibrary, MovieRecord,
                      build_feature_index)
from .planner import (InfeasibleError, PlanProblem, PlanResult, plan,
                      run_method, selected_by_role)
from .regress import FitConfig, LinearModel, train_budget_model, train_gross_model
from .tensor import AcquaintanceTensor, build_tensor

DEFAULT_SPARSITY: Mapping[str, float] = {
    "actor": 24.0, "actress": 13.0, "director": 1.2, "writer": 1.5, "genre": 3.0,
}

DEFAULT_BETAS = (0.0, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0)

_ROLE_POOL = {"actor": "n_actors", "actress": "n_actresses",
              "director": "n_directors", "writer": "n_writers",
              "genre": "n_genres"}


@dataclass(frozen=True)
class SyntheticSpec:
    """Size and noise knobs for the synthetic generator.

    Defaults mirror the corpus scale the models are meant for: 3,156
    movies over 72,786 actors, 38,951 actresses, 4,576 writers, 1,682
    directors and 24 genres.  ``sparsity`` is the expected feature count
    per movie and role; ``weight_density`` is the fraction of features
    with a nonzero planted weight; ``active_roles`` restricts nonzero
    planted weights to those role blocks (None = all).
    """

    n_movies: int = 3156
    n_actors: int = 72786
    n_actresses: int = 38951
    n_writers: int = 4576
    n_directors: int = 1682
    n_genres: int = 24
    sparsity: Mapping[str, float] = field(
        default_factory=lambda: dict(DEFAULT_SPARSITY))
    noise_sigma: float = 0.0
    weight_density: float = 0.3
    active_roles: tuple[str, ...] | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        for name in _ROLE_POOL.values():
            if getattr(self, name) < 1 or self.n_movies < 1:
                raise ValueError("all counts must be >= 1")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if not 0 < self.weight_density <= 1:
            raise ValueError("weight_density must lie in (0, 1]")

    def pool(self, role: str) -> int:
        return getattr(self, _ROLE_POOL[role])


@dataclass(frozen=True)
class PlantedWeights:
    """The generator's true model: budget/gross weights and intercepts."""

    w_b: np.ndarray
    b_b: float
    w_g: np.ndarray  # length N+1; position 0 multiplies the budget
    b_g: float


def _feature_names(role: str, count: int) -> list[str]:
    # Zero-padded so lexicographic index order equals generation order.
    return [f"{role.title()} {i:06d}" for i in range(count)]


def generate_synthetic_library(
        spec: SyntheticSpec) -> tuple[KnowledgeLibrary, PlantedWeights]:
    """Sample a library whose money columns follow planted linear truth.

    Every feature of every role appears in at least one movie, so the
    index built from the result has exactly the spec's block sizes and
    the planted weight vectors align with it position for position.
    Byte-identical output under a fixed seed.
    """
    rng = np.random.default_rng(spec.seed)
    roles = ("actor", "actress", "director", "writer", "genre")

    counts: dict[str, np.ndarray] = {}
    for role in roles:
        c = rng.poisson(spec.sparsity.get(role, 1.0), spec.n_movies)
        if role == "genre":
            c = np.maximum(c, 1)
        counts[role] = c
    # Every movie needs a crew; give a director to any that drew none.
    crewless = sum(counts[r] for r in CREW_ROLES) == 0
    counts["director"] = counts["director"] + crewless
    # Coverage: widen random movies until each pool fits at least once.
    for role in roles:
        deficit = spec.pool(role) - int(counts[role].sum())
        if deficit > 0:
            np.add.at(counts[role], rng.integers(0, spec.n_movies, deficit), 1)

    members: dict[str, list[np.ndarray]] = {}
    for role in roles:
        n_feat = spec.pool(role)
        total = int(counts[role].sum())
        slots = np.concatenate([np.arange(n_feat),
                                rng.integers(0, n_feat, total - n_feat)])
        slots = rng.permutation(slots)
        members[role] = np.split(slots, np.cumsum(counts[role])[:-1])

    n_total = sum(spec.pool(r) for r in roles)
    offsets: dict[str, int] = {}
    off = 0
    for role in roles:
        offsets[role] = off
        off += spec.pool(role)

    active = np.zeros(n_total, dtype=bool)
    for role in roles:
        if spec.active_roles is None or role in spec.active_roles:
            lo = offsets[role]
            active[lo:lo + spec.pool(role)] = True
    mask = active & (rng.random(n_total) < spec.weight_density)
    w_b = rng.uniform(0.5, 8.0, n_total) * mask
    w_g = rng.uniform(0.5, 6.0, n_total) * mask
    g0 = float(rng.uniform(0.8, 1.6))
    b_b = float(rng.uniform(2.0, 10.0))
    b_g = float(rng.uniform(2.0, 10.0))
    years = rng.integers(1980, 2024, spec.n_movies)
    noise = rng.normal(0.0, spec.noise_sigma, (2, spec.n_movies)) \
        if spec.noise_sigma > 0 else np.zeros((2, spec.n_movies))

    names = {role: _feature_names(role, spec.pool(role)) for role in roles}
    movies = []
    for i in range(spec.n_movies):
        idx: list[int] = []
        fields: dict[str, list[str]] = {}
        for role in roles:
            local = np.unique(members[role][i])
            fields[role] = [names[role][j] for j in local]
            idx.extend(offsets[role] + local)
        cost = float(w_b[idx].sum()) + b_b
        budget = max(cost + float(noise[0, i]), 0.0)
        gross = max(g0 * budget + float(w_g[idx].sum()) + b_g
                    + float(noise[1, i]), 0.0)
        movies.append(MovieRecord(
            id=f"m{i:05d}", title=f"Movie {i:05d}", year=int(years[i]),
            genres=frozenset(fields["genre"]), actors=frozenset(fields["actor"]),
            actresses=frozenset(fields["actress"]),
            writers=frozenset(fields["writer"]),
            directors=frozenset(fields["director"]),
            budget=budget, gross=gross))
    truth = PlantedWeights(w_b=w_b, b_b=b_b,
                           w_g=np.concatenate([[g0], w_g]), b_g=b_g)
    return KnowledgeLibrary(tuple(movies)), truth


def generate_collab_library(n_groups: int = 6, group_films: int = 8,
                            n_star_movies: int = 36, seed: int = 0,
                            ) -> KnowledgeLibrary:
    """Library with strong recurring-team structure.

    Each ensemble group (two actors, one actress, one director) makes
    ``group_films`` movies together in its own genre, each film using
    three of the four members in rotation; the members add nothing to
    the gross, so only their collaboration history identifies them.
    Star movies have a single well-paid actor with a convex pay-to-gross
    curve, all in a shared genre with no repeated collaborations.

    Every genre also gets one anchor film with a solo zero-cost crew
    member.  The rotation makes individual member costs identifiable and
    the anchors pin down how much cost the genre feature itself can
    absorb, so the fitted per-person costs track the planted ones
    instead of collapsing onto the shared genre.  A handful of ballast
    films (one-off actors across the same budget range as the stars,
    with no gross surplus) keeps the gross-on-budget coefficient honest:
    without them the fit can trade the stars' quadratic surplus for a
    steep budget slope plus a large negative intercept.
    """
    rng = np.random.default_rng(seed)
    movies: list[MovieRecord] = []
    for k in range(n_groups):
        actors = (f"Troupe{k:02d} Actor A", f"Troupe{k:02d} Actor B")
        actress = f"Troupe{k:02d} Actress"
        director = f"Troupe{k:02d} Director"
        genre = f"Ensemble Genre {k:02d}"
        member_cost = rng.uniform(0.8, 1.2, 4)
        total = float(member_cost.sum())
        for j in range(group_films):
            out = j % 4  # leave one member out per film, in rotation
            cost = total - float(member_cost[out]) + 0.5
            gross = 1.0 * cost + 1.0  # members carry zero gross weight
            movies.append(MovieRecord(
                id=f"ens-{k:02d}-{j:02d}", title=f"Ensemble {k:02d}/{j:02d}",
                year=1990 + j, genres=frozenset([genre]),
                actors=frozenset(a for i, a in enumerate(actors) if i != out),
                actresses=frozenset([actress] if out != 2 else []),
                directors=frozenset([director] if out != 3 else []),
                budget=cost, gross=gross))
        movies.append(MovieRecord(
            id=f"anchor-{k:02d}", title=f"Anchor {k:02d}", year=1989,
            genres=frozenset([genre]),
            directors=frozenset([f"Anchor Director {k:02d}"]),
            budget=0.5, gross=1.5))
    for i in range(n_star_movies):
        star = f"Star Actor {i:03d}"
        # Convex pay-to-gross curve: gross/cost rises with cost, so the
        # most expensive *affordable* candidate is always the best pick.
        w_cost = float(rng.uniform(6.0, 30.0))
        w_gross = w_cost * w_cost / 20.0
        budget = w_cost + 0.5
        movies.append(MovieRecord(
            id=f"star-{i:03d}", title=f"Star Vehicle {i:03d}", year=2000 + i,
            genres=frozenset(["Star Genre"]), actors=frozenset([star]),
            budget=budget, gross=1.0 * budget + w_gross + 1.0))
    for i in range(max(4, n_star_movies // 3)):
        w_cost = float(rng.uniform(6.0, 30.0))
        movies.append(MovieRecord(
            id=f"ballast-{i:03d}", title=f"Ballast {i:03d}", year=1980 + i,
            genres=frozenset(["Star Genre"]),
            actors=frozenset([f"Ballast Actor {i:03d}"]),
            budget=w_cost + 0.5, gross=w_cost + 1.5))
    movies.append(MovieRecord(
        id="anchor-star", title="Anchor Star", year=1999,
        genres=frozenset(["Star Genre"]),
        actors=frozenset(["Anchor Star Actor"]),
        budget=0.5, gross=1.5))
    return KnowledgeLibrary(tuple(movies))


@dataclass(frozen=True)
class PlanningMetrics:
    """Pool-relative confusion counts of one mask-and-recover run."""

    accuracy: float
    f1: float
    tp: int
    fp: int
    tn: int
    fn: int
    ratio: float
    beta: float
    target: str
    method: str = "bigmovie"

    @classmethod
    def from_counts(cls, tp: int, fp: int, tn: int, fn: int, *, ratio: float,
                    beta: float, target: str,
                    method: str = "bigmovie") -> "PlanningMetrics":
        total = tp + fp + tn + fn
        accuracy = (tp + tn) / total if total else 0.0
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        return cls(accuracy=accuracy, f1=f1, tp=tp, fp=fp, tn=tn, fn=fn,
                   ratio=ratio, beta=beta, target=target, method=method)

    def to_dict(self) -> dict:
        return {"method": self.method, "beta": self.beta, "target": self.target,
                "ratio": self.ratio, "accuracy": self.accuracy, "f1": self.f1,
                "tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn}


def _target_roles(target: str) -> tuple[str, ...]:
    if target == "team":
        return CREW_ROLES
    if target == "genre":
        return ("genre",)
    raise ValueError(f"target must be 'team' or 'genre', got {target!r}")


def _sample_negatives(movie: MovieRecord, index: FeatureIndex, roles, ratio,
                      rng) -> list[int]:
    """Role-matched uniform sampling of absent features, ratio per role."""
    negatives: list[int] = []
    for role in roles:
        have = movie.names(role)
        want = int(round(ratio * len(have)))
        if not want:
            continue
        block = index.block_slice(role)
        pool = np.array([i for i in range(block.start, block.stop)
                         if index.feature_at(i)[1] not in have], dtype=int)
        take = min(want, len(pool))
        if take:
            negatives.extend(int(i) for i in rng.choice(pool, take, replace=False))
    return negatives


def evaluate_planning(lib: KnowledgeLibrary, index: FeatureIndex,
                      models: tuple[LinearModel, LinearModel],
                      tensor: AcquaintanceTensor, target: str,
                      ratio: float = 1.0, beta: float = 1e-4,
                      theta: float = 0.5, seed: int = 0, *,
                      alpha: float = 1.0,
                      method: str = "bigmovie") -> PlanningMetrics:
    """Mask-and-recover over the whole library.

    Per movie: lock the non-target features to truth, offer the true
    target features plus ``ratio`` negatives per positive as candidates,
    plan under the movie's recorded budget, and accumulate tp/fp/tn/fn
    against the candidate pool.  ``models`` is (budget_model, gross_model).
    """
    if ratio <= 0:
        raise ValueError("ratio must be > 0")
    budget_model, gross_model = models
    roles = _target_roles(target)
    rng = np.random.default_rng(seed)
    tp = fp = tn = fn = 0
    for movie in lib:
        if movie.budget is None:
            continue
        positives = {index.index_of(role, name) for role in roles
                     for name in movie.names(role)}
        if not positives:
            continue
        locked = {index.index_of(r, n) for r, n in movie.features()
                  if r not in roles}
        negatives = set(_sample_negatives(movie, index, roles, ratio, rng))
        problem = PlanProblem(
            budget_cap=movie.budget, alpha=alpha, beta=beta,
            gross_model=gross_model, budget_model=budget_model, tensor=tensor,
            candidates=frozenset(positives | negatives),
            locked=frozenset(locked), theta=theta)
        try:
            selected = set(run_method(problem, method).selected) - locked
        except InfeasibleError:
            # Estimated cost of the truth-locked set can exceed the recorded
            # budget when the model overshoots; score it as an empty plan.
            selected = set()
        tp += len(selected & positives)
        fp += len(selected & negatives)
        fn += len(positives - selected)
        tn += len(negatives - selected)
    return PlanningMetrics.from_counts(tp, fp, tn, fn, ratio=ratio, beta=beta,
                                       target=target, method=method)


def beta_sweep(lib: KnowledgeLibrary, index: FeatureIndex,
               models: tuple[LinearModel, LinearModel],
               tensor: AcquaintanceTensor,
               betas: Sequence[float] = DEFAULT_BETAS, target: str = "team",
               ratio: float = 1.0, seed: int = 0,
               theta: float = 0.5) -> list[PlanningMetrics]:
    """One row per swept beta (alpha=1) plus MaxG, MaxA and Greedy rows."""
    if not betas:
        raise ValueError("betas must be nonempty")
    rows = [evaluate_planning(lib, index, models, tensor, target, ratio,
                              beta, theta, seed) for beta in betas]
    rows.append(evaluate_planning(lib, index, models, tensor, target, ratio,
                                  0.0, theta, seed, method="maxg"))
    rows.append(evaluate_planning(lib, index, models, tensor, target, ratio,
                                  1.0, theta, seed, alpha=0.0, method="maxa"))
    rows.append(evaluate_planning(lib, index, models, tensor, target, ratio,
                                  0.0, theta, seed, method="greedy"))
    return rows


def format_sweep(rows: Iterable[PlanningMetrics]) -> str:
    """Aligned-column comparison table."""
    header = f"{'method':<10}{'beta':>10}{'accuracy':>10}{'f1':>8}" \
             f"{'tp':>6}{'fp':>6}{'tn':>6}{'fn':>6}"
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(f"{r.method:<10}{r.beta:>10.2g}{r.accuracy:>10.4f}"
                     f"{r.f1:>8.4f}{r.tp:>6}{r.fp:>6}{r.tn:>6}{r.fn:>6}")
    return "\n".join(lines)


@dataclass(frozen=True)
class CaseReport:
    """Outcome of one leave-the-movie-out planning case."""

    movie_id: str
    title: str
    selected: dict[str, list[str]]
    est_gross: float
    est_budget: float
    acquaintance: float
    objective: float
    overlap: list[tuple[str, str]]  # selected (role, name) in the true crew
    n_true_crew: int
    n_selected_crew: int
    explanations: list[dict]
    result: PlanResult = field(repr=False, compare=False, default=None)
    models: tuple[LinearModel, LinearModel] = field(repr=False, compare=False,
                                                   default=None)
    tensor: AcquaintanceTensor = field(repr=False, compare=False, default=None)

    def to_dict(self) -> dict:
        return {
            "movie_id": self.movie_id, "title": self.title,
            "selected": self.selected, "est_gross": self.est_gross,
            "est_budget": self.est_budget, "acquaintance": self.acquaintance,
            "objective": self.objective,
            "overlap": [list(pair) for pair in self.overlap],
            "n_true_crew": self.n_true_crew,
            "n_selected_crew": self.n_selected_crew,
            "explanations": self.explanations,
        }


def run_case_study(lib: KnowledgeLibrary, movie_id: str,
                   locked_genres: Sequence[str] | None = None,
                   n_candidates: int = 250, team_cap: int | None = 20,
                   budget: float | None = None, seed: int = 0, *,
                   sequel_ids: Sequence[str] = (),
                   cfg: FitConfig | None = None, alpha: float = 1.0,
                   beta: float = 1e-4, theta: float = 0.5) -> CaseReport:
    """Plan one movie from scratch with that movie held out of training.

    Models and tensor are retrained on the library minus the target (and
    any listed sequels), over the full-library index so the target's
    features keep their positions.  Candidates are the true crew plus
    random other crew up to ``n_candidates``.
    """
    movie = lib.get(movie_id)
    cfg = cfg or FitConfig()
    index = build_feature_index(lib)
    train_lib = lib.without([movie_id, *sequel_ids])
    budget_model = train_budget_model(train_lib, index, cfg)
    gross_model = train_gross_model(train_lib, index, cfg)
    tensor = build_tensor(train_lib, index)

    true_crew = sorted(index.index_of(r, n) for r, n in movie.crew_features())
    rng = np.random.default_rng(seed)
    others = np.array([i for i in index.crew_range if i not in set(true_crew)],
                      dtype=int)
    extra = min(max(n_candidates - len(true_crew), 0), len(others))
    candidates = set(true_crew)
    if extra:
        candidates |= {int(i) for i in rng.choice(others, extra, replace=False)}

    genres = list(locked_genres) if locked_genres is not None \
        else sorted(movie.genres)
    locked = frozenset(index.index_of("genre", g) for g in genres)
    problem = PlanProblem(
        budget_cap=movie.budget if budget is None else budget,
        alpha=alpha, beta=beta, gross_model=gross_model,
        budget_model=budget_model, tensor=tensor,
        candidates=frozenset(candidates), locked=locked,
        theta=theta, team_cap=team_cap)
    result = plan(problem)

    selected_crew = [i for i in result.selected if i < tensor.C]
    truth = set(true_crew)
    overlap = [index.feature_at(i) for i in selected_crew if i in truth]
    selected_set = set(result.selected)
    explanations = []
    for i in selected_crew:
        role, name = index.feature_at(i)
        co = [(index.feature_at(m)[1], index.feature_at(l)[1], count)
              for (n_, m, l), count in tensor.entries.items()
              if n_ == i and m in selected_set and l in selected_set]
        co.sort(key=lambda t: (-t[2], t[0], t[1]))
        explanations.append({
            "role": role, "name": name,
            "gross_weight": float(gross_model.weights[1 + i]),
            "budget_weight": float(budget_model.weights[i]),
            "in_actual_crew": i in truth,
            "top_collaborations": [
                {"with": partner, "genre": genre, "count": int(count)}
                for partner, genre, count in co[:3]],
        })

    return CaseReport(
        movie_id=movie.id, title=movie.title,
        selected=selected_by_role(result.config, index),
        est_gross=result.est_gross, est_budget=result.est_budget,
        acquaintance=result.acquaintance_score, objective=result.objective,
        overlap=overlap, n_true_crew=len(true_crew),
        n_selected_crew=len(selected_crew), explanations=explanations,
        result=result, models=(budget_model, gross_model), tensor=tensor)
