"""Command-line interface: corpus ingest, training, planning, evaluation, serving."""

from __future__ import annotations

import json
from pathlib import Path

import click

from . import harness, regress, service
from .library import (build_feature_index, load_index, load_library,
                      save_index, save_library)
from .planner import PlanProblem, run_method, selected_by_role
from .tensor import build_tensor, load_tensor, save_tensor


def _load_corpus(path: str):
    lib, report = load_library(path)
    return lib, report


def _load_stack(models_dir: str, tensor_path: str, lib_path: str):
    lib, _ = load_library(lib_path)
    index = load_index(Path(models_dir) / "features.json")
    budget_model = regress.load_model(Path(models_dir) / "budget.json")
    gross_model = regress.load_model(Path(models_dir) / "gross.json")
    tensor = load_tensor(tensor_path, index)
    return lib, index, budget_model, gross_model, tensor


def _write_json(payload, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        click.echo(text)


@click.group()
def main() -> None:
    """Movie configuration planning toolkit."""


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--report", "report_path", default=None, type=click.Path())
def ingest(input_path: str, report_path: str | None) -> None:
    """Parse a JSONL corpus and report accepted/flagged/rejected counts."""
    lib, report = _load_corpus(input_path)
    payload = report.to_dict()
    payload["movies"] = len(lib)
    _write_json(payload, report_path)
    if report_path:
        click.echo(f"{len(lib)} movies "
                   f"({report.accepted} trainable, {report.flagged} flagged, "
                   f"{report.rejected} rejected)")


@main.command()
@click.option("--out", default="lib.jsonl", type=click.Path())
@click.option("--movies", default=3156, show_default=True)
@click.option("--actors", default=72786, show_default=True)
@click.option("--actresses", default=38951, show_default=True)
@click.option("--writers", default=4576, show_default=True)
@click.option("--directors", default=1682, show_default=True)
@click.option("--genres", default=24, show_default=True)
@click.option("--noise", default=0.0, show_default=True)
@click.option("--seed", default=7, show_default=True)
def synth(out: str, movies: int, actors: int, actresses: int, writers: int,
          directors: int, genres: int, noise: float, seed: int) -> None:
    """Generate a synthetic library with planted linear ground truth."""
    spec = harness.SyntheticSpec(
        n_movies=movies, n_actors=actors, n_actresses=actresses,
        n_writers=writers, n_directors=directors, n_genres=genres,
        noise_sigma=noise, seed=seed)
    lib, _ = harness.generate_synthetic_library(spec)
    save_library(lib, out)
    click.echo(f"wrote {len(lib)} movies to {out}")


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", default="models", type=click.Path())
@click.option("--lambda", "lam", default=0.1, show_default=True)
@click.option("--seed", default=7, show_default=True, help="Reserved; "
              "training itself is deterministic.")
def train(input_path: str, out_dir: str, lam: float, seed: int) -> None:
    """Fit the budget and gross models and write them with the index."""
    lib, _ = _load_corpus(input_path)
    index = build_feature_index(lib)
    cfg = regress.FitConfig(lam=lam)
    budget_model = regress.train_budget_model(lib, index, cfg)
    gross_model = regress.train_gross_model(lib, index, cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    regress.save_model(budget_model, out / "budget.json")
    regress.save_model(gross_model, out / "gross.json")
    save_index(index, out / "features.json")
    click.echo(f"trained on {len(lib.trainable)} records, "
               f"N={index.n}; models in {out_dir}/")


@main.command("evaluate-regression")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--folds", default=5, show_default=True)
@click.option("--lambda", "lam", default=0.1, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--out", default=None, type=click.Path())
def evaluate_regression(input_path: str, folds: int, lam: float, seed: int,
                        out: str | None) -> None:
    """Cross-validate both models and print per-split MAPE."""
    lib, _ = _load_corpus(input_path)
    index = build_feature_index(lib)
    reports = regress.cross_validate(lib, index, regress.FitConfig(lam=lam),
                                     k=folds, seed=seed)
    for r in reports:
        line = f"{r.kind:<7} {r.split:<7} mape={r.mape:8.3f}%  n={r.n}"
        click.echo(line)
        if r.per_group:
            for group, value in r.per_group.items():
                click.echo(f"        {group:<9} {value:8.3f}%")
    if out:
        _write_json([r.to_dict() for r in reports], out)


@main.command("build-tensor")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--out", default="tensor.jsonl", type=click.Path())
def build_tensor_cmd(input_path: str, out: str) -> None:
    """Count per-genre crew collaborations into the sparse tensor file."""
    lib, _ = _load_corpus(input_path)
    index = build_feature_index(lib)
    tensor = build_tensor(lib, index)
    save_tensor(tensor, out)
    click.echo(f"{tensor.n_entries} stored entries "
               f"({tensor.n_entries // 2} unordered pairs) -> {out}")


@main.command("plan")
@click.option("--models", "models_dir", default="models", type=click.Path(exists=True))
@click.option("--tensor", "tensor_path", default="tensor.jsonl",
              type=click.Path(exists=True))
@click.option("--lib", "lib_path", required=True, type=click.Path(exists=True))
@click.option("--budget", required=True, type=float)
@click.option("--alpha", default=1.0, show_default=True)
@click.option("--beta", default=1e-4, show_default=True)
@click.option("--theta", default=0.5, show_default=True)
@click.option("--lock", "locks", multiple=True, help="role:name, repeatable.")
@click.option("--exclude", "excludes", multiple=True, help="role:name, repeatable.")
@click.option("--candidates", "candidates_path", default=None, type=click.Path(),
              help="JSON list of role:name candidate features.")
@click.option("--team-cap", default=None, type=int)
@click.option("--method", default="bigmovie", show_default=True,
              type=click.Choice(["bigmovie", "maxg", "maxa", "greedy", "exact"]))
@click.option("--out", default=None, type=click.Path())
def plan_cmd(models_dir, tensor_path, lib_path, budget, alpha, beta, theta,
             locks, excludes, candidates_path, team_cap, method, out) -> None:
    """Solve one planning instance and write the chosen configuration."""
    _, index, budget_model, gross_model, tensor = _load_stack(
        models_dir, tensor_path, lib_path)
    candidates = None
    if candidates_path:
        specs = json.loads(Path(candidates_path).read_text(encoding="utf-8"))
        candidates = frozenset(index.resolve(s) for s in specs)
    problem = PlanProblem(
        budget_cap=budget, alpha=alpha, beta=beta, gross_model=gross_model,
        budget_model=budget_model, tensor=tensor, candidates=candidates,
        locked=frozenset(index.resolve(s) for s in locks),
        excluded=frozenset(index.resolve(s) for s in excludes),
        theta=theta, team_cap=team_cap)
    result = run_method(problem, method)
    payload = {
        "method": result.method,
        "selected": selected_by_role(result.config, index),
        "est_gross": result.est_gross,
        "est_budget": result.est_budget,
        "acquaintance": result.acquaintance_score,
        "objective": result.objective,
        "feasible": result.feasible,
        "iterations": result.iterations,
    }
    _write_json(payload, out)


@main.command("evaluate-planning")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--models", "models_dir", default="models", type=click.Path(exists=True))
@click.option("--tensor", "tensor_path", default="tensor.jsonl",
              type=click.Path(exists=True))
@click.option("--target", default="team", show_default=True,
              type=click.Choice(["team", "genre"]))
@click.option("--ratio", default=1.0, show_default=True)
@click.option("--beta", default=1e-4, show_default=True)
@click.option("--theta", default=0.5, show_default=True)
@click.option("--method", default="bigmovie", show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--out", default=None, type=click.Path())
def evaluate_planning_cmd(input_path, models_dir, tensor_path, target, ratio,
                          beta, theta, method, seed, out) -> None:
    """Mask-and-recover accuracy/F1 over the corpus."""
    lib, index, budget_model, gross_model, tensor = _load_stack(
        models_dir, tensor_path, input_path)
    metrics = harness.evaluate_planning(
        lib, index, (budget_model, gross_model), tensor, target,
        ratio=ratio, beta=beta, theta=theta, seed=seed, method=method)
    click.echo(harness.format_sweep([metrics]))
    if out:
        _write_json(metrics.to_dict(), out)


@main.command("beta-sweep")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--models", "models_dir", default="models", type=click.Path(exists=True))
@click.option("--tensor", "tensor_path", default="tensor.jsonl",
              type=click.Path(exists=True))
@click.option("--target", default="team", show_default=True,
              type=click.Choice(["team", "genre"]))
@click.option("--ratio", default=1.0, show_default=True)
@click.option("--beta", "betas", multiple=True, type=float,
              help="Swept beta values; default 0, 1e-5 ... 1.")
@click.option("--seed", default=7, show_default=True)
@click.option("--out", default=None, type=click.Path())
def beta_sweep_cmd(input_path, models_dir, tensor_path, target, ratio, betas,
                   seed, out) -> None:
    """Compare the planner across beta against MaxG/MaxA/Greedy."""
    lib, index, budget_model, gross_model, tensor = _load_stack(
        models_dir, tensor_path, input_path)
    rows = harness.beta_sweep(
        lib, index, (budget_model, gross_model), tensor,
        betas=list(betas) or list(harness.DEFAULT_BETAS),
        target=target, ratio=ratio, seed=seed)
    click.echo(harness.format_sweep(rows))
    if out:
        _write_json([r.to_dict() for r in rows], out)


@main.command("case-study")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--movie", "movie_id", required=True)
@click.option("--candidates", "n_candidates", default=250, show_default=True)
@click.option("--team-cap", default=20, show_default=True)
@click.option("--budget", default=None, type=float,
              help="Budget cap; defaults to the movie's recorded budget.")
@click.option("--lock", "locked_genres", multiple=True,
              help="Genre name to lock; defaults to the movie's genres.")
@click.option("--sequel", "sequel_ids", multiple=True,
              help="Movie id to also hold out of training.")
@click.option("--lambda", "lam", default=0.1, show_default=True)
@click.option("--beta", default=1e-4, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--out", default=None, type=click.Path())
def case_study_cmd(input_path, movie_id, n_candidates, team_cap, budget,
                   locked_genres, sequel_ids, lam, beta, seed, out) -> None:
    """Replan one movie with itself (and sequels) held out of training."""
    lib, _ = _load_corpus(input_path)
    report = harness.run_case_study(
        lib, movie_id, locked_genres=list(locked_genres) or None,
        n_candidates=n_candidates, team_cap=team_cap, budget=budget,
        seed=seed, sequel_ids=sequel_ids, cfg=regress.FitConfig(lam=lam),
        beta=beta)
    _write_json(report.to_dict(), out)


@main.command()
@click.option("--models", "models_dir", default="models", type=click.Path(exists=True))
@click.option("--tensor", "tensor_path", default="tensor.jsonl",
              type=click.Path(exists=True))
@click.option("--lib", "lib_path", required=True, type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, show_default=True)
@click.option("--candidate-cap", default=service.DEFAULT_CANDIDATE_CAP,
              show_default=True)
def serve(models_dir, tensor_path, lib_path, host, port, candidate_cap) -> None:
    """Run the HTTP planning service."""
    import uvicorn

    state = service.load_state(models_dir, tensor_path, lib_path,
                               candidate_cap=candidate_cap)
    app = service.create_app(state)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
