"""Movie knowledge library: corpus parsing, feature indexing, vectorization.

The corpus is JSONL, one movie record per line.  A record carries the
production team (actors, actresses, directors, writers), the genre list,
and optionally budget and gross in million USD.  Records missing budget or
gross are kept (their collaborations still count for the acquaintance
tensor) but flagged untrainable for the regression models.

Features are (role, name) pairs.  The feature index lays them out as five
contiguous blocks in the fixed order

    [ actor | actress | director | writer | genre ]

lexicographic by name within each block, so configuration vectors are
reproducible across runs and processes.  The same person name under two
roles is two distinct features.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Mapping

import numpy as np

CREW_ROLES: tuple[str, ...] = ("actor", "actress", "director", "writer")
ROLES: tuple[str, ...] = CREW_ROLES + ("genre",)

# JSONL field name per role, in feature-block order.
ROLE_FIELDS: Mapping[str, str] = {
    "actor": "actors",
    "actress": "actresses",
    "director": "directors",
    "writer": "writers",
    "genre": "genres",
}

Feature = tuple[str, str]


class LibraryError(ValueError):
    """Unusable corpus input (empty stream, duplicate ids, empty library)."""


class UnknownFeatureError(KeyError):
    """A (role, name) feature is not present in the feature index."""

    def __init__(self, role: str, name: str):
        super().__init__(f"{role}:{name}")
        self.role = role
        self.name = name

    def __str__(self) -> str:
        return f"unknown feature {self.role}:{self.name}"


@dataclass(frozen=True)
class MovieRecord:
    """One movie: crew and genre feature sets plus money attributes.

    ``budget`` and ``gross`` are in million USD; ``None`` means the value is
    absent from the corpus, which makes the record untrainable.
    """

    id: str
    title: str
    year: int
    genres: frozenset[str]
    actors: frozenset[str] = frozenset()
    actresses: frozenset[str] = frozenset()
    writers: frozenset[str] = frozenset()
    directors: frozenset[str] = frozenset()
    budget: float | None = None
    gross: float | None = None

    def __post_init__(self) -> None:
        for name in ("genres", "actors", "actresses", "writers", "directors"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if not self.id:
            raise ValueError("missing id")
        if not self.genres:
            raise ValueError("genres must be nonempty")
        if not (self.actors or self.actresses or self.writers or self.directors):
            raise ValueError("record has no production team member")
        for attr in ("budget", "gross"):
            v = getattr(self, attr)
            if v is None:
                continue
            v = float(v)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{attr} must be a finite non-negative number")
            object.__setattr__(self, attr, v)

    @property
    def trainable(self) -> bool:
        return self.budget is not None and self.gross is not None

    def names(self, role: str) -> frozenset[str]:
        return getattr(self, ROLE_FIELDS[role])

    def features(self) -> Iterator[Feature]:
        """All (role, name) features of the record, crew then genre."""
        for role in ROLES:
            for name in sorted(self.names(role)):
                yield role, name

    def crew_features(self) -> Iterator[Feature]:
        for role in CREW_ROLES:
            for name in sorted(self.names(role)):
                yield role, name

    @property
    def n_features(self) -> int:
        return sum(len(self.names(role)) for role in ROLES)


@dataclass(frozen=True)
class KnowledgeLibrary:
    """An immutable set of movie records with unique ids."""

    movies: tuple[MovieRecord, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "movies", tuple(self.movies))
        seen: set[str] = set()
        for m in self.movies:
            if m.id in seen:
                raise LibraryError(f"duplicate movie id {m.id!r}")
            seen.add(m.id)

    def __len__(self) -> int:
        return len(self.movies)

    def __iter__(self) -> Iterator[MovieRecord]:
        return iter(self.movies)

    @cached_property
    def by_id(self) -> Mapping[str, MovieRecord]:
        return {m.id: m for m in self.movies}

    @cached_property
    def trainable(self) -> tuple[MovieRecord, ...]:
        return tuple(m for m in self.movies if m.trainable)

    def get(self, movie_id: str) -> MovieRecord:
        try:
            return self.by_id[movie_id]
        except KeyError:
            raise LibraryError(f"unknown movie id {movie_id!r}") from None

    def without(self, movie_ids: Iterable[str]) -> "KnowledgeLibrary":
        drop = set(movie_ids)
        missing = drop - set(self.by_id)
        if missing:
            raise LibraryError(f"unknown movie id {sorted(missing)[0]!r}")
        return KnowledgeLibrary(tuple(m for m in self.movies if m.id not in drop))


@dataclass
class ParseReport:
    """Per-line outcome counts for one parsed corpus stream."""

    accepted: int = 0
    flagged: int = 0
    rejected: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.accepted + self.flagged + self.rejected

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "flagged": self.flagged,
            "rejected": self.rejected,
            "errors": [{"line": ln, "reason": why} for ln, why in self.errors],
        }


def _string_list(obj: dict, key: str, required: bool) -> list[str]:
    if key not in obj or obj[key] is None:
        if required:
            raise ValueError(f"missing {key}")
        return []
    value = obj[key]
    if not isinstance(value, list) or not all(isinstance(s, str) and s for s in value):
        raise ValueError(f"{key} must be a list of nonempty strings")
    if required and not value:
        raise ValueError(f"{key} must be nonempty")
    return value


def _money(obj: dict, key: str) -> float | None:
    if key not in obj or obj[key] is None:
        return None
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{key} must be a number or null")
    value = float(value)
    if not np.isfinite(value) or value < 0:
        raise ValueError(f"{key} must be finite and non-negative")
    return value


def _record_from_obj(obj: object) -> MovieRecord:
    if not isinstance(obj, dict):
        raise ValueError("record must be a JSON object")
    movie_id = obj.get("id")
    if not isinstance(movie_id, str) or not movie_id:
        raise ValueError("missing id")
    title = obj.get("title")
    if not isinstance(title, str):
        raise ValueError("missing title")
    year = obj.get("year")
    if isinstance(year, bool) or not isinstance(year, int):
        raise ValueError("year must be an integer")
    return MovieRecord(
        id=movie_id,
        title=title,
        year=year,
        genres=frozenset(_string_list(obj, "genres", required=True)),
        actors=frozenset(_string_list(obj, "actors", required=False)),
        actresses=frozenset(_string_list(obj, "actresses", required=False)),
        writers=frozenset(_string_list(obj, "writers", required=False)),
        directors=frozenset(_string_list(obj, "directors", required=False)),
        budget=_money(obj, "budget"),
        gross=_money(obj, "gross"),
    )


def parse_library(lines: Iterable[str]) -> tuple[KnowledgeLibrary, ParseReport]:
    """Parse a JSONL corpus stream into a library plus a parse report.

    Malformed lines are rejected (with line number and reason in the
    report) without aborting the parse.  Records missing budget or gross
    are accepted but counted as flagged.  Blank lines are skipped.

    Raises :class:`LibraryError` on an entirely empty stream.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    report = ParseReport()
    movies: list[MovieRecord] = []
    seen_ids: set[str] = set()
    saw_line = False
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        saw_line = True
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            report.rejected += 1
            report.errors.append((line_no, f"invalid JSON: {exc.msg}"))
            continue
        try:
            record = _record_from_obj(obj)
        except ValueError as exc:
            report.rejected += 1
            report.errors.append((line_no, str(exc)))
            continue
        if record.id in seen_ids:
            report.rejected += 1
            report.errors.append((line_no, f"duplicate id {record.id!r}"))
            continue
        seen_ids.add(record.id)
        movies.append(record)
        if record.trainable:
            report.accepted += 1
        else:
            report.flagged += 1
    if not saw_line:
        raise LibraryError("empty library")
    return KnowledgeLibrary(tuple(movies)), report


def record_to_obj(movie: MovieRecord) -> dict:
    """JSONL-schema dict for one record; set fields serialized sorted."""
    return {
        "id": movie.id,
        "title": movie.title,
        "year": movie.year,
        "genres": sorted(movie.genres),
        "actors": sorted(movie.actors),
        "actresses": sorted(movie.actresses),
        "writers": sorted(movie.writers),
        "directors": sorted(movie.directors),
        "budget": movie.budget,
        "gross": movie.gross,
    }


def dump_library(lib: KnowledgeLibrary) -> str:
    """Serialize deterministically: same library -> byte-identical text."""
    return "".join(json.dumps(record_to_obj(m), ensure_ascii=False) + "\n" for m in lib)


def save_library(lib: KnowledgeLibrary, path: str | Path) -> None:
    Path(path).write_text(dump_library(lib), encoding="utf-8")


def load_library(path: str | Path) -> tuple[KnowledgeLibrary, ParseReport]:
    with open(path, encoding="utf-8") as handle:
        return parse_library(handle)


@dataclass(frozen=True)
class FeatureIndex:
    """Bijection between (role, name) features and positions in [0, N).

    Block order is actor, actress, director, writer, genre; names are
    sorted within each block.  ``block_sizes`` follows the same order.
    """

    features: tuple[Feature, ...]
    block_sizes: tuple[int, int, int, int, int]

    def __post_init__(self) -> None:
        if sum(self.block_sizes) != len(self.features):
            raise ValueError("block sizes do not sum to feature count")

    @cached_property
    def position(self) -> Mapping[Feature, int]:
        return {feature: i for i, feature in enumerate(self.features)}

    @property
    def n(self) -> int:
        return len(self.features)

    @property
    def crew_count(self) -> int:
        return sum(self.block_sizes[:4])

    @property
    def genre_count(self) -> int:
        return self.block_sizes[4]

    @property
    def crew_range(self) -> range:
        return range(0, self.crew_count)

    @property
    def genre_range(self) -> range:
        return range(self.crew_count, self.n)

    def block_slice(self, role: str) -> slice:
        i = ROLES.index(role)
        start = sum(self.block_sizes[:i])
        return slice(start, start + self.block_sizes[i])

    def index_of(self, role: str, name: str) -> int:
        try:
            return self.position[(role, name)]
        except KeyError:
            raise UnknownFeatureError(role, name) from None

    def feature_at(self, i: int) -> Feature:
        return self.features[i]

    def is_crew(self, i: int) -> bool:
        return i < self.crew_count

    def resolve(self, spec: str) -> int:
        """Resolve a ``role:name`` string to its position."""
        role, sep, name = spec.partition(":")
        if not sep or role not in ROLES or not name:
            raise UnknownFeatureError(role or spec, name)
        return self.index_of(role, name)


def build_feature_index(lib: KnowledgeLibrary) -> FeatureIndex:
    """Index every feature occurring in the library.

    Deterministic for a given record set: block order is fixed and names
    sort lexicographically inside each block.
    """
    if len(lib) == 0:
        raise LibraryError("empty library")
    names: dict[str, set[str]] = {role: set() for role in ROLES}
    for movie in lib:
        for role in ROLES:
            names[role].update(movie.names(role))
    features: list[Feature] = []
    block_sizes: list[int] = []
    for role in ROLES:
        block = sorted(names[role])
        block_sizes.append(len(block))
        features.extend((role, name) for name in block)
    return FeatureIndex(tuple(features), tuple(block_sizes))  # type: ignore[arg-type]


def save_index(index: FeatureIndex, path: str | Path) -> None:
    payload = {"features": [[role, name] for role, name in index.features],
               "block_sizes": list(index.block_sizes)}
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_index(path: str | Path) -> FeatureIndex:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    features = tuple((role, name) for role, name in payload["features"])
    return FeatureIndex(features, tuple(payload["block_sizes"]))  # type: ignore[arg-type]


@dataclass
class ConfigVector:
    """A movie configuration over the feature index.

    ``binary`` mode means every entry is exactly 0 or 1; ``relaxed`` means
    entries live in [0, 1] (values within 1e-9 of the box are snapped).
    """

    values: np.ndarray
    mode: str = "binary"

    def __post_init__(self) -> None:
        if self.mode not in ("binary", "relaxed"):
            raise ValueError(f"bad mode {self.mode!r}")
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1:
            raise ValueError("configuration must be a 1-D vector")
        if self.mode == "binary":
            if not np.all((v == 0.0) | (v == 1.0)):
                raise ValueError("binary configuration entries must be 0 or 1")
        else:
            if np.any(v < -1e-9) or np.any(v > 1 + 1e-9):
                raise ValueError("relaxed configuration entries must lie in [0, 1]")
            v = np.clip(v, 0.0, 1.0)
        self.values = v

    def __len__(self) -> int:
        return len(self.values)

    @property
    def selected(self) -> tuple[int, ...]:
        """Positions set to 1 (binary mode only)."""
        if self.mode != "binary":
            raise ValueError("selected is defined for binary configurations")
        return tuple(int(i) for i in np.flatnonzero(self.values == 1.0))


def vectorize(movie: MovieRecord, index: FeatureIndex) -> ConfigVector:
    """Binary configuration vector of a record under the given index.

    Raises :class:`UnknownFeatureError` naming the first missing feature.
    """
    values = np.zeros(index.n)
    for role, name in movie.features():
        values[index.index_of(role, name)] = 1.0
    return ConfigVector(values, mode="binary")
