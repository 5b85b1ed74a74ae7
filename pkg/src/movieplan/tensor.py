"""Sparse acquaintance tensor over crew x crew x genre collaborations.

Every movie contributes one count per (unordered crew pair, genre of the
movie).  Entries are stored under global feature-index positions, with
both orders (n, m, l) and (m, n, l) present so the acquaintance score is
the literal ordered triple sum

    acq(x) = sum_{n,m,l} W[n][m][l] * x[n] * x[m] * x[l]

and a pair that co-appeared t times in a genre contributes 2t when both
members and the genre are selected.  The diagonal is identically zero
(no self-collaboration).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path

import numpy as np

from .library import ConfigVector, FeatureIndex, KnowledgeLibrary


def _vec(x) -> np.ndarray:
    if isinstance(x, ConfigVector):
        return x.values
    return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class AcquaintanceTensor:
    """Immutable sparse map (crew n, crew m, genre l) -> collaboration count.

    ``C`` crew features occupy indices [0, C); ``G`` genre features occupy
    [C, C+G).  Symmetric in the first two slots; diagonal entries absent.
    """

    entries: dict[tuple[int, int, int], int]
    C: int
    G: int

    def __post_init__(self) -> None:
        for (n, m, l), count in self.entries.items():
            if n == m:
                raise ValueError("self-collaboration on the diagonal")
            if not (0 <= n < self.C and 0 <= m < self.C):
                raise ValueError("crew index out of range")
            if not (self.C <= l < self.C + self.G):
                raise ValueError("genre index out of range")
            if count <= 0:
                raise ValueError("counts must be positive")
            if self.entries.get((m, n, l)) != count:
                raise ValueError("entries must be symmetric in the crew slots")

    @property
    def n(self) -> int:
        return self.C + self.G

    @property
    def n_entries(self) -> int:
        return len(self.entries)

    @property
    def total_mass(self) -> int:
        return sum(self.entries.values())

    def entry(self, n: int, m: int, l: int) -> int:
        return self.entries.get((n, m, l), 0)

    @cached_property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        # Sorted for deterministic accumulation order.
        keys = sorted(self.entries)
        if not keys:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty.copy(), empty.copy(), np.zeros(0)
        arr = np.array(keys, dtype=np.int64)
        counts = np.array([self.entries[k] for k in keys], dtype=float)
        return arr[:, 0], arr[:, 1], arr[:, 2], counts


def build_tensor(lib: KnowledgeLibrary, index: FeatureIndex) -> AcquaintanceTensor:
    """Count per-genre co-appearances of every distinct crew-feature pair.

    A record where one name holds two roles yields two crew features, so
    the pair between them counts like any other.
    """
    entries: dict[tuple[int, int, int], int] = {}
    for movie in lib:
        crew = sorted(index.index_of(role, name)
                      for role, name in movie.crew_features())
        genres = [index.index_of("genre", g) for g in movie.genres]
        for i, j in combinations(crew, 2):
            for g in genres:
                entries[(i, j, g)] = entries.get((i, j, g), 0) + 1
                entries[(j, i, g)] = entries.get((j, i, g), 0) + 1
    return AcquaintanceTensor(entries, C=index.crew_count, G=index.genre_count)


def _check_dim(t: AcquaintanceTensor, x: np.ndarray) -> None:
    if x.ndim != 1 or len(x) != t.n:
        raise ValueError(f"configuration length {x.shape} does not match "
                         f"tensor dimension {t.n}")


def acquaintance(t: AcquaintanceTensor, x) -> float:
    """Ordered triple sum over the stored sparse entries only."""
    v = _vec(x)
    _check_dim(t, v)
    n, m, l, counts = t._arrays
    return float(np.sum(counts * v[n] * v[m] * v[l]))


def acquaintance_gradient(t: AcquaintanceTensor, x) -> np.ndarray:
    """Analytic gradient of the triple sum.

    Crew coordinate k gets sum over entries incident to k in either crew
    slot; genre coordinate g gets the pair mass of its slice.
    """
    v = _vec(x)
    _check_dim(t, v)
    n, m, l, counts = t._arrays
    grad = np.zeros(t.n)
    np.add.at(grad, n, counts * v[m] * v[l])
    np.add.at(grad, m, counts * v[n] * v[l])
    np.add.at(grad, l, counts * v[n] * v[m])
    return grad


def save_tensor(t: AcquaintanceTensor, path: str | Path) -> None:
    """One JSON object per line, lower-triangle (n < m) only, sorted."""
    lines = []
    for (n, m, l) in sorted(t.entries):
        if n < m:
            lines.append(json.dumps(
                {"n": n, "m": m, "l": l, "count": t.entries[(n, m, l)]}))
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""),
                          encoding="utf-8")


def load_tensor(path: str | Path, index: FeatureIndex) -> AcquaintanceTensor:
    """Read the lower triangle and mirror it into both orders."""
    entries: dict[tuple[int, int, int], int] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            obj = json.loads(line)
            n, m, l, count = obj["n"], obj["m"], obj["l"], obj["count"]
            if not n < m:
                raise ValueError(f"line {line_no}: expected n < m")
            entries[(n, m, l)] = count
            entries[(m, n, l)] = count
    return AcquaintanceTensor(entries, C=index.crew_count, G=index.genre_count)
