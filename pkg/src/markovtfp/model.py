"""Matrix of the monomial parameterization of a graphical model.

States are 1-based. Configurations are enumerated in mixed-radix order with the
last node (in the graph's canonical order) varying fastest.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Mapping, Sequence

import numpy as np

from .errors import ResourceError, ValidationError
from .graphs import StateGraph, maximal_cliques

DEFAULT_MAX_COLUMNS = 10**6


def configurations(dims: Sequence[int]) -> list[tuple[int, ...]]:
    """All state tuples for the given state counts, last coordinate fastest."""
    return list(itertools.product(*(range(1, d + 1) for d in dims)))


def config_index(config: Sequence[int], dims: Sequence[int]) -> int:
    idx = 0
    for s, d in zip(config, dims):
        if not 1 <= s <= d:
            raise ValidationError(f"state {s} outside [1, {d}]")
        idx = idx * d + (s - 1)
    return idx


def variable_name(config: Sequence[int], prefix: str = "x") -> str:
    return f"{prefix}[({','.join(map(str, config))})]"


@dataclass(frozen=True)
class ModelMatrix:
    """Nonnegative integer matrix of the monomial map.

    Rows are labelled ``(clique, local configuration)``; columns are global
    configurations over ``nodes``.
    """

    nodes: tuple[str, ...]
    dims: tuple[int, ...]
    rows: tuple[tuple[tuple[str, ...], tuple[int, ...]], ...]
    cols: tuple[tuple[int, ...], ...]
    entries: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def variable_names(self, prefix: str = "x") -> list[str]:
        return [variable_name(c, prefix) for c in self.cols]

    def column_index(self, config: Sequence[int]) -> int:
        return config_index(config, self.dims)

    def margins(self, table: Sequence[int]) -> np.ndarray:
        return self.entries @ np.asarray(table, dtype=np.int64)

    def evaluate(self, theta: Sequence) -> list:
        """Monomial map at parameters ``theta`` (one value per row), exact for Fractions/ints."""
        if len(theta) != len(self.rows):
            raise ValidationError(f"expected {len(self.rows)} parameters, got {len(theta)}")
        out = []
        for j in range(len(self.cols)):
            val = Fraction(1)
            for i in np.flatnonzero(self.entries[:, j]):
                val *= Fraction(theta[i]) ** int(self.entries[i, j])
            out.append(val)
        return out

    def to_text(self) -> str:
        """``rows cols`` header followed by the entries row-major, one row per line."""
        m, n = self.shape
        lines = [f"{m} {n}"]
        lines += [" ".join(str(int(v)) for v in row) for row in self.entries]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "dims": list(self.dims),
            "rows": [{"clique": list(c), "config": list(a)} for c, a in self.rows],
            "cols": [list(b) for b in self.cols],
            "entries": self.entries.astype(int).tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "ModelMatrix":
        entries = np.asarray(data["entries"], dtype=np.int64)
        if entries.ndim != 2:
            raise ValidationError("matrix entries must be a 2-d array")
        m, n = entries.shape
        cols = tuple(tuple(c) for c in data.get("cols", [[j + 1] for j in range(n)]))
        rows = tuple((tuple(r["clique"]), tuple(r["config"])) for r in data["rows"]) \
            if "rows" in data else tuple(((f"r{i}",), ()) for i in range(m))
        return cls(tuple(data.get("nodes", ("v",))), tuple(data.get("dims", (n,))), rows, cols, entries)

    @classmethod
    def from_array(cls, entries) -> "ModelMatrix":
        """Wrap a bare integer matrix; columns are labelled 1..n."""
        arr = np.asarray(entries, dtype=np.int64)
        if arr.ndim != 2:
            raise ValidationError("matrix must be 2-dimensional")
        if (arr < 0).any():
            raise ValidationError("model matrices must be nonnegative")
        m, n = arr.shape
        return cls(("v",), (n,), tuple(((f"r{i}",), ()) for i in range(m)),
                   tuple((j + 1,) for j in range(n)), arr)


def parse_matrix_text(text: str) -> np.ndarray:
    tokens = text.split()
    if len(tokens) < 2:
        raise ValidationError("matrix text must start with 'rows cols'")
    try:
        m, n = int(tokens[0]), int(tokens[1])
        vals = [int(t) for t in tokens[2:]]
    except ValueError as exc:
        raise ValidationError(f"non-integer token in matrix text: {exc}") from exc
    if len(vals) != m * n:
        raise ValidationError(f"expected {m * n} entries, found {len(vals)}")
    return np.asarray(vals, dtype=np.int64).reshape(m, n)


def model_matrix(g: StateGraph, max_columns: int = DEFAULT_MAX_COLUMNS) -> ModelMatrix:
    dims = tuple(g.states[v] for v in g.nodes)
    ncols = prod(dims)
    if ncols > max_columns:
        raise ResourceError(f"graph {g.name!r} has {ncols} configurations (limit {max_columns})")
    pos = g.position
    cliques = maximal_cliques(g)
    rows = []
    offsets = []
    for c in cliques:
        offsets.append(len(rows))
        cdims = [g.states[v] for v in c]
        rows.extend((c, a) for a in configurations(cdims))
    cols = configurations(dims)
    entries = np.zeros((len(rows), ncols), dtype=np.int64)
    for c, off in zip(cliques, offsets):
        idx = [pos[v] for v in c]
        cdims = [g.states[v] for v in c]
        for j, beta in enumerate(cols):
            entries[off + config_index([beta[i] for i in idx], cdims), j] = 1
    return ModelMatrix(g.nodes, dims, tuple(rows), tuple(cols), entries)


@dataclass(frozen=True)
class GroupedLayout:
    """Columns of a model grouped by their restriction to the shared nodes.

    ``groups[j]`` lists the model column indices whose shared part is
    ``keys[j]``, ordered by the configuration of the remaining nodes.
    """

    shared: tuple[str, ...]
    private: tuple[str, ...]
    keys: tuple[tuple[int, ...], ...]
    groups: tuple[tuple[int, ...], ...]

    @property
    def r(self) -> int:
        return len(self.groups)

    @property
    def group_sizes(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.groups)

    def permutation(self) -> list[int]:
        """Model column index for each position of the grouped (group-major) order."""
        return [c for grp in self.groups for c in grp]


def grouped_layout(g: StateGraph, shared: Sequence[str]) -> GroupedLayout:
    shared = tuple(map(str, shared))
    unknown = set(shared) - set(g.nodes)
    if unknown:
        raise ValidationError(f"shared node(s) {sorted(unknown)} not in graph {g.name!r}")
    pos = g.position
    dims = [g.states[v] for v in g.nodes]
    private = tuple(v for v in g.nodes if v not in set(shared))
    keys = configurations([g.states[v] for v in shared])
    rest = configurations([g.states[v] for v in private])
    groups = []
    for b0 in keys:
        grp = []
        for b1 in rest:
            beta = [0] * len(g.nodes)
            for v, s in zip(shared, b0):
                beta[pos[v]] = s
            for v, s in zip(private, b1):
                beta[pos[v]] = s
            grp.append(config_index(beta, dims))
        groups.append(tuple(grp))
    return GroupedLayout(shared, private, tuple(keys), tuple(groups))
