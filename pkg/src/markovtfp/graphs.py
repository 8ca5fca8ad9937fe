"""Finite simple graphs with per-node state counts, clique enumeration and glueing."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError

Edge = frozenset


@dataclass(frozen=True)
class StateGraph:
    """Undirected simple graph whose nodes carry a number of states.

    ``nodes`` fixes the canonical node order used for configuration indexing.
    """

    nodes: tuple[str, ...]
    states: Mapping[str, int]
    edges: frozenset = field(default_factory=frozenset)
    name: str = "G"

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(str(v) for v in self.nodes))
        object.__setattr__(self, "states", {str(k): int(v) for k, v in self.states.items()})
        object.__setattr__(self, "edges", frozenset(frozenset(map(str, e)) for e in self.edges))
        self.validate()

    def validate(self) -> None:
        if len(set(self.nodes)) != len(self.nodes):
            raise ValidationError(f"duplicate node labels in graph {self.name!r}")
        for v in self.nodes:
            d = self.states.get(v)
            if d is None:
                raise ValidationError(f"node {v!r} has no state count")
            if d < 1:
                raise ValidationError(f"node {v!r} has state count {d} < 1")
        extra = set(self.states) - set(self.nodes)
        if extra:
            raise ValidationError(f"state counts given for unknown nodes {sorted(extra)}")
        known = set(self.nodes)
        for e in self.edges:
            if len(e) != 2:
                raise ValidationError(f"self-loop or malformed edge {sorted(e)}")
            bad = e - known
            if bad:
                raise ValidationError(f"edge {sorted(e)} has unknown endpoint(s) {sorted(bad)}")

    @classmethod
    def build(cls, nodes, edges=(), states=2, name="G") -> "StateGraph":
        """Convenience constructor; ``states`` is an int (same for all nodes) or a mapping."""
        nodes = tuple(str(v) for v in nodes)
        if isinstance(states, Mapping):
            st = {str(k): v for k, v in states.items()}
        else:
            st = {v: int(states) for v in nodes}
        return cls(nodes, st, frozenset(frozenset(map(str, e)) for e in edges), name)

    @property
    def position(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.nodes)}

    def neighbours(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.nodes}
        for e in self.edges:
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def sorted_nodes(self, subset: Iterable[str]) -> tuple[str, ...]:
        pos = self.position
        return tuple(sorted(subset, key=pos.__getitem__))

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted((self.sorted_nodes(e) for e in self.edges), key=lambda e: tuple(self.position[v] for v in e))

    def same_labelled(self, other: "StateGraph") -> bool:
        """Label-respecting equality (node order and graph name ignored)."""
        return (set(self.nodes) == set(other.nodes) and dict(self.states) == dict(other.states)
                and self.edges == other.edges)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "nodes": [{"id": v, "states": self.states[v]} for v in self.nodes],
            "edges": [list(e) for e in self.sorted_edges()],
        }

    @classmethod
    def from_dict(cls, data: Mapping, name: str | None = None) -> "StateGraph":
        try:
            raw_nodes = data["nodes"]
            nodes = [str(n["id"]) for n in raw_nodes]
            states = {str(n["id"]): int(n.get("states", 2)) for n in raw_nodes}
            edges = [tuple(map(str, e)) for e in data.get("edges", [])]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed graph description: {exc!r}") from exc
        for e in edges:
            if len(e) != 2:
                raise ValidationError(f"edge {list(e)} must have exactly two endpoints")
        return cls(tuple(nodes), states, frozenset(frozenset(e) for e in edges),
                   name or str(data.get("name", "G")))


def maximal_cliques(g: StateGraph) -> list[tuple[str, ...]]:
    """Inclusion-maximal cliques (Bron-Kerbosch with pivoting).

    Each clique is returned in canonical node order and the list is sorted by
    node positions, so isolated nodes show up as singleton cliques.
    """
    adj = g.neighbours()
    pos = g.position
    found: list[tuple[str, ...]] = []

    def expand(r: set[str], p: set[str], x: set[str]) -> None:
        if not p and not x:
            found.append(g.sorted_nodes(r))
            return
        pivot = max(p | x, key=lambda u: (len(adj[u] & p), -pos[u]))
        for v in sorted(p - adj[pivot], key=pos.__getitem__):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(g.nodes), set())
    found.sort(key=lambda c: tuple(pos[v] for v in c))
    return found


def induced_subgraph(g: StateGraph, nodes: Iterable[str], name: str | None = None) -> StateGraph:
    keep = set(map(str, nodes))
    unknown = keep - set(g.nodes)
    if unknown:
        raise ValidationError(f"unknown node(s) {sorted(unknown)} in graph {g.name!r}")
    order = tuple(v for v in g.nodes if v in keep)
    return StateGraph(order, {v: g.states[v] for v in order},
                      frozenset(e for e in g.edges if e <= keep), name or g.name)


@dataclass(frozen=True)
class GlueSpec:
    """Copies of component graphs to be glued along the shared node set.

    ``shared`` is ordered; that order is the node order of the common subgraph.
    """

    components: tuple[tuple[StateGraph, int], ...]
    shared: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple((g, int(a)) for g, a in self.components))
        object.__setattr__(self, "shared", tuple(map(str, self.shared)))
        self.validate()

    @property
    def graphs(self) -> list[StateGraph]:
        return [g for g, _ in self.components]

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.components)

    def common_subgraph(self) -> StateGraph:
        g0 = self.components[0][0]
        h = induced_subgraph(g0, self.shared, name="H")
        return StateGraph(self.shared, {v: h.states[v] for v in self.shared}, h.edges, "H")

    def validate(self) -> None:
        if not self.components:
            raise ValidationError("glue specification has no components")
        if len(set(self.shared)) != len(self.shared):
            raise ValidationError("duplicate nodes in the shared node set")
        names = [g.name for g, _ in self.components]
        if len(set(names)) != len(names):
            raise ValidationError(f"component graph names must be distinct, got {names}")
        for g, a in self.components:
            if a < 0:
                raise ValidationError(f"negative multiplicity {a} for component {g.name!r}")
            missing = set(self.shared) - set(g.nodes)
            if missing:
                raise ValidationError(f"component {g.name!r} lacks shared node(s) {sorted(missing)}")
        ref = self.components[0][0]
        ref_h = induced_subgraph(ref, self.shared)
        for g, _ in self.components[1:]:
            h = induced_subgraph(g, self.shared)
            for v in self.shared:
                if h.states[v] != ref_h.states[v]:
                    raise ValidationError(
                        f"shared node {v!r} has {h.states[v]} states in {g.name!r} "
                        f"but {ref_h.states[v]} in {ref.name!r}")
            diff = h.edges ^ ref_h.edges
            if diff:
                e = sorted(sorted(x) for x in diff)[0]
                raise ValidationError(
                    f"induced subgraphs on the shared nodes differ: edge {e} "
                    f"({g.name!r} vs {ref.name!r})")

    def with_multiplicities(self, mults: Sequence[int]) -> "GlueSpec":
        if len(mults) != len(self.components):
            raise ValidationError("multiplicity vector has the wrong length")
        return GlueSpec(tuple((g, a) for (g, _), a in zip(self.components, mults)), self.shared)

    def to_dict(self) -> dict:
        return {"shared": list(self.shared),
                "components": [{"graph": g.to_dict(), "copies": a} for g, a in self.components]}

    @classmethod
    def from_dict(cls, data: Mapping, base_dir: Path | None = None) -> "GlueSpec":
        try:
            shared = [str(v) for v in data["shared"]]
            comps = []
            for k, c in enumerate(data["components"]):
                gd = c["graph"]
                if isinstance(gd, str):
                    path = Path(gd)
                    if base_dir is not None and not path.is_absolute():
                        path = base_dir / path
                    gd = json.loads(path.read_text())
                    default_name = path.stem
                else:
                    default_name = f"G{k + 1}"
                g = StateGraph.from_dict(gd, name=gd.get("name", default_name))
                comps.append((g, int(c.get("copies", 1))))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed glue specification: {exc!r}") from exc
        return cls(tuple(comps), tuple(shared))


def copy_node_name(graph: StateGraph, copy: int, node: str) -> str:
    return f"{graph.name}#{copy}/{node}"


def glue(spec: GlueSpec, name: str = "glued") -> StateGraph:
    """Glue ``a_i`` copies of each component along the shared nodes.

    Node order: shared nodes first, then the copies in component order, copy
    index (1-based), and node order inside the component.
    """
    if sum(spec.multiplicities) < 1:
        raise ValidationError("at least one multiplicity must be positive")
    shared = set(spec.shared)
    h = spec.common_subgraph()
    nodes = list(spec.shared)
    states = {v: h.states[v] for v in spec.shared}
    edges = set(h.edges)
    for g, a in spec.components:
        private = [v for v in g.nodes if v not in shared]
        for c in range(1, a + 1):
            rename = {v: copy_node_name(g, c, v) for v in private}
            rename.update({v: v for v in shared})
            for v in private:
                nodes.append(rename[v])
                states[rename[v]] = g.states[v]
            for e in g.edges:
                if not e <= shared:
                    edges.add(frozenset(rename[v] for v in e))
    return StateGraph(tuple(nodes), states, frozenset(edges), name)


def load_graph(path: str | Path) -> StateGraph:
    path = Path(path)
    data = json.loads(path.read_text())
    return StateGraph.from_dict(data, name=data.get("name", path.stem))


def load_glue_spec(path: str | Path) -> GlueSpec:
    path = Path(path)
    return GlueSpec.from_dict(json.loads(path.read_text()), base_dir=path.parent)


# Small graph families used throughout tests and experiments.

def complete_bipartite(left: int, right: int, states: int = 2, name: str | None = None) -> StateGraph:
    ls = [f"a{i}" for i in range(1, left + 1)]
    rs = [f"b{j}" for j in range(1, right + 1)]
    return StateGraph.build(ls + rs, [(u, v) for u in ls for v in rs], states,
                            name or f"K{left}_{right}")


def path_glue_spec(states: int = 2) -> GlueSpec:
    e1 = StateGraph.build(["0", "1"], [("0", "1")], states, "e1")
    e2 = StateGraph.build(["0", "2"], [("0", "2")], states, "e2")
    return GlueSpec(((e1, 1), (e2, 1)), ("0",))


def star_glue_spec(arms: int, states: int = 2) -> GlueSpec:
    """Star K_{1,arms} as ``arms`` copies of one edge glued at the centre."""
    e = StateGraph.build(["c", "leaf"], [("c", "leaf")], states, "edge")
    return GlueSpec(((e, arms),), ("c",))


def k3n_glue_spec(copies: int, states: int = 2) -> GlueSpec:
    """K_{3,N} as N copies of K_{3,1} over three edgeless shared nodes."""
    k31 = complete_bipartite(3, 1, states, name="K3_1")
    return GlueSpec(((k31, copies),), ("a1", "a2", "a3"))
