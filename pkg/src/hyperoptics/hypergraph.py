"""Weighted, mode-labeled hypergraphs describing optical setups.

Each vertex is an output path, each hyperedge a probabilistic source that
emits one photon into every incident path.  An incidence carries the photon's
mode number and the edge carries a complex amplitude whose squared magnitude
is the creation probability of that source.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

MERGE_TOL = 1e-12


class HypergraphError(ValueError):
    """Raised for malformed hypergraphs or hypergraph files."""


class Vertex(NamedTuple):
    id: str
    index: int


class Incidence(NamedTuple):
    vertex: int
    mode: int


def polar_weight(amp: float, phase: float) -> complex:
    """Weight from amplitude ``amp >= 0`` and phase in radians."""
    if amp < 0:
        raise HypergraphError(f"negative amplitude {amp}")
    return cmath.rect(amp, phase)


@dataclass(frozen=True)
class Hyperedge:
    incidences: tuple[Incidence, ...]
    weight: complex = 1.0 + 0.0j

    @property
    def degree(self) -> int:
        return len(self.incidences)

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(v for v, _ in self.incidences)

    @property
    def has_repeated_vertex(self) -> bool:
        return len(self.vertex_set) < len(self.incidences)

    def key(self) -> tuple[Incidence, ...]:
        """Sorted incidence multiset; edges with equal keys merge."""
        return tuple(sorted(self.incidences))


@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple[str, ...]
    edges: tuple[Hyperedge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        if len(set(self.vertices)) != len(self.vertices):
            raise HypergraphError("duplicate vertex id")
        n = len(self.vertices)
        for e in self.edges:
            if not e.incidences:
                raise HypergraphError("hyperedge with empty incidence list")
            for v, mode in e.incidences:
                if not 0 <= v < n:
                    raise HypergraphError(f"incidence on undeclared vertex index {v}")
                if mode < 0:
                    raise HypergraphError(f"negative mode {mode}")
            w = complex(e.weight)
            if not (math.isfinite(w.real) and math.isfinite(w.imag)):
                raise HypergraphError("non-finite weight")

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def index_of(self, vertex_id: str) -> int:
        try:
            return self.vertices.index(vertex_id)
        except ValueError:
            raise HypergraphError(f"unknown vertex {vertex_id!r}") from None

    def vertex(self, vertex_id: str) -> Vertex:
        return Vertex(vertex_id, self.index_of(vertex_id))

    def resolve(self, v: str | int) -> int:
        """Vertex index from an id or an index."""
        if isinstance(v, str):
            return self.index_of(v)
        if not 0 <= v < len(self.vertices):
            raise HypergraphError(f"unknown vertex index {v}")
        return v

    def with_edges(self, edges: Iterable[Hyperedge]) -> Hypergraph:
        return Hypergraph(self.vertices, tuple(edges))

    def add_edge(self, incidences: Sequence[tuple[str, int]], weight: complex = 1.0) -> Hypergraph:
        edge = Hyperedge(tuple(Incidence(self.index_of(v), int(m)) for v, m in incidences), complex(weight))
        return self.with_edges(self.edges + (edge,))

    def is_canonical(self) -> bool:
        return self == canonicalize(self)

    def __repr__(self):
        return f"Hypergraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


def build_hypergraph(vertex_ids: Sequence[str], edge_specs: Iterable[tuple[Sequence[tuple[str, int]], complex]]) -> Hypergraph:
    """Build a hypergraph from vertex ids and ``(incidences, weight)`` pairs.

    Incidences name vertices by id, e.g. ``([("a", 0), ("b", 0)], 1.0)``.
    Edge order and weights are kept exactly as given.
    """
    vertex_ids = tuple(vertex_ids)
    if len(set(vertex_ids)) != len(vertex_ids):
        raise HypergraphError("duplicate vertex id")
    index = {v: i for i, v in enumerate(vertex_ids)}
    edges = []
    for incidences, weight in edge_specs:
        if not incidences:
            raise HypergraphError("hyperedge with empty incidence list")
        inc = []
        for v, mode in incidences:
            if v not in index:
                raise HypergraphError(f"unknown vertex {v!r} in incidence")
            inc.append(Incidence(index[v], int(mode)))
        edges.append(Hyperedge(tuple(inc), complex(weight)))
    return Hypergraph(vertex_ids, tuple(edges))


def canonicalize(H: Hypergraph, tol: float = MERGE_TOL) -> Hypergraph:
    """Sort incidences, merge edges on identical incidence multisets, drop ~0 weights.

    Merging sums weights coherently, which is how beam-splitter rewrites
    produce interference.
    """
    merged: dict[tuple[Incidence, ...], complex] = {}
    for e in H.edges:
        k = e.key()
        merged[k] = merged.get(k, 0j) + complex(e.weight)
    edges = [Hyperedge(k, w) for k, w in sorted(merged.items()) if abs(w) >= tol]
    return Hypergraph(H.vertices, tuple(edges))


# -- file format -----------------------------------------------------------

_TOP_KEYS = {"vertices", "edges"}
_EDGE_KEYS = {"on", "w"}


def _weight_from_json(w) -> complex:
    if isinstance(w, (int, float)) and not isinstance(w, bool):
        return complex(w)
    if not isinstance(w, dict):
        raise HypergraphError(f"bad weight {w!r}")
    keys = set(w)
    if keys == {"re", "im"}:
        return complex(float(w["re"]), float(w["im"]))
    if keys == {"amp", "phase"}:
        return polar_weight(float(w["amp"]), float(w["phase"]))
    raise HypergraphError(f"weight must have keys re/im or amp/phase, got {sorted(keys)}")


def to_dict(H: Hypergraph) -> dict:
    edges = []
    for e in H.edges:
        w = complex(e.weight)
        edges.append({
            "on": [[H.vertices[v], m] for v, m in e.incidences],
            "w": {"re": w.real, "im": w.imag},
        })
    return {"vertices": list(H.vertices), "edges": edges}


def from_dict(data: dict) -> Hypergraph:
    if not isinstance(data, dict):
        raise HypergraphError("hypergraph document must be an object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise HypergraphError(f"unknown keys {sorted(unknown)}")
    if "vertices" not in data:
        raise HypergraphError("missing 'vertices'")
    vertices = data["vertices"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise HypergraphError("'vertices' must be a list of strings")
    specs = []
    for e in data.get("edges", []):
        if not isinstance(e, dict):
            raise HypergraphError("edge must be an object")
        unknown = set(e) - _EDGE_KEYS
        if unknown:
            raise HypergraphError(f"unknown edge keys {sorted(unknown)}")
        if "on" not in e:
            raise HypergraphError("edge missing 'on'")
        inc = []
        for item in e["on"]:
            if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], str)
                    and isinstance(item[1], int) and not isinstance(item[1], bool)):
                raise HypergraphError(f"bad incidence {item!r}")
            inc.append((item[0], item[1]))
        specs.append((inc, _weight_from_json(e.get("w", {"re": 1.0, "im": 0.0}))))
    return build_hypergraph(vertices, specs)


def dumps(H: Hypergraph) -> str:
    # one edge per line keeps diffs of generated instances readable
    head = json.dumps(list(H.vertices))
    lines = [json.dumps(e, separators=(", ", ": ")) for e in to_dict(H)["edges"]]
    if not lines:
        return '{"vertices": %s, "edges": []}\n' % head
    body = ",\n    ".join(lines)
    return '{"vertices": %s,\n "edges": [\n    %s\n ]}\n' % (head, body)


def loads(text: str) -> Hypergraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise HypergraphError(f"invalid JSON: {exc}") from exc
    return from_dict(data)


def load(path) -> Hypergraph:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(H: Hypergraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(H))
