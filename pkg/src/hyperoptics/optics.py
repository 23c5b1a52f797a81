"""Linear-optical elements as hypergraph rewrites.

Elements act on paths (vertices).  A 50:50 beam splitter replaces each photon
on one input by a superposition over both outputs, so a source touching the
splitter k times branches into 2^k sources; canonical merging then adds
amplitudes of identical branches, which is where interference shows up.

Convention: transmission 1/sqrt(2), reflection i/sqrt(2).
"""
from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Sequence

from .hypergraph import Hyperedge, Hypergraph, HypergraphError, Incidence, canonicalize
from .states import detection_probability, emission_state, format_number

SQRT_HALF = 1 / math.sqrt(2)


@dataclass(frozen=True)
class OpticalElement:
    kind: str
    paths: tuple[str, ...]
    parameter: float | int | None = None

    KINDS = ("mode_shifter", "phase_shifter", "beam_splitter", "path_identity")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise HypergraphError(f"unknown optical element {self.kind!r}")
        two = self.kind in ("beam_splitter", "path_identity")
        if two and (len(self.paths) != 2 or self.paths[0] == self.paths[1]):
            raise HypergraphError(f"{self.kind} needs two distinct paths")
        if not two and len(self.paths) != 1:
            raise HypergraphError(f"{self.kind} acts on exactly one path")

    def apply(self, H: Hypergraph) -> Hypergraph:
        if self.kind == "mode_shifter":
            return apply_mode_shifter(H, self.paths[0], int(self.parameter or 0))
        if self.kind == "phase_shifter":
            return apply_phase_shifter(H, self.paths[0], float(self.parameter or 0.0))
        if self.kind == "beam_splitter":
            return apply_beam_splitter(H, *self.paths)
        return apply_path_identity(H, *self.paths)


def apply_elements(H: Hypergraph, elements: Iterable[OpticalElement]) -> Hypergraph:
    for el in elements:
        H = el.apply(H)
    return H


def apply_mode_shifter(H: Hypergraph, path: str, delta: int) -> Hypergraph:
    """Raise the mode of every photon on ``path`` by ``delta``."""
    v = H.index_of(path)
    if delta < 0:
        raise HypergraphError("mode shift must be nonnegative")
    edges = []
    for e in H.edges:
        inc = tuple(Incidence(u, m + delta if u == v else m) for u, m in e.incidences)
        edges.append(Hyperedge(inc, e.weight))
    return H.with_edges(edges)


def apply_phase_shifter(H: Hypergraph, path: str, phi: float) -> Hypergraph:
    """Multiply each source by exp(i*phi) per photon it sends along ``path``."""
    v = H.index_of(path)
    edges = []
    for e in H.edges:
        k = sum(1 for u, _ in e.incidences if u == v)
        w = e.weight * cmath.exp(1j * phi * k) if k else e.weight
        edges.append(Hyperedge(e.incidences, w))
    return H.with_edges(edges)


def apply_beam_splitter(H: Hypergraph, path_a: str, path_b: str) -> Hypergraph:
    a, b = H.index_of(path_a), H.index_of(path_b)
    if a == b:
        raise HypergraphError("beam splitter needs two distinct paths")
    branches = {
        a: ((a, SQRT_HALF), (b, 1j * SQRT_HALF)),
        b: ((b, SQRT_HALF), (a, 1j * SQRT_HALF)),
    }
    edges = []
    for e in H.edges:
        options = []
        for u, m in e.incidences:
            if u in branches:
                options.append([(Incidence(t, m), f) for t, f in branches[u]])
            else:
                options.append([(Incidence(u, m), 1.0)])
        for choice in product(*options):
            w = e.weight
            for _, f in choice:
                w *= f
            edges.append(Hyperedge(tuple(inc for inc, _ in choice), w))
    return canonicalize(H.with_edges(edges))


def apply_path_identity(H: Hypergraph, keep: str, merge: str) -> Hypergraph:
    """Align path ``merge`` onto ``keep``; ``merge`` disappears from the vertex set."""
    k, r = H.index_of(keep), H.index_of(merge)
    if k == r:
        raise HypergraphError("path identity needs two distinct paths")
    vertices = tuple(v for i, v in enumerate(H.vertices) if i != r)
    remap = {}
    for i, v in enumerate(H.vertices):
        if i != r:
            remap[i] = vertices.index(v)
    remap[r] = remap[k]
    edges = [Hyperedge(tuple(Incidence(remap[u], m) for u, m in e.incidences), e.weight) for e in H.edges]
    return canonicalize(Hypergraph(vertices, tuple(edges)))


# -- phase sweeps ----------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    phi: float
    detectors: tuple[str, ...]
    probability: float

    @property
    def detset(self) -> str:
        return "+".join(self.detectors)


def interference_sweep(builder: Callable[[float], Hypergraph], phases: Sequence[float],
                       detectors: Sequence[Sequence[str]], order: int = 1) -> list[SweepRow]:
    """Detection probabilities of each detector set as the setup phase varies.

    ``builder(phi)`` returns the final hypergraph of the setup.  Rows come out
    ordered by phi, then by the order of ``detectors``.
    """
    if not len(phases):
        raise ValueError("phase grid is empty")
    rows = []
    for phi in sorted(phases):
        psi = emission_state(builder(phi), order)
        for dets in detectors:
            rows.append(SweepRow(phi, tuple(dets), detection_probability(psi, dets)))
    return rows


def sweep_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["phi", "detset", "probability"])
    for r in rows:
        w.writerow([f"{r.phi:.9f}", r.detset, format_number(r.probability)])
    return buf.getvalue()
