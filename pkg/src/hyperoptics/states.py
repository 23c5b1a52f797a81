"""Quantum states synthesized from hypergraphs, and their diagnostics.

States are sparse maps from photon patterns to complex amplitudes.  A pattern
is the sorted tuple of ``(vertex index, mode)`` occupations, so a vertex can
appear more than once when photons bunch.  Amplitudes refer to normalized
Fock states.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .hypergraph import MERGE_TOL, Hypergraph
from .matching import DEFAULT_PM_CAP, enumerate_perfect_matchings

NORM_TOL = 1e-9
RANK_RTOL = 1e-9

Pattern = tuple[tuple[int, int], ...]


class StateError(ValueError):
    pass


@dataclass(frozen=True)
class QuantumState:
    vertices: tuple[str, ...]
    terms: Mapping[Pattern, complex] = field(default_factory=dict)
    normalized: bool = False

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def __len__(self):
        return len(self.terms)

    def amplitude(self, pattern: Pattern) -> complex:
        return self.terms.get(tuple(sorted(pattern)), 0j)

    def norm_squared(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self.terms.values())

    def is_empty(self) -> bool:
        return not self.terms

    def resolve(self, v: str | int) -> int:
        if isinstance(v, str):
            try:
                return self.vertices.index(v)
            except ValueError:
                raise StateError(f"unknown vertex {v!r}") from None
        if not 0 <= v < len(self.vertices):
            raise StateError(f"unknown vertex index {v}")
        return v

    def is_coincidence_complete(self, pattern: Pattern) -> bool:
        return sorted(v for v, _ in pattern) == list(range(len(self.vertices)))

    def scaled(self, factor: complex) -> QuantumState:
        return QuantumState(self.vertices, {p: a * factor for p, a in self.terms.items()}, self.normalized)

    def table(self) -> list[tuple[str, float, float]]:
        """Rows ``(pattern string, re, im)`` sorted by pattern string."""
        rows = [(pattern_string(self.vertices, p), a.real, a.imag) for p, a in self.terms.items()]
        rows.sort()
        return rows


def make_state(vertices: Sequence[str], raw: Mapping[Pattern, complex], normalize: bool = True) -> QuantumState:
    """Drop negligible amplitudes and optionally normalize.

    An empty superposition is returned with ``normalized=False``.
    """
    terms = {tuple(sorted(p)): complex(a) for p, a in raw.items() if abs(a) >= MERGE_TOL}
    if not terms:
        return QuantumState(tuple(vertices), {}, False)
    if normalize:
        norm = math.sqrt(math.fsum(abs(a) ** 2 for a in terms.values()))
        terms = {p: a / norm for p, a in terms.items()}
        terms = {p: a for p, a in terms.items() if abs(a) >= MERGE_TOL}
    return QuantumState(tuple(vertices), terms, normalize)


def from_kets(vertices: Sequence[str], kets: Mapping[str | Sequence[int], complex], normalize: bool = True) -> QuantumState:
    """State from coincidence-complete kets, e.g. ``{"000": 1, "111": 1}``.

    String keys need one digit per vertex; sequences give one mode per vertex.
    """
    n = len(vertices)
    raw: dict[Pattern, complex] = {}
    for ket, amp in kets.items():
        modes = [int(c) for c in ket] if isinstance(ket, str) else list(ket)
        if len(modes) != n:
            raise StateError(f"ket {ket!r} does not have {n} entries")
        p = tuple((v, m) for v, m in enumerate(modes))
        raw[p] = raw.get(p, 0j) + amp
    return make_state(vertices, raw, normalize)


def pattern_string(vertices: Sequence[str], pattern: Pattern) -> str:
    """One token per vertex in declaration order: its mode, ``-`` if empty.

    Bunched photons render as ``[m1+m2]``.  Tokens are concatenated when all
    are single characters and comma-joined otherwise.
    """
    per_vertex: list[list[int]] = [[] for _ in vertices]
    for v, m in pattern:
        per_vertex[v].append(m)
    tokens = []
    for modes in per_vertex:
        if not modes:
            tokens.append("-")
        elif len(modes) == 1:
            tokens.append(str(modes[0]))
        else:
            tokens.append("[" + "+".join(map(str, sorted(modes))) + "]")
    if all(len(t) == 1 for t in tokens):
        return "".join(tokens)
    return ",".join(tokens)


def format_number(x: float) -> str:
    """10 significant digits; values below the merge tolerance print as 0."""
    if abs(x) < MERGE_TOL:
        return "0"
    return f"{x:.10g}"


def _letters(m: int) -> tuple[str, ...]:
    if m <= 26:
        return tuple(chr(ord("a") + i) for i in range(m))
    return tuple(f"v{i}" for i in range(m))


# -- synthesis ---------------------------------------------------------------

def post_selected_state(H: Hypergraph, cap: int = DEFAULT_PM_CAP) -> QuantumState:
    """Coherent superposition of all perfect matchings of ``H``.

    Each matching contributes the product of its edge weights to the pattern
    in which every vertex carries the mode of its covering edge.
    """
    raw: dict[Pattern, complex] = {}
    for pm in enumerate_perfect_matchings(H, cap=cap).matchings:
        amp = 1 + 0j
        occ = []
        for i in pm:
            e = H.edges[i]
            amp *= e.weight
            occ.extend(e.incidences)
        p = tuple(sorted(occ))
        raw[p] = raw.get(p, 0j) + amp
    return make_state(H.vertices, raw)


def _fock_factor(pattern: Pattern) -> float:
    f = 1
    for count in Counter(pattern).values():
        f *= math.factorial(count)
    return math.sqrt(f)


def emission_state(H: Hypergraph, order: int, normalize: bool = True) -> QuantumState:
    """Superposition over all ways ``order`` vertex-disjoint sources fire together.

    Photons of one source may share a path (after a beam splitter); those
    patterns pick up the bosonic sqrt(n!) factor of the occupied mode.
    """
    if order < 1:
        raise StateError("emission order must be >= 1")
    masks = []
    for e in H.edges:
        mask = 0
        for v, _ in e.incidences:
            mask |= 1 << v
        masks.append(mask)
    raw: dict[Pattern, complex] = {}
    m = len(H.edges)

    def rec(start: int, used: int, depth: int, amp: complex, occ: list):
        if depth == order:
            p = tuple(sorted(occ))
            raw[p] = raw.get(p, 0j) + amp
            return
        for i in range(start, m - (order - depth) + 1):
            if masks[i] & used:
                continue
            e = H.edges[i]
            rec(i + 1, used | masks[i], depth + 1, amp * e.weight, occ + list(e.incidences))

    rec(0, 0, 0, 1 + 0j, [])
    raw = {p: a * _fock_factor(p) for p, a in raw.items()}
    return make_state(H.vertices, raw, normalize)


# -- diagnostics -------------------------------------------------------------

def _require_normalized(psi: QuantumState, name: str):
    if not psi.normalized or abs(psi.norm_squared() - 1) > NORM_TOL:
        raise StateError(f"{name} must be a normalized state")


def overlap(psi: QuantumState, target: QuantumState) -> complex:
    """Inner product <target|psi> over shared patterns."""
    small, big = (psi, target) if len(psi) <= len(target) else (target, psi)
    s = 0j
    for p in small.terms:
        if p in big.terms:
            s += target.terms[p].conjugate() * psi.terms[p]
    return s


def fidelity(psi: QuantumState, target: QuantumState) -> float:
    """Squared overlap |<target|psi>|^2, clipped into [0, 1]."""
    _require_normalized(psi, "psi")
    _require_normalized(target, "target")
    return min(1.0, max(0.0, abs(overlap(psi, target)) ** 2))


def detection_probability(psi: QuantumState, detectors: Iterable[str | int]) -> float:
    """Probability of exactly one photon (any mode) at each listed detector."""
    _require_normalized(psi, "psi")
    dets = {psi.resolve(d) for d in detectors}
    total = []
    for p, a in psi.terms.items():
        counts = Counter(v for v, _ in p)
        if all(counts[d] == 1 for d in dets):
            total.append(abs(a) ** 2)
    return min(1.0, math.fsum(total))


@dataclass(frozen=True, order=True)
class SrvTriple:
    A: int
    B: int
    C: int

    def __iter__(self):
        return iter((self.A, self.B, self.C))

    def __str__(self):
        return f"{self.A},{self.B},{self.C}"


def _party_rank(psi: QuantumState, block: Sequence[int]) -> int:
    rows: dict[tuple, int] = {}
    cols: dict[tuple, int] = {}
    entries = []
    inside = set(block)
    for p, a in psi.terms.items():
        modes = dict(p)
        r = tuple(modes[v] for v in sorted(inside))
        c = tuple(modes[v] for v in range(psi.num_vertices) if v not in inside)
        entries.append((rows.setdefault(r, len(rows)), cols.setdefault(c, len(cols)), a))
    M = np.zeros((len(rows), len(cols)), dtype=complex)
    for i, j, a in entries:
        M[i, j] += a
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > RANK_RTOL * s[0]))


def srv(psi: QuantumState, parties: Sequence[Sequence[str | int]]) -> SrvTriple:
    """Schmidt-rank vector: rank of each party's reduced density matrix, sorted descending.

    The rank of party P's reduced state equals the rank of the coefficient
    matrix with P's modes as rows and the complement's modes as columns.
    """
    _require_normalized(psi, "psi")
    if len(parties) != 3:
        raise StateError("SRV needs exactly 3 parties")
    blocks = [[psi.resolve(v) for v in block] for block in parties]
    flat = [v for b in blocks for v in b]
    if any(not b for b in blocks) or sorted(flat) != list(range(psi.num_vertices)):
        raise StateError("parties must partition the vertices into 3 nonempty blocks")
    for p in psi.terms:
        if not psi.is_coincidence_complete(p):
            raise StateError("SRV needs one photon per vertex in every term")
    ranks = sorted((_party_rank(psi, b) for b in blocks), reverse=True)
    return SrvTriple(*ranks)


def srv_constructible(A: int, B: int, C: int) -> bool:
    """Whether an SRV(A,B,C) state is reachable with A perfect matchings."""
    if not (A >= B >= C >= 1):
        raise StateError(f"need A >= B >= C >= 1, got ({A},{B},{C})")
    return 1 + min(1 + (A - B), C) + min(1 + (A - C), B - 1) >= A


# -- reference states ------------------------------------------------------

def ghz_state(m: int, d: int, vertices: Sequence[str] | None = None) -> QuantumState:
    if m < 2 or d < 2:
        raise StateError("GHZ state needs m >= 2 and d >= 2")
    vertices = tuple(vertices) if vertices is not None else _letters(m)
    raw = {tuple((v, i) for v in range(m)): 1.0 for i in range(d)}
    return make_state(vertices, raw)


def w_state(m: int, vertices: Sequence[str] | None = None) -> QuantumState:
    if m < 3:
        raise StateError("W state needs m >= 3")
    vertices = tuple(vertices) if vertices is not None else _letters(m)
    raw = {tuple((v, int(v == k)) for v in range(m)): 1.0 for k in range(m)}
    return make_state(vertices, raw)


def product_state(modes: Sequence[int], vertices: Sequence[str] | None = None) -> QuantumState:
    vertices = tuple(vertices) if vertices is not None else _letters(len(modes))
    return make_state(vertices, {tuple(enumerate(modes)): 1.0})


__all__ = [
    "QuantumState", "SrvTriple", "StateError", "Pattern",
    "make_state", "from_kets", "pattern_string", "format_number",
    "post_selected_state", "emission_state",
    "overlap", "fidelity", "detection_probability", "srv", "srv_constructible",
    "ghz_state", "w_state", "product_state",
]
