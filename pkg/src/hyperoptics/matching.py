"""Perfect matchings of hypergraphs.

A perfect matching (PM) is a set of hyperedges covering every vertex exactly
once; in an experiment it is one way of producing an N-fold coincidence.
Deciding whether one exists is NP-complete for k >= 3, so everything here is
exact backtracking with minimum-remaining-edges branching and explicit caps.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hypergraph import Hypergraph

DEFAULT_PM_CAP = 10**6
ORACLE_MAX_EDGES = 25


class MatchingOverflowError(RuntimeError):
    """Raised when a search would exceed its configured size cap."""


PerfectMatching = tuple[int, ...]


@dataclass
class MatchingReport:
    matchings: list[PerfectMatching] = field(default_factory=list)
    count: int = 0
    truncated: bool = False

    def as_set(self) -> set[PerfectMatching]:
        return set(self.matchings)


class _Search:
    """Bitmask exact-cover search shared by decide and enumerate."""

    def __init__(self, H: Hypergraph):
        self.n = H.num_vertices
        self.full = (1 << self.n) - 1
        self.masks: list[int] = []
        self.by_vertex: list[list[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(H.edges):
            mask = 0
            for v, _ in e.incidences:
                mask |= 1 << v
            self.masks.append(mask)
            # repeated vertices can never be part of an exact cover
            if e.has_repeated_vertex:
                continue
            for v in e.vertex_set:
                self.by_vertex[v].append(i)

    def _pick(self, covered: int) -> tuple[int, list[int]] | None:
        best = None
        best_edges: list[int] = []
        for v in range(self.n):
            if covered >> v & 1:
                continue
            usable = [i for i in self.by_vertex[v] if not self.masks[i] & covered]
            if best is None or len(usable) < len(best_edges):
                best, best_edges = v, usable
                if not usable:
                    break
        if best is None:
            return None
        return best, best_edges

    def run(self, limit: int | None):
        """Yield matchings (unsorted tuples) until exhausted or ``limit`` found."""
        found = 0
        chosen: list[int] = []

        def rec(covered: int):
            nonlocal found
            if covered == self.full:
                found += 1
                yield tuple(sorted(chosen))
                return
            _, edges = self._pick(covered)
            for i in edges:
                chosen.append(i)
                yield from rec(covered | self.masks[i])
                chosen.pop()
                if limit is not None and found >= limit:
                    return

        if limit is not None and limit <= 0:
            return
        yield from rec(0)


def has_perfect_matching(H: Hypergraph) -> bool:
    """True iff at least one perfect matching exists (vacuously true with no vertices)."""
    for _ in _Search(H).run(limit=1):
        return True
    return False


def enumerate_perfect_matchings(H: Hypergraph, limit: int | None = None, cap: int = DEFAULT_PM_CAP) -> MatchingReport:
    """All perfect matchings, sorted lexicographically by edge-index tuple.

    With ``limit`` the search stops after ``limit`` matchings and sets
    ``truncated`` if at least one more exists; the kept matchings are then the
    first ones in search order, still returned sorted.  Without ``limit`` an
    enumeration exceeding ``cap`` raises :class:`MatchingOverflowError`.
    """
    if limit is not None and limit < 1:
        raise ValueError("limit must be a positive integer")
    bound = limit + 1 if limit is not None else cap + 1
    found = list(_Search(H).run(limit=bound))
    truncated = False
    if limit is not None and len(found) > limit:
        found = found[:limit]
        truncated = True
    elif limit is None and len(found) > cap:
        raise MatchingOverflowError(f"more than {cap} perfect matchings")
    found.sort()
    return MatchingReport(found, len(found), truncated)


def count_perfect_matchings(H: Hypergraph, cap: int = DEFAULT_PM_CAP) -> int:
    return enumerate_perfect_matchings(H, cap=cap).count


def brute_force_pm_oracle(H: Hypergraph, max_edges: int = ORACLE_MAX_EDGES) -> MatchingReport:
    """Reference answer by scanning every edge subset.

    Coverage of all 2^m subsets is built by doubling arrays, one edge at a
    time; a subset is a PM iff its vertex union is everything and its total
    incidence count equals the vertex count.
    """
    m = len(H.edges)
    if m > max_edges:
        raise MatchingOverflowError(f"oracle limited to {max_edges} edges, got {m}")
    n = H.num_vertices
    full = (1 << n) - 1
    union = np.zeros(1, dtype=np.int64)
    size = np.zeros(1, dtype=np.int64)
    for e in H.edges:
        mask = 0
        for v, _ in e.incidences:
            mask |= 1 << v
        union = np.concatenate([union, union | mask])
        size = np.concatenate([size, size + len(e.incidences)])
    hits = np.flatnonzero((union == full) & (size == n))
    matchings = sorted(tuple(i for i in range(m) if s >> i & 1) for s in hits.tolist())
    return MatchingReport(matchings, len(matchings), False)


def max_disjoint_pm_family(H: Hypergraph, cap: int = DEFAULT_PM_CAP) -> list[PerfectMatching]:
    """Largest set of perfect matchings that pairwise share no hyperedge.

    Exact branch-and-bound maximum independent set on the PM conflict graph.
    Candidates are tried include-first in lexicographic order and only strict
    improvements are kept, so among maximum families the lexicographically
    smallest one is returned.
    """
    pms = enumerate_perfect_matchings(H, cap=cap).matchings
    if not pms:
        return []
    k = len(pms)
    edge_sets = [set(p) for p in pms]
    # conflict bitsets
    conflict = [0] * k
    by_edge: dict[int, int] = {}
    for i, p in enumerate(pms):
        for e in p:
            by_edge[e] = by_edge.get(e, 0) | (1 << i)
    for i in range(k):
        c = 0
        for e in edge_sets[i]:
            c |= by_edge[e]
        conflict[i] = c & ~(1 << i)

    best: list[int] = []
    current: list[int] = []

    def bound(cand: int) -> int:
        # greedy clique cover of the candidates: each clique contributes at most one PM
        count = 0
        while cand:
            count += 1
            i = (cand & -cand).bit_length() - 1
            clique = 1 << i
            rest = cand & conflict[i]
            while rest:
                j = (rest & -rest).bit_length() - 1
                rest &= ~(1 << j)
                if clique & ~conflict[j] & ~(1 << j) == 0:
                    clique |= 1 << j
            cand &= ~clique
        return count

    def rec(cand: int):
        nonlocal best
        if len(current) > len(best):
            best = list(current)
        if not cand or len(current) + bound(cand) <= len(best):
            return
        i = (cand & -cand).bit_length() - 1
        current.append(i)
        rec(cand & ~conflict[i] & ~(1 << i))
        current.pop()
        rec(cand & ~(1 << i))

    rec((1 << k) - 1)
    return [pms[i] for i in best]
