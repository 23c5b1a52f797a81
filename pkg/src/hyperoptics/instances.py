"""Generators for the standard constructions, plus verification and design search.

Instance ids are strings such as ``"fig8_ghz6d10"`` or
``"w_state:m=5,p1=1e-4,p2=1e-2"``.  Every generator checks its own output by
enumerating perfect matchings before returning it.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Sequence

from .hypergraph import Hyperedge, Hypergraph, Incidence, build_hypergraph, canonicalize
from .matching import enumerate_perfect_matchings, has_perfect_matching, max_disjoint_pm_family
from .optics import apply_beam_splitter, apply_path_identity, apply_phase_shifter
from .states import QuantumState, StateError, fidelity, post_selected_state

DEFAULT_P1 = 1e-4
DEFAULT_P2 = 1e-2
DESIGN_POOL_CAP = 30
DESIGN_MAX_VERTICES = 6


class InstanceError(ValueError):
    pass


class DesignSpaceError(ValueError):
    pass


def letters(n: int) -> list[str]:
    return [chr(ord("a") + i) for i in range(n)] if n <= 26 else [f"v{i}" for i in range(n)]


def pm_terms(H: Hypergraph) -> Counter:
    """Number of perfect matchings producing each pattern."""
    terms: Counter = Counter()
    for pm in enumerate_perfect_matchings(H).matchings:
        terms[tuple(sorted(inc for i in pm for inc in H.edges[i].incidences))] += 1
    return terms


def _ket(modes: Sequence[int]) -> tuple:
    return tuple(enumerate(modes))


def _check(cond: bool, what: str):
    if not cond:
        raise InstanceError(f"generator self-check failed: {what}")


def _check_probability(name: str, p: float):
    if not 0 < p <= 1:
        raise InstanceError(f"{name} must lie in (0, 1], got {p}")


def _check_odd(m: int):
    if m < 3 or m % 2 == 0:
        raise InstanceError(f"m must be odd and >= 3, got {m}")


# -- generators --------------------------------------------------------------

def fig2_ghz4() -> Hypergraph:
    """Four pair sources on paths a-d: ab and cd in mode 0, ac and bd in mode 1."""
    H = canonicalize(build_hypergraph("abcd", [
        ([("a", 0), ("b", 0)], 1),
        ([("c", 0), ("d", 0)], 1),
        ([("a", 1), ("c", 1)], 1),
        ([("b", 1), ("d", 1)], 1),
    ]))
    _check(pm_terms(H) == Counter({_ket([0] * 4): 1, _ket([1] * 4): 1}), "fig2 terms")
    return H


def odd_ghz(m: int = 3, p1: float = DEFAULT_P1, p2: float = DEFAULT_P2) -> Hypergraph:
    """2-dim m-particle GHZ for odd m from two single-photon and m-1 pair sources.

    Term |0..0>: single on the first path, mode-0 pairs on (1,2), (3,4), ...
    Term |1..1>: single on the last path, mode-1 pairs on (0,1), (2,3), ...
    Without one of the two singles the pairs form a path graph with a unique
    perfect matching, so no other coincidences are possible.
    """
    _check_odd(m)
    _check_probability("p1", p1)
    _check_probability("p2", p2)
    v = letters(m)
    s1, s2 = math.sqrt(p1), math.sqrt(p2)
    specs = [([(v[0], 0)], s1), ([(v[-1], 1)], s1)]
    specs += [([(v[i], 0), (v[i + 1], 0)], s2) for i in range(1, m, 2)]
    specs += [([(v[i], 1), (v[i + 1], 1)], s2) for i in range(0, m - 1, 2)]
    H = canonicalize(build_hypergraph(v, specs))
    _check(pm_terms(H) == Counter({_ket([0] * m): 1, _ket([1] * m): 1}), "odd GHZ terms")
    return H


def fig5_ghz3d3(p1: float = DEFAULT_P1, p2: float = DEFAULT_P2) -> Hypergraph:
    """3-dim 3-particle GHZ; the three singles together form the |012> maverick."""
    _check_probability("p1", p1)
    _check_probability("p2", p2)
    s1, s2 = math.sqrt(p1), math.sqrt(p2)
    H = canonicalize(build_hypergraph("abc", [
        ([("a", 0)], s1), ([("b", 0), ("c", 0)], s2),
        ([("b", 1)], s1), ([("a", 1), ("c", 1)], s2),
        ([("c", 2)], s1), ([("a", 2), ("b", 2)], s2),
    ]))
    expected = {_ket([0, 0, 0]): 1, _ket([1, 1, 1]): 1, _ket([2, 2, 2]): 1, _ket([0, 1, 2]): 1}
    _check(pm_terms(H) == Counter(expected), "fig5 terms")
    return H


def w_state(m: int = 3, p1: float = DEFAULT_P1, p2: float = DEFAULT_P2, pairs: bool = False) -> Hypergraph:
    """Odd m-particle W state: a mode-1 single on every path plus mode-0 multi-photon sources.

    Default: for every path an (m-1)-photon source covering all other paths,
    so each W term has exactly one matching and the only other matching is
    the all-singles maverick (m + 1 in total).  ``p2`` is the probability of
    those (m-1)-photon sources.  With ``pairs`` the mode-0 part is a pair
    source on every two paths instead; for m > 3 this adds mavericks with
    three or more singles, all suppressed when p1**2 << p2.  For m = 3 both
    coincide.
    """
    _check_odd(m)
    _check_probability("p1", p1)
    _check_probability("p2", p2)
    v = letters(m)
    s1, s2 = math.sqrt(p1), math.sqrt(p2)
    size = 2 if pairs else m - 1
    specs = [([(x, 1)], s1) for x in v]
    specs += [([(x, 0) for x in t], s2) for t in combinations(v, size)]
    H = canonicalize(build_hypergraph(v, specs))
    good = 0
    for pm in enumerate_perfect_matchings(H).matchings:
        singles = sum(1 for i in pm if H.edges[i].degree == 1)
        _check(singles % 2 == 1, "odd number of singles")
        good += singles == 1
    terms = pm_terms(H)
    w_terms = {p for p in terms if sum(mode for _, mode in p) == 1}
    _check(len(w_terms) == m, "one W term per excitation site")
    _check(len({terms[p] for p in w_terms}) == 1, "W terms equally weighted")
    _check(good == sum(terms[p] for p in w_terms), "good matchings carry one excitation")
    _check(terms[_ket([1] * m)] == 1, "all-singles maverick present")
    if not pairs:
        _check(sum(terms.values()) == m + 1, "m good matchings plus one maverick")
    return H


def fig7_srv443(p1: float = DEFAULT_P1, p2: float = DEFAULT_P2) -> Hypergraph:
    """(|000>+|111>+|222>+|330>)/2; the c0 single serves both |000> and |330>.

    The three singles a1, b2, c0 give the |120> maverick.
    """
    _check_probability("p1", p1)
    _check_probability("p2", p2)
    s1, s2 = math.sqrt(p1), math.sqrt(p2)
    H = canonicalize(build_hypergraph("abc", [
        ([("c", 0)], s1), ([("a", 0), ("b", 0)], s2), ([("a", 3), ("b", 3)], s2),
        ([("a", 1)], s1), ([("b", 1), ("c", 1)], s2),
        ([("b", 2)], s1), ([("a", 2), ("c", 2)], s2),
    ]))
    expected = {_ket(k): 1 for k in ([0, 0, 0], [1, 1, 1], [2, 2, 2], [3, 3, 0], [1, 2, 0])}
    _check(pm_terms(H) == Counter(expected), "fig7 terms")
    return H


def fig8_ghz6d10() -> Hypergraph:
    v = letters(6)
    specs = []
    for k, triple in enumerate(t for t in combinations(range(6), 3) if 0 in t):
        rest = [i for i in range(6) if i not in triple]
        specs.append(([(v[i], k) for i in triple], 1))
        specs.append(([(v[i], k) for i in rest], 1))
    H = canonicalize(build_hypergraph(v, specs))
    _check(len(H.edges) == 20, "20 triples")
    _check(pm_terms(H) == Counter({_ket([k] * 6): 1 for k in range(10)}), "fig8 terms")
    return H


FIG9_FIXED = ("a", "d")


def fig9_no_pm() -> Hypergraph:
    """All triples of a..i meeting {a, d}: 49 edges and no perfect matching.

    Every matching needs three disjoint triples, but only two can touch
    {a, d}.  Any absent triple avoids {a, d}, and adding it completes a
    matching, e.g. {g,h,i} with {a,b,c}, {d,e,f}.
    """
    v = letters(9)
    fixed = set(FIG9_FIXED)
    specs = [([(x, 0) for x in t], 1) for t in combinations(v, 3) if fixed & set(t)]
    H = canonicalize(build_hypergraph(v, specs))
    _check(len(H.edges) == 49, "49 edges")
    _check(not has_perfect_matching(H), "no perfect matching")
    return H


def fig9_absent_triples() -> list[tuple[str, str, str]]:
    return [t for t in combinations(letters(9), 3) if not set(FIG9_FIXED) & set(t)]


def complete_uniform(n: int = 3) -> Hypergraph:
    """Every n-subset of 2n vertices, mode 0, unit weight."""
    if n < 1:
        raise InstanceError("n must be >= 1")
    v = letters(2 * n)
    return canonicalize(build_hypergraph(v, [([(x, 0) for x in t], 1) for t in combinations(v, n)]))


def zwm(phi: float = 0.0, bs: bool = False) -> Hypergraph:
    """Two pair sources (d1,d2) and (d1',d2') with d2' aligned onto d2.

    The pump phase of the primed source is carried by its exclusive path d1'.
    With ``bs`` the idler paths d1, d1' are combined on a 50:50 splitter.
    """
    s = 1 / math.sqrt(2)
    H = build_hypergraph(["d1", "d2", "d1'", "d2'"], [
        ([("d1", 0), ("d2", 0)], s),
        ([("d1'", 0), ("d2'", 0)], s),
    ])
    H = apply_phase_shifter(H, "d1'", phi)
    H = apply_path_identity(H, "d2", "d2'")
    if bs:
        H = apply_beam_splitter(H, "d1", "d1'")
    return H


def two_source_3photon(phi: float = 0.0, bs: bool = False) -> Hypergraph:
    """Two 3-photon sources with d3' aligned onto d3, optional splitters on (d1,d1') and (d2,d2')."""
    s = 1 / math.sqrt(2)
    H = build_hypergraph(["d1", "d2", "d3", "d1'", "d2'", "d3'"], [
        ([("d1", 0), ("d2", 0), ("d3", 0)], s),
        ([("d1'", 0), ("d2'", 0), ("d3'", 0)], s),
    ])
    H = apply_phase_shifter(H, "d1'", phi)
    H = apply_path_identity(H, "d3", "d3'")
    if bs:
        H = apply_beam_splitter(H, "d1", "d1'")
        H = apply_beam_splitter(H, "d2", "d2'")
    return H


# -- instance ids ------------------------------------------------------------

_GENERATORS = {
    "fig2_ghz4": (fig2_ghz4, {}),
    "odd_ghz": (odd_ghz, {"m": int, "p1": float, "p2": float}),
    "fig5_ghz3d3": (fig5_ghz3d3, {"p1": float, "p2": float}),
    "w_state": (w_state, {"m": int, "p1": float, "p2": float, "pairs": lambda s: bool(int(s))}),
    "fig7_srv443": (fig7_srv443, {"p1": float, "p2": float}),
    "fig8_ghz6d10": (fig8_ghz6d10, {}),
    "fig9_no_pm": (fig9_no_pm, {}),
    "complete_uniform": (complete_uniform, {"n": int}),
    "zwm": (zwm, {"phi": float, "bs": lambda s: bool(int(s))}),
    "two_source_3photon": (two_source_3photon, {"phi": float, "bs": lambda s: bool(int(s))}),
}

INSTANCE_NAMES = tuple(_GENERATORS)


@dataclass(frozen=True)
class InstanceId:
    name: str
    params: dict = field(default_factory=dict, hash=False)

    @classmethod
    def parse(cls, text: str) -> InstanceId:
        name, _, rest = text.partition(":")
        name = name.strip()
        if name not in _GENERATORS:
            raise InstanceError(f"unknown instance {name!r}")
        accepted = _GENERATORS[name][1]
        params = {}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, eq, value = item.partition("=")
            if not eq or key not in accepted:
                raise InstanceError(f"bad parameter {item!r} for {name}")
            if key in params:
                raise InstanceError(f"parameter {key} given twice")
            try:
                params[key] = accepted[key](value)
            except ValueError as exc:
                raise InstanceError(f"bad value for {key}: {value!r}") from exc
        return cls(name, params)

    def accepts(self, key: str) -> bool:
        return key in _GENERATORS[self.name][1]

    def __str__(self):
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v}" for k, v in self.params.items())


def gen_instance(instance: InstanceId | str, **overrides) -> Hypergraph:
    if isinstance(instance, str):
        instance = InstanceId.parse(instance)
    fn, accepted = _GENERATORS[instance.name]
    params = dict(instance.params)
    for k, v in overrides.items():
        if v is None:
            continue
        if k not in accepted:
            raise InstanceError(f"{instance.name} takes no parameter {k!r}")
        params[k] = v
    return fn(**params)


# -- dimension bound, verification, design ------------------------------------

def max_ghz_dimension(n: int) -> int:
    """Largest GHZ dimension from two n-photon sources firing: size of the max disjoint PM family."""
    if not 2 <= n <= 5:
        raise InstanceError("max_ghz_dimension supports 2 <= n <= 5")
    return len(max_disjoint_pm_family(complete_uniform(n)))


def verify_design(H: Hypergraph, target: QuantumState, tol: float = 1e-9) -> bool:
    if H.num_vertices != target.num_vertices:
        return False
    psi = post_selected_state(H)
    if psi.is_empty():
        return False
    return fidelity(psi, target) >= 1 - tol


def _candidate_pool(target: QuantumState, degrees: Iterable[int], modes: Iterable[int]) -> list[Hyperedge]:
    n = target.num_vertices
    modes = sorted(set(modes))
    term_modes = [dict(p) for p in target.terms]
    pool = set()
    for d in sorted(set(degrees)):
        for verts in combinations(range(n), d):
            for ms in product(modes, repeat=d):
                # an edge no target term agrees with would put a foreign term in the state
                if any(all(t[v] == m for v, m in zip(verts, ms)) for t in term_modes):
                    pool.add(tuple(Incidence(v, m) for v, m in zip(verts, ms)))
    return [Hyperedge(inc, 1 + 0j) for inc in sorted(pool)]


def designer_search(target: QuantumState, max_edges: int, degrees: Iterable[int] = (1, 2),
                    modes: Iterable[int] = (0, 1), pool_cap: int = DESIGN_POOL_CAP) -> Hypergraph | None:
    """Smallest unit-weight hypergraph whose post-selected state equals ``target`` up to phase.

    Candidates are canonical edges over the target's vertices with the allowed
    degrees and modes.  Subsets are explored in lexicographic order of their
    canonical encoding; the answer minimizes (edge count, encoding).  A
    partial subset is abandoned as soon as one of its matchings yields a
    pattern outside the target: with positive weights nothing can cancel it
    later.  ``None`` means no design exists inside the constraint box.
    """
    if not target.normalized:
        raise StateError("target must be normalized")
    n = target.num_vertices
    if n > DESIGN_MAX_VERTICES:
        raise DesignSpaceError(f"targets are limited to {DESIGN_MAX_VERTICES} vertices")
    for p in target.terms:
        if not target.is_coincidence_complete(p):
            raise StateError("target terms must have one photon per vertex")
    pool = _candidate_pool(target, degrees, modes)
    if len(pool) > pool_cap:
        raise DesignSpaceError(f"candidate pool of {len(pool)} edges exceeds {pool_cap}")

    wanted = set(target.terms)
    full = (1 << n) - 1
    masks = [sum(1 << v for v, _ in e.incidences) for e in pool]
    by_vertex = [[i for i in range(len(pool)) if masks[i] >> v & 1] for v in range(n)]
    best: tuple[int, ...] | None = None

    def new_patterns(chosen: set[int], e: int) -> list:
        # matchings of chosen + e that use e
        out = []

        def rec(covered: int, occ: list):
            if covered == full:
                out.append(tuple(sorted(occ)))
                return
            v = (~covered & full & -(~covered & full)).bit_length() - 1
            for i in by_vertex[v]:
                if i in chosen and not masks[i] & covered:
                    rec(covered | masks[i], occ + list(pool[i].incidences))

        rec(masks[e], list(pool[e].incidences))
        return out

    chosen: list[int] = []
    chosen_set: set[int] = set()
    counts: Counter = Counter()

    def dfs(start: int):
        nonlocal best
        if len(chosen) >= max_edges or (best is not None and len(chosen) + 1 >= len(best)):
            return
        for e in range(start, len(pool)):
            pats = new_patterns(chosen_set, e)
            if any(p not in wanted for p in pats):
                continue
            chosen.append(e)
            chosen_set.add(e)
            counts.update(pats)
            if set(+counts) == wanted:
                H = Hypergraph(target.vertices, tuple(pool[i] for i in chosen))
                if verify_design(H, target) and (best is None or len(chosen) < len(best)):
                    best = tuple(chosen)
            dfs(e + 1)
            counts.subtract(pats)
            chosen_set.discard(e)
            chosen.pop()

    dfs(0)
    if best is None:
        return None
    return Hypergraph(target.vertices, tuple(pool[i] for i in best))
