import random
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperoptics.hypergraph import build_hypergraph
from hyperoptics.instances import complete_uniform, fig2_ghz4, fig8_ghz6d10, fig9_no_pm
from hyperoptics.matching import (
    MatchingOverflowError,
    brute_force_pm_oracle,
    enumerate_perfect_matchings,
    has_perfect_matching,
    max_disjoint_pm_family,
)

import oracles


def random_hypergraph(rng, max_vertices=6, max_edges=20, degrees=(1, 2, 3), repeats=False):
    n = rng.randint(1, max_vertices)
    names = [chr(ord("a") + i) for i in range(n)]
    specs = []
    for _ in range(rng.randint(0, max_edges)):
        k = rng.choice([d for d in degrees if d <= n])
        verts = [rng.choice(names) for _ in range(k)] if repeats else rng.sample(names, k)
        specs.append(([(v, rng.randint(0, 1)) for v in verts], 1))
    return build_hypergraph(names, specs)


def k4():
    return build_hypergraph("abcd", [([(x, 0), (y, 0)], 1) for x, y in combinations("abcd", 2)])


def test_fig2_two_matchings():
    H = fig2_ghz4()
    assert has_perfect_matching(H)
    report = enumerate_perfect_matchings(H)
    assert report.count == 2 and not report.truncated
    # canonical order is ab, ac, bd, cd
    assert report.matchings == [(0, 3), (1, 2)]


def test_fig9_has_none():
    assert not has_perfect_matching(fig9_no_pm())


def test_isolated_vertex():
    H = build_hypergraph("abc", [([("a", 0), ("b", 0)], 1)])
    assert not has_perfect_matching(H)


def test_empty_vertex_set_is_vacuously_matched():
    H = build_hypergraph([], [])
    assert has_perfect_matching(H)
    assert enumerate_perfect_matchings(H).matchings == [()]


def test_k4_matches_subset_scan():
    H = k4()
    expected = [s for s in combinations(range(6), 2)
                if sorted(v for i in s for v, _ in H.edges[i].incidences) == [0, 1, 2, 3]]
    assert len(expected) == 3
    assert enumerate_perfect_matchings(H).matchings == expected


def test_complete_3_uniform_on_6():
    report = enumerate_perfect_matchings(fig8_ghz6d10())
    assert report.count == 10
    H = fig8_ghz6d10()
    for pm in report.matchings:
        a, b = (H.edges[i].vertex_set for i in pm)
        assert a | b == frozenset(range(6)) and not a & b


def test_repeated_vertex_edges_never_match():
    H = build_hypergraph("ab", [([("a", 0), ("a", 1)], 1), ([("b", 0)], 1)])
    assert not has_perfect_matching(H)
    assert brute_force_pm_oracle(H).count == 0


def test_limit_truncates():
    H = complete_uniform(3)
    report = enumerate_perfect_matchings(H, limit=4)
    assert report.truncated and report.count == 4
    assert report.matchings == sorted(report.matchings)
    exact = enumerate_perfect_matchings(H, limit=10)
    assert not exact.truncated and exact.count == 10


def test_cap_overflow():
    with pytest.raises(MatchingOverflowError):
        enumerate_perfect_matchings(complete_uniform(3), cap=5)
    with pytest.raises(MatchingOverflowError):
        max_disjoint_pm_family(complete_uniform(3), cap=5)


def test_oracle_fig2_identical():
    H = fig2_ghz4()
    assert brute_force_pm_oracle(H) == enumerate_perfect_matchings(H)


def test_oracle_empty_edges():
    assert brute_force_pm_oracle(build_hypergraph("ab", [])).count == 0


def test_oracle_size_cap():
    H = build_hypergraph("a", [([("a", 0)], 1)] * 26)
    with pytest.raises(MatchingOverflowError):
        brute_force_pm_oracle(H)


def test_oracle_agrees_with_plain_subset_scan():
    rng = random.Random(7)
    for _ in range(30):
        H = random_hypergraph(rng, max_vertices=5, max_edges=10, repeats=True)
        assert brute_force_pm_oracle(H).matchings == oracles.exact_covers(H)


def test_random_5_vertex_oracle_equivalence():
    rng = random.Random(5)
    for _ in range(20):
        H = random_hypergraph(rng, max_vertices=5, max_edges=12, repeats=True)
        assert enumerate_perfect_matchings(H).matchings == brute_force_pm_oracle(H).matchings


@pytest.mark.parametrize("n, count, family", [(2, 3, 3), (3, 10, 10), (4, 35, 35)])
def test_complete_uniform_counts(n, count, family):
    H = complete_uniform(n)
    assert enumerate_perfect_matchings(H).count == comb(2 * n, n) // 2 == count
    assert len(max_disjoint_pm_family(H)) == comb(2 * n - 1, n) == family


def test_family_k4_and_empty():
    assert len(max_disjoint_pm_family(k4())) == 3
    assert max_disjoint_pm_family(fig9_no_pm()) == []


def _best_family_brute(pms):
    for r in range(len(pms), 0, -1):
        for fam in combinations(range(len(pms)), r):
            edges = [e for i in fam for e in pms[i]]
            if len(edges) == len(set(edges)):
                return [pms[i] for i in fam]
    return []


def test_family_matches_brute_force_with_conflicts():
    rng = random.Random(11)
    checked = 0
    for _ in range(60):
        H = random_hypergraph(rng, max_vertices=6, max_edges=14, degrees=(1, 2))
        pms = enumerate_perfect_matchings(H).matchings
        if not 2 <= len(pms) <= 14:
            continue
        checked += 1
        assert max_disjoint_pm_family(H) == _best_family_brute(pms)
    assert checked >= 10


def test_uniform_divisibility():
    # 3-uniform on 4 vertices can never be covered
    H = build_hypergraph("abcd", [([(x, 0) for x in t], 1) for t in combinations("abcd", 3)])
    assert not has_perfect_matching(H)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_adding_edge_never_decreases_count(seed):
    rng = random.Random(seed)
    H = random_hypergraph(rng, max_vertices=6, max_edges=10)
    before = enumerate_perfect_matchings(H).count
    names = list(H.vertices)
    k = rng.randint(1, min(3, len(names)))
    bigger = H.add_edge([(v, 0) for v in rng.sample(names, k)])
    assert enumerate_perfect_matchings(bigger).count >= before
