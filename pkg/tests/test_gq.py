from itertools import combinations

import pytest

from conftest import fano, grid3
from fingeo import (
    build_wq,
    count_complete_bipartite,
    elliptic_quadric,
    search_gq_ovoids,
    trace_span,
    verify_gq,
    verify_gq_ovoid,
    verify_line_span_star_meets,
    verify_regularity,
)
from fingeo.errors import AxiomFailure, BudgetExceeded, CollinearPair, NotPartialLinear
from fingeo.gq import kt_bound, spans
from fingeo.incidence import IncidenceStructure, mask_of


def induced_k33_oracle(G):
    """Count vertex sets of induced K_{3,3} in the collinearity graph by scanning all 6-subsets."""
    n = G.num_points
    found = set()
    for six in combinations(range(n), 6):
        first = six[0]
        for rest in combinations(six[1:], 2):
            A = (first,) + rest
            B = tuple(x for x in six if x not in A)
            if any(G.collinear(a, b) for a, b in combinations(A, 2)):
                continue
            if any(G.collinear(a, b) for a, b in combinations(B, 2)):
                continue
            if all(G.collinear(a, b) for a in A for b in B):
                found.add(frozenset(six))
                break
    return len(found)


def ovoid_oracle(G, size):
    lines = [set(ln) for ln in G.lines]
    return [c for c in combinations(range(G.num_points), size) if all(len(ln & set(c)) == 1 for ln in lines)]


def test_w2_order():
    G = build_wq(2)
    assert (G.s, G.t, G.num_points, G.structure.b) == (2, 2, 15, 15)


def test_grid_is_gq_2_1():
    G = verify_gq(grid3())
    assert (G.s, G.t) == (2, 1)
    assert G.num_points == (G.s + 1) * (G.s * G.t + 1)


def test_fano_is_not_gq():
    with pytest.raises(AxiomFailure):
        verify_gq(fano())


def test_two_lines_through_a_pair():
    S = IncidenceStructure(4, ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)))
    with pytest.raises(NotPartialLinear):
        verify_gq(S)


def test_trace_span_w2():
    G = build_wq(2)
    for x in range(15):
        for y in range(x + 1, 15):
            if G.collinear(x, y):
                continue
            ts = trace_span(G, x, y)
            assert len(ts.trace) == 3 and len(ts.span) == 3
            assert x in ts.span and y in ts.span
            for a, b in combinations(ts.trace, 2):
                assert not G.collinear(a, b)


def test_trace_span_grid():
    G = verify_gq(grid3())
    ts = trace_span(G, 0, 4)
    assert len(ts.trace) == 2 and len(ts.span) == 2
    with pytest.raises(CollinearPair):
        trace_span(G, 0, 1)


@pytest.mark.parametrize("q,pairs", [(2, 60), (3, 540), (4, 2720)])
def test_regularity(q, pairs):
    rep = verify_regularity(build_wq(q))
    assert rep.regular
    assert rep.regular_pairs == rep.total_pairs == pairs == q**3 * (q + 1) * (q * q + 1) // 2


def test_grid_regular():
    rep = verify_regularity(verify_gq(grid3()))
    assert rep.regular and rep.total_pairs == 18


@pytest.mark.parametrize("q,n", [(2, 10), (3, 45), (4, 136)])
def test_bipartite_count(q, n):
    kc = count_complete_bipartite(build_wq(q))
    assert kc.N == n == kc.bound
    assert kc.attains_bound
    assert kt_bound(q, q) == q * q * (q * q + 1) // 2


def test_bipartite_count_against_subset_oracle():
    G = build_wq(2)
    assert induced_k33_oracle(G) == count_complete_bipartite(G).N == 10


def test_spans_w2():
    # each K_{3,3} gives two spans, one per side
    assert len(spans(build_wq(2))) == 20


@pytest.mark.parametrize("q", [2, 3, 4])
def test_star_meets(q):
    rep = verify_line_span_star_meets(build_wq(q))
    assert rep.ok, rep.violations
    assert rep.partition_ok is True


def test_star_meets_partition_skipped_when_s_ne_t():
    rep = verify_line_span_star_meets(verify_gq(grid3()))
    assert rep.partition_ok is None


def test_elliptic_ovoid_in_w2():
    G = build_wq(2)
    O = elliptic_quadric(2).point_ids
    assert len(O) == 5
    assert verify_gq_ovoid(G, O)
    om = mask_of(O)
    for x in range(15):
        if x not in O:
            assert (G.star(x) & om).bit_count() == G.t + 1


def test_line_is_not_ovoid():
    G = build_wq(2)
    assert not verify_gq_ovoid(G, G.lines[0])


def test_ovoid_search_w2_matches_oracle():
    G = build_wq(2)
    oracle = ovoid_oracle(G, 5)
    res = search_gq_ovoids(G, "enumerate")
    assert res.count == len(oracle) == 6
    assert res.ovoids == oracle
    assert search_gq_ovoids(G).count == 6


def test_ovoid_search_w3_empty():
    assert search_gq_ovoids(build_wq(3)).count == 0


def test_ovoid_search_grid():
    G = verify_gq(grid3())
    res = search_gq_ovoids(G, "enumerate")
    assert res.count == 6
    assert res.ovoids == ovoid_oracle(G, 3)


def test_ovoid_search_jobs_independent():
    G = build_wq(2)
    a = search_gq_ovoids(G, "enumerate", jobs=1)
    b = search_gq_ovoids(G, "enumerate", jobs=3)
    assert a == b
    f1 = search_gq_ovoids(G, "find_one", jobs=1)
    f3 = search_gq_ovoids(G, "find_one", jobs=3)
    assert f1 == f3 and verify_gq_ovoid(G, f1.first)


def test_find_one_w4():
    G = build_wq(4)
    res = search_gq_ovoids(G, "find_one")
    assert len(res.first) == 17 and verify_gq_ovoid(G, res.first)


def test_budget():
    with pytest.raises(BudgetExceeded):
        search_gq_ovoids(build_wq(3), budget=10)
    with pytest.raises(ValueError):
        search_gq_ovoids(build_wq(2), "bogus")
