import random
from fractions import Fraction as F
from math import comb

import pytest

from flagforge import constructions as cons
from flagforge import graphs
from flagforge.constructions import BlowupSpec, ConstructionError


def mask_triangles(n, masks):
    count = 0
    for u in range(n):
        for v in range(u + 1, n):
            if (masks[u] >> v) & 1:
                count += bin(masks[u] & masks[v] &
                             ~((1 << (v + 1)) - 1)).count("1")
    return count


def test_count_cliques_blowup_examples():
    c5 = graphs.cycle_graph(5)
    assert cons.count_cliques_blowup(BlowupSpec(c5, (2,) * 5), 4) == 5
    m = 6
    two = BlowupSpec(graphs.empty_graph(2), (m, m))
    for k in range(1, 7):
        assert cons.count_cliques_blowup(two, k) == 2 * comb(m, k)
    for q in (1, 2, 3, 7):
        val = cons.count_cliques_blowup(BlowupSpec(c5, (q,) * 5), 4)
        assert val == 5 * (comb(2 * q, 4) - comb(q, 4))


def test_count_matches_materialized_enumeration():
    rng = random.Random(42)
    bases = [graphs.cycle_graph(5), graphs.empty_graph(2),
             graphs.complete_graph(3), graphs.from_edge_list(3, [(0, 1)]),
             graphs.from_edge_list(4, [(0, 1), (1, 2), (2, 3)])]
    for _ in range(60):
        base = rng.choice(bases)
        sizes = []
        budget = 10
        for i in range(base.n):
            hi = budget - (base.n - i - 1)
            s = rng.randint(1, max(1, min(3, hi)))
            sizes.append(s)
            budget -= s
        spec = BlowupSpec(base, tuple(sizes))
        if spec.n > 10:
            continue
        g = cons.materialize_small(spec)
        for k in range(1, 5):
            assert cons.count_cliques_blowup(spec, k) == \
                graphs.count_cliques(g, k)


def test_materialize():
    assert cons.materialize_small(
        BlowupSpec(graphs.complete_graph(1), (5,))) == \
        graphs.complete_graph(5)
    g = cons.materialize_small(BlowupSpec(graphs.empty_graph(2), (2, 3)))
    assert graphs.count_cliques(g, 2) == comb(2, 2) + comb(3, 2)
    assert graphs.are_isomorphic(
        cons.materialize_small(BlowupSpec(graphs.cycle_graph(5), (1,) * 5)),
        graphs.cycle_graph(5))
    with pytest.raises(ConstructionError):
        cons.materialize(BlowupSpec(graphs.complete_graph(1), (65,)))


def test_blowup_independence():
    rng = random.Random(9)
    for _ in range(15):
        sizes = tuple(rng.randint(1, 8) for _ in range(5))
        spec = BlowupSpec(graphs.cycle_graph(5), sizes)
        assert cons.blowup_independence_number(spec) == 2
    for parts in (2, 3, 4):
        spec = cons.turan_complement(4 * parts, parts)
        assert cons.blowup_independence_number(spec) == parts
    # the 64-vertex materialization boundary
    big = BlowupSpec(graphs.cycle_graph(5), (13, 13, 13, 13, 12))
    assert big.n == 64
    assert cons.blowup_independence_number(big) == 2


def test_turan_complement():
    assert cons.turan_complement(9, 3).sizes == (3, 3, 3)
    assert cons.turan_complement(10, 3).sizes == (4, 3, 3)
    assert cons.count_cliques_blowup(cons.turan_complement(9, 3), 3) == 3
    with pytest.raises(ConstructionError):
        cons.turan_complement(2, 3)


def test_c5_extremal_sizes():
    assert cons.c5_extremal_sizes(12) == (2, 2, 3, 2, 3)
    assert cons.c5_extremal_sizes(10) == (2, 2, 2, 2, 2)
    assert cons.c5_extremal_sizes(14) == (3, 3, 2, 4, 2)
    for n in range(5, 250):
        sizes = cons.c5_extremal_sizes(n)
        assert sum(sizes) == n
        assert all(abs(s - n / 5) <= 1.4 for s in sizes)
    with pytest.raises(ConstructionError):
        cons.c5_extremal_sizes(4)


def test_f34_formula():
    assert cons.f34_formula(9) == 3
    assert cons.f34_formula(3) == 0
    assert cons.f34_formula(12) == 12
    # against the materialized three-clique construction
    for n in range(3, 31):
        spec = cons.turan_complement(n, 3)
        nn, masks = cons.materialize(spec)
        assert cons.f34_formula(n) == mask_triangles(nn, masks)
        assert cons.f34_formula(n) == cons.count_cliques_blowup(spec, 3)


def test_f43_construction_value():
    assert cons.f43_construction_value(10) == 5
    assert cons.f43_construction_value(5) == 0
    val = cons.f43_construction_value(500)
    assert abs(F(val, comb(500, 4)) - F(3, 25)) <= F(1, 100)
    val = cons.f43_construction_value(2000)
    assert abs(F(val, comb(2000, 4)) - F(3, 25)) <= F(1, 400)


def test_g_objective():
    assert cons.g_objective(10, (4, 4, 4, 4, 4)) == 5
    # degenerate: a zero-size complement part contributes cliques only
    assert cons.g_objective(8, (4, 4, 4, 4, 0)) == \
        4 * comb(4, 4) - comb(8 - 4 - 0, 4) - comb(8 - 0 - 4, 4)
    with pytest.raises(ConstructionError):
        cons.g_objective(5, (4, 4, 4, 4, 4))
    with pytest.raises(ConstructionError):
        cons.g_objective(10, (4, 4, 4, 4))


def test_g_matches_construction_count():
    # pair-union encoding of the extremal sizes reproduces the clique count
    pairs = [(0, 1), (2, 3), (4, 0), (1, 2), (3, 4)]
    for n in range(5, 61):
        s = cons.c5_extremal_sizes(n)
        y = [s[a] + s[b] for a, b in pairs]
        assert cons.g_objective(n, y) == cons.f43_construction_value(n)


def test_intopt_bruteforce():
    best, orbits = cons.intopt_bruteforce(20)
    assert orbits == [(8, 8, 8, 8, 8)]
    assert best == cons.f43_construction_value(20)
    best, orbits = cons.intopt_bruteforce(23)
    assert orbits == [(9, 9, 9, 9, 10)]
    best, orbits = cons.intopt_bruteforce(12)
    assert orbits == [cons.lemma_pattern(12)]
    with pytest.raises(ConstructionError):
        cons.intopt_bruteforce(11)
    with pytest.raises(ConstructionError):
        cons.intopt_bruteforce(40, 0)


def test_lemma_pattern():
    assert cons.lemma_pattern(20) == (8, 8, 8, 8, 8)
    assert cons.lemma_pattern(23) == (9, 9, 9, 9, 10)
    assert cons.lemma_pattern(21) == (8, 8, 8, 9, 9)
    for n in range(12, 40):
        assert sum(cons.lemma_pattern(n)) == 2 * n


def test_bruteforce_min_cliques():
    best, wit = cons.bruteforce_min_cliques(5, 4, 3)
    assert best == 0
    assert any(graphs.are_isomorphic(g, graphs.cycle_graph(5)) for g in wit)
    best, wit = cons.bruteforce_min_cliques(6, 3, 3)
    assert best == 2
    best, wit = cons.bruteforce_min_cliques(6, 3, 4)
    assert best == cons.f34_formula(6) == 0
    with pytest.raises(ConstructionError):
        cons.bruteforce_min_cliques(9, 3, 3)
    with pytest.raises(ConstructionError):
        cons.bruteforce_min_cliques(10, 3, 3, allow_slow=True)


def test_bruteforce_nine_vertices_behind_flag():
    # frozen regression: the exact minimum at n = 9 beats both the
    # two-clique construction (14) and the pentagon blow-up (14); the
    # asymptotic density bound 1/4 only kicks in for large n.  The
    # extremal graph is unique (its complement is a 17-edge triangle-free
    # graph) and was confirmed by independent triangle/independence scans.
    best, wit = cons.bruteforce_min_cliques(9, 3, 3, allow_slow=True)
    assert best == 13
    assert len(wit) == 1
    g = wit[0]
    assert graphs.independence_number(g) == 2
    assert graphs.count_cliques(g, 3) == 13
    two_cliques = cons.count_cliques_blowup(cons.turan_complement(9, 2), 3)
    assert two_cliques == 14


def test_oracle_finds_all_ramsey_witnesses_at_eight():
    # triangle-free with independence number <= 3 exists up to n = 8; the
    # three extremal graphs at n = 8 are classical
    best, wit = cons.bruteforce_min_cliques(8, 3, 4)
    assert best == 0
    assert len(wit) == 3
    for g in wit:
        assert graphs.count_cliques(g, 3) == 0
        assert graphs.independence_number(g) == 3


def test_blowup_ratio_comparison():
    assert cons.blowup_ratio_comparison(4) == (F(3, 25), F(1, 8), True)
    assert cons.blowup_ratio_comparison(3) == (F(7, 25), F(1, 4), False)
    assert cons.blowup_ratio_comparison(2) == (F(3, 5), F(1, 2), False)
    with pytest.raises(ConstructionError):
        cons.blowup_ratio_comparison(1)
