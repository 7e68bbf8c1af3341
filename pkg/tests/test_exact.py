from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from planted import exact
from planted.errors import CapacityError, DomainError, ModelError
from planted.graph import Graph, num_pairs
from planted.samplers import ModelParams


def _cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def test_double_factorial():
    assert [exact.double_factorial(k) for k in (-1, 0, 1, 5, 6)] == [1, 1, 1, 15, 48]
    with pytest.raises(DomainError):
        exact.double_factorial(-3)


def test_count_matchings_examples():
    assert exact.count_perfect_matchings(Graph.complete(4)) == 3
    assert exact.count_perfect_matchings(Graph.empty(6)) == 0
    assert exact.count_perfect_matchings(_cycle(6)) == 2
    assert exact.count_perfect_matchings(Graph.complete(10)) == 945
    with pytest.raises(ModelError):
        exact.count_perfect_matchings(Graph.complete(5))
    with pytest.raises(CapacityError):
        exact.count_perfect_matchings(Graph.empty(26))


def test_count_trees_examples():
    assert exact.count_spanning_trees(Graph.complete(4)) == 16
    assert exact.count_spanning_trees(Graph.complete(7)) == 7 ** 5
    path = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])
    assert exact.count_spanning_trees(path) == 1
    assert exact.count_spanning_trees(_cycle(7)) == 7
    disconnected = Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)])
    assert exact.count_spanning_trees(disconnected) == 0


@settings(max_examples=30)
@given(st.integers(0, 2 ** 15 - 1))
def test_counts_match_enumeration_n6(mask):
    g = Graph.from_mask(6, mask)
    for kind in ("tree", "matching"):
        brute = sum(1 for h in exact.structure_masks(6, kind) if h & mask == h)
        assert exact.count_structures(g, kind) == brute


def test_structure_enumeration_sizes():
    assert len(set(exact.structure_masks(8, "matching"))) == 105
    assert len(set(exact.structure_masks(5, "tree"))) == 125
    with pytest.raises(CapacityError):
        exact.structure_masks(7, "tree")


def test_brute_pmf_examples():
    assert exact.brute_collision_pmf(4, "matching") == {0: Fraction(2, 3), 2: Fraction(1, 3)}
    # values computed by this enumerator and checked against the inclusion-exclusion formula
    assert exact.brute_collision_pmf(10, "matching") == {
        0: Fraction(544, 945), 1: Fraction(20, 63), 2: Fraction(16, 189),
        3: Fraction(4, 189), 5: Fraction(1, 945)}
    for n, kind in ((6, "matching"), (5, "tree"), (6, "tree")):
        pmf = exact.brute_collision_pmf(n, kind)
        e_h = n // 2 if kind == "matching" else n - 1
        assert sum(pmf.values()) == 1
        assert min(pmf) >= 0 and max(pmf) == e_h


def test_brute_tree_pmf_n3():
    # three paths on three vertices: distinct paths share exactly one edge
    assert exact.brute_collision_pmf(3, "tree") == {1: Fraction(2, 3), 2: Fraction(1, 3)}


@pytest.mark.parametrize("n,kind", [(4, "matching"), (4, "tree"), (6, "matching"), (6, "tree")])
def test_laws_normalize(n, kind):
    for p in (Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)):
        r = exact.exact_divergences(ModelParams(n, kind, p))
        assert r.planted_mass == 1 and r.null_mass == 1
        assert r.optimal_risk == 1 - r.tv
        assert 4 * r.tv ** 2 <= r.chi2


def test_likelihood_zero_without_structure():
    params = ModelParams(4, "matching", Fraction(1, 10))
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert exact.likelihood_ratio(star, params) == 0


def test_likelihood_k4_first_principles():
    p = Fraction(1, 10)
    q = Fraction(2, 5)
    params = ModelParams(4, "matching", p)
    assert params.q == q
    # every matching of K_4 is inside K_4; the four other edges must come from the background
    direct = p ** 4 / q ** 6
    assert exact.likelihood_ratio(Graph.complete(4), params) == direct


def test_likelihood_rejects_degenerate_p():
    with pytest.raises(DomainError):
        exact.likelihood_ratio(Graph.complete(4), ModelParams(4, "matching", Fraction(0)))
    with pytest.raises(DomainError):
        exact.likelihood_ratio(Graph.complete(4), ModelParams(4, "matching", 0.1))


def test_divergences_capacity():
    with pytest.raises(CapacityError):
        exact.exact_divergences(ModelParams(8, "matching", Fraction(1, 2)))


def test_known_divergence_values():
    r = exact.exact_divergences(ModelParams(4, "matching", Fraction(1, 10)))
    assert r.tv == Fraction(179901, 250000)
    assert r.chi2 == Fraction(105705, 16384)


def _per_graph_laws(params):
    n = params.n
    m = num_pairs(n)
    p, q = params.p, params.q
    structures = exact.structure_masks(n, params.kind)
    planted = [Fraction(0)] * (1 << m)
    null = []
    for g in range(1 << m):
        e = bin(g).count("1")
        null.append(q ** e * (1 - q) ** (m - e))
    # second path: sum over (H, background) pairs instead of structure counts
    for h in structures:
        for b in range(1 << m):
            e = bin(b).count("1")
            planted[b | h] += Fraction(1, len(structures)) * p ** e * (1 - p) ** (m - e)
    return planted, null


@pytest.mark.parametrize("kind", ["matching", "tree"])
def test_tv_dual_path(kind):
    params = ModelParams(4, kind, Fraction(1, 10))
    planted, null = _per_graph_laws(params)
    tv = sum(abs(a - b) for a, b in zip(planted, null)) / 2
    chi2 = sum(a * a / b for a, b in zip(planted, null)) - 1
    r = exact.exact_divergences(params)
    assert tv == r.tv and chi2 == r.chi2


@pytest.mark.parametrize("kind", ["matching", "tree"])
def test_chi2_via_per_graph_likelihood(kind):
    params = ModelParams(4, kind, Fraction(1, 4))
    m = num_pairs(4)
    total = Fraction(0)
    for mask in range(1 << m):
        g = Graph.from_mask(4, mask)
        e = g.edge_count
        qg = params.q ** e * (1 - params.q) ** (m - e)
        total += qg * exact.likelihood_ratio(g, params) ** 2
    assert total - 1 == exact.exact_divergences(params).chi2
    assert exact.likelihood_moment(params, 2) == total


def test_likelihood_moment_first_order():
    for n, kind in ((4, "matching"), (6, "tree"), (6, "matching")):
        for p in (Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)):
            assert exact.likelihood_moment(ModelParams(n, kind, p), 1) == 1


def test_report_to_dict():
    d = exact.exact_divergences(ModelParams(4, "matching", Fraction(1, 10))).to_dict()
    assert d["tv"]["exact"] == "179901/250000"
    assert d["p"] == "1/10" and d["model"] == "matching"
    assert d["optimal_risk"]["exact"] == "70099/250000"
