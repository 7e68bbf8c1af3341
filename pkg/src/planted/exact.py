"""Exact small-n ground truth in rational arithmetic.

Graphs on ``n <= 6`` vertices are enumerated as integer masks (bit ``e`` is
edge ``e`` in canonical order). Both laws depend on a graph only through its
edge count and the number of planted structures it contains, so sums over all
``2^C(n,2)`` graphs are accumulated per ``(edge count, structure count)``
class; the class table itself is built by visiting every mask in increasing
integer order.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np

from .errors import CapacityError, DomainError, ModelError, DimensionError
from .graph import Graph, edge_index, num_pairs
from .samplers import ModelKind, ModelParams, prufer_decode

MAX_MATCHING_N = 24
MAX_ENUM_N = 6
BRUTE_LIMITS = {ModelKind.MATCHING: 10, ModelKind.TREE: 6}


def double_factorial(k: int) -> int:
    """``k!!`` with ``(-1)!! = 0!! = 1``."""
    if k < -1:
        raise DomainError(f"double factorial undefined for {k}")
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def total_structures(n: int, kind) -> int:
    if ModelKind.parse(kind) is ModelKind.MATCHING:
        if n % 2:
            raise ModelError(f"odd n={n} has no perfect matchings")
        return double_factorial(n - 1)
    return n ** (n - 2)


# --- counting ------------------------------------------------------------------

def _adjacency_masks(g: Graph) -> List[int]:
    adj = [0] * g.n
    for i, j in g.edge_list():
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return adj


def count_perfect_matchings(g: Graph) -> int:
    """Number of perfect matchings contained in ``g`` (DP over vertex subsets)."""
    n = g.n
    if n % 2:
        raise ModelError(f"odd n={n} has no perfect matchings")
    if n > MAX_MATCHING_N:
        raise CapacityError(f"matching DP supports n <= {MAX_MATCHING_N}, got {n}")
    adj = _adjacency_masks(g)
    memo = {0: 1}

    def ways(mask: int) -> int:
        if mask in memo:
            return memo[mask]
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        total = 0
        cand = adj[i] & rest
        while cand:
            bit = cand & -cand
            cand ^= bit
            total += ways(rest ^ bit)
        memo[mask] = total
        return total

    return ways((1 << n) - 1)


def _bareiss_det(m: List[List[int]]) -> int:
    size = len(m)
    if size == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for r in range(k + 1, size):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def count_spanning_trees(g: Graph) -> int:
    """Matrix-tree theorem: determinant of the Laplacian with the last row and
    column removed, by fraction-free elimination."""
    n = g.n
    if n < 2:
        raise ModelError(f"need n >= 2, got {n}")
    lap = [[0] * n for _ in range(n)]
    for i, j in g.edge_list():
        lap[i][j] -= 1
        lap[j][i] -= 1
        lap[i][i] += 1
        lap[j][j] += 1
    return _bareiss_det([row[:-1] for row in lap[:-1]])


def count_structures(g: Graph, kind) -> int:
    if ModelKind.parse(kind) is ModelKind.MATCHING:
        return count_perfect_matchings(g)
    return count_spanning_trees(g)


# --- structure enumeration -------------------------------------------------------

def _matchings(vertices: Tuple[int, ...]):
    if not vertices:
        yield ()
        return
    first, rest = vertices[0], vertices[1:]
    for idx, partner in enumerate(rest):
        remaining = rest[:idx] + rest[idx + 1:]
        for tail in _matchings(remaining):
            yield ((first, partner),) + tail


@lru_cache(maxsize=None)
def structure_masks(n: int, kind) -> Tuple[int, ...]:
    """Every perfect matching / spanning tree of ``K_n`` as an edge mask."""
    kind = ModelKind.parse(kind)
    if n > BRUTE_LIMITS[kind]:
        raise CapacityError(f"enumerating {kind.value}s supports n <= {BRUTE_LIMITS[kind]}")
    masks = []
    if kind is ModelKind.MATCHING:
        if n % 2:
            raise ModelError(f"odd n={n} has no perfect matchings")
        for m in _matchings(tuple(range(n))):
            masks.append(sum(1 << edge_index(i, j, n) for i, j in m))
    else:
        if n < 2:
            raise ModelError(f"need n >= 2, got {n}")
        for seq in itertools.product(range(n), repeat=n - 2):
            masks.append(sum(1 << int(e) for e in prufer_decode(seq, n)))
    return tuple(masks)


def brute_collision_pmf(n: int, kind) -> Dict[int, Fraction]:
    """Law of ``|E(H1) & E(H2)|`` for independent uniform structures, by
    enumerating all ordered pairs."""
    kind = ModelKind.parse(kind)
    masks = np.array(structure_masks(n, kind), dtype=np.uint64)
    total = len(masks) ** 2
    hist = Counter()
    for row in masks:
        overlap = np.bitwise_count(masks & row)
        hist.update(Counter(overlap.tolist()))
    return {k: Fraction(v, total) for k, v in sorted(hist.items())}


# --- laws and likelihood ratio -----------------------------------------------------

def _require_exact_open(params: ModelParams):
    if not params.exact:
        raise DomainError("exact oracle needs p given as a Fraction")
    if not 0 < params.p < 1:
        raise DomainError(f"likelihood ratio needs 0 < p < 1, got {params.p}")


def null_probability(params: ModelParams, edges: int) -> Fraction:
    q = params.q
    return q ** edges * (1 - q) ** (params.n_pairs - edges)


def planted_probability(params: ModelParams, edges: int, count: int) -> Fraction:
    p = params.p
    if count == 0:
        return Fraction(0)
    frac = Fraction(count, total_structures(params.n, params.kind))
    return frac * p ** (edges - params.e_h) * (1 - p) ** (params.n_pairs - edges)


def likelihood_ratio(g: Graph, params: ModelParams) -> Fraction:
    """``dP/dQ`` at ``g`` via the delta-reparameterized closed form."""
    _require_exact_open(params)
    if g.n != params.n:
        raise DimensionError(f"graph has n={g.n}, params have n={params.n}")
    return _likelihood_from_class(params, g.edge_count, count_structures(g, params.kind))


def _likelihood_from_class(params: ModelParams, edges: int, count: int) -> Fraction:
    delta = params.delta_n
    frac = Fraction(count, total_structures(params.n, params.kind))
    return ((1 - delta) ** -params.n_pairs * frac * params.p ** -params.e_h
            * (1 - delta / params.q) ** edges)


@lru_cache(maxsize=None)
def graph_class_table(n: int, kind) -> Tuple[Tuple[Tuple[int, int], int], ...]:
    """Multiplicities of ``(edge count, structure count)`` over all graphs on ``n``."""
    kind = ModelKind.parse(kind)
    if n > MAX_ENUM_N:
        raise CapacityError(f"graph enumeration supports n <= {MAX_ENUM_N}, got {n}")
    m = num_pairs(n)
    table = Counter()
    for mask in range(1 << m):
        g = Graph.from_mask(n, mask)
        table[(g.edge_count, count_structures(g, kind))] += 1
    return tuple(sorted(table.items()))


@dataclass(frozen=True)
class DivergenceReport:
    n: int
    p: Fraction
    kind: ModelKind
    tv: Fraction
    chi2: Fraction
    optimal_risk: Fraction
    planted_mass: Fraction
    null_mass: Fraction

    def to_dict(self) -> dict:
        def both(x: Fraction):
            return {"exact": f"{x.numerator}/{x.denominator}", "decimal": float(x)}

        return {
            "n": self.n,
            "p": f"{self.p.numerator}/{self.p.denominator}",
            "model": self.kind.value,
            "tv": both(self.tv),
            "chi2": both(self.chi2),
            "optimal_risk": both(self.optimal_risk),
            "cauchy_schwarz_bound": float(self.chi2) ** 0.5 / 2,
        }


def exact_divergences(params: ModelParams) -> DivergenceReport:
    _require_exact_open(params)
    tv2 = Fraction(0)
    second = Fraction(0)
    p_mass = Fraction(0)
    q_mass = Fraction(0)
    for (edges, count), mult in graph_class_table(params.n, params.kind):
        pg = planted_probability(params, edges, count)
        qg = null_probability(params, edges)
        p_mass += mult * pg
        q_mass += mult * qg
        tv2 += mult * abs(pg - qg)
        second += mult * pg * pg / qg
    tv = tv2 / 2
    return DivergenceReport(params.n, params.p, params.kind, tv, second - 1, 1 - tv, p_mass, q_mass)


def likelihood_moment(params: ModelParams, k: int) -> Fraction:
    """``E_Q[L^k]`` summed over every graph with :func:`likelihood_ratio`'s closed form."""
    _require_exact_open(params)
    total = Fraction(0)
    for (edges, count), mult in graph_class_table(params.n, params.kind):
        total += mult * null_probability(params, edges) * _likelihood_from_class(params, edges, count) ** k
    return total
