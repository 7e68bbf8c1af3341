"""Seeded samplers for the null law ``G(n, q)``, the planted law, and the
hidden structures (uniform perfect matchings and uniform spanning trees).

Probabilities may be floats (Monte Carlo path) or :class:`fractions.Fraction`
(exact path). Derived quantities keep the type of ``p``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

import numba
import numpy as np

from .errors import ModelError, DomainError
from .graph import Graph, num_pairs, union

Prob = Union[float, Fraction]


class ModelKind(str, enum.Enum):
    MATCHING = "matching"
    TREE = "tree"

    @classmethod
    def parse(cls, value) -> "ModelKind":
        if isinstance(value, cls):
            return value
        aliases = {"matching": cls.MATCHING, "tree": cls.TREE, "spanningtree": cls.TREE,
                   "spanning-tree": cls.TREE}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ModelError(f"unknown model kind {value!r}") from None


def planted_edge_count(n: int, kind: ModelKind) -> int:
    kind = ModelKind.parse(kind)
    if kind is ModelKind.MATCHING:
        if n % 2:
            raise ModelError(f"no perfect matching on an odd number of vertices (n={n})")
        return n // 2
    return n - 1


def _check_prob(p, name="p"):
    if not 0 <= p <= 1:
        raise DomainError(f"{name}={p} is not a probability")


def adjusted_q(p: Prob, n: int, kind) -> Prob:
    """Null edge probability that matches the planted law's expected edge count."""
    _check_prob(p)
    if n < 2:
        raise ModelError(f"need n >= 2, got {n}")
    e_h = planted_edge_count(n, kind)
    if isinstance(p, Fraction):
        return p + (1 - p) * Fraction(e_h, num_pairs(n))
    return p + (1 - p) * e_h / num_pairs(n)


@dataclass(frozen=True)
class ModelParams:
    """A calibrated pair of hypotheses: planted ``G(n,p) + H`` against ``G(n,q)``."""

    n: int
    kind: ModelKind
    p: Prob

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind.parse(self.kind))
        if isinstance(self.p, int) and not isinstance(self.p, bool):
            object.__setattr__(self, "p", Fraction(self.p))
        if self.n < 2:
            raise ModelError(f"need n >= 2, got {self.n}")
        planted_edge_count(self.n, self.kind)
        _check_prob(self.p)

    @property
    def exact(self) -> bool:
        return isinstance(self.p, Fraction)

    @property
    def n_pairs(self) -> int:
        return num_pairs(self.n)

    @property
    def e_h(self) -> int:
        return planted_edge_count(self.n, self.kind)

    @property
    def delta_n(self) -> Prob:
        if self.exact:
            return Fraction(self.e_h, self.n_pairs)
        return self.e_h / self.n_pairs

    @property
    def q(self) -> Prob:
        return adjusted_q(self.p, self.n, self.kind)


@dataclass(frozen=True)
class PlantedStructure:
    kind: ModelKind
    n: int
    edges: Tuple[int, ...]  # sorted edge ids

    def to_graph(self) -> Graph:
        return Graph.from_edge_ids(self.n, self.edges)


@dataclass(frozen=True)
class SeededRng:
    """Names one reproducible random stream.

    ``stream_id`` may be an int or a tuple of ints; the stream is the numpy
    ``SeedSequence`` with entropy ``seed`` and that spawn key, so streams for
    different ids are independent and any one can be rebuilt in isolation.
    """

    seed: int
    stream_id: Union[int, Tuple[int, ...]] = 0

    def generator(self) -> np.random.Generator:
        key = self.stream_id if isinstance(self.stream_id, tuple) else (self.stream_id,)
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=key)))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, SeededRng):
        return rng.generator()
    raise TypeError(f"expected a Generator or SeededRng, got {type(rng).__name__}")


def sample_gnp(n: int, prob: Prob, rng) -> Graph:
    """One Bernoulli(prob) draw per edge, in canonical edge order."""
    _check_prob(prob, "prob")
    gen = as_generator(rng)
    return Graph(n, gen.random(num_pairs(n)) < float(prob))


# --- matchings ---------------------------------------------------------------

def _matching_edge_ids(perm: np.ndarray, n: int) -> np.ndarray:
    """Edge ids of the matching that pairs consecutive entries of each row."""
    a = perm[..., 0::2].astype(np.int64)
    b = perm[..., 1::2].astype(np.int64)
    i = np.minimum(a, b)
    j = np.maximum(a, b)
    ids = i * n - i * (i + 1) // 2 + (j - i - 1)
    return np.sort(ids, axis=-1)


def sample_perfect_matching(n: int, rng) -> PlantedStructure:
    """Uniform perfect matching of ``K_n`` via a uniform permutation."""
    if n < 2 or n % 2:
        raise ModelError(f"perfect matchings need even n >= 2, got {n}")
    perm = as_generator(rng).permutation(n)
    return PlantedStructure(ModelKind.MATCHING, n, tuple(_matching_edge_ids(perm, n).tolist()))


@numba.njit(cache=True)
def _fisher_yates(swaps):
    rows, width = swaps.shape
    n = width + 1
    out = np.empty((rows, n), dtype=np.int32)
    for r in range(rows):
        for i in range(n):
            out[r, i] = i
        for i in range(n - 1, 0, -1):
            j = swaps[r, n - 1 - i]
            t = out[r, i]
            out[r, i] = out[r, j]
            out[r, j] = t
    return out


def permutation_batch(n: int, count: int, rng) -> np.ndarray:
    """``(count, n)`` int32 array of independent uniform permutations of ``0..n-1``."""
    if n < 1:
        raise ModelError(f"need n >= 1, got {n}")
    gen = as_generator(rng)
    if n == 1:
        return np.zeros((count, 1), dtype=np.int32)
    # swap targets drawn exactly: position i swaps with a uniform j in [0, i]
    bounds = np.arange(n, 1, -1, dtype=np.int32)
    swaps = gen.integers(0, bounds, size=(count, n - 1), dtype=np.int32)
    return _fisher_yates(swaps)


def sample_matching_batch(n: int, count: int, rng) -> np.ndarray:
    """``(count, n/2)`` array of sorted edge ids of independent uniform matchings."""
    if n < 2 or n % 2:
        raise ModelError(f"perfect matchings need even n >= 2, got {n}")
    return _matching_edge_ids(permutation_batch(n, count, rng), n)


# --- spanning trees ----------------------------------------------------------

@numba.njit(cache=True)
def _prufer_decode_into(seq, n, out):
    # Linear-time decoding; out receives n-1 edge ids.
    degree = np.ones(n, dtype=np.int64)
    for x in seq:
        degree[x] += 1
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    k = 0
    for x in seq:
        a, b = (leaf, x) if leaf < x else (x, leaf)
        out[k] = a * n - a * (a + 1) // 2 + (b - a - 1)
        k += 1
        degree[x] -= 1
        if degree[x] == 1 and x < ptr:
            leaf = x
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    a, b = (leaf, n - 1) if leaf < n - 1 else (n - 1, leaf)
    out[k] = a * n - a * (a + 1) // 2 + (b - a - 1)
    out.sort()


@numba.njit(cache=True)
def _prufer_decode_batch(seqs, n):
    out = np.empty((seqs.shape[0], n - 1), dtype=np.int64)
    for r in range(seqs.shape[0]):
        _prufer_decode_into(seqs[r], n, out[r])
    return out


def prufer_decode(seq, n: int) -> np.ndarray:
    """Sorted edge ids of the labeled tree with Prüfer sequence ``seq``."""
    seq = np.asarray(seq, dtype=np.int64)
    if n < 2 or seq.shape != (n - 2,):
        raise ModelError(f"Prüfer sequence for n={n} must have length {n - 2}")
    if seq.size and (seq.min() < 0 or seq.max() >= n):
        raise ModelError("Prüfer sequence entries must lie in [0, n)")
    return _prufer_decode_batch(seq.reshape(1, -1), n)[0]


def sample_spanning_tree(n: int, rng) -> PlantedStructure:
    """Uniform spanning tree of ``K_n``: decode a uniform sequence in ``[n]^(n-2)``."""
    if n < 2:
        raise ModelError(f"spanning trees need n >= 2, got {n}")
    seq = as_generator(rng).integers(0, n, size=n - 2)
    return PlantedStructure(ModelKind.TREE, n, tuple(prufer_decode(seq, n).tolist()))


def sample_tree_batch(n: int, count: int, rng) -> np.ndarray:
    if n < 2:
        raise ModelError(f"spanning trees need n >= 2, got {n}")
    seqs = as_generator(rng).integers(0, n, size=(count, n - 2))
    return _prufer_decode_batch(seqs, n)


def sample_structure(n: int, kind, rng) -> PlantedStructure:
    if ModelKind.parse(kind) is ModelKind.MATCHING:
        return sample_perfect_matching(n, rng)
    return sample_spanning_tree(n, rng)


def sample_structure_batch(n: int, kind, count: int, rng) -> np.ndarray:
    if ModelKind.parse(kind) is ModelKind.MATCHING:
        return sample_matching_batch(n, count, rng)
    return sample_tree_batch(n, count, rng)


# --- the two hypotheses ------------------------------------------------------

def sample_null(params: ModelParams, rng) -> Graph:
    return sample_gnp(params.n, params.q, rng)


def sample_planted(params: ModelParams, rng) -> Tuple[Graph, PlantedStructure]:
    """Background ``G(n, p)`` first, then ``H``, from the same stream."""
    gen = as_generator(rng)
    background = sample_gnp(params.n, params.p, gen)
    h = sample_structure(params.n, params.kind, gen)
    return union(background, h.to_graph()), h
