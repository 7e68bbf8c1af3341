"""Degree-variance detector and the edge-count negative control.

The degree-variance statistic splits the edges of ``K_n`` into a near-regular
tournament ``P_0..P_{n-1}`` (every edge of ``P_i`` touches ``i``), counts the
observed edges ``X_i`` in each part and averages ``(X_i - |P_i| q)^2``. A
planted matching or tree lowers its mean by about 1/4, so the test declares
"null" only when the statistic exceeds its null mean minus 1/8.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

import numpy as np

from .errors import DimensionError, ModelError
from .graph import Graph, edge_pairs, num_pairs, pair_arrays
from .samplers import ModelParams

DEFAULT_MARGIN = Fraction(1, 8)


class Decision(str, enum.Enum):
    NULL = "null"
    PLANTED = "planted"


@dataclass(frozen=True)
class DetectorOutcome:
    statistic_value: float
    threshold: float
    decision: Decision

    def to_dict(self) -> dict:
        return {
            "statistic": float(self.statistic_value),
            "threshold": float(self.threshold),
            "decision": self.decision.value,
        }


class TournamentPartition:
    """Near-regular tournament of ``K_n``.

    Edge ``{i, j}`` (``i < j``) belongs to ``P_i`` when ``j - i`` is at most
    ``(n-1)//2`` and to ``P_j`` otherwise. For even ``n`` the antipodal pairs
    (``j - i == n/2``) therefore go to the endpoint in the first half.
    """

    def __init__(self, n: int):
        if n < 2:
            raise ModelError(f"need n >= 2, got {n}")
        self.n = n
        self.half = (n - 1) // 2
        i = np.arange(n, dtype=np.int64)
        forward = np.minimum(n - self.half - 1, n - 1 - i)
        backward = np.maximum(0, i - (n - self.half) + 1)
        self.sizes = forward + backward
        self.sizes.setflags(write=False)
        self._owner = None

    def owner_of(self, i, j):
        """Part index of edges ``{i, j}`` with ``i < j`` (arrays allowed)."""
        i = np.asarray(i)
        j = np.asarray(j)
        return np.where(j - i >= self.n - self.half, j, i)

    @property
    def owner(self) -> np.ndarray:
        """Part index of every edge in canonical order (O(n^2) memory)."""
        if self._owner is None:
            rows, cols = pair_arrays(self.n)
            owner = self.owner_of(rows, cols).astype(np.int32)
            owner.setflags(write=False)
            self._owner = owner
        return self._owner

    @property
    def parts(self) -> Tuple[np.ndarray, ...]:
        order = np.argsort(self.owner, kind="stable")
        bounds = np.cumsum(self.sizes)[:-1]
        return tuple(np.split(order, bounds))

    def hits(self, edge_ids) -> np.ndarray:
        """How many of the given edges fall in each part."""
        i, j = edge_pairs(np.asarray(edge_ids, dtype=np.int64), self.n)
        return np.bincount(self.owner_of(i, j), minlength=self.n)


@lru_cache(maxsize=8)
def build_tournament_partition(n: int) -> TournamentPartition:
    return TournamentPartition(n)


def part_counts(g: Graph, partition: TournamentPartition) -> np.ndarray:
    """``X_i``: number of edges of ``g`` in each part."""
    if g.n != partition.n:
        raise DimensionError(f"graph has n={g.n}, partition has n={partition.n}")
    return np.bincount(partition.owner[g.edges], minlength=g.n)


def null_mean_y(params: ModelParams):
    q = params.q
    return Fraction(params.n - 1, 2) * q * (1 - q) if params.exact else (params.n - 1) / 2 * q * (1 - q)


def y_from_counts(counts: np.ndarray, sizes: np.ndarray, q):
    n = len(sizes)
    if isinstance(q, Fraction):
        return sum((int(x) - int(s) * q) ** 2 for x, s in zip(counts, sizes)) / n
    dev = counts - sizes * float(q)
    return math.fsum((dev * dev).tolist()) / n


def y_statistic(g: Graph, partition: TournamentPartition, params: ModelParams):
    """``(1/n) sum_i (X_i - |P_i| q)^2``, exact when ``params.p`` is a Fraction."""
    if g.n != params.n:
        raise DimensionError(f"graph has n={g.n}, params have n={params.n}")
    return y_from_counts(part_counts(g, partition), partition.sizes, params.q)


def y_threshold(params: ModelParams, margin=DEFAULT_MARGIN):
    mean = null_mean_y(params)
    return mean - margin if params.exact else mean - float(margin)


def y_decide(stat, threshold) -> Decision:
    # ties go to PLANTED: null is chosen only when strictly larger
    return Decision.NULL if stat > threshold else Decision.PLANTED


def y_detect(g: Graph, partition: TournamentPartition, params: ModelParams,
             margin=DEFAULT_MARGIN) -> DetectorOutcome:
    stat = y_statistic(g, partition, params)
    thr = y_threshold(params, margin)
    return DetectorOutcome(stat, thr, y_decide(stat, thr))


def edge_count_threshold(params: ModelParams, threshold_sd: float) -> float:
    big_n = num_pairs(params.n)
    q = float(params.q)
    if math.isinf(threshold_sd):
        return threshold_sd
    return big_n * q + threshold_sd * math.sqrt(big_n * q * (1 - q))


def edge_count_detect(g: Graph, params: ModelParams, threshold_sd: float = 0.0) -> DetectorOutcome:
    """Declare planted iff the edge count exceeds its common mean by
    ``threshold_sd`` null standard deviations."""
    if g.n != params.n:
        raise DimensionError(f"graph has n={g.n}, params have n={params.n}")
    thr = edge_count_threshold(params, threshold_sd)
    e = g.edge_count
    return DetectorOutcome(e, thr, Decision.PLANTED if e > thr else Decision.NULL)
