"""Reproducible Monte Carlo experiments.

Every trial owns its random streams: under master seed ``s`` the null draw of
trial ``t`` in cell ``c`` uses ``SeededRng(s, (c, t, 0))`` and the planted
draw uses ``SeededRng(s, (c, t, 1))``. Aggregation is integer counting, so
results do not depend on the number of worker threads.

Two engines produce the observations a detector sees:

``graph``
    materialize the whole graph (one Bernoulli draw per edge) and reduce it
    to tournament part counts.
``counts``
    draw the part counts directly from their exact law: independent
    ``Bin(|P_i|, q)`` under the null; under the planted law, sample ``H``,
    then ``b_i + Bin(|P_i| - b_i, p)`` with ``b_i = |P_i & E(H)|``.

Both registered statistics (degree variance and edge count) are functions
of the part counts, so the engines agree in law; ``counts`` costs O(n) per
trial instead of O(n^2).
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Sequence

import numba
import numpy as np

from .analytics import CollisionMgf, collision_prefactor, moment_params, second_moment_via_collisions
from .detectors import (
    DEFAULT_MARGIN, Decision, TournamentPartition, build_tournament_partition,
    edge_count_threshold, part_counts, y_decide, y_from_counts, y_threshold,
)
from .errors import ConfigError
from .samplers import (
    ModelKind, ModelParams, SeededRng, permutation_batch, sample_null, sample_planted, sample_structure,
    sample_structure_batch,
)

CSV_COLUMNS = ("n", "p", "model", "detector", "trials", "false_alarm", "miss", "risk",
               "half_width", "seed")
ENGINES = ("graph", "counts")
NULL, PLANTED = 0, 1


# --- detectors over part counts ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class CellContext:
    params: ModelParams
    partition: TournamentPartition
    margin: float = float(DEFAULT_MARGIN)
    threshold_sd: float = 0.0


def _yvar(counts, ctx: CellContext, rng) -> Decision:
    q = float(ctx.params.q)
    stat = y_from_counts(counts, ctx.partition.sizes, q)
    return y_decide(stat, y_threshold(_float_params(ctx.params), ctx.margin))


def _edgecount(counts, ctx: CellContext, rng) -> Decision:
    thr = edge_count_threshold(ctx.params, ctx.threshold_sd)
    return Decision.PLANTED if int(counts.sum()) > thr else Decision.NULL


def _always_null(counts, ctx, rng) -> Decision:
    return Decision.NULL


def _coin_flip(counts, ctx, rng) -> Decision:
    return Decision.PLANTED if rng.random() < 0.5 else Decision.NULL


DETECTORS: Dict[str, Callable] = {
    "yvar": _yvar,
    "edgecount": _edgecount,
    "always-null": _always_null,
    "coin-flip": _coin_flip,
}


def _float_params(params: ModelParams) -> ModelParams:
    return params if not params.exact else ModelParams(params.n, params.kind, float(params.p))


# --- observation engines ---------------------------------------------------------

def draw_counts(ctx: CellContext, hypothesis: int, rng, engine: str = "graph") -> np.ndarray:
    params = _float_params(ctx.params)
    if engine == "graph":
        if hypothesis == NULL:
            g = sample_null(params, rng)
        else:
            g, _ = sample_planted(params, rng)
        return part_counts(g, ctx.partition)
    if engine == "counts":
        sizes = ctx.partition.sizes
        if hypothesis == NULL:
            return rng.binomial(sizes, params.q)
        h = sample_structure(params.n, params.kind, rng)
        hit = ctx.partition.hits(h.edges)
        return hit + rng.binomial(sizes - hit, params.p)
    raise ConfigError(f"unknown engine {engine!r}; expected one of {ENGINES}")


def _map(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def y_samples(params: ModelParams, hypothesis: int, trials: int, seed: int,
              engine: str = "counts", cell_index: int = 0, threads: int = 1) -> np.ndarray:
    """Degree-variance statistic on ``trials`` independent draws of one hypothesis."""
    ctx = CellContext(params, build_tournament_partition(params.n))
    q = float(params.q)

    def one(t):
        rng = SeededRng(seed, (cell_index, t, hypothesis)).generator()
        return y_from_counts(draw_counts(ctx, hypothesis, rng, engine), ctx.partition.sizes, q)

    return np.array(_map(one, range(trials), threads))


# --- risk ---------------------------------------------------------------------

@dataclass(frozen=True)
class RiskRecord:
    n: int
    p: float
    model: str
    detector: str
    trials: int
    false_alarm: float
    miss: float
    risk: float
    half_width: float
    seed: int


@dataclass
class ExperimentConfig:
    n_list: Sequence[int]
    p_expr: str
    model: str = "matching"
    detector: str = "yvar"
    trials: int = 200
    seed: int = 0
    engine: str = "graph"
    threads: int = 1
    margin: float = float(DEFAULT_MARGIN)
    threshold_sd: float = 0.0

    def __post_init__(self):
        self.model = ModelKind.parse(self.model).value
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.detector not in DETECTORS:
            raise ConfigError(f"unknown detector {self.detector!r}; known: {sorted(DETECTORS)}")
        if self.engine not in ENGINES:
            raise ConfigError(f"unknown engine {self.engine!r}; expected one of {ENGINES}")

    def cells(self):
        """``(n, p)`` pairs in report order: n-list outer, p-list inner."""
        out = []
        for n in self.n_list:
            for p in evaluate_p_list(self.p_expr, n):
                out.append((int(n), p))
        return out


_POWER = re.compile(r"^(?:(?P<c>[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*\*\s*)?n\s*\^\s*(?P<a>[-+]?[0-9.]+)$")


def evaluate_p_expr(expr: str, n: int) -> float:
    """Evaluate ``c*n^-a``, ``n^-a`` or a plain decimal at ``n``."""
    text = expr.strip().replace(" ", "")
    m = _POWER.match(text)
    try:
        if m:
            c = float(m.group("c")) if m.group("c") else 1.0
            p = c * float(n) ** float(m.group("a"))
        else:
            p = float(text)
    except ValueError:
        raise ConfigError(f"cannot parse p-expression {expr!r}") from None
    if not 0 < p < 1:
        raise ConfigError(f"p-expression {expr!r} gives p={p} at n={n}, outside (0, 1)")
    return p


def evaluate_p_list(exprs: str, n: int) -> List[float]:
    return [evaluate_p_expr(e, n) for e in exprs.split(",") if e.strip()]


def estimate_risk(n: int, p: float, model, detector: str, trials: int, seed: int,
                  cell_index: int = 0, engine: str = "graph", threads: int = 1,
                  margin: float = float(DEFAULT_MARGIN), threshold_sd: float = 0.0) -> RiskRecord:
    if detector not in DETECTORS:
        raise ConfigError(f"unknown detector {detector!r}; known: {sorted(DETECTORS)}")
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    params = ModelParams(n, model, p)
    ctx = CellContext(params, build_tournament_partition(n), margin, threshold_sd)
    decide = DETECTORS[detector]

    def one(t):
        errors = 0
        for hyp in (NULL, PLANTED):
            rng = SeededRng(seed, (cell_index, t, hyp)).generator()
            decision = decide(draw_counts(ctx, hyp, rng, engine), ctx, rng)
            if hyp == NULL and decision is Decision.PLANTED:
                errors |= 1
            elif hyp == PLANTED and decision is Decision.NULL:
                errors |= 2
        return errors

    flags = _map(one, range(trials), threads)
    fa_count = sum(f & 1 for f in flags)
    miss_count = sum((f >> 1) & 1 for f in flags)
    fa = fa_count / trials
    miss = miss_count / trials
    half = 1.96 * math.sqrt((fa * (1 - fa) + miss * (1 - miss)) / trials)
    return RiskRecord(n, p, params.kind.value, detector, trials, fa, miss, fa + miss, half, seed)


def risk_sweep(config: ExperimentConfig) -> List[RiskRecord]:
    return [
        estimate_risk(n, p, config.model, config.detector, config.trials, config.seed,
                      cell_index=idx, engine=config.engine, threads=config.threads,
                      margin=config.margin, threshold_sd=config.threshold_sd)
        for idx, (n, p) in enumerate(config.cells())
    ]


def records_to_csv(records: Sequence[RiskRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in astuple_ordered(r)])
    return buf.getvalue()


def records_to_json(records: Sequence[RiskRecord]) -> str:
    return json.dumps([asdict(r) for r in records], indent=2) + "\n"


def astuple_ordered(r: RiskRecord):
    return tuple(getattr(r, c) for c in CSV_COLUMNS)


# --- collisions and Monte Carlo chi-square -----------------------------------------

@numba.njit(cache=True)
def _row_intersections(a, b):
    rows, width = a.shape
    out = np.zeros(rows, dtype=np.int64)
    for r in range(rows):
        i = 0
        j = 0
        c = 0
        while i < width and j < width:
            x = a[r, i]
            y = b[r, j]
            if x == y:
                c += 1
                i += 1
                j += 1
            elif x < y:
                i += 1
            else:
                j += 1
        out[r] = c
    return out


@numba.njit(cache=True)
def _matching_collisions(perm1, perm2):
    # matchings pair up consecutive entries of each permutation row
    rows, n = perm1.shape
    out = np.zeros(rows, dtype=np.int64)
    partner = np.empty(n, dtype=np.int32)
    for r in range(rows):
        for k in range(0, n, 2):
            partner[perm1[r, k]] = perm1[r, k + 1]
            partner[perm1[r, k + 1]] = perm1[r, k]
        c = 0
        for k in range(0, n, 2):
            if partner[perm2[r, k]] == perm2[r, k + 1]:
                c += 1
        out[r] = c
    return out


def sample_collisions(n: int, kind, pairs: int, seed: int, batch: int = 1 << 14) -> np.ndarray:
    """``|E(H1) & E(H2)|`` for ``pairs`` independent pairs of uniform structures."""
    if pairs < 1:
        raise ConfigError("pairs must be >= 1")
    kind = ModelKind.parse(kind)
    if kind is ModelKind.MATCHING and (n < 2 or n % 2):
        raise ConfigError(f"perfect matchings need even n >= 2, got {n}")
    batch = max(1, min(batch, (1 << 26) // max(n, 1)))
    out = []
    for b, start in enumerate(range(0, pairs, batch)):
        size = min(batch, pairs - start)
        rng1 = SeededRng(seed, (b, 0)).generator()
        rng2 = SeededRng(seed, (b, 1)).generator()
        if kind is ModelKind.MATCHING:
            out.append(_matching_collisions(permutation_batch(n, size, rng1),
                                            permutation_batch(n, size, rng2)))
        else:
            h1 = sample_structure_batch(n, kind, size, rng1)
            h2 = sample_structure_batch(n, kind, size, rng2)
            out.append(_row_intersections(h1, h2))
    return np.concatenate(out)


@dataclass(frozen=True)
class Chi2Estimate:
    chi2: float
    stderr: float
    mgf_mean: float
    mgf_stderr: float
    pairs: int
    q2: float

    def to_dict(self):
        return asdict(self)


def estimate_chi2_mc(params: ModelParams, pairs: int, seed: int) -> Chi2Estimate:
    """Monte Carlo collision MGF at ``q_2`` plugged into the second-moment formula."""
    collisions = sample_collisions(params.n, params.kind, pairs, seed)
    mgf = CollisionMgf.from_samples(collisions)
    second = second_moment_via_collisions(params, 2, mgf)
    q2 = float(moment_params(params, 2).q_k)
    weights = np.power(q2, -collisions.astype(float))
    mgf_se = float(weights.std(ddof=1) / math.sqrt(pairs)) if pairs > 1 else math.inf
    prefactor = float(collision_prefactor(params, 2))
    return Chi2Estimate(float(second) - 1, prefactor * mgf_se, float(weights.mean()), mgf_se, pairs, q2)
