"""Closed-form moments of the likelihood ratio through collision MGFs.

For independent uniform structures ``H_1..H_k`` let ``collisions`` be
``k e_H - |E(H_1 u ... u H_k)|``. With ``r_k = (1 - delta/q)^k``,
``Z_k = (1 - q + q r_k)^C(n,2)`` and ``q_k = q r_k / (1 - q + q r_k)``::

    E_Q[L^k] = (1 - delta)^(-k C(n,2)) (q_k / p)^(k e_H) Z_k E[q_k^-collisions]

Everything here runs in exact rationals when ``p`` is a Fraction, and in
mpmath's extended precision (log domain for the ``C(n,2)`` powers) otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Dict, Mapping, Union

import mpmath
import numpy as np

from .errors import DomainError, ModelError, ParameterError
from .exact import double_factorial
from .samplers import ModelKind, ModelParams

PRECISION_DPS = 50

Number = Union[Fraction, mpmath.mpf, float]


def _mp(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


@dataclass(frozen=True)
class MomentParams:
    k: int
    r_k: Number
    z_k: Number
    q_k: Number
    log_z_k: Number


def moment_params(params: ModelParams, k: int) -> MomentParams:
    if k < 1:
        raise DomainError(f"moment order must be >= 1, got {k}")
    big_n = params.n_pairs
    if params.exact:
        q, delta = params.q, params.delta_n
        if q < delta:
            raise ParameterError("q < delta_n (negative p)")
        r = (1 - delta / q) ** k
        base = 1 - q + q * r
        if base == 0:
            raise ParameterError("q = delta_n = 1: every graph is complete")
        z = base ** big_n
        log_z = mpmath.log(_mp(base)) * big_n
        return MomentParams(k, r, z, q * r / base, log_z)
    with mpmath.workdps(PRECISION_DPS):
        p = _mp(params.p)
        delta = mpmath.mpf(params.e_h) / big_n
        q = p + (1 - p) * delta
        if q < delta:
            raise ParameterError("q < delta_n (negative p)")
        r = (1 - delta / q) ** k
        base = 1 - q + q * r
        if base == 0:
            raise ParameterError("q = delta_n = 1: every graph is complete")
        log_z = big_n * mpmath.log(base)
        return MomentParams(k, r, mpmath.exp(log_z), q * r / base, log_z)


# --- collision laws ----------------------------------------------------------------

def collision_pmf_matching(n: int, k: int) -> Fraction:
    """``P[|H1 & H2| = k]`` for independent uniform perfect matchings, by
    inclusion-exclusion over sets of forced shared edges."""
    if n < 2 or n % 2:
        raise DomainError(f"need even n >= 2, got {n}")
    half = n // 2
    if not 0 <= k <= half:
        raise DomainError(f"k={k} outside [0, {half}]")
    total = 0
    for ell in range(half - k + 1):
        total += (-1) ** ell * comb(half - k, ell) * double_factorial(n - 2 * k - 2 * ell - 1)
    return Fraction(comb(half, k) * total, double_factorial(n - 1))


def collision_pmf_matching_table(n: int) -> Dict[int, Fraction]:
    return {k: collision_pmf_matching(n, k) for k in range(n // 2 + 1)}


def poisson_mgf(s, lam):
    """``E[s^-Y]`` for ``Y ~ Poisson(lam)``."""
    if s <= 0:
        raise DomainError(f"s must be positive, got {s}")
    if isinstance(s, mpmath.mpf) or isinstance(lam, mpmath.mpf):
        return mpmath.exp(lam * (1 / s - 1))
    return math.exp(lam * (1 / s - 1))


def tree_collision_mgf_bound(params: ModelParams, s):
    """``E[s^-Y]`` for ``Y ~ Bin(n-1, 2/n)``; dominates the spanning-tree
    collision MGF by negative association of uniform-tree edge indicators."""
    if params.kind is not ModelKind.TREE:
        raise ModelError("binomial collision bound applies to spanning trees only")
    if not 0 < s <= 1:
        raise DomainError(f"s must lie in (0, 1], got {s}")
    n = params.n
    if isinstance(s, Fraction):
        return (1 + Fraction(2, n) * (1 / s - 1)) ** (n - 1)
    if isinstance(s, mpmath.mpf):
        return (1 + mpmath.mpf(2) / n * (1 / s - 1)) ** (n - 1)
    return (1 + 2 / n * (1 / s - 1)) ** (n - 1)


@dataclass(frozen=True)
class CollisionMgf:
    """``s -> E[s^-collisions]`` tagged with where it came from."""

    evaluate: Callable
    provenance: str  # exact-pmf | monte-carlo | poisson-bound | binomial-bound

    def __call__(self, s):
        if s <= 0:
            raise DomainError(f"s must be positive, got {s}")
        return self.evaluate(s)

    @classmethod
    def from_pmf(cls, pmf: Mapping[int, Fraction]) -> "CollisionMgf":
        items = sorted(pmf.items())

        def mgf(s):
            if isinstance(s, Fraction):
                return sum((prob * s ** -c for c, prob in items), Fraction(0))
            return mpmath.fsum(_mp(prob) * _mp(s) ** -c for c, prob in items)

        return cls(mgf, "exact-pmf")

    @classmethod
    def zero(cls) -> "CollisionMgf":
        return cls.from_pmf({0: Fraction(1)})

    @classmethod
    def poisson(cls, lam=0.5) -> "CollisionMgf":
        return cls(lambda s: poisson_mgf(_mp(s), _mp(lam)), "poisson-bound")

    @classmethod
    def tree_bound(cls, params: ModelParams) -> "CollisionMgf":
        return cls(lambda s: tree_collision_mgf_bound(params, s), "binomial-bound")

    @classmethod
    def from_samples(cls, collisions) -> "CollisionMgf":
        values, counts = np.unique(np.asarray(collisions, dtype=np.int64), return_counts=True)
        total = int(counts.sum())
        pmf = {int(v): Fraction(int(c), total) for v, c in zip(values, counts)}
        return cls(cls.from_pmf(pmf).evaluate, "monte-carlo")


def second_moment_via_collisions(params: ModelParams, k: int, mgf: CollisionMgf):
    """``E_Q[L^k]`` from a collision MGF (despite the name, any ``k >= 1``)."""
    if not 0 < params.p < 1:
        raise DomainError(f"need 0 < p < 1, got {params.p}")
    mp_ = moment_params(params, k)
    if params.exact:
        prefactor = collision_prefactor(params, k, mp_)
        value = mgf(mp_.q_k)
        if isinstance(value, Fraction):
            return prefactor * value
        with mpmath.workdps(PRECISION_DPS):
            return _mp(prefactor) * value
    with mpmath.workdps(PRECISION_DPS):
        log_m = _log_collision_prefactor(params, k, mp_) + mpmath.log(mgf(mp_.q_k))
        return mpmath.exp(log_m)


def collision_prefactor(params: ModelParams, k: int, mp_: MomentParams = None):
    """Everything in ``E_Q[L^k]`` except the collision MGF."""
    if not 0 < params.p < 1:
        raise DomainError(f"need 0 < p < 1, got {params.p}")
    mp_ = mp_ or moment_params(params, k)
    if mp_.q_k == 0:
        raise ParameterError("q_k = 0: collision MGF undefined")
    if params.exact:
        return ((1 - params.delta_n) ** (-k * params.n_pairs)
                * (mp_.q_k / params.p) ** (k * params.e_h) * mp_.z_k)
    with mpmath.workdps(PRECISION_DPS):
        return mpmath.exp(_log_collision_prefactor(params, k, mp_))


def _log_collision_prefactor(params: ModelParams, k: int, mp_: MomentParams):
    if mp_.q_k == 0:
        raise ParameterError("q_k = 0: collision MGF undefined")
    big_n, e_h = params.n_pairs, params.e_h
    delta = mpmath.mpf(e_h) / big_n
    return (-k * big_n * mpmath.log1p(-delta)
            + k * e_h * mpmath.log(mp_.q_k / _mp(params.p))
            + mp_.log_z_k)


def chi2_diagnostic_matching(params: ModelParams) -> float:
    """Second moment with the Poisson(1/2) collision MGF in place of the true
    one, minus 1. An approximation for diagnostics, not a bound."""
    if params.kind is not ModelKind.MATCHING:
        raise ModelError("Poisson diagnostic is defined for the matching model")
    with mpmath.workdps(PRECISION_DPS):
        return float(second_moment_via_collisions(params, 2, CollisionMgf.poisson(0.5)) - 1)


def chi2_bound_tree(params: ModelParams) -> float:
    """Upper bound on the tree-model chi-square from the binomial MGF bound."""
    with mpmath.workdps(PRECISION_DPS):
        return float(second_moment_via_collisions(params, 2, CollisionMgf.tree_bound(params)) - 1)
