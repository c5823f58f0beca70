"""Erdos-Renyi sampling and Monte Carlo tail estimates.

Trials are grouped in fixed-size blocks; block ``b`` draws from
``SeedSequence(seed, spawn_key=(b,))``. The graph used by trial ``i`` is
therefore a function of ``(seed, n, i)`` alone, whatever the number of
trials or workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .constructions import ceil_int
from .core import THRESHOLD_GUARD, ValidationError, WeightedGraph, batch_statistic, enumerate_exact_tail
from .core import MAX_ENUM_N, STATISTICS, check_p, worker_count
from .entropy import normalization
from .rates import rate_lambda1

MIN_SUCCESSES = 10


@dataclass(frozen=True)
class TailEstimate:
    estimate: float
    trials: int
    successes: int
    std_error: float
    seed: int

    @classmethod
    def from_counts(cls, successes: int, trials: int, seed: int) -> "TailEstimate":
        est = successes / trials
        return cls(est, trials, successes, math.sqrt(est * (1 - est) / trials), seed)


def _adjacency(bits: np.ndarray, n: int) -> np.ndarray:
    iu = np.triu_indices(n, k=1)
    a = np.zeros(bits.shape[:-1] + (n, n))
    a[..., iu[0], iu[1]] = bits
    a[..., iu[1], iu[0]] = bits
    return a


def sample_gnp(n: int, p: float, seed: int) -> WeightedGraph:
    """One G(n, p) draw with 0/1 weights, reproducible from ``seed``."""
    if n < 1:
        raise ValidationError("n must be positive")
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    bits = rng.random(n * (n - 1) // 2) < p
    return WeightedGraph(_adjacency(bits.astype(float), n))


def block_size(n: int) -> int:
    return max(1, min(1024, (1 << 22) // (n * n)))


def _block_graphs(n: int, p: float, seed: int, block: int, plant: int = 0) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))
    bits = rng.random((block_size(n), n * (n - 1) // 2)) < p
    a = _adjacency(bits.astype(float), n)
    if plant:
        a[:, :plant, :plant] = 1.0
        idx = np.arange(plant)
        a[:, idx, idx] = 0.0
    return a


def _count(n, p, stat, threshold, trials, seed, plant=0, threads=None) -> int:
    bs = block_size(n)
    nblocks = -(-trials // bs)

    def one(b):
        take = min(bs, trials - b * bs)
        mats = _block_graphs(n, p, seed, b, plant)[:take]
        vals = batch_statistic(mats, stat, p)
        return int(np.count_nonzero(vals >= threshold - THRESHOLD_GUARD))

    workers = min(worker_count(threads), nblocks)
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            return sum(ex.map(one, range(nblocks)))
    return sum(one(b) for b in range(nblocks))


def estimate_tail(n: int, p: float, stat: str, threshold: float, trials: int, seed: int = 42,
                  threads: int | None = None) -> TailEstimate:
    """Monte Carlo estimate of ``P(stat(G(n, p)) >= threshold)``."""
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if stat not in STATISTICS:
        raise ValidationError(f"statistic must be one of {STATISTICS}, got {stat!r}")
    if stat == "centered":
        check_p(p)
    hits = _count(n, p, stat, threshold, trials, seed, threads=threads)
    return TailEstimate.from_counts(hits, trials, seed)


def conditional_lambda2(n: int, p: float, delta: float, trials: int, seed: int = 42,
                        threads: int | None = None, clique: int | None = None) -> TailEstimate:
    """``P(lambda2 >= delta n p | vertices 1..ceil(delta n p)+1 form a clique)``.

    Conditioning on the clique leaves every other pair independent, so the
    conditional law is sampled exactly by planting the clique. ``clique``
    overrides the planted size, e.g. to probe a clique of ``delta(1+eps) n p``.
    """
    check_p(p)
    if not delta > 0:
        raise ValidationError(f"delta must be positive, got {delta}")
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    k = ceil_int(delta * n * p) + 1 if clique is None else int(clique)
    if not 2 <= k <= n:
        raise ValidationError(f"clique of {k} vertices does not fit in n={n}")
    hits = _count(n, p, "lambda2", delta * n * p, trials, seed, plant=k, threads=threads)
    return TailEstimate.from_counts(hits, trials, seed)


def planted_sample(n: int, p: float, delta: float, seed: int, trial: int = 0,
                   clique: int | None = None) -> WeightedGraph:
    """The graph used by ``conditional_lambda2`` for a given trial index."""
    k = ceil_int(delta * n * p) + 1 if clique is None else int(clique)
    bs = block_size(n)
    a = _block_graphs(n, p, seed, trial // bs, plant=k)[trial % bs]
    return WeightedGraph(a)


@dataclass(frozen=True)
class RateRow:
    n: int
    p: float
    threshold: float
    estimate: float
    successes: int
    trials: int
    std_error: float
    normalized_rate: float
    theory: float
    exact: float | None
    censored: bool


def rate_curve(ns, p_rule, delta: float, trials: int, seed: int = 42, threads: int | None = None) -> list[RateRow]:
    """Empirical ``-log P(lambda1 >= (1+delta) n p) / (n^2 p^2 log(1/p))`` per ``n``.

    ``p_rule`` is a constant or a callable ``n -> p``. Rows with fewer than
    ten successes are marked censored; for ``n <= 6`` the exact probability
    from enumeration is attached.
    """
    theory = rate_lambda1(delta).value
    rows = []
    for n in ns:
        p = float(p_rule(n)) if callable(p_rule) else float(p_rule)
        check_p(p)
        thr = (1 + delta) * n * p
        est = estimate_tail(n, p, "lambda1", thr, trials, seed, threads)
        norm = -math.log(est.estimate) / normalization(n, p) if est.estimate > 0 else math.inf
        exact = enumerate_exact_tail(n, p, "lambda1", thr) if n <= MAX_ENUM_N else None
        rows.append(RateRow(n, p, thr, est.estimate, est.successes, trials, est.std_error, norm, theory,
                            exact, est.successes < MIN_SUCCESSES))
    return rows
