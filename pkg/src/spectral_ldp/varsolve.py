"""Penalised projected-gradient search for low-entropy graphs under a spectral constraint.

Minimises ``I_p(G) + rho * max(0, T - stat(G))^2`` over symmetric weights in
``[0, 1]`` with zero diagonal, where ``stat`` is ``lambda1`` (threshold
``(1+delta) n p``) or the centered operator norm (threshold ``delta n p``).
Only upper bounds on the variational value are produced.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .constructions import build_anticlique, build_centered_clique, build_clique
from .core import NumericalError, ValidationError, WeightedGraph, as_graph, check_p, statistic, worker_count
from .entropy import EntropyValue, ip_derivative, ip_graph, ip_scalar

log = logging.getLogger(__name__)

ARMIJO = 1e-4
SIMPLE_GAP = 1e-9
GRAD_EPS = 1e-12


@dataclass(frozen=True)
class SolverOptions:
    max_iter: int = 5000
    tol: float = 1e-6
    tol_rel: float = 0.01
    rho0: float = 1.0
    rho_factor: float = 10.0
    rho_max: float = 1e10
    feas_tol: float = 1e-6
    noise: float = 0.05
    seed: int = 42
    threads: int | None = None


@dataclass(frozen=True)
class Certificate:
    graph: WeightedGraph
    entropy: EntropyValue
    constraint_value: float
    threshold: float
    slack: float
    iterations: int
    restarts_used: int
    seed: int
    statistic: str
    start: str  # label of the start that produced the winner

    @property
    def feasible(self) -> bool:
        return self.slack >= -1e-6


class ConvergenceError(NumericalError):
    """No feasible point found; ``best`` holds the best infeasible certificate."""

    def __init__(self, msg: str, best: Certificate | None):
        super().__init__(msg)
        self.best = best


def _upper_index(n: int):
    return np.triu_indices(n, k=1)


def _to_matrix(x: np.ndarray, n: int, iu) -> np.ndarray:
    a = np.zeros((n, n))
    a[iu] = x
    return a + a.T


def _eigpair(a: np.ndarray, stat: str, p: float):
    """Value, gradient-sign, eigenvector and gap to the runner-up, for the constrained statistic."""
    if stat == "lambda1":
        vals, vecs = np.linalg.eigh(a)
        return vals[-1], 1.0, vecs[:, -1], vals[-1] - vals[-2]
    vals, vecs = np.linalg.eigh(a - p)
    mags = np.abs(vals)
    order = np.argsort(mags)
    k = order[-1]
    return mags[k], float(np.sign(vals[k]) or 1.0), vecs[:, k], mags[k] - mags[order[-2]]


def statistic_gradient(g, p: float | None, stat: str, rng=None) -> np.ndarray:
    """``d stat / d a_ij`` for ``i != j`` as a symmetric matrix with zero diagonal.

    Equals ``sign * 2 v_i v_j`` for the (simple) extreme eigenpair. A
    degenerate eigenvalue is split by a 1e-9 symmetric perturbation first.
    """
    a = as_graph(g).weights.copy()
    val, sign, v, gap = _eigpair(a, stat, p)
    if gap < SIMPLE_GAP:
        rng = np.random.default_rng(0) if rng is None else rng
        noise = rng.uniform(-1e-9, 1e-9, a.shape)
        noise = np.triu(noise, 1)
        a = a + noise + noise.T
        val, sign, v, gap = _eigpair(a, stat, p)
    grad = 2.0 * sign * np.outer(v, v)
    np.fill_diagonal(grad, 0.0)
    return grad


def gradient_check(g, p: float | None, stat: str, coords: int = 50, step: float = 1e-5, seed: int = 0):
    """Max relative error of the analytic eigen-gradient against central differences.

    Returns ``None`` (check skipped) when the extreme eigenvalue is not
    simple, i.e. its gap is below 1e-6.
    """
    g = as_graph(g)
    n = g.n
    a = g.weights
    *_, gap = _eigpair(a, stat, p)
    if gap <= 1e-6:
        log.warning("degenerate extreme eigenvalue (gap %.3g); gradient check skipped", gap)
        return None
    grad = statistic_gradient(g, p, stat)
    iu = _upper_index(n)
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(iu[0]), size=min(coords, len(iu[0])), replace=False)
    worst = 0.0
    for k in picks:
        i, j = iu[0][k], iu[1][k]
        e = np.zeros_like(a)
        e[i, j] = e[j, i] = step
        fd = (_eigpair(a + e, stat, p)[0] - _eigpair(a - e, stat, p)[0]) / (2 * step)
        an = grad[i, j]
        worst = max(worst, abs(an - fd) / max(abs(an), abs(fd), 1e-6))
    return worst


class _Problem:
    def __init__(self, n: int, p: float, stat: str, threshold: float):
        self.n, self.p, self.stat, self.threshold = n, p, stat, threshold
        self.iu = _upper_index(n)

    def constraint(self, x: np.ndarray):
        a = _to_matrix(x, self.n, self.iu)
        val, sign, v, gap = _eigpair(a, self.stat, self.p)
        if gap < SIMPLE_GAP:
            noise = np.triu(np.random.default_rng(0).uniform(-1e-9, 1e-9, a.shape), 1)
            val, sign, v, gap = _eigpair(a + noise + noise.T, self.stat, self.p)
        return val, 2.0 * sign * v[self.iu[0]] * v[self.iu[1]]

    def entropy(self, x: np.ndarray) -> float:
        return math.fsum(np.atleast_1d(ip_scalar(x, self.p)))

    def value_grad(self, x: np.ndarray, rho: float):
        val, dval = self.constraint(x)
        viol = max(0.0, self.threshold - val)
        f = self.entropy(x) + rho * viol * viol
        g = ip_derivative(np.clip(x, GRAD_EPS, 1 - GRAD_EPS), self.p) - 2.0 * rho * viol * dval
        return f, g, val

    def value(self, x: np.ndarray, rho: float) -> float:
        val, _ = self.constraint(x)
        viol = max(0.0, self.threshold - val)
        return self.entropy(x) + rho * viol * viol


def _descend(prob: _Problem, x0: np.ndarray, opts: SolverOptions):
    """Exterior-penalty projected gradient from ``x0``; returns (best feasible x or None, last x, iterations)."""
    x = np.clip(x0, 0.0, 1.0)
    best, best_h = None, math.inf
    rho = opts.rho0
    it = 0
    step = 1.0 / rho

    def consider(xc, val):
        nonlocal best, best_h
        if val >= prob.threshold:
            h = prob.entropy(xc)
            if h < best_h:
                best, best_h = xc.copy(), h

    while it < opts.max_iter:
        f, g, val = prob.value_grad(x, rho)
        consider(x, val)
        pg = np.clip(x - g, 0.0, 1.0) - x
        if np.linalg.norm(pg) <= opts.tol:
            if prob.threshold - val <= opts.feas_tol or rho >= opts.rho_max:
                break
            rho *= opts.rho_factor
            step = 1.0 / rho
            continue
        alpha = min(2.0 * step, 1.0)
        while True:
            xn = np.clip(x - alpha * g, 0.0, 1.0)
            fn = prob.value(xn, rho)
            if fn <= f + ARMIJO * float(g @ (xn - x)) or alpha < 1e-16:
                break
            alpha *= 0.5
        it += 1
        if alpha < 1e-16:
            # stalled at this penalty level
            if prob.threshold - val <= opts.feas_tol or rho >= opts.rho_max:
                break
            rho *= opts.rho_factor
            step = 1.0 / rho
            continue
        step = alpha
        x = xn
    _, _, val = prob.value_grad(x, rho)
    consider(x, val)
    return best, x, it


def _repair(prob: _Problem, x: np.ndarray, anchor: np.ndarray) -> np.ndarray:
    """Bisect on the segment from ``x`` towards a feasible ``anchor`` for a feasible point near ``x``."""
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if prob.constraint((1 - mid) * x + mid * anchor)[0] >= prob.threshold:
            hi = mid
        else:
            lo = mid
    return (1 - hi) * x + hi * anchor


def _solve(n, p, delta, stat, threshold, starts, opts: SolverOptions) -> Certificate:
    prob = _Problem(n, p, stat, threshold)
    const = np.full(len(prob.iu[0]), p)
    if prob.constraint(const)[0] >= threshold:
        return _certificate(prob, const, 0, 0, opts, "constant")

    def run(idx_label_x):
        idx, label, x0 = idx_label_x
        best, last, it = _descend(prob, x0, opts)
        anchor = best if best is not None else (x0 if prob.constraint(x0)[0] >= threshold else None)
        cands = [] if best is None else [best]
        if anchor is not None:
            cands.append(_repair(prob, last, anchor))
        scored = [(prob.entropy(c), c) for c in cands if prob.constraint(c)[0] >= threshold]
        if not scored:
            return math.inf, idx, label, last, it
        h, c = min(scored, key=lambda t: t[0])
        return h, idx, label, c, it

    jobs = [(i, label, x) for i, (label, x) in enumerate(starts)]
    workers = min(worker_count(opts.threads), len(jobs))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(run, jobs))
    else:
        results = [run(j) for j in jobs]
    iterations = sum(r[4] for r in results)
    h, idx, label, x, _ = min(results, key=lambda r: (r[0], r[1]))
    cert = _certificate(prob, x, iterations, len(jobs), opts, label)
    if not math.isfinite(h):
        raise ConvergenceError(f"no feasible point after {len(jobs)} starts", cert)
    return cert


def _certificate(prob: _Problem, x, iterations, restarts, opts, label) -> Certificate:
    g = WeightedGraph(_to_matrix(np.clip(x, 0.0, 1.0), prob.n, prob.iu))
    val = statistic(g, prob.stat, prob.p)
    return Certificate(
        graph=g, entropy=ip_graph(g, prob.p), constraint_value=val, threshold=prob.threshold,
        slack=val - prob.threshold, iterations=iterations, restarts_used=restarts, seed=opts.seed,
        statistic=prob.stat, start=label,
    )


def _check(n, p, delta, threshold):
    if int(n) != n or n < 4:
        raise ValidationError(f"n must be an integer >= 4, got {n}")
    check_p(p)
    if p > 0.5:
        raise ValidationError(f"p must be <= 1/2, got {p}")
    if not delta > 0:
        raise ValidationError(f"delta must be positive, got {delta}")
    if threshold > n - 1:
        raise ValidationError(f"threshold {threshold} exceeds n-1 = {n - 1}")


def _noise_start(n, p, opts: SolverOptions):
    rng = np.random.default_rng(opts.seed)
    m = n * (n - 1) // 2
    return np.clip(p + opts.noise * rng.standard_normal(m), 0.0, 1.0)


def _upper(c) -> np.ndarray:
    return c.graph.upper().copy()


def _construction_starts(builders, n, p, delta):
    starts = []
    for label, build in builders:
        try:
            starts.append((label, _upper(build(n, p, delta))))
        except ValidationError as exc:
            log.info("start %s unavailable: %s", label, exc)
    return starts


def solve_phi1(n: int, p: float, delta: float, opts: SolverOptions | None = None) -> Certificate:
    """Upper bound on ``inf{I_p(G) : lambda1(G) >= (1+delta) n p}``."""
    opts = opts or SolverOptions()
    threshold = (1 + delta) * n * p
    _check(n, p, delta, threshold)
    starts = _construction_starts([("clique", build_clique), ("anticlique", build_anticlique)], n, p, delta)
    starts.append(("noise", _noise_start(n, p, opts)))
    return _solve(n, p, delta, "lambda1", threshold, starts, opts)


def solve_phi2(n: int, p: float, delta: float, opts: SolverOptions | None = None) -> Certificate:
    """Upper bound on ``inf{I_p(G) : ||A(G) - p 11'||_op >= delta n p}``."""
    opts = opts or SolverOptions()
    threshold = delta * n * p
    _check(n, p, delta, threshold)
    starts = _construction_starts([("centered_clique", build_centered_clique)], n, p, delta)
    starts.append(("noise", _noise_start(n, p, opts)))
    return _solve(n, p, delta, "centered", threshold, starts, opts)
