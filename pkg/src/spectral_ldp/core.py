"""Weighted graphs, their spectra, and cycle homomorphism densities.

Everything here works on the dense symmetric adjacency matrix; the
eigendecomposition is LAPACK's ``syevd`` through :func:`numpy.linalg.eigh`.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field

import numpy as np

MAX_DENSE_N = 10_000
MAX_ENUM_N = 6
ENTRY_TOL = 1e-12
# Guard for >= comparisons on floating eigenvalues (K_3 gives 1.9999999999999996).
THRESHOLD_GUARD = 1e-9

STATISTICS = ("lambda1", "lambda2", "centered")


class ValidationError(ValueError):
    """Input violates a documented precondition."""


class NumericalError(RuntimeError):
    """A numerical routine failed to meet its contract."""


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric edge weights in [0, 1] with zero diagonal."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise ValidationError(f"weights must be a non-empty square matrix, got shape {w.shape}")
        if w.shape[0] > MAX_DENSE_N:
            raise ValidationError(f"n={w.shape[0]} exceeds dense cap {MAX_DENSE_N}")
        if not np.all(np.isfinite(w)):
            raise ValidationError("weights must be finite")
        if np.max(np.abs(w - w.T)) > ENTRY_TOL:
            raise ValidationError("weights must be symmetric")
        if np.max(np.abs(np.diag(w))) > ENTRY_TOL:
            raise ValidationError("diagonal must be zero")
        if w.min() < -ENTRY_TOL or w.max() > 1 + ENTRY_TOL:
            raise ValidationError("weights must lie in [0, 1]")
        w = np.clip((w + w.T) / 2, 0.0, 1.0)
        np.fill_diagonal(w, 0.0)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @classmethod
    def constant(cls, n: int, value: float) -> "WeightedGraph":
        w = np.full((n, n), float(value))
        np.fill_diagonal(w, 0.0)
        return cls(w)

    @classmethod
    def from_edges(cls, n: int, edges) -> "WeightedGraph":
        w = np.zeros((n, n))
        for i, j in edges:
            w[i, j] = w[j, i] = 1.0
        return cls(w)

    def upper(self) -> np.ndarray:
        """Strict upper triangle, row-major order."""
        return self.weights[np.triu_indices(self.n, k=1)]


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # non-increasing
    top_vector: np.ndarray = field(repr=False)

    @property
    def lambda1(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda2(self) -> float:
        return float(self.eigenvalues[1]) if len(self.eigenvalues) > 1 else -math.inf

    @property
    def gap(self) -> float:
        return self.lambda1 - self.lambda2


@dataclass(frozen=True)
class Params:
    n: int
    p: float
    delta: float = 1.0
    s: int | None = None
    t: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("n must be positive")
        check_p(self.p)
        if self.s is not None:
            check_even(self.s)


def worker_count(requested: int | None = None) -> int:
    """Worker threads: explicit request, else ``SPECTRAL_LDP_THREADS`` capped at the CPU count."""
    if requested is not None:
        return max(1, requested)
    cap = os.cpu_count() or 1
    env = os.environ.get("SPECTRAL_LDP_THREADS")
    return max(1, min(cap, int(env))) if env else cap


def check_p(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise ValidationError(f"p must lie in (0, 1), got {p}")


def check_even(s: int) -> None:
    if int(s) != s or s < 2 or s % 2:
        raise ValidationError(f"s must be an even integer >= 2, got {s}")


def as_graph(g) -> WeightedGraph:
    return g if isinstance(g, WeightedGraph) else WeightedGraph(np.asarray(g, dtype=float))


def _sign_fix(v: np.ndarray) -> np.ndarray:
    # eigenvectors are defined up to sign; pin the largest-magnitude entry positive
    k = int(np.argmax(np.abs(v)))
    return v if v[k] >= 0 else -v


def spectrum(g) -> Spectrum:
    g = as_graph(g)
    vals, vecs = np.linalg.eigh(g.weights)
    order = np.argsort(vals)[::-1]
    vals = vals[order]
    top = _sign_fix(vecs[:, order[0]])
    return Spectrum(eigenvalues=vals, top_vector=top / np.linalg.norm(top))


def cycle_density(g, s: int, method: str = "eigen") -> float:
    """Homomorphism density of the s-cycle, ``n**-s * trace(A**s)``.

    ``method="eigen"`` sums eigenvalue powers; ``method="power"`` forms the
    matrix power directly. The two are cross-checked in the test-suite.
    """
    check_even(s)
    g = as_graph(g)
    n = g.n
    if method == "eigen":
        lam = np.linalg.eigvalsh(g.weights) / n
        return float(np.sum(lam**s))
    if method == "power":
        a = g.weights / n
        return float(np.trace(np.linalg.matrix_power(a, s)))
    raise ValidationError(f"unknown method {method!r}")


def schatten_bound_check(g, s: int) -> tuple[float, float]:
    """``((lambda1/n)**s, t(C_s, g))``; the first never exceeds the second."""
    g = as_graph(g)
    lhs = (spectrum(g).lambda1 / g.n) ** s
    rhs = cycle_density(g, s)
    return lhs, rhs


def centered_matrix(g, p: float) -> np.ndarray:
    """``A - p 11'``; the all-ones matrix includes the diagonal."""
    g = as_graph(g)
    return g.weights - p


def centered_eigpair(g, p: float) -> tuple[float, np.ndarray]:
    """Signed eigenvalue of largest magnitude of ``A - p 11'`` and its unit eigenvector."""
    vals, vecs = np.linalg.eigh(centered_matrix(g, p))
    k = int(np.argmax(np.abs(vals)))
    return float(vals[k]), _sign_fix(vecs[:, k])


def centered_opnorm(g, p: float) -> float:
    check_p(p)
    return float(np.max(np.abs(np.linalg.eigvalsh(centered_matrix(g, p)))))


def statistic(g, name: str, p: float | None = None) -> float:
    """One of the spectral statistics accepted by the tail routines."""
    if name == "lambda1":
        return spectrum(g).lambda1
    if name == "lambda2":
        return spectrum(g).lambda2
    if name == "centered":
        if p is None:
            raise ValidationError("centered statistic needs p")
        return centered_opnorm(g, p)
    raise ValidationError(f"statistic must be one of {STATISTICS}, got {name!r}")


def batch_statistic(mats: np.ndarray, name: str, p: float | None = None) -> np.ndarray:
    """Vectorised :func:`statistic` over a stack of adjacency matrices."""
    if name == "centered":
        if p is None:
            raise ValidationError("centered statistic needs p")
        return np.max(np.abs(np.linalg.eigvalsh(mats - p)), axis=-1)
    vals = np.linalg.eigvalsh(mats)
    if name == "lambda1":
        return vals[..., -1]
    if name == "lambda2":
        return vals[..., -2]
    raise ValidationError(f"statistic must be one of {STATISTICS}, got {name!r}")


def enumerate_exact_tail(n: int, p: float, stat: str, threshold: float) -> float:
    """Exact ``P(stat(G(n, p)) >= threshold)`` by summing over all labeled graphs."""
    if n > MAX_ENUM_N:
        raise ValidationError(f"enumeration limited to n <= {MAX_ENUM_N}, got {n}")
    if n < 1:
        raise ValidationError("n must be positive")
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p must lie in [0, 1], got {p}")
    pairs = list(itertools.combinations(range(n), 2))
    m = len(pairs)
    if m == 0:
        mats = np.zeros((1, n, n))
        masks = np.zeros((1, 0), dtype=bool)
    else:
        codes = np.arange(2**m)
        masks = ((codes[:, None] >> np.arange(m)) & 1).astype(bool)
        mats = np.zeros((len(codes), n, n))
        iu = np.array(pairs).T
        mats[:, iu[0], iu[1]] = masks
        mats[:, iu[1], iu[0]] = masks
    values = batch_statistic(mats, stat, p)
    hit = values >= threshold - THRESHOLD_GUARD
    edges = masks.sum(axis=1)
    probs = [p**e * (1 - p) ** (m - e) for e in edges[hit]]
    return math.fsum(probs)
