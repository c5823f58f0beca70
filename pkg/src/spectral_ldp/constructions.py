"""Planted near-optimal weighted graphs: clique, hub (anti-clique), centered clique.

Every construction is two-block: a planted set of ``k`` vertices followed by
``n - k`` background vertices at weight ``p``. The two-block form is an
equitable partition, so the top of the spectrum comes from a 2x2 quotient
matrix and the construction can be certified at sizes far beyond what a
dense matrix allows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import (
    MAX_DENSE_N,
    NumericalError,
    ValidationError,
    WeightedGraph,
    centered_opnorm,
    check_p,
    spectrum,
)
from .entropy import EntropyValue, ip_scalar, normalization

KINDS = ("clique", "anticlique", "centered_clique")
SCAN_CHUNK = 1 << 20


def ceil_int(x: float) -> int:
    """Ceiling that ignores float noise just above an integer (e.g. 20.000000000000004)."""
    return math.ceil(x - 1e-9 * max(1.0, abs(x)))


@dataclass(frozen=True)
class Construction:
    kind: str
    n: int
    p: float
    delta: float
    planted: int  # size of the planted block
    block_weights: np.ndarray = field(repr=False)  # 2x2, off-diagonal pair weights
    vector_blocks: tuple[float, float]  # unnormalised test vector value per block
    entropy: EntropyValue
    achieved: float
    threshold: float
    s: float | None = None
    z: float | None = None

    @property
    def sizes(self) -> tuple[int, int]:
        return self.planted, self.n - self.planted

    @property
    def statistic(self) -> str:
        return "centered" if self.kind == "centered_clique" else "lambda1"

    @property
    def graph(self) -> WeightedGraph:
        if self.n > MAX_DENSE_N:
            raise ValidationError(f"n={self.n} too large to materialise (cap {MAX_DENSE_N})")
        k = self.planted
        w = np.full((self.n, self.n), self.block_weights[1, 1])
        w[:k, :] = self.block_weights[0, 1]
        w[:, :k] = self.block_weights[1, 0]
        w[:k, :k] = self.block_weights[0, 0]
        np.fill_diagonal(w, 0.0)
        return WeightedGraph(w)

    @property
    def test_vector(self) -> np.ndarray:
        if self.n > MAX_DENSE_N:
            raise ValidationError(f"n={self.n} too large to materialise (cap {MAX_DENSE_N})")
        k = self.planted
        u = np.empty(self.n)
        u[:k], u[k:] = self.vector_blocks
        return u / np.linalg.norm(u)

    def _block_form(self):
        """Block constants and diagonal values of the matrix whose statistic is certified."""
        c = np.array(self.block_weights, dtype=float)
        d = np.zeros(2)
        if self.statistic == "centered":
            c = c - self.p
            d = d - self.p
        return c, d

    def block_rayleigh(self) -> float:
        """``v' M v`` from block sums, with ``v`` the normalised test vector."""
        c, d = self._block_form()
        size = np.array(self.sizes, dtype=float)
        u = np.array(self.vector_blocks, dtype=float)
        norm2 = float(np.sum(size * u * u))
        quad = float(np.sum(c * np.outer(size * u, size * u)) + np.sum((d - np.diag(c)) * size * u * u))
        return quad / norm2

    def quotient_eigenvalues(self) -> np.ndarray:
        """Full distinct spectrum via the equitable partition (block-constant plus within-block)."""
        c, d = self._block_form()
        size = np.array(self.sizes, dtype=float)
        active = size > 0
        q = c[np.ix_(active, active)] * size[active][None, :] + np.diag((d - np.diag(c))[active])
        vals = list(np.linalg.eigvals(q).real)
        for a in range(2):
            if size[a] >= 2:
                vals.append(d[a] - c[a, a])
        return np.sort(np.array(vals))[::-1]

    def exact_statistic(self) -> float:
        vals = self.quotient_eigenvalues()
        if self.statistic == "centered":
            return float(np.max(np.abs(vals)))
        return float(vals[0])


def _entropy(n: int, p: float, planted: int, weights: np.ndarray) -> EntropyValue:
    k, r = planted, n - planted
    counts = {(0, 0): k * (k - 1) // 2, (0, 1): k * r, (1, 1): r * (r - 1) // 2}
    terms = [cnt * ip_scalar(float(weights[a, b]), p) for (a, b), cnt in counts.items() if cnt]
    total = math.fsum(terms)
    return EntropyValue(total, total / normalization(n, p))


def _check_common(n: int, p: float, delta: float) -> None:
    if int(n) != n or n < 2:
        raise ValidationError(f"n must be an integer >= 2, got {n}")
    check_p(p)
    if not delta > 0:
        raise ValidationError(f"delta must be positive, got {delta}")


def _clique_weights(p: float) -> np.ndarray:
    return np.array([[1.0, p], [p, p]])


def build_clique(n: int, p: float, delta: float) -> Construction:
    """Clique on ``ceil(s) + 1`` vertices with ``s = (1+delta) n p``; certifies ``lambda1 >= (1+delta) n p``."""
    _check_common(n, p, delta)
    s = (1 + delta) * n * p
    k = ceil_int(s) + 1
    if k > n:
        raise ValidationError(f"clique of {k} vertices does not fit in n={n}")
    w = _clique_weights(p)
    c = Construction(
        "clique", n, p, delta, k, w, (1.0, 0.0), _entropy(n, p, k, w),
        achieved=0.0, threshold=s, s=s,
    )
    return _with_achieved(c)


def build_centered_clique(n: int, p: float, delta: float) -> Construction:
    """Clique sized by ``s = (delta n p + 2p)/(1-p)`` so that ``ceil(s) - p(ceil(s)+1) >= delta n p``."""
    _check_common(n, p, delta)
    s = (delta * n * p + 2 * p) / (1 - p)
    k = ceil_int(s) + 1
    if k > n:
        raise ValidationError(f"clique of {k} vertices does not fit in n={n}")
    w = _clique_weights(p)
    c = Construction(
        "centered_clique", n, p, delta, k, w, (1.0, 0.0), _entropy(n, p, k, w),
        achieved=0.0, threshold=delta * n * p, s=s,
    )
    return _with_achieved(c)


def hub_rayleigh(n: int, p: float, delta: float, h) -> np.ndarray:
    """Exact ``v' A v`` for a hub of ``h`` vertices and ``v = K(1,..,1,(1+delta)p,..)``."""
    h = np.asarray(h, dtype=float)
    r = n - h
    c = (1 + delta) * p
    num = h * (h - 1) + 2 * h * r * c + r * (r - 1) * p * c * c
    return num / (h + r * c * c)


def _hub(n: int, p: float, delta: float, h: int, z: float) -> Construction:
    w = np.array([[1.0, 1.0], [1.0, p]])
    c = Construction(
        "anticlique", n, p, delta, h, w, (1.0, (1 + delta) * p), _entropy(n, p, h, w),
        achieved=float(hub_rayleigh(n, p, delta, h)), threshold=(1 + delta) * n * p, z=z,
    )
    return c


def build_anticlique(n: int, p: float, delta: float, z: float | None = None) -> Construction:
    """Hub of ``floor(z n p^2)`` vertices joined to everything, background ``p``.

    With ``z=None`` the smallest hub whose exact Rayleigh quotient reaches
    ``(1+delta) n p`` is found and ``z`` is reported as the smallest value
    producing that hub. An explicit ``z`` builds the hub without solving,
    feasible or not.
    """
    _check_common(n, p, delta)
    scale = n * p * p
    if z is not None:
        if z < 0:
            raise ValidationError("z must be non-negative")
        h = int(math.floor(z * scale + 1e-9))
        if h > n:
            raise ValidationError(f"hub of {h} vertices exceeds n={n}")
        return _hub(n, p, delta, h, z)
    target = (1 + delta) * n * p
    if target > n - 1:
        raise ValidationError(f"threshold {target} exceeds the complete graph's lambda1 = {n - 1}")
    for start in range(1, n + 1, SCAN_CHUNK):
        hs = np.arange(start, min(n, start + SCAN_CHUNK - 1) + 1)
        hit = np.flatnonzero(hub_rayleigh(n, p, delta, hs) >= target)
        if hit.size:
            h = int(hs[hit[0]])
            return _hub(n, p, delta, h, h / scale)
    raise ValidationError(f"no hub with z <= 1/p^2 reaches {target}")


def _with_achieved(c: Construction) -> Construction:
    return replace(c, achieved=c.block_rayleigh())


@dataclass(frozen=True)
class CertificateReport:
    kind: str
    statistic: str
    eigensolve: float
    rayleigh: float
    achieved: float
    threshold: float
    feasible: bool
    dense: bool


def certify(c: Construction, dense: bool | None = None) -> CertificateReport:
    """Recompute the statistic by eigensolve and the Rayleigh quotient independently.

    Dense mode materialises the matrix (``n <= 2000`` by default); otherwise
    the quotient spectrum and block sums are used. Raises
    :class:`NumericalError` if the Rayleigh bound exceeds the eigenvalue or
    disagrees with ``achieved``; an unmet threshold is reported, not raised.
    """
    if dense is None:
        dense = c.n <= 2000
    if dense:
        g = c.graph
        v = c.test_vector
        if c.statistic == "centered":
            m = g.weights - c.p
            eig = centered_opnorm(g, c.p)
        else:
            m = g.weights
            eig = spectrum(g).lambda1
        ray = float(v @ m @ v)
    else:
        eig = c.exact_statistic()
        ray = c.block_rayleigh()
    tol = 1e-8 * max(1.0, abs(eig))
    if ray > eig + tol:
        raise NumericalError(f"Rayleigh quotient {ray} exceeds eigenvalue {eig}")
    if abs(ray - c.achieved) > tol:
        raise NumericalError(f"Rayleigh quotient {ray} disagrees with recorded value {c.achieved}")
    feasible = c.achieved >= c.threshold - 1e-9 * max(1.0, c.threshold)
    return CertificateReport(c.kind, c.statistic, eig, ray, c.achieved, c.threshold, feasible, dense)


def build(kind: str, n: int, p: float, delta: float) -> Construction:
    if kind == "clique":
        return build_clique(n, p, delta)
    if kind == "anticlique":
        return build_anticlique(n, p, delta)
    if kind == "centered_clique":
        return build_centered_clique(n, p, delta)
    raise ValidationError(f"kind must be one of {KINDS}, got {kind!r}")
