"""Step graphons: embeddings of weighted graphs, signed cycle densities, degree thresholding.

A step graphon on ``m`` equal blocks is stored as its ``m x m`` value
matrix. Its integral operator acts on block-constant functions as ``M / m``,
so operator norms and cycle densities reduce to finite spectral
computations and are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .core import ValidationError, as_graph, check_even, check_p
from .entropy import ip_scalar

TOL = 1e-12


@dataclass(frozen=True)
class StepGraphon:
    values: np.ndarray
    signed: bool = False

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] < 1:
            raise ValidationError(f"values must be a non-empty square matrix, got shape {v.shape}")
        if np.max(np.abs(v - v.T)) > TOL:
            raise ValidationError("step graphon must be symmetric")
        lo = -1.0 if self.signed else 0.0
        if v.min() < lo - TOL or v.max() > 1.0 + TOL:
            raise ValidationError(f"values must lie in [{lo}, 1]")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def m(self) -> int:
        return self.values.shape[0]

    def shift(self, c: float) -> "StepGraphon":
        """``W - c``, flagged signed."""
        return StepGraphon(self.values - c, signed=True)

    def __sub__(self, other: "StepGraphon") -> "StepGraphon":
        if self.m != other.m:
            raise ValidationError("block counts differ")
        return StepGraphon(self.values - other.values, signed=True)

    def opnorm(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvalsh(self.values)))) / self.m

    def integral(self, power: int = 1) -> float:
        return float(np.sum(self.values**power)) / self.m**2

    def degrees(self) -> np.ndarray:
        return self.values.sum(axis=1) / self.m

    @property
    def nonnegative(self) -> bool:
        return bool(self.values.min() >= -TOL)


def embed(g, p: float, variant: str = "hat") -> StepGraphon:
    """Step graphon of a weighted graph on ``n`` equal intervals.

    ``hat`` puts 0 on the diagonal blocks, ``padded`` puts ``p`` there; the
    two differ by ``p`` on diagonal blocks, an operator of norm ``p/n``.
    """
    g = as_graph(g)
    check_p(p)
    w = g.weights.copy()
    if variant == "padded":
        np.fill_diagonal(w, p)
    elif variant != "hat":
        raise ValidationError(f"variant must be 'hat' or 'padded', got {variant!r}")
    return StepGraphon(w)


def signed_cycle_density(u: StepGraphon, s: int, method: str = "eigen") -> float:
    """``t(C_s, U) = m^{-s} trace(U^s)`` for a (possibly signed) step kernel.

    With ``U = W - p`` this is the signed density ``t_+(C_s, W)``.
    """
    check_even(s)
    m = u.m
    if method == "eigen":
        lam = np.linalg.eigvalsh(u.values) / m
        return float(np.sum(lam**s))
    if method == "power":
        return float(np.trace(np.linalg.matrix_power(u.values / m, s)))
    raise ValidationError(f"unknown method {method!r}")


def opnorm_bound_check(u: StepGraphon, s: int) -> tuple[float, float]:
    """``(||U||_op^s, t(C_s, U))``; the first never exceeds the second for even ``s``."""
    check_even(s)
    return u.opnorm() ** s, signed_cycle_density(u, s)


def holder_cycle_check(u: StepGraphon, s: int) -> tuple[float, float]:
    """``(t(C_s, U), E[U^2]^{s/2})`` for non-negative ``U``."""
    check_even(s)
    if not u.nonnegative:
        raise ValidationError("cycle-Holder check needs a non-negative kernel")
    return signed_cycle_density(u, s), u.integral(2) ** (s / 2)


@dataclass(frozen=True)
class DegreeProfile:
    b: float
    degrees: np.ndarray = field(repr=False)
    high: np.ndarray = field(repr=False)  # boolean block mask of B_b
    B_mass: float
    theta_b: float
    eta_b: float
    gammas: dict | None = None


def degree_profile(u: StepGraphon, b: float, delta: float, p: float, s: int | None = None) -> DegreeProfile:
    """High-degree set ``B_b = {d >= b}`` and the normalised ``U^2`` masses off it.

    ``theta_b`` integrates ``U^2`` over ``B_b x complement``, ``eta_b`` over
    ``complement x complement``, both scaled by ``(delta p)^{-2}``. Given an
    even ``s``, also returns the cycle contributions ``Gamma_1..3`` (alternating
    and all-low placements) as masked traces.
    """
    if not 0 < b <= 1:
        raise ValidationError(f"b must lie in (0, 1], got {b}")
    if not u.nonnegative:
        raise ValidationError("degree profile needs a non-negative kernel")
    m = u.m
    d = u.degrees()
    high = d >= b
    low = ~high
    sq = u.values**2
    scale = (delta * p) ** -2 / m**2
    theta = float(np.sum(sq[np.ix_(high, low)])) * scale
    eta = float(np.sum(sq[np.ix_(low, low)])) * scale
    gammas = None
    if s is not None:
        check_even(s)
        gammas = gamma_terms(u, high, s)
    return DegreeProfile(b, d, high, float(high.sum()) / m, theta, eta, gammas)


def gamma_terms(u: StepGraphon, high: np.ndarray, s: int) -> dict:
    """Cycle density split by vertex placement.

    ``gamma1``: even positions high, odd low; ``gamma2``: the reverse;
    ``gamma3``: every vertex low.
    """
    m = u.m
    ph = np.diag(high.astype(float))
    pl = np.diag((~high).astype(float))
    uu = u.values / m
    half = s // 2
    g1 = np.trace(np.linalg.matrix_power(pl @ uu @ ph @ uu, half))
    g2 = np.trace(np.linalg.matrix_power(ph @ uu @ pl @ uu, half))
    g3 = np.trace(np.linalg.matrix_power(pl @ uu @ pl, s))
    return {"gamma1": float(g1), "gamma2": float(g2), "gamma3": float(g3), "total": signed_cycle_density(u, s)}


def geometric_b_grid(b0: float, b_max: float, count: int) -> np.ndarray:
    return np.geomspace(b0, b_max, count)


def scan_b(u: StepGraphon, bs, delta: float, p: float, s: int | None = None) -> list[DegreeProfile]:
    """Degree profiles over a user-supplied grid of thresholds."""
    return [degree_profile(u, float(b), delta, p, s) for b in bs]


@dataclass(frozen=True)
class SplitResult:
    s: int
    x: float
    y: float
    value: float
    x_axis_value: float  # objective at x = 0
    y_axis_value: float  # objective at y = 0
    interior_min: float


def convex_min_split(s: int, grid: int = 2001) -> SplitResult:
    """Minimise ``x + y/2`` subject to ``2 x^{s/2} + y^{s/2} >= 1``, ``x, y >= 0``.

    The constraint binds at the optimum, so the search runs along the curve
    ``y = (1 - 2 x^{s/2})^{2/s}``, ``0 <= x <= 2^{-2/s}``: a grid plus a
    bounded scalar refinement, compared against the two axis endpoints.
    Ties go to the ``x = 0`` endpoint.
    """
    check_even(s)
    h = s / 2
    x_end = 2 ** (-1 / h)

    def along(x):
        y = max(0.0, 1 - 2 * x**h) ** (1 / h)
        return x + 0.5 * y

    xs = np.linspace(0.0, x_end, grid)
    vals = np.array([along(x) for x in xs])
    k = int(np.argmin(vals))
    lo, hi = xs[max(k - 1, 0)], xs[min(k + 1, grid - 1)]
    ref = minimize_scalar(along, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}) if hi > lo else None
    interior = min(float(vals[k]), float(ref.fun) if ref is not None else math.inf)
    at_x0 = along(0.0)
    at_y0 = along(x_end)
    best = min(at_x0, at_y0)
    if interior < best - 1e-9:
        xi = float(ref.x) if ref is not None and ref.fun <= vals[k] else float(xs[k])
        return SplitResult(s, xi, max(0.0, 1 - 2 * xi**h) ** (1 / h), interior, at_x0, at_y0, interior)
    if at_x0 <= at_y0 + 1e-12:
        return SplitResult(s, 0.0, 1.0, at_x0, at_x0, at_y0, interior)
    return SplitResult(s, x_end, 0.0, at_y0, at_x0, at_y0, interior)


@dataclass(frozen=True)
class AprioriReport:
    mean_U: float
    mean_U2: float
    B_mass: float
    low_degree_sq: float
    entropy_mean: float  # E[I_p(p + U)]
    ratios: dict


def apriori_quantities(u: StepGraphon, p: float, delta: float, b: float) -> AprioriReport:
    """Raw quantities and their ratios to the small-``p`` comparators.

    Ratios: ``E[U] / (delta p^{3/2} sqrt(log 1/p))``, ``E[U^2] / (delta p)^2``,
    ``mu(B_b) / ((delta p)^2 / b)``, ``int_{low} d^2 / ((delta p)^2 b)``, and the
    hypothesis ratio ``E[I_p(p+U)] / ((delta p)^2 I_p(1))``. Diagnostic only.
    When ``U`` comes from a graph embedding, diagonal blocks add ``O(1/m)``.
    """
    check_p(p)
    if not u.nonnegative:
        raise ValidationError("a-priori quantities need a non-negative kernel")
    if np.any(u.values > 1 - p + TOL):
        raise ValidationError("U must satisfy U <= 1 - p")
    m = u.m
    d = u.degrees()
    high = d >= b
    mean_u = u.integral(1)
    mean_u2 = u.integral(2)
    mass = float(high.sum()) / m
    low_sq = float(np.sum(d[~high] ** 2)) / m
    ent = float(np.sum(ip_scalar(np.clip(p + u.values, 0.0, 1.0), p))) / m**2
    dp2 = (delta * p) ** 2
    ratios = {
        "mean_U": mean_u / (delta * p**1.5 * math.sqrt(math.log(1 / p))),
        "mean_U2": mean_u2 / dp2,
        "B_mass": mass / (dp2 / b),
        "low_degree_sq": low_sq / (dp2 * b),
        "entropy": ent / (dp2 * ip_scalar(1.0, p)),
    }
    return AprioriReport(mean_u, mean_u2, mass, low_sq, ent, ratios)
