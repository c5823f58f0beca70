"""Closed-form rate functions and independence polynomials of cycles.

Rates are in units of ``n^2 p^2 log(1/p)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .core import NumericalError, ValidationError, check_even

MAX_BRUTE_S = 20
EPS = 2.0**-52


@dataclass(frozen=True)
class CyclePolynomial:
    s: int
    coeffs: tuple[int, ...]  # ascending degree

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self, x: float) -> float:
        acc = 0.0
        for k in range(len(self.coeffs) - 1, 0, -1):
            acc = acc * x + k * self.coeffs[k]
        return acc


@dataclass(frozen=True)
class RateResult:
    value: float
    branch: str  # "clique", "anticlique" or "tie"
    clique: float | None = None
    anticlique: float | None = None
    theta_bar: float | None = None
    eta: float | None = None


def indpoly_recursive(s: int) -> CyclePolynomial:
    """``P_{C_s} = P_{C_{s-1}} + x P_{C_{s-2}}`` from ``P_{C_2} = 1 + 2x``, ``P_{C_3} = 1 + 3x``."""
    if int(s) != s or s < 2:
        raise ValidationError(f"cycle length must be an integer >= 2, got {s}")
    prev2, prev1 = [1, 2], [1, 3]
    if s == 2:
        return CyclePolynomial(2, tuple(prev2))
    for _ in range(4, s + 1):
        nxt = prev1 + [0] * (len(prev2) + 1 - len(prev1))
        for k, c in enumerate(prev2):
            nxt[k + 1] += c
        prev2, prev1 = prev1, nxt
    return CyclePolynomial(s, tuple(prev1))


def indpoly_bruteforce(s: int) -> CyclePolynomial:
    """Count independent sets of the s-cycle by scanning all vertex subsets.

    ``C_2`` is taken as two vertices joined by an edge.
    """
    if int(s) != s or s < 2:
        raise ValidationError(f"cycle length must be an integer >= 2, got {s}")
    if s > MAX_BRUTE_S:
        raise ValidationError(f"brute force limited to s <= {MAX_BRUTE_S}, got {s}")
    adjacent = (1 << s) - 1  # full mask
    counts = [0] * (s // 2 + 1)
    for mask in range(1 << s):
        rot = ((mask << 1) | (mask >> (s - 1))) & adjacent
        if mask & rot:
            continue
        counts[bin(mask).count("1")] += 1
    return CyclePolynomial(s, tuple(counts))


def indpoly_chebyshev_sum(s: int, x: float) -> float:
    """``2^{-(s-1)} sum_a C(s, 2a) (1+4x)^a``, valid for every ``s >= 2``."""
    if int(s) != s or s < 2:
        raise ValidationError(f"cycle length must be an integer >= 2, got {s}")
    w = 1 + 4 * x
    return math.fsum(math.comb(s, 2 * a) * w**a for a in range(s // 2 + 1)) / 2 ** (s - 1)


def indpoly_closed_form(s: int, x: float) -> float:
    """``((sqrt(1+4x)+1)/2)^s + ((sqrt(1+4x)-1)/2)^s`` for even ``s``."""
    check_even(s)
    if x < 0:
        raise ValidationError("x must be non-negative")
    u = math.sqrt(1 + 4 * x)
    return ((u + 1) / 2) ** s + ((u - 1) / 2) ** s


def solve_theta(s: int, target: float, tol: float = 1e-10) -> float:
    """Unique positive root of ``P_{C_s}(theta) = target`` for even ``s``, ``target > 1``.

    Bisection on a bracket whose validity is asserted, then Newton polish
    kept inside the bracket.
    """
    check_even(s)
    if not target > 1:
        raise ValidationError(f"target must exceed P(0) = 1, got {target}")
    poly = indpoly_recursive(s)
    lo, hi = 0.0, target ** (2 / s) + 1
    if not (poly(lo) < target <= poly(hi)):
        raise NumericalError(f"root bracket invalid for s={s}, target={target}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if poly(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-6 * max(1.0, hi):
            break
    x = 0.5 * (lo + hi)
    # polish to float resolution; the residual test below is the contract
    for _ in range(60):
        fx = poly(x) - target
        if fx == 0:
            break
        if fx < 0:
            lo = x
        else:
            hi = x
        step = fx / poly.derivative(x)
        if abs(step) <= 2 * EPS * x or hi - lo <= 2 * EPS * hi:
            break
        nx = x - step
        x = nx if lo < nx < hi else 0.5 * (lo + hi)
    if abs(poly(x) - target) > tol * target:
        raise NumericalError(f"root solve did not converge for s={s}, target={target}")
    return x


def solve_theta_bar(s: int, delta: float) -> float:
    """Positive root of ``P_{C_s}(theta) = (1+delta)^s``."""
    if not delta > 0:
        raise ValidationError(f"delta must be positive, got {delta}")
    return solve_theta(s, (1 + delta) ** s)


def eta_limit(delta: float) -> float:
    """Large-``s`` limit of the root: solves ``1 + sqrt(1+4 eta) = 2(1+delta)``."""
    if not delta > 0:
        raise ValidationError(f"delta must be positive, got {delta}")
    return delta * (1 + delta)


def rate_lambda1(delta: float) -> RateResult:
    if not delta > 0:
        raise ValidationError(f"delta must be positive, got {delta}")
    clique = (1 + delta) ** 2 / 2
    anti = delta * (1 + delta)
    if clique < anti:
        branch = "clique"
    elif anti < clique:
        branch = "anticlique"
    else:
        branch = "tie"
    return RateResult(min(clique, anti), branch, clique=clique, anticlique=anti, eta=anti)


def rate_centered(delta: float) -> float:
    if not delta > 0:
        raise ValidationError(f"delta must be positive, got {delta}")
    return 0.5 * delta**2


def rate_cycle(s: int, t: float) -> RateResult:
    """``min{theta, (t-1)^{2/s} / 2}`` where ``P_{C_s}(theta) = t``."""
    check_even(s)
    if not t > 1:
        raise ValidationError(f"t must exceed 1, got {t}")
    theta = solve_theta(s, t)
    hub = 0.5 * (t - 1) ** (2 / s)
    # hub-type planting realises theta, clique-type realises the (t-1) term
    if theta < hub:
        branch = "anticlique"
    elif hub < theta:
        branch = "clique"
    else:
        branch = "tie"
    return RateResult(min(theta, hub), branch, clique=hub, anticlique=theta, theta_bar=theta)


def theta_sequence(delta: float, s_values) -> list[tuple[int, float]]:
    return [(s, solve_theta_bar(s, delta)) for s in s_values]


def even_range(lo: int, hi: int):
    return itertools.takewhile(lambda s: s <= hi, itertools.count(lo + lo % 2, 2))
