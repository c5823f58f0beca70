"""Bernoulli relative entropy ``I_p`` on scalars, weighted graphs and step kernels."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ValidationError, as_graph, check_p


@dataclass(frozen=True)
class EntropyValue:
    value: float  # nats
    normalized: float | None = None  # value / (n^2 p^2 log(1/p))


def _xlogy(x, y):
    # x*log(y) with 0*log(0) := 0
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = x * np.log(y)
    return np.where(x == 0, 0.0, out)


def ip_scalar(x, p: float):
    """``x log(x/p) + (1-x) log((1-x)/(1-p))``, elementwise for arrays."""
    check_p(p)
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(xa > 1):
        raise ValidationError("x must lie in [0, 1]")
    val = _xlogy(xa, xa / p) + _xlogy(1 - xa, (1 - xa) / (1 - p))
    val = np.maximum(val, 0.0)
    return float(val) if val.ndim == 0 else val


def ip_derivative(x, p: float):
    """``d I_p / dx = log(x/p) - log((1-x)/(1-p))``; infinite at 0 and 1."""
    xa = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(xa / p) - np.log((1 - xa) / (1 - p))


def normalization(n: int, p: float) -> float:
    return n * n * p * p * math.log(1 / p)


def ip_graph(g, p: float) -> EntropyValue:
    """Sum of ``I_p`` over unordered pairs ``i < j``.

    Summation is exact-rounded (:func:`math.fsum`) so the total does not
    depend on pair ordering and ``k`` identical terms equal ``k * term``.
    """
    g = as_graph(g)
    total = math.fsum(np.atleast_1d(ip_scalar(g.upper(), p)))
    return EntropyValue(total, total / normalization(g.n, p))


def ip_asym_gap(x: float, p: float) -> float:
    """``F_p(x) = I_p(p - x) - I_p(p + x)``, non-negative for ``0 <= x <= p <= 1/2``."""
    check_p(p)
    if p > 0.5:
        raise ValidationError(f"asymmetry gap needs p <= 1/2, got {p}")
    if not 0 <= x <= p:
        raise ValidationError(f"need 0 <= x <= p, got x={x}")
    return ip_scalar(p - x, p) - ip_scalar(p + x, p)


def scaling_b_max(p: float) -> float:
    """Upper end ``1 - p - 1/log(1/p)`` of the range of ``b`` in the scaling inequality."""
    check_p(p)
    return 1 - p - 1 / math.log(1 / p)


def appendix_estimates_report(p: float, xs, b: float | None = None) -> list[dict]:
    """Diagnostic table for the small-``p`` estimates of ``I_p(p + x)``.

    Columns per ``x``:

    * ``quad_ratio`` -- ``I_p(p+x) / (x^2 / 2p)``, tends to 1 when ``x << p``
    * ``log_ratio``  -- ``I_p(p+x) / (x log(x/p))``, tends to 1 when ``x >> p``
    * ``scaling_ok`` -- ``I_p(p+x) >= (x/b)^2 I_p(p+b)`` (only for ``x <= b``)
    * ``corollary_ok`` -- ``I_p(p+x) >= x^2 I_p(1 - 1/log(1/p))``

    ``b`` defaults to ``1 - p - 1/log(1/p)``, the largest value for which the
    scaling inequality is claimed; the report accepts any ``b <= 1 - p``.
    """
    check_p(p)
    b = scaling_b_max(p) if b is None else b
    if not 0 < b <= 1 - p:
        raise ValidationError(f"b must lie in (0, 1-p], got {b}")
    ip_b = ip_scalar(p + b, p)
    c = 1 - 1 / math.log(1 / p)
    ip_c = ip_scalar(c, p) if 0 <= c <= 1 else math.nan
    rows = []
    for x in xs:
        x = float(x)
        if not 0 <= x <= 1 - p:
            raise ValidationError(f"x must lie in [0, 1-p], got {x}")
        val = ip_scalar(p + x, p)
        rows.append(
            {
                "x": x,
                "ip": val,
                "quad_ratio": val / (x * x / (2 * p)) if x > 0 else math.nan,
                "log_ratio": val / (x * math.log(x / p)) if x > p else math.nan,
                "scaling_ok": bool(val >= (x / b) ** 2 * ip_b - 1e-12) if x <= b else None,
                "corollary_ok": bool(val >= x * x * ip_c - 1e-12) if not math.isnan(ip_c) else None,
            }
        )
    return rows
