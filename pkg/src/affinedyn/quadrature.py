"""Composite Gauss rules on geometrically graded panels of the half-line."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre


@lru_cache(maxsize=64)
def _legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(order)
    return x, w


@lru_cache(maxsize=64)
def _jacobi(order: int, power: float) -> tuple[np.ndarray, np.ndarray]:
    # weight (1 + x)^power on [-1, 1]
    x, w = roots_jacobi(order, 0.0, power)
    return x, w


def graded_panels(lo: float, hi: float, ratio: float = 2.0) -> np.ndarray:
    """Panel edges lo, lo*r, lo*r^2, ... up to the first edge >= hi."""
    if not (0 < lo < hi) or ratio <= 1:
        raise ValueError("need 0 < lo < hi and ratio > 1")
    count = int(np.ceil(np.log(hi / lo) / np.log(ratio)))
    return lo * ratio ** np.arange(count + 1)


def gauss_on_panels(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of a composite Gauss-Legendre rule on the given edges."""
    x, w = _legendre(order)
    a = edges[:-1, None]
    b = edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (a + b) * 0.5 + half * x[None, :]
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def half_line_rule(
    power: float,
    t0: float,
    t_max: float,
    order: int,
    ratio: float = 2.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Rule for int_0^oo t^power g(t) dt with g smooth near 0.

    The initial piece [0, t0] uses Gauss-Jacobi with the singular factor
    t^power folded into the weight; the returned weights already include
    t^power everywhere, so the caller sums weights * g(nodes).
    """
    if power <= -1:
        raise ValueError("t^power is not integrable at 0")
    xj, wj = _jacobi(order, float(power))
    # map [-1, 1] -> [0, t0]: t = t0 (1 + x)/2, t^power = (t0/2)^power (1+x)^power
    head_nodes = 0.5 * t0 * (1.0 + xj)
    head_weights = wj * (0.5 * t0) ** (power + 1.0)
    edges = graded_panels(t0, t_max, ratio)
    nodes, weights = gauss_on_panels(edges, order)
    weights = weights * nodes ** power
    return np.concatenate([head_nodes, nodes]), np.concatenate([head_weights, weights])


def symmetric_line_rule(h: float, y_max: float, order: int, ratio: float = 2.0) -> tuple[np.ndarray, np.ndarray]:
    """Rule for int_{-Y}^{Y}: one panel [-h, h] and graded panels outward."""
    x, w = _legendre(order)
    mid_nodes = h * x
    mid_weights = h * w
    edges = graded_panels(h, y_max, ratio)
    nodes, weights = gauss_on_panels(edges, order)
    return (
        np.concatenate([-nodes[::-1], mid_nodes, nodes]),
        np.concatenate([weights[::-1], mid_weights, weights]),
    )
