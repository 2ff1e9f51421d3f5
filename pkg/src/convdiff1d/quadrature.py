"""Gauss-Legendre quadrature helpers, including boundary-layer grading.

All composite rules in this package integrate element by element (piecewise
polynomials have kinks at the nodes) and optionally split elements near x = 1
into geometrically shrinking subintervals so that an exponential layer of
width O(eps) is resolved.
"""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def gauss_rule(order):
    """Nodes and weights of the `order`-point Gauss-Legendre rule on [-1, 1]."""
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def gauss_points(a, b, order):
    """Nodes and weights of the Gauss rule mapped to [a, b]."""
    t, w = gauss_rule(order)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return mid + half * t, half * w


def integrate(f, a, b, order=7):
    """Fixed-order Gauss integral of a vectorized callable over [a, b]."""
    x, w = gauss_points(a, b, order)
    return float(np.dot(w, f(x)))


def layer_kappa(eps):
    """Width of the graded region near x = 1, min(1, 10 * eps * |log eps|)."""
    if eps <= 0.0:
        return 0.0
    return min(1.0, 10.0 * eps * abs(np.log(eps)))


def graded_breakpoints(eps, h):
    """Breakpoints of a geometric subdivision of [1 - kappa, 1].

    Subintervals shrink toward x = 1 with ratio 1/2 until their width drops
    below min(eps, h) / 4.  Returns an increasing array inside (0, 1); empty
    when eps is so large that no grading is needed.
    """
    kappa = layer_kappa(eps)
    if kappa <= 0.0:
        return np.empty(0)
    w_min = min(eps, h) / 4.0
    points = []
    d = kappa
    while d > w_min and d > 1e-300:
        points.append(1.0 - d)
        d *= 0.5
    points.append(1.0 - d)
    return np.array(points)


def split_interval(a, b, cuts):
    """Partition [a, b] at the interior cut points that fall inside it."""
    inner = cuts[(cuts > a) & (cuts < b)]
    return np.concatenate(([a], inner, [b]))


def piecewise_gauss(f, a, b, cuts, order=7):
    """Integrate f over [a, b] split at `cuts`, fixed Gauss order per piece."""
    edges = split_interval(a, b, np.asarray(cuts, dtype=float))
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            total += integrate(f, lo, hi, order)
    return total
