"""Error measurement between exact and discrete solutions.

Four norms are reported for an error e = u - u_h:

    l2        ||e||
    h1_semi   |e| = ||e'||
    sd        sqrt(eps |e|^2 + delta |e|^2)   (cell weight delta, default 2h/3)
    balanced  sqrt(eps |e|^2 + ||e||^2)

Integration is per element with a fixed Gauss rule.  With
``resolve_layer=True`` elements near x = 1 are split into geometrically
shrinking subintervals so an O(eps) outflow layer is integrated accurately;
the default leaves elements whole, which reproduces the convention of the
reference convergence tables (an exponential layer far thinner than the
element contributes nothing at interior Gauss points).
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, PreconditionError
from .mesh import p1_interpolant
from .quadrature import gauss_points, graded_breakpoints, split_interval


@dataclass(frozen=True)
class ErrorReport:
    l2: float
    h1_semi: float
    sd: float
    balanced: float
    level: int
    h: float

    def norm(self, name):
        return getattr(self, name if name != "h1" else "h1_semi")


def error_norms(u_exact, du_exact, u_h, eps, delta=None, order=7,
                resolve_layer=False, window=None, level=0) -> ErrorReport:
    """Measure u - u_h in the four norms.

    ``window=(a, b)`` restricts integration to elements contained in [a, b].
    The exact derivative is required; pass a finite-difference wrapper if no
    closed form exists.
    """
    if du_exact is None:
        raise PreconditionError("error_norms needs the exact derivative")
    mesh = u_h.mesh
    h = mesh.h
    if delta is None:
        delta = 2.0 * h / 3.0
    cuts = graded_breakpoints(eps, h) if resolve_layer else np.empty(0)
    tol = 1e-12
    l2_sq = h1_sq = 0.0
    for e in range(mesh.n):
        a, b = mesh.nodes[e], mesh.nodes[e + 1]
        if window is not None and (a < window[0] - tol or b > window[1] + tol):
            continue
        edges = split_interval(a, b, cuts)
        for lo, hi in zip(edges[:-1], edges[1:]):
            if hi <= lo:
                continue
            x, w = gauss_points(lo, hi, order)
            diff = np.asarray(u_exact(x), dtype=float) - u_h(x)
            ddiff = np.asarray(du_exact(x), dtype=float) - u_h.derivative(x)
            l2_sq += np.dot(w, diff**2)
            h1_sq += np.dot(w, ddiff**2)
    return ErrorReport(
        l2=float(np.sqrt(l2_sq)),
        h1_semi=float(np.sqrt(h1_sq)),
        sd=float(np.sqrt((eps + delta) * h1_sq)),
        balanced=float(np.sqrt(eps * h1_sq + l2_sq)),
        level=level,
        h=h,
    )


def convergence_order(errors):
    """Observed orders log2(e_{i-1} / e_i); the first entry is 0 by convention."""
    errors = np.asarray(errors, dtype=float)
    if np.any(errors <= 0.0) or not np.all(np.isfinite(errors)):
        raise InvalidParameterError("convergence orders need positive finite errors")
    orders = np.zeros(len(errors))
    orders[1:] = np.log2(errors[:-1] / errors[1:])
    return orders


@dataclass(frozen=True)
class InterpolantReport:
    l2_error: float
    eps_free_bound: float       # (h / sqrt(2)) * ||f||_inf, valid for mean-zero f
    eps_free_applicable: bool
    eps_free_holds: bool
    second_order_bound: float   # (2 / (eps pi)) * h^2 * ||f||_inf
    second_order_holds: bool


def interpolant_bounds_check(instance, mesh, order=9) -> InterpolantReport:
    """Check the two interpolation-error bounds for the nodal interpolant.

    The h-order bound is epsilon-independent but requires mean-zero data;
    the h^2-order bound carries a 1/epsilon constant.  The error integral
    resolves the outflow layer.
    """
    u_i = p1_interpolant(mesh, instance.u)
    report = error_norms(instance.u, instance.du, u_i, instance.epsilon,
                         order=order, resolve_layer=True)
    fg = np.asarray(instance.f(np.linspace(0.0, 1.0, 4097)), dtype=float)
    f_inf = float(np.max(np.abs(fg)))
    h = mesh.h
    bound1 = h / np.sqrt(2.0) * f_inf
    bound2 = 2.0 / (instance.epsilon * np.pi) * h**2 * f_inf
    mean_zero = abs(instance.fbar) <= 1e-12
    return InterpolantReport(
        l2_error=report.l2,
        eps_free_bound=float(bound1),
        eps_free_applicable=mean_zero,
        eps_free_holds=bool(report.l2 <= bound1 + 1e-14) if mean_zero else False,
        second_order_bound=float(bound2),
        second_order_holds=bool(report.l2 <= bound2 + 1e-14),
    )
