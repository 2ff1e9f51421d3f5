"""Independent quadrature oracles shared by the test modules.

Everything here assembles matrices and bilinear forms by brute-force
per-element Gauss quadrature over basis-function callables, independently of
the closed-form assembly routines under test.
"""

import numpy as np

from convdiff1d.mesh import BasisId, BasisKind, eval_basis
from convdiff1d.quadrature import gauss_points


def quad_inner(mesh, f, g, order=10):
    """(f, g) integrated element by element."""
    total = 0.0
    for e in range(mesh.n):
        x, w = gauss_points(mesh.nodes[e], mesh.nodes[e + 1], order)
        total += np.dot(w, np.asarray(f(x)) * np.asarray(g(x)))
    return total


def hat(mesh, j, derivative=0):
    bid = BasisId(BasisKind.P1_NODAL, j)
    return lambda x: eval_basis(mesh, bid, x, derivative)


def bubble(mesh, i, derivative=0):
    bid = BasisId(BasisKind.BUBBLE, i)
    return lambda x: eval_basis(mesh, bid, x, derivative)


def pg_test(mesh, j, derivative=0):
    bid = BasisId(BasisKind.PG_ENRICHED, j)
    return lambda x: eval_basis(mesh, bid, x, derivative)


def b_form(mesh, eps, trial, dtrial, test, dtest, order=10):
    """b(v, u) = eps (u', v') + (u', v) by quadrature."""
    return eps * quad_inner(mesh, dtrial, dtest, order) + quad_inner(mesh, dtrial, test, order)


def dense_variational_matrix(mesh, eps, test_family, order=10):
    """Rows b(v_i, phi_j) for the chosen test family ('p1' or 'pg')."""
    m = mesh.n - 1
    make = hat if test_family == "p1" else pg_test
    out = np.zeros((m, m))
    for i in range(1, m + 1):
        v, dv = make(mesh, i), make(mesh, i, 1)
        for j in range(1, m + 1):
            out[i - 1, j - 1] = b_form(mesh, eps, hat(mesh, j), hat(mesh, j, 1), v, dv, order)
    return out


def dense_load(mesh, f, test_family="p1", order=10):
    m = mesh.n - 1
    make = hat if test_family == "p1" else pg_test
    return np.array([quad_inner(mesh, f, make(mesh, i), order) for i in range(1, m + 1)])


def p2_callables(mesh):
    """The hierarchical P2 basis as (value, derivative) callable pairs."""
    n = mesh.n
    out = []
    for j in range(1, n):
        out.append((hat(mesh, j), hat(mesh, j, 1)))
    for i in range(1, n + 1):
        out.append((bubble(mesh, i), bubble(mesh, i, 1)))
    return out


def random_p1(mesh, rng, scale=1.0):
    """Random interior nodal coefficients."""
    return scale * rng.standard_normal(mesh.n - 1)


def p1_callable(mesh, coeffs, derivative=0):
    """Piecewise-linear function with the given interior nodal values."""
    nodal = np.concatenate(([0.0], coeffs, [0.0]))

    def value(x):
        return np.interp(x, mesh.nodes, nodal)

    def slope(x):
        e = np.clip((np.asarray(x, dtype=float) / mesh.h).astype(int), 0, mesh.n - 1)
        return (nodal[e + 1] - nodal[e]) / mesh.h

    return slope if derivative else value
