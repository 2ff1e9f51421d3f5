"""Uniform meshes on [0, 1] and evaluation of the finite element bases.

Three families of basis functions live on a mesh of n equal cells:

* P1 nodal hats ``phi_j`` (interior nodes j = 1..n-1, zero at the boundary),
* element bubbles ``B_i = 4 phi_{i-1} phi_i`` supported on cell i = 1..n,
* enriched test functions ``phi_j + B_j - B_{j+1}`` used by the upwind
  Petrov-Galerkin method.

The C0-P2 space with zero boundary values is realized hierarchically as the
n-1 hats plus one bubble per cell (dimension 2n-1).
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidBasisError, InvalidMeshError
from .quadrature import gauss_points
from .solution import DiscreteSolution


@dataclass(frozen=True)
class UniformMesh:
    """n equal subintervals of [0, 1] with nodes x_j = j*h, h = 1/n."""

    n: int
    h: float
    nodes: np.ndarray

    def element(self, i):
        """Endpoints (x_{i-1}, x_i) of cell i in 1..n."""
        return self.nodes[i - 1], self.nodes[i]

    def midpoints(self):
        return 0.5 * (self.nodes[:-1] + self.nodes[1:])


def build_mesh(n):
    """Build the uniform mesh with n >= 2 subintervals."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidMeshError(f"need an integer number of cells n >= 2, got {n!r}")
    n = int(n)
    return UniformMesh(n=n, h=1.0 / n, nodes=np.arange(n + 1) / n)


class BasisKind(Enum):
    P1_NODAL = "p1_nodal"
    P2 = "p2"
    BUBBLE = "bubble"
    PG_ENRICHED = "pg_enriched"


@dataclass(frozen=True)
class BasisId:
    """A basis function within one of the families on a mesh.

    Index ranges: P1_NODAL and PG_ENRICHED use interior node indices
    1..n-1; BUBBLE uses cell indices 1..n; P2 uses the hierarchical
    numbering 1..2n-1 (hats first, then bubbles).
    """

    kind: BasisKind
    index: int


def _check_index(mesh, basis):
    k, j, n = basis.kind, basis.index, mesh.n
    if k in (BasisKind.P1_NODAL, BasisKind.PG_ENRICHED):
        ok = 1 <= j <= n - 1
    elif k == BasisKind.BUBBLE:
        ok = 1 <= j <= n
    else:
        ok = 1 <= j <= 2 * n - 1
    if not ok:
        raise InvalidBasisError(f"{k.value} index {j} out of range for n={n}")


def _hat(mesh, j, x, derivative):
    h = mesh.h
    xj = j * h
    if derivative == 0:
        return np.clip(1.0 - np.abs(x - xj) / h, 0.0, None)
    # right-limit convention at nodes, left-limit at x = 1
    up = (x >= xj - h) & (x < xj)
    down = (x >= xj) & (x < xj + h)
    out = np.where(up, 1.0 / h, 0.0) + np.where(down, -1.0 / h, 0.0)
    if j == mesh.n - 1:
        out = np.where(x == 1.0, -1.0 / h, out)
    return out


def _bubble(mesh, i, x, derivative):
    a, b = mesh.element(i)
    h = mesh.h
    inside = (x >= a) & (x < b) if i < mesh.n else (x >= a) & (x <= b)
    t = (x - a) / h
    if derivative == 0:
        return np.where(inside, 4.0 * t * (1.0 - t), 0.0)
    return np.where(inside, 4.0 * (1.0 - 2.0 * t) / h, 0.0)


def eval_basis(mesh, basis, x, derivative=0):
    """Evaluate a basis function or its piecewise derivative at x.

    Derivatives at element interfaces return the right-limit value
    (left-limit at x = 1).  `x` may be a scalar or an array.
    """
    if derivative not in (0, 1):
        raise InvalidBasisError("derivative must be 0 or 1")
    _check_index(mesh, basis)
    x = np.asarray(x, dtype=float)
    k, j, n = basis.kind, basis.index, mesh.n
    if k == BasisKind.P1_NODAL:
        out = _hat(mesh, j, x, derivative)
    elif k == BasisKind.BUBBLE:
        out = _bubble(mesh, j, x, derivative)
    elif k == BasisKind.P2:
        if j <= n - 1:
            out = _hat(mesh, j, x, derivative)
        else:
            out = _bubble(mesh, j - (n - 1), x, derivative)
    else:
        out = _hat(mesh, j, x, derivative) + _bubble(mesh, j, x, derivative)
        if j + 1 <= n:
            out = out - _bubble(mesh, j + 1, x, derivative)
    return out if out.ndim else float(out)


def p1_interpolant(mesh, u, method="interpolant"):
    """Nodal interpolant of a callable into the zero-boundary P1 space."""
    interior = np.asarray([u(x) for x in mesh.nodes[1:-1]], dtype=float)
    return DiscreteSolution(interior, "P1", method, mesh)


def bubble_moments(mesh, i, order=7):
    """Quadrature values of (int B_i, int B_i', int (B_i')^2) on cell i."""
    a, b = mesh.element(i)
    x, w = gauss_points(a, b, order)
    bid = BasisId(BasisKind.BUBBLE, i)
    vals = eval_basis(mesh, bid, x)
    ders = eval_basis(mesh, bid, x, 1)
    return (
        float(np.dot(w, vals)),
        float(np.dot(w, ders)),
        float(np.dot(w, ders**2)),
    )
