"""Discrete solution container and evaluation.

A P1 solution stores the interior nodal coefficients (boundary values are
zero by construction, except for an optional free outflow value used by the
extrapolation boundary treatment).  A P2aux solution stores the hierarchical
coefficients of the auxiliary variable of the saddle-point method: n-1 nodal
hat coefficients followed by n element-bubble coefficients.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DiscreteSolution:
    """Coefficients of a finite element function on a uniform mesh.

    Parameters
    ----------
    coefficients : ndarray
        Interior degrees of freedom. Length n-1 for space "P1",
        2n-1 for space "P2aux" (n-1 hats, then n bubbles).
    space : str
        "P1" or "P2aux".
    method : str
        Tag of the discretization that produced the solution.
    mesh : UniformMesh
    right_value : float
        Value at x = 1; zero for homogeneous Dirichlet solves, the free
        outflow value for extrapolation solves.
    """

    coefficients: np.ndarray
    space: str
    method: str
    mesh: object
    right_value: float = 0.0

    def __post_init__(self):
        n = self.mesh.n
        expected = n - 1 if self.space == "P1" else 2 * n - 1
        if len(self.coefficients) != expected:
            raise ValueError(
                f"{self.space} solution on n={n} mesh needs {expected} "
                f"coefficients, got {len(self.coefficients)}"
            )

    def nodal_values(self):
        """Values at all n+1 mesh nodes, boundaries included."""
        if self.space == "P1":
            interior = self.coefficients
        else:
            interior = self.coefficients[: self.mesh.n - 1]
        return np.concatenate(([0.0], interior, [self.right_value]))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        vals = self._eval(x)
        return vals if vals.ndim else float(vals)

    def derivative(self, x):
        """Piecewise derivative; right-limit at element interfaces."""
        x = np.asarray(x, dtype=float)
        vals = self._eval_derivative(x)
        return vals if vals.ndim else float(vals)

    def element_of(self, x):
        """Index in 0..n-1 of the element containing x (right-open)."""
        n, h = self.mesh.n, self.mesh.h
        return np.clip((np.asarray(x, dtype=float) / h).astype(int), 0, n - 1)

    def _linear_parts(self, x):
        h = self.mesh.h
        e = self.element_of(x)
        nodal = self.nodal_values()
        left, right = nodal[e], nodal[e + 1]
        t = (x - e * h) / h
        return e, left + (right - left) * t, (right - left) / h

    def _bubble_parts(self, x, e):
        h = self.mesh.h
        beta = self.coefficients[self.mesh.n - 1 :]
        a = e * h
        t = (x - a) / h
        val = beta[e] * 4.0 * t * (1.0 - t)
        der = beta[e] * 4.0 * (1.0 - 2.0 * t) / h
        return val, der

    def _eval(self, x):
        e, lin, _ = self._linear_parts(x)
        if self.space == "P1":
            return lin
        bub, _ = self._bubble_parts(x, e)
        return lin + bub

    def _eval_derivative(self, x):
        e, _, dlin = self._linear_parts(x)
        if self.space == "P1":
            return dlin
        _, dbub = self._bubble_parts(x, e)
        return dlin + dbub

    def h1_seminorm(self):
        """Exact H1 seminorm of the discrete function."""
        h = self.mesh.h
        nodal = self.nodal_values()
        slopes = np.diff(nodal) / h
        sq = np.sum(slopes**2) * h
        if self.space == "P2aux":
            beta = self.coefficients[self.mesh.n - 1 :]
            sq += np.sum(beta**2) * 16.0 / (3.0 * h)
        return float(np.sqrt(sq))

    def l2_norm(self):
        """Exact L2 norm of the discrete function."""
        h = self.mesh.h
        nodal = self.nodal_values()
        a, b = nodal[:-1], nodal[1:]
        sq = np.sum(a * a + a * b + b * b) * h / 3.0
        if self.space == "P2aux":
            beta = self.coefficients[self.mesh.n - 1 :]
            sq += np.sum(beta * (a + b)) * h / 3.0 * 2.0
            sq += np.sum(beta**2) * 8.0 * h / 15.0
        return float(np.sqrt(sq))
