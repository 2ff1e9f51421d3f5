"""Assembly of the discrete systems for the model convection-diffusion problem.

The problem is -eps*u'' + u' = f on (0, 1) with u(0) = u(1) = 0.  On a uniform
mesh with interior hat functions the Galerkin system is

    (eps/h * S + C) U = F,      S = tridiag(-1, 2, -1),
                                C = tridiag(-1/2, 0, 1/2),

with F_j = (f, phi_j).  Upwind stabilization (bubble-enriched Petrov-Galerkin
or streamline diffusion with cellwise weight delta) replaces eps by
eps + delta in the diffusion block and, in the consistent variants, adds a
matching correction to the load vector:

    PG: F_j + sigma * (f, B_j - B_{j+1})      (B_i the bubble on cell i)
    SD: F_j + delta * (f, phi_j')

For polynomial data of degree <= 1 the two corrections coincide identically;
they differ for curved data.

Two outflow treatments are supported.  "dirichlet" imposes u(1) = 0 and
yields the (n-1)-dimensional systems above.  "extrapolation" keeps the
outflow node as an unknown and closes the system with the second-difference
extrapolation row u_n - 2u_{n-1} + u_{n-2} = 0, a standard outflow device for
convection-dominated runs: it removes the numerical outflow layer so that
convergence studies measure interior accuracy.

The saddle-point least-squares (SPLS) discretization couples the P1 trial
space with the zero-boundary C0-P2 test space (hats plus one bubble per
cell) and produces the symmetric indefinite block system

    [A  B^T] [w]   [F_p2]
    [B   0 ] [u] = [ 0  ],

with A the H1-seminorm Gram matrix of the P2 basis and
B[j, k] = eps*(phi_j', v_k') + (phi_j', v_k).
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConvDiffError, InvalidParameterError
from .mesh import UniformMesh
from .quadrature import gauss_points


# ---------------------------------------------------------------------------
# banded storage


@dataclass
class BandedMatrix:
    """General banded matrix in LAPACK band storage.

    ``ab[upper + i - j, j]`` holds entry (i, j) for j - upper <= i <= j + lower.
    """

    n: int
    lower: int
    upper: int
    ab: np.ndarray

    @classmethod
    def zeros(cls, n, lower, upper):
        return cls(n, lower, upper, np.zeros((lower + upper + 1, n)))

    @classmethod
    def from_diagonals(cls, n, diagonals, lower=None, upper=None):
        """Build from {offset: values}; offset k > 0 is the k-th superdiagonal."""
        offsets = diagonals.keys()
        lo = lower if lower is not None else max(0, -min(offsets))
        up = upper if upper is not None else max(0, max(offsets))
        mat = cls.zeros(n, lo, up)
        for k, vals in diagonals.items():
            mat.set_diagonal(k, vals)
        return mat

    def set_diagonal(self, k, vals):
        vals = np.asarray(vals, dtype=float)
        m = self.n - abs(k)
        if len(vals) == 1:
            vals = np.full(m, vals[0])
        if len(vals) != m:
            raise ValueError(f"diagonal {k} needs {m} entries, got {len(vals)}")
        if k >= 0:
            self.ab[self.upper - k, k : self.n] = vals
        else:
            self.ab[self.upper - k, 0 : self.n + k] = vals

    def set_entry(self, i, j, value):
        if not (-self.lower <= j - i <= self.upper):
            raise ValueError(f"entry ({i}, {j}) outside band")
        self.ab[self.upper + i - j, j] = value

    def add_entry(self, i, j, value):
        self.set_entry(i, j, self.ab[self.upper + i - j, j] + value)

    def entry(self, i, j):
        if -self.lower <= j - i <= self.upper:
            return self.ab[self.upper + i - j, j]
        return 0.0

    def diagonal(self, k=0):
        if k >= 0:
            return self.ab[self.upper - k, k : self.n].copy()
        return self.ab[self.upper - k, 0 : self.n + k].copy()

    def to_dense(self):
        out = np.zeros((self.n, self.n))
        for k in range(-self.lower, self.upper + 1):
            idx = np.arange(max(0, -k), self.n - max(0, k))
            out[idx, idx + k] = self.diagonal(k)
        return out

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        y = np.zeros_like(x)
        for k in range(-self.lower, self.upper + 1):
            d = self.diagonal(k)
            if k >= 0:
                y[: self.n - k] += d * x[k:]
            else:
                y[-k:] += d * x[: self.n + k]
        return y

    @property
    def shape(self):
        return (self.n, self.n)


@dataclass
class SaddleBlocks:
    """Pieces of the SPLS block system needed by the Schur-complement solver.

    The P2 degrees of freedom are interleaved by position
    (B_1, phi_1, B_2, phi_2, ..., B_n) so that the Gram matrix ``a_gram`` has
    bandwidth 2; ``hier_to_interleaved`` maps the hierarchical ordering
    (hats then bubbles) into that layout.  ``w_positions``/``u_positions``
    locate the P2 and trial unknowns inside the full interleaved saddle
    matrix.
    """

    a_gram: BandedMatrix
    b_coupling: sp.csr_matrix
    f_p2: np.ndarray
    hier_to_interleaved: np.ndarray
    w_positions: np.ndarray
    u_positions: np.ndarray


@dataclass
class AssembledSystem:
    matrix: BandedMatrix
    rhs: np.ndarray
    method: str
    mesh: UniformMesh
    epsilon: float
    delta: float | None = None
    outflow: str = "dirichlet"
    blocks: SaddleBlocks | None = None


# ---------------------------------------------------------------------------
# matrices


def assemble_S(n):
    """(n-1) x (n-1) tridiagonal with diagonal 2 and off-diagonals -1."""
    _check_n(n)
    m = n - 1
    return BandedMatrix.from_diagonals(
        m, {0: np.full(m, 2.0), 1: np.full(m - 1, -1.0), -1: np.full(m - 1, -1.0)},
        lower=1, upper=1,
    )


def assemble_C(n):
    """(n-1) x (n-1) skew-symmetric tridiagonal, +1/2 above, -1/2 below."""
    _check_n(n)
    m = n - 1
    return BandedMatrix.from_diagonals(
        m, {0: np.zeros(m), 1: np.full(m - 1, 0.5), -1: np.full(m - 1, -0.5)},
        lower=1, upper=1,
    )


def _check_n(n):
    if n < 2:
        raise InvalidParameterError(f"need n >= 2 subintervals, got {n}")


def _stabilized_matrix(mesh, diffusion, outflow):
    """diffusion * S + C, either interior-only or with the extrapolation row."""
    n = mesh.n
    if outflow == "dirichlet":
        m = n - 1
        mat = BandedMatrix.zeros(m, 1, 1)
        mat.set_diagonal(0, np.full(m, 2.0 * diffusion))
        if m > 1:
            mat.set_diagonal(1, np.full(m - 1, -diffusion + 0.5))
            mat.set_diagonal(-1, np.full(m - 1, -diffusion - 0.5))
        return mat
    if outflow != "extrapolation":
        raise InvalidParameterError(f"unknown outflow treatment {outflow!r}")
    mat = BandedMatrix.zeros(n, 2, 1)
    mat.set_diagonal(0, np.full(n, 2.0 * diffusion))
    mat.set_diagonal(1, np.full(n - 1, -diffusion + 0.5))
    mat.set_diagonal(-1, np.full(n - 1, -diffusion - 0.5))
    # u_n - 2 u_{n-1} + u_{n-2} = 0 closes the free outflow node
    mat.set_entry(n - 1, n - 1, 1.0)
    mat.set_entry(n - 1, n - 2, -2.0)
    if n >= 3:
        mat.set_entry(n - 1, n - 3, 1.0)
    return mat


# ---------------------------------------------------------------------------
# load vectors


def _element_loads(mesh, f, order):
    """Per-element integrals (f, lambda_left), (f, lambda_right), (f, B_e)."""
    n, h = mesh.n, mesh.h
    left = np.zeros(n)
    right = np.zeros(n)
    bub = np.zeros(n)
    for e in range(n):
        a, b = mesh.nodes[e], mesh.nodes[e + 1]
        x, w = gauss_points(a, b, order)
        fv = np.asarray(f(x), dtype=float)
        t = (x - a) / h
        left[e] = np.dot(w, fv * (1.0 - t))
        right[e] = np.dot(w, fv * t)
        bub[e] = np.dot(w, fv * 4.0 * t * (1.0 - t))
    if not (np.all(np.isfinite(left)) and np.all(np.isfinite(right)) and np.all(np.isfinite(bub))):
        raise ConvDiffError("load quadrature produced non-finite values")
    return left, right, bub


def assemble_load_p1(mesh, f, order=5):
    """Interior load vector F_j = (f, phi_j), j = 1..n-1."""
    left, right, _ = _element_loads(mesh, f, order)
    return right[:-1] + left[1:]


def load_convective_p1(mesh, f, order=5):
    """(f, phi_j') for the interior hats; used by the SD load correction."""
    left, right, _ = _element_loads(mesh, f, order)
    full = left + right  # (f, 1) per element
    return (full[:-1] - full[1:]) / mesh.h


def load_bubbles(mesh, f, order=5):
    """(f, B_i) for the cell bubbles, i = 1..n."""
    _, _, bub = _element_loads(mesh, f, order)
    return bub


def _with_outflow_rhs(rhs_interior, outflow):
    if outflow == "dirichlet":
        return rhs_interior
    return np.concatenate([rhs_interior, [0.0]])


# ---------------------------------------------------------------------------
# the four discretizations


def _check_eps(eps):
    if eps < 0.0 or not np.isfinite(eps):
        raise InvalidParameterError(f"epsilon must be finite and >= 0, got {eps}")


def assemble_standard(mesh, eps, f, order=5, outflow="dirichlet"):
    """Galerkin system (eps/h S + C) U = F; eps = 0 gives the simplified system."""
    _check_eps(eps)
    mat = _stabilized_matrix(mesh, eps / mesh.h, outflow)
    rhs = _with_outflow_rhs(assemble_load_p1(mesh, f, order), outflow)
    return AssembledSystem(mat, rhs, "linear", mesh, eps, None, outflow)


def assemble_pg(mesh, eps, f, order=5, sigma=1.0, outflow="dirichlet"):
    """Bubble-enriched Petrov-Galerkin system.

    Test functions phi_j + sigma*(B_j - B_{j+1}) turn the convection term
    into extra diffusion sigma*2h/3, so the matrix equals the SD matrix with
    delta = sigma*2h/3; the load carries the bubble moments of f.
    """
    _check_eps(eps)
    if sigma <= 0.0:
        raise InvalidParameterError(f"upwinding parameter sigma must be > 0, got {sigma}")
    h = mesh.h
    delta = sigma * 2.0 * h / 3.0
    mat = _stabilized_matrix(mesh, (eps + delta) / h, outflow)
    bub = load_bubbles(mesh, f, order)
    rhs = assemble_load_p1(mesh, f, order) + sigma * (bub[:-1] - bub[1:])
    return AssembledSystem(mat, _with_outflow_rhs(rhs, outflow), "pg", mesh, eps, delta, outflow)


def assemble_sd(mesh, eps, f, delta=None, order=5, rhs_correction=True, outflow="dirichlet"):
    """Streamline diffusion system with uniform cell weight delta.

    Default delta = 2h/3 matches the PG stiffness matrix exactly.  With
    ``rhs_correction`` the load carries the consistent term
    delta*(f, phi_j'); without it the scheme is the classical inconsistent
    artificial-diffusion variant (first-order accurate).
    """
    _check_eps(eps)
    h = mesh.h
    if delta is None:
        delta = 2.0 * h / 3.0
    if delta < 0.0:
        raise InvalidParameterError(f"SD weight delta must be >= 0, got {delta}")
    mat = _stabilized_matrix(mesh, (eps + delta) / h, outflow)
    rhs = assemble_load_p1(mesh, f, order)
    if rhs_correction:
        rhs = rhs + delta * load_convective_p1(mesh, f, order)
    return AssembledSystem(mat, _with_outflow_rhs(rhs, outflow), "sd", mesh, eps, delta, outflow)


def _p2_interleave_map(n):
    """Hierarchical index (hats 0..n-2, bubbles n-1..2n-2) -> interleaved position."""
    out = np.empty(2 * n - 1, dtype=int)
    out[: n - 1] = 2 * np.arange(1, n) - 1       # hat j at 2j-1
    out[n - 1 :] = 2 * np.arange(0, n)           # bubble i at 2(i-1)
    return out


def assemble_spls(mesh, eps, f, order=5):
    """SPLS block system with P1 trial and zero-boundary C0-P2 test space.

    Returns the full (3n-2)-dimensional symmetric indefinite banded matrix
    (degrees of freedom interleaved by position, bandwidth 3) together with
    the blocks used by the Schur-complement solve path.
    """
    _check_eps(eps)
    n, h = mesh.n, mesh.h
    m = n - 1
    dim2 = 2 * n - 1

    hier_to_int = _p2_interleave_map(n)
    hat_pos = hier_to_int[:m]          # interleaved positions of the P2 hats
    bub_pos = hier_to_int[m:]

    # A: H1-seminorm Gram matrix of the P2 basis. Hats couple as (1/h) S;
    # bubbles are a0-orthogonal to everything except themselves, 16/(3h).
    a_gram = BandedMatrix.zeros(dim2, 2, 2)
    for j in range(m):
        a_gram.set_entry(hat_pos[j], hat_pos[j], 2.0 / h)
        if j + 1 < m:
            a_gram.set_entry(hat_pos[j], hat_pos[j + 1], -1.0 / h)
            a_gram.set_entry(hat_pos[j + 1], hat_pos[j], -1.0 / h)
    for i in range(n):
        a_gram.set_entry(bub_pos[i], bub_pos[i], 16.0 / (3.0 * h))

    # B[j, k] = eps*(phi_j', v_k') + (phi_j', v_k) over the P2 basis v_k:
    # against hats, eps/h * S plus the transposed convection pattern
    # (phi_j', phi_{j-1}) = +1/2, (phi_j', phi_{j+1}) = -1/2; against the
    # bubbles of the two cells sharing node j, +-2/3.
    rows, cols, vals = [], [], []
    for j in range(1, n):  # trial node j
        r = j - 1
        rows.append(r), cols.append(hat_pos[r]), vals.append(eps * 2.0 / h)
        if j - 1 >= 1:
            rows.append(r), cols.append(hat_pos[r - 1]), vals.append(-eps / h + 0.5)
        if j + 1 <= m:
            rows.append(r), cols.append(hat_pos[r + 1]), vals.append(-eps / h - 0.5)
        rows.append(r), cols.append(bub_pos[j - 1]), vals.append(2.0 / 3.0)
        rows.append(r), cols.append(bub_pos[j]), vals.append(-2.0 / 3.0)
    b_coupling = sp.csr_matrix((vals, (rows, cols)), shape=(m, dim2))

    f_hats = assemble_load_p1(mesh, f, order)
    f_bub = load_bubbles(mesh, f, order)
    f_p2 = np.zeros(dim2)
    f_p2[hat_pos] = f_hats
    f_p2[bub_pos] = f_bub

    # Full saddle matrix, interleaved by position: bubble i at 3(i-1),
    # P2 hat j at 3j-2, trial node j at 3j-1. Bandwidth 4 (trial node j
    # reaches the P2 hat of node j-1).
    dim = 3 * n - 2
    w_full = np.empty(dim2, dtype=int)
    w_full[hat_pos] = 3 * np.arange(1, n) - 2
    w_full[bub_pos] = 3 * np.arange(0, n)
    u_full = 3 * np.arange(1, n) - 1

    blocks = SaddleBlocks(a_gram, b_coupling, f_p2, hier_to_int, w_full, u_full)

    mat = BandedMatrix.zeros(dim, 4, 4)
    for q in range(dim2):
        for k in range(-2, 3):
            p = q + k
            if 0 <= p < dim2:
                val = a_gram.entry(p, q)
                if val != 0.0:
                    mat.set_entry(w_full[p], w_full[q], val)
    bcoo = b_coupling.tocoo()
    for r, c, v in zip(bcoo.row, bcoo.col, bcoo.data):
        mat.set_entry(u_full[r], w_full[c], v)
        mat.set_entry(w_full[c], u_full[r], v)

    rhs = np.zeros(dim)
    rhs[w_full] = f_p2

    return AssembledSystem(mat, rhs, "spls", mesh, eps, None, "dirichlet", blocks)
