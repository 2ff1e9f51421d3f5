"""Direct solvers for the assembled systems.

Banded LU with partial pivoting (plus one step of iterative refinement)
covers the tridiagonal and extrapolation-outflow systems.  The saddle-point
system is solved either through the Schur complement S_c = B A^{-1} B^T with
a banded Cholesky factorization of the SPD block A, or through a banded LU
of the full interleaved symmetric indefinite matrix; the Schur route is the
default at small sizes, the banded route for large ones.
"""

import numpy as np
import scipy.linalg as sla

from .assembly import AssembledSystem, BandedMatrix
from .errors import (
    AccuracyError,
    ConvDiffError,
    InfSupFailureError,
    InvalidParameterError,
    NotDecoupledError,
    SingularSystemError,
)
from .solution import DiscreteSolution

RESIDUAL_TOL = 1e-10
SCHUR_MAX_N = 512


def _banded_solve_refined(matrix: BandedMatrix, rhs):
    """LAPACK banded LU with one fixed step of iterative refinement."""
    bands = (matrix.lower, matrix.upper)
    try:
        x = sla.solve_banded(bands, matrix.ab, rhs)
        r = rhs - matrix.matvec(x)
        x = x + sla.solve_banded(bands, matrix.ab, r)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from exc
    return x


def solve_banded(system: AssembledSystem) -> DiscreteSolution:
    """Solve a tridiagonal/banded system for the P1 coefficients.

    Post-condition: the residual satisfies
    ||A u - F||_inf <= RESIDUAL_TOL * (1 + ||F||_inf).
    """
    x = _banded_solve_refined(system.matrix, system.rhs)
    resid = np.max(np.abs(system.rhs - system.matrix.matvec(x)))
    bound = RESIDUAL_TOL * (1.0 + np.max(np.abs(system.rhs)))
    if not np.isfinite(resid) or resid > bound:
        raise AccuracyError(
            f"banded solve residual {resid:.3e} exceeds {bound:.3e}", achieved=resid
        )
    n = system.mesh.n
    if system.outflow == "extrapolation":
        return DiscreteSolution(x[: n - 1], "P1", system.method, system.mesh,
                                right_value=float(x[n - 1]))
    return DiscreteSolution(x, "P1", system.method, system.mesh)


def _schur_pieces(blocks):
    """Banded Cholesky of A and the dense Schur complement B A^{-1} B^T."""
    a = blocks.a_gram
    cb = a.ab[: a.upper + 1]  # upper-band storage of the symmetric matrix
    try:
        chol = sla.cholesky_banded(cb, lower=False)
    except np.linalg.LinAlgError as exc:
        raise InfSupFailureError(f"P2 Gram matrix not SPD: {exc}") from exc

    bt = blocks.b_coupling.toarray().T
    a_inv_bt = sla.cho_solve_banded((chol, False), bt)
    schur = blocks.b_coupling @ a_inv_bt
    try:
        schur_fac = sla.cho_factor(schur)
    except np.linalg.LinAlgError as exc:
        raise InfSupFailureError(f"Schur complement singular: {exc}") from exc
    return chol, schur_fac


def solve_saddle(system: AssembledSystem, strategy="auto"):
    """Solve the SPLS block system; returns (w_h, u_h).

    w_h is the P2 auxiliary variable (hierarchical coefficient order), u_h
    the P1 trial solution.  Both block equations are verified to a relative
    residual of RESIDUAL_TOL.
    """
    if system.blocks is None:
        raise InvalidParameterError("system does not carry saddle-point blocks")
    blocks = system.blocks
    n = system.mesh.n
    if strategy == "auto":
        strategy = "schur" if n <= SCHUR_MAX_N else "banded"

    if strategy == "schur":
        chol, schur_fac = _schur_pieces(blocks)
        B = blocks.b_coupling

        def apply_inverse(f_p2, g):
            a_inv_f = sla.cho_solve_banded((chol, False), f_p2)
            u = sla.cho_solve(schur_fac, B @ a_inv_f - g)
            w = sla.cho_solve_banded((chol, False), f_p2 - B.T @ u)
            return w, u

        w_int, u = apply_inverse(blocks.f_p2, np.zeros(n - 1))
        # one refinement step on the block residuals
        r1 = blocks.f_p2 - blocks.a_gram.matvec(w_int) - B.T @ u
        r2 = -(B @ w_int)
        dw, du = apply_inverse(r1, r2)
        w_int, u = w_int + dw, u + du
    elif strategy == "banded":
        full = _banded_solve_refined(system.matrix, system.rhs)
        w_int = full[blocks.w_positions]
        u = full[blocks.u_positions]
    else:
        raise InvalidParameterError(f"unknown saddle strategy {strategy!r}")

    scale = 1.0 + np.max(np.abs(blocks.f_p2))
    r1 = np.max(np.abs(blocks.f_p2 - blocks.a_gram.matvec(w_int) - blocks.b_coupling.T @ u))
    r2 = np.max(np.abs(blocks.b_coupling @ w_int))
    if not (np.isfinite(r1) and np.isfinite(r2)) or max(r1, r2) > RESIDUAL_TOL * scale:
        raise AccuracyError(
            f"saddle residuals ({r1:.3e}, {r2:.3e}) exceed {RESIDUAL_TOL * scale:.3e}",
            achieved=max(r1, r2),
        )

    # hier_to_interleaved[k] is the interleaved position of hierarchical dof k
    w_hier = w_int[blocks.hier_to_interleaved]
    w_sol = DiscreteSolution(w_hier, "P2aux", "spls_aux", system.mesh)
    u_sol = DiscreteSolution(u, "P1", "spls", system.mesh)
    return w_sol, u_sol


def solve_reduced_decoupled(mesh, F) -> DiscreteSolution:
    """Closed-form solve of the simplified (eps = 0) system C U = F, n odd.

    The system decouples by node parity: even components accumulate forward,
    u_{2k} = 2 * sum_{j<=k} F_{2j-1}; odd components accumulate backward,
    u_{2m-2k+1} = -2 * sum_{j<=k} F_{2m-2j+2}, where n = 2m+1.
    """
    n = mesh.n
    F = np.asarray(F, dtype=float)
    if len(F) != n - 1:
        raise InvalidParameterError(f"load vector needs {n - 1} entries, got {len(F)}")
    if n % 2 == 0:
        raise NotDecoupledError(
            "the simplified system decouples only for an odd number of cells"
        )
    u = np.zeros(n - 1)
    u[1::2] = 2.0 * np.cumsum(F[0::2])             # even nodes 2, 4, ..., 2m
    odd_rev = -2.0 * np.cumsum(F[1::2][::-1])      # odd nodes from the right
    u[0::2] = odd_rev[::-1]
    return DiscreteSolution(u, "P1", "reduced", mesh)


def mass_matrix_p1(mesh) -> BandedMatrix:
    """L2 Gram matrix of the interior hats, tridiag(h/6, 2h/3, h/6)."""
    m = mesh.n - 1
    h = mesh.h
    return BandedMatrix.from_diagonals(
        m,
        {0: np.full(m, 2.0 * h / 3.0), 1: np.full(m - 1, h / 6.0), -1: np.full(m - 1, h / 6.0)},
        lower=1, upper=1,
    )


def discrete_inf_sup(mesh, eps):
    """Discrete inf-sup and sup-sup constants of the P1-P2 pair.

    Solves the generalized eigenproblem (B A^{-1} B^T) x = lambda Q x with Q
    the P1 mass matrix; returns (m_h, M_h) = (sqrt(min), sqrt(max)).
    Intended for the dense-eigensolve range n <= 64.
    """
    from .assembly import assemble_spls

    system = assemble_spls(mesh, eps, lambda x: np.zeros_like(x))
    blocks = system.blocks
    a = blocks.a_gram
    cb = a.ab[: a.upper + 1]
    try:
        chol = sla.cholesky_banded(cb, lower=False)
        bt = blocks.b_coupling.toarray().T
        schur = blocks.b_coupling @ sla.cho_solve_banded((chol, False), bt)
        eigvals = sla.eigh(schur, mass_matrix_p1(mesh).to_dense(), eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise ConvDiffError(f"inf-sup eigensolve failed: {exc}") from exc
    lam_min, lam_max = float(eigvals[0]), float(eigvals[-1])
    if lam_min <= 0.0:
        raise InfSupFailureError(f"nonpositive inf-sup eigenvalue {lam_min:.3e}")
    return float(np.sqrt(lam_min)), float(np.sqrt(lam_max))
