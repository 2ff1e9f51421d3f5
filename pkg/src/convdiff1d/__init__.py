"""Finite element study of -eps u'' + u' = f on (0,1) with u(0) = u(1) = 0.

Four discretizations on uniform meshes (standard Galerkin, saddle-point
least squares with a P2 test space, bubble-enriched Petrov-Galerkin, and
streamline diffusion), an exact Green's-function oracle with overflow-safe
closed forms, error norms adapted to the singularly perturbed regime, and
batch drivers that regenerate the reference convergence tables.
"""

from .assembly import (
    AssembledSystem,
    BandedMatrix,
    assemble_C,
    assemble_S,
    assemble_load_p1,
    assemble_pg,
    assemble_sd,
    assemble_spls,
    assemble_standard,
)
from .errors import (
    AccuracyError,
    ConvDiffError,
    InfSupFailureError,
    InvalidBasisError,
    InvalidMeshError,
    InvalidParameterError,
    NotDecoupledError,
    PreconditionError,
    SingularSystemError,
)
from .exact import (
    ProblemInstance,
    appendix_bounds,
    exact_solution,
    green_infinity,
    green_kernel,
    green_quadrature,
    problem,
    reduced_theta,
    reduced_w,
    u1_closed,
)
from .experiments import (
    ExperimentConfig,
    TableArtifact,
    emit_figure_data,
    run_convergence,
    run_infsup_probe,
    run_shifted_spls,
)
from .linsolve import (
    discrete_inf_sup,
    solve_banded,
    solve_reduced_decoupled,
    solve_saddle,
)
from .mesh import BasisId, BasisKind, UniformMesh, build_mesh, eval_basis, p1_interpolant
from .norms import ErrorReport, convergence_order, error_norms, interpolant_bounds_check
from .solution import DiscreteSolution

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
