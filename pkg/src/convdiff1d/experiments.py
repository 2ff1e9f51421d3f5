"""Batch drivers: convergence sweeps, shifted studies, figure data, inf-sup probes.

Method names accepted by the drivers:

    linear  standard Galerkin, homogeneous Dirichlet conditions
    spls    saddle-point least squares (P1 trial, P2 test), homogeneous
    sd      streamline diffusion, classical uncorrected load, extrapolation
            outflow (the benchmark convention: first-order smooth-region
            accuracy, no numerical outflow layer)
    pg      bubble-enriched Petrov-Galerkin with its consistent load,
            extrapolation outflow

The fully consistent Dirichlet forms of sd/pg are available directly from
:mod:`convdiff1d.assembly`; the driver defaults reflect how the reference
convergence tables for the stabilized methods are produced.

Errors are measured against the exact solution (``reference = "exact"``) or
against its layer-free particular component (``reference = "smooth"``).
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from . import exact
from .assembly import assemble_pg, assemble_sd, assemble_spls, assemble_standard
from .errors import ConvDiffError, InvalidParameterError
from .linsolve import discrete_inf_sup, solve_banded, solve_saddle
from .mesh import build_mesh, p1_interpolant
from .norms import convergence_order, error_norms
from .solution import DiscreteSolution

METHODS = ("linear", "spls", "pg", "sd")
NORMS = ("l2", "h1", "sd", "balanced")


@dataclass(frozen=True)
class ExperimentConfig:
    methods: tuple = ("linear",)
    eps_values: tuple = (1e-6,)
    levels: tuple = (1, 2, 3, 4, 5, 6)
    n_values: tuple = ()          # overrides levels when non-empty
    rhs: str = "one_minus_2x"
    norms: tuple = ("h1", "l2")
    delta: float | None = None    # SD weight and sd-norm weight; None = 2h/3
    shift_correction: bool = False
    restrict_interval: bool = False
    reference: str = "exact"
    quad_order: int = 5
    error_quad_order: int = 7
    resolve_layer: bool = False
    workers: int = 1
    out: str | None = None

    def mesh_sizes(self):
        """n per level; the level convention is h_i = 2^-(i+5)."""
        if self.n_values:
            return tuple(int(n) for n in self.n_values)
        return tuple(2 ** (lev + 5) for lev in self.levels)

    def row_labels(self):
        if self.n_values:
            return tuple(range(1, len(self.n_values) + 1))
        return tuple(self.levels)

    def validate(self):
        for m in self.methods:
            if m not in METHODS:
                raise InvalidParameterError(f"unknown method {m!r}")
        for nm in self.norms:
            if nm not in NORMS:
                raise InvalidParameterError(f"unknown norm {nm!r}")
        exact.canonical_tag(self.rhs)
        if self.reference not in ("exact", "smooth"):
            raise InvalidParameterError(f"unknown reference {self.reference!r}")
        if self.shift_correction and "spls" not in self.methods:
            raise InvalidParameterError("shift_correction applies to the spls method only")
        return self


_TUPLE_FIELDS = {
    "methods": str,
    "eps_values": float,
    "levels": int,
    "n_values": int,
    "norms": str,
}
_SCALAR_FIELDS = {
    "rhs": str,
    "delta": float,
    "shift_correction": bool,
    "restrict_interval": bool,
    "reference": str,
    "quad_order": int,
    "error_quad_order": int,
    "resolve_layer": bool,
    "workers": int,
    "out": str,
}


def _parse_bool(text):
    val = text.strip().lower()
    if val in ("true", "yes", "1", "on"):
        return True
    if val in ("false", "no", "0", "off"):
        return False
    raise InvalidParameterError(f"expected a boolean, got {text!r}")


def parse_config_text(text):
    """Parse the flat key-value experiment manifest format.

    Grammar: one ``key = value`` pair per line; ``#`` starts a comment;
    list-valued keys take comma-separated entries.  Keys are the field
    names of ExperimentConfig.
    """
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameterError(f"config line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in _TUPLE_FIELDS:
            conv = _TUPLE_FIELDS[key]
            overrides[key] = tuple(conv(v.strip()) for v in value.split(",") if v.strip())
        elif key in _SCALAR_FIELDS:
            conv = _SCALAR_FIELDS[key]
            overrides[key] = _parse_bool(value) if conv is bool else conv(value)
        else:
            raise InvalidParameterError(f"config line {lineno}: unknown key {key!r}")
    return ExperimentConfig(**overrides)


def load_config(path):
    with open(path) as fh:
        return parse_config_text(fh.read())


def config_manifest(config: ExperimentConfig):
    """Deterministic text echo of a resolved configuration."""
    lines = []
    for f in fields(config):
        value = getattr(config, f.name)
        if isinstance(value, tuple):
            rendered = ",".join(str(v) for v in value)
        else:
            rendered = str(value)
        lines.append(f"{f.name} = {rendered}")
    return "\n".join(lines) + "\n"


def assemble_for(method, mesh, eps, f, quad_order, delta=None):
    """The driver's method table (see module docstring)."""
    if method == "linear":
        return assemble_standard(mesh, eps, f, order=quad_order)
    if method == "spls":
        return assemble_spls(mesh, eps, f, order=quad_order)
    if method == "pg":
        return assemble_pg(mesh, eps, f, order=quad_order, outflow="extrapolation")
    if method == "sd":
        return assemble_sd(mesh, eps, f, delta=delta, order=quad_order,
                           rhs_correction=False, outflow="extrapolation")
    raise InvalidParameterError(f"unknown method {method!r}")


def solve_for(method, system):
    if method == "spls":
        return solve_saddle(system)[1]
    return solve_banded(system)


def _reference_functions(instance, reference):
    if reference == "smooth":
        return instance.particular, instance.particular_du
    return instance.u, instance.du


@dataclass
class TableArtifact:
    """Rows of a convergence study; order columns are recomputed on demand."""

    caption: str
    eps: float
    levels: tuple
    h_values: tuple
    methods: tuple
    norms: tuple
    errors: dict            # (method, norm) -> list of floats (or nan on failure)
    error_records: tuple = ()

    def orders(self, method, norm):
        return convergence_order(self.errors[(method, norm)])

    def to_csv(self, precision=2):
        """CSV with the schema level,h,<norm>_<method>,...,order_<norm>_<method>,..."""
        fmt = f"{{:.{precision}e}}"
        cols = [f"{nm}_{m}" for m in self.methods for nm in self.norms]
        header = "level,h," + ",".join(cols) + "," + ",".join("order_" + c for c in cols)
        lines = [header]
        order_table = {}
        for m in self.methods:
            for nm in self.norms:
                try:
                    order_table[(m, nm)] = self.orders(m, nm)
                except (InvalidParameterError, KeyError):
                    order_table[(m, nm)] = np.full(len(self.levels), np.nan)
        for i, lev in enumerate(self.levels):
            vals = [fmt.format(self.errors[(m, nm)][i]) for m in self.methods for nm in self.norms]
            ords = ["{:.2f}".format(order_table[(m, nm)][i]) for m in self.methods for nm in self.norms]
            lines.append(f"{lev},{fmt.format(self.h_values[i])}," + ",".join(vals) + "," + ",".join(ords))
        return "\n".join(lines) + "\n"

    def write(self, out_dir, stem):
        os.makedirs(out_dir, exist_ok=True)
        short = os.path.join(out_dir, stem + ".csv")
        full = os.path.join(out_dir, stem + "_full.csv")
        with open(short, "w") as fh:
            fh.write(self.to_csv(precision=2))
        with open(full, "w") as fh:
            fh.write(self.to_csv(precision=16))
        return short, full


def _convergence_cell(config, eps, n):
    """All method errors for one (eps, n) grid cell."""
    mesh = build_mesh(n)
    instance = exact.problem(config.rhs, eps)
    u_ref, du_ref = _reference_functions(instance, config.reference)
    window = (3 * mesh.h, 1.0 - 3 * mesh.h) if config.restrict_interval else None
    cell = {}
    records = []
    matrices = {}
    for method in config.methods:
        try:
            system = assemble_for(method, mesh, eps, instance.f, config.quad_order, config.delta)
            matrices[method] = system.matrix
            u_h = solve_for(method, system)
            if config.shift_correction and method == "spls":
                u_h = DiscreteSolution(u_h.coefficients + instance.fbar / 2.0, "P1",
                                       "spls_shifted", mesh, right_value=u_h.right_value)
            rep = error_norms(u_ref, du_ref, u_h, eps, delta=config.delta,
                              order=config.error_quad_order,
                              resolve_layer=config.resolve_layer, window=window)
            for nm in config.norms:
                cell[(method, nm)] = rep.norm(nm)
        except ConvDiffError as exc:
            records.append(f"n={n} method={method}: {exc}")
            for nm in config.norms:
                cell[(method, nm)] = np.nan
    if "sd" in matrices and "pg" in matrices and config.delta is None:
        # at the default weight the two stabilized methods share one matrix
        if not np.array_equal(matrices["sd"].ab, matrices["pg"].ab):
            raise ConvDiffError("pg/sd stiffness matrices diverged at delta = 2h/3")
    return cell, records


def run_convergence(config: ExperimentConfig):
    """One TableArtifact per epsilon, rows sorted by level."""
    config.validate()
    sizes = config.mesh_sizes()
    labels = config.row_labels()
    tables = []
    for eps in config.eps_values:
        jobs = [(config, eps, n) for n in sizes]
        if config.workers > 1:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                results = list(pool.map(_cell_star, jobs))
        else:
            results = [_cell_star(j) for j in jobs]
        errors = {(m, nm): [] for m in config.methods for nm in config.norms}
        records = []
        for cell, recs in results:
            records.extend(recs)
            for key, val in cell.items():
                if key[1] in config.norms:
                    errors[key].append(val)
        tables.append(TableArtifact(
            caption=f"convergence rhs={config.rhs} reference={config.reference}",
            eps=eps,
            levels=labels,
            h_values=tuple(1.0 / n for n in sizes),
            methods=config.methods,
            norms=config.norms,
            errors=errors,
            error_records=tuple(records),
        ))
    return tables


def _cell_star(args):
    return _convergence_cell(*args)


def run_shifted_spls(config: ExperimentConfig):
    """SPLS study measured against the shift-corrected approximation.

    The corrected approximation adds fbar/2 to the interior nodal values of
    u_h (the boundary values stay zero), compensating the constant offset the
    method develops for data with nonzero mean when eps << h.
    """
    config = replace(config, methods=("spls",)).validate()
    sizes = config.mesh_sizes()
    tables = []
    for eps in config.eps_values:
        instance = exact.problem(config.rhs, eps)
        shift = instance.fbar / 2.0
        errors = {("spls", nm): [] for nm in config.norms}
        records = []
        for n in sizes:
            mesh = build_mesh(n)
            window = (3 * mesh.h, 1.0 - 3 * mesh.h) if config.restrict_interval else None
            u_ref, du_ref = _reference_functions(instance, config.reference)
            try:
                system = assemble_spls(mesh, eps, instance.f, order=config.quad_order)
                u_h = solve_saddle(system)[1]
                corrected = DiscreteSolution(u_h.coefficients + shift, "P1",
                                             "spls_shifted", mesh,
                                             right_value=u_h.right_value)
                rep = error_norms(u_ref, du_ref, corrected, eps, delta=config.delta,
                                  order=config.error_quad_order,
                                  resolve_layer=config.resolve_layer, window=window)
                for nm in config.norms:
                    errors[("spls", nm)].append(rep.norm(nm))
            except ConvDiffError as exc:
                records.append(f"n={n}: {exc}")
                for nm in config.norms:
                    errors[("spls", nm)].append(np.nan)
        tables.append(TableArtifact(
            caption=f"shifted spls rhs={config.rhs} shift={shift:.6g}"
                    + (" window=[3h,1-3h]" if config.restrict_interval else ""),
            eps=eps,
            levels=config.row_labels(),
            h_values=tuple(1.0 / n for n in sizes),
            methods=("spls",),
            norms=config.norms,
            errors=errors,
            error_records=tuple(records),
        ))
    return tables


# ---------------------------------------------------------------------------
# figure data


def _svg_line_chart(series, path, width=640, height=420, margin=46):
    """Minimal deterministic SVG polyline chart. series: [(label, x, y)]."""
    xs = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
    ys = np.concatenate([np.asarray(s[2], dtype=float) for s in series])
    x0, x1 = float(np.min(xs)), float(np.max(xs))
    y0, y1 = float(np.min(ys)), float(np.max(ys))
    if y1 - y0 < 1e-30:
        y0, y1 = y0 - 1.0, y1 + 1.0

    def sx(v):
        return margin + (v - x0) / (x1 - x0) * (width - 2 * margin)

    def sy(v):
        return height - margin - (v - y0) / (y1 - y0) * (height - 2 * margin)

    colors = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
    ]
    for k, (label, x, y) in enumerate(series):
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, y))
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{colors[k % len(colors)]}" '
            f'stroke-width="1.2"/>'
        )
        parts.append(
            f'<text x="{margin + 8}" y="{margin + 16 + 16 * k}" font-size="12" '
            f'fill="{colors[k % len(colors)]}">{label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
    return path


def emit_figure_data(method, eps, n, rhs, out_dir, delta=None, quad_order=5,
                     dense=801, svg=True):
    """Solve one configuration and write nodal/exact curve data (CSV + SVG).

    ``rhs`` is a tag name or a ready ProblemInstance.  Emits
    ``<stem>_nodes.csv`` with the discrete nodal values and
    ``<stem>_curves.csv`` with dense samples of the exact solution (when
    available at this epsilon) and of the forward/backward reduced solutions.
    """
    mesh = build_mesh(n)
    if isinstance(rhs, exact.ProblemInstance):
        instance = rhs
    else:
        instance = exact.problem(rhs, eps)
    system = assemble_for(method, mesh, eps, instance.f, quad_order, delta)
    u_h = solve_for(method, system)
    os.makedirs(out_dir, exist_ok=True)
    stem = f"figure_{method}_{instance.tag}_n{n}_eps{eps:g}"

    nodes_path = os.path.join(out_dir, stem + "_nodes.csv")
    nodal = u_h.nodal_values()
    with open(nodes_path, "w") as fh:
        fh.write("x,u_h\n")
        for x, v in zip(mesh.nodes, nodal):
            fh.write(f"{x:.16e},{v:.16e}\n")

    xs = np.linspace(0.0, 1.0, dense)
    w = np.asarray(exact.reduced_w(instance, xs))
    theta = w - instance.fbar
    have_exact = instance.has_closed_form or eps >= exact.GREEN_MIN_EPS
    curves_path = os.path.join(out_dir, stem + "_curves.csv")
    with open(curves_path, "w") as fh:
        if have_exact:
            ue = np.asarray(instance.u(xs))
            fh.write("x,u,w,theta\n")
            for row in zip(xs, ue, w, theta):
                fh.write(",".join(f"{v:.16e}" for v in row) + "\n")
        else:
            fh.write("x,w,theta\n")
            for row in zip(xs, w, theta):
                fh.write(",".join(f"{v:.16e}" for v in row) + "\n")

    paths = [nodes_path, curves_path]
    if svg:
        series = [("u_h", mesh.nodes, nodal)]
        if have_exact:
            series.append(("u", xs, np.asarray(instance.u(xs))))
        series.extend([("w", xs, w), ("theta", xs, theta)])
        paths.append(_svg_line_chart(series, os.path.join(out_dir, stem + ".svg")))
    return paths


# ---------------------------------------------------------------------------
# inf-sup probe


@dataclass(frozen=True)
class InfSupRow:
    n: int
    eps: float
    m_h: float
    M_h: float
    w_seminorm: float
    l2_error: float
    interpolant_error: float

    @property
    def lower_bound(self):
        return self.w_seminorm / self.M_h

    @property
    def upper_bound(self):
        return self.M_h / self.m_h * self.interpolant_error

    @property
    def sandwich_holds(self):
        slack = 1e-10
        return (self.lower_bound <= self.l2_error * (1 + slack) + slack
                and self.l2_error <= self.upper_bound * (1 + slack) + slack)


def run_infsup_probe(eps_values, n_values, rhs="one_minus_2x", error_quad_order=9):
    """Discrete inf-sup constants and the two-sided error bound, row by row."""
    rows = []
    for eps in eps_values:
        instance = exact.problem(rhs, eps)
        for n in n_values:
            mesh = build_mesh(n)
            m_h, big_m_h = discrete_inf_sup(mesh, eps)
            system = assemble_spls(mesh, eps, instance.f)
            w_h, u_h = solve_saddle(system)
            rep = error_norms(instance.u, instance.du, u_h, eps,
                              order=error_quad_order, resolve_layer=True)
            interp = error_norms(instance.u, instance.du,
                                 p1_interpolant(mesh, instance.u), eps,
                                 order=error_quad_order, resolve_layer=True)
            rows.append(InfSupRow(n, eps, m_h, big_m_h, w_h.h1_seminorm(),
                                  rep.l2, interp.l2))
    return rows


def infsup_csv(rows):
    header = ("n,eps,m_h,M_h,w_seminorm,l2_error,interpolant_error,"
              "lower_bound,upper_bound,sandwich_holds")
    lines = [header]
    for r in rows:
        lines.append(
            f"{r.n},{r.eps:.2e},{r.m_h:.6e},{r.M_h:.6e},{r.w_seminorm:.6e},"
            f"{r.l2_error:.6e},{r.interpolant_error:.6e},"
            f"{r.lower_bound:.6e},{r.upper_bound:.6e},{int(r.sandwich_holds)}"
        )
    return "\n".join(lines) + "\n"
