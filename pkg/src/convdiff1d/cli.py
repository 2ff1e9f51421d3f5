"""Command-line interface.

Subcommands: solve, convergence, shifted, figure, infsup.  A flat key-value
config file (--config) supplies defaults; explicit flags override it.  Every
run that writes files also writes a manifest echoing the resolved settings.
"""

import argparse
import os
import sys
from dataclasses import replace


from . import exact, experiments
from .errors import ConvDiffError
from .experiments import ExperimentConfig
from .mesh import build_mesh
from .norms import error_norms

RHS_CHOICES = ("one", "one-minus-2x", "two-x", "cos7", "cos1", "cubic")


def _parse_levels(text):
    if "-" in text and "," not in text:
        lo, hi = text.split("-", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(v) for v in text.split(",") if v.strip())


def _add_common(p):
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--eps", help="comma-separated epsilon list")
    p.add_argument("--n", help="comma-separated mesh sizes (overrides --levels)")
    p.add_argument("--levels", help="level list, e.g. 1-6 or 1,3,5 (h = 2^-(level+5))")
    p.add_argument("--method", help="comma-separated methods from {linear,spls,pg,sd}")
    p.add_argument("--rhs", choices=RHS_CHOICES)
    p.add_argument("--delta", type=float, help="SD weight / sd-norm weight (default 2h/3)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--quad-order", type=int, dest="quad_order")
    p.add_argument("--norms", help="comma-separated from {l2,h1,sd,balanced}")
    p.add_argument("--reference", choices=("exact", "smooth"))
    p.add_argument("--restrict-interval", action="store_true", default=None,
                   help="measure errors on [3h, 1-3h] only")
    p.add_argument("--resolve-layer", action="store_true", default=None,
                   help="layer-refined error quadrature near x = 1")
    p.add_argument("--workers", type=int)


def _resolve_config(args):
    config = experiments.load_config(args.config) if args.config else ExperimentConfig()
    updates = {}
    if args.eps:
        updates["eps_values"] = tuple(float(v) for v in args.eps.split(","))
    if args.n:
        updates["n_values"] = tuple(int(v) for v in args.n.split(","))
    if args.levels:
        updates["levels"] = _parse_levels(args.levels)
    if args.method:
        updates["methods"] = tuple(m.strip() for m in args.method.split(","))
    if args.rhs:
        updates["rhs"] = exact.canonical_tag(args.rhs)
    if args.delta is not None:
        updates["delta"] = args.delta
    if args.out:
        updates["out"] = args.out
    if args.quad_order:
        updates["quad_order"] = args.quad_order
    if args.norms:
        updates["norms"] = tuple(v.strip() for v in args.norms.split(","))
    if args.reference:
        updates["reference"] = args.reference
    if args.restrict_interval is not None:
        updates["restrict_interval"] = args.restrict_interval
    if args.resolve_layer is not None:
        updates["resolve_layer"] = args.resolve_layer
    if args.workers:
        updates["workers"] = args.workers
    return replace(config, **updates).validate()


def _write_manifest(config, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "manifest.txt")
    with open(path, "w") as fh:
        fh.write(experiments.config_manifest(config))
    return path


def _print_table(table):
    print(f"# eps = {table.eps:g}  ({table.caption})")
    print(table.to_csv(precision=2), end="")


def cmd_solve(args):
    config = _resolve_config(args)
    eps = config.eps_values[0]
    n = config.mesh_sizes()[0]
    mesh = build_mesh(n)
    instance = exact.problem(config.rhs, eps)
    method = config.methods[0]
    system = experiments.assemble_for(method, mesh, eps, instance.f,
                                      config.quad_order, config.delta)
    u_h = experiments.solve_for(method, system)
    print(f"method={method} rhs={config.rhs} eps={eps:g} n={n}")
    try:
        u_ref, du_ref = experiments._reference_functions(instance, config.reference)
        rep = error_norms(u_ref, du_ref, u_h, eps, delta=config.delta,
                          order=config.error_quad_order,
                          resolve_layer=config.resolve_layer)
        print(f"l2={rep.l2:.6e} h1={rep.h1_semi:.6e} sd={rep.sd:.6e} "
              f"balanced={rep.balanced:.6e}")
    except ConvDiffError as exc:
        print(f"error norms unavailable: {exc}")
    if config.out:
        _write_manifest(config, config.out)
        path = os.path.join(config.out, f"solution_{method}_n{n}_eps{eps:g}.csv")
        nodal = u_h.nodal_values()
        with open(path, "w") as fh:
            fh.write("x,u_h\n")
            for x, v in zip(mesh.nodes, nodal):
                fh.write(f"{x:.16e},{v:.16e}\n")
        print(f"wrote {path}")
    return 0


def cmd_convergence(args):
    config = _resolve_config(args)
    tables = experiments.run_convergence(config)
    for table in tables:
        _print_table(table)
        for record in table.error_records:
            print(f"# error: {record}")
    if config.out:
        _write_manifest(config, config.out)
        for table in tables:
            stem = f"convergence_{config.rhs}_eps{table.eps:g}"
            short, full = table.write(config.out, stem)
            print(f"wrote {short} and {full}")
    return 0


def cmd_shifted(args):
    config = _resolve_config(args)
    tables = experiments.run_shifted_spls(config)
    for table in tables:
        _print_table(table)
    if config.out:
        _write_manifest(config, config.out)
        for table in tables:
            stem = f"shifted_spls_{config.rhs}_eps{table.eps:g}"
            short, full = table.write(config.out, stem)
            print(f"wrote {short} and {full}")
    return 0


def cmd_figure(args):
    config = _resolve_config(args)
    out = config.out or "figures"
    _write_manifest(config, out)
    paths = experiments.emit_figure_data(
        config.methods[0], config.eps_values[0], config.mesh_sizes()[0],
        config.rhs, out, delta=config.delta, quad_order=config.quad_order)
    for p in paths:
        print(f"wrote {p}")
    return 0


def cmd_infsup(args):
    config = _resolve_config(args)
    n_values = config.n_values or tuple(
        dict.fromkeys(min(2 ** (lev + 2), 64) for lev in config.levels)
    )
    rows = experiments.run_infsup_probe(config.eps_values, n_values, rhs=config.rhs)
    text = experiments.infsup_csv(rows)
    print(text, end="")
    if config.out:
        _write_manifest(config, config.out)
        path = os.path.join(config.out, "infsup.csv")
        with open(path, "w") as fh:
            fh.write(text)
        print(f"wrote {path}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="convdiff1d",
        description="Finite element solvers and convergence studies for the "
                    "1D convection-dominated model problem",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, help_text in (
        ("solve", cmd_solve, "single solve and error report"),
        ("convergence", cmd_convergence, "convergence sweep over levels"),
        ("shifted", cmd_shifted, "shift-corrected SPLS study"),
        ("figure", cmd_figure, "emit solution/figure data files"),
        ("infsup", cmd_infsup, "discrete inf-sup constants and error sandwich"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        p.set_defaults(func=fn)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConvDiffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
