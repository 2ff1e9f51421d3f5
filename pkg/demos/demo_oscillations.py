"""Oscillations of the standard Galerkin method in the convection-dominated regime.

When eps/h is tiny, the linear Galerkin solution of -eps u'' + u' = f does not
track u: its even-indexed nodal values ride the forward reduced solution
w(x) = int_0^x f, while the odd-indexed ones ride the backward one
theta(x) = w(x) - fbar.  For f = 1 and an odd number of cells this is exact:
u_{2k} = x_{2k} and u_{2k+1} = x_{2k+1} - 1, a closed form the package solves
directly by forward/backward accumulation.

Run:  python demos/demo_oscillations.py
Writes PNGs into demos/output/.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from convdiff1d import (
    assemble_load_p1,
    assemble_standard,
    build_mesh,
    problem,
    reduced_theta,
    reduced_w,
    solve_banded,
    solve_reduced_decoupled,
)

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)


def galerkin_solution(n, eps, instance):
    mesh = build_mesh(n)
    system = assemble_standard(mesh, eps, instance.f)
    return mesh, solve_banded(system)


def panel(ax, n, eps, tag):
    instance = problem(tag, eps)
    mesh, u_h = galerkin_solution(n, eps, instance)
    xs = np.linspace(0, 1, 600)
    ax.plot(xs, reduced_w(instance, xs), "k--", lw=1, label="w")
    ax.plot(xs, reduced_theta(instance, xs), "k:", lw=1, label="theta")
    ax.plot(mesh.nodes, u_h.nodal_values(), "-", color="#1f77b4", lw=0.8, label="$u_h$")
    ax.set_title(f"n={n}, eps={eps:g}")


def main():
    fig, axes = plt.subplots(2, 2, figsize=(9, 6), sharex=True)
    for ax, (n, eps) in zip(axes.ravel(), [(101, 1e-6), (102, 1e-6), (101, 1e-4), (400, 1e-4)]):
        panel(ax, n, eps, "one")
    axes[0, 0].legend(loc="upper left", fontsize=8)
    fig.suptitle("Standard Galerkin for f = 1: zigzag between w and theta")
    fig.tight_layout()
    fig.savefig(OUT / "oscillations_f_one.png", dpi=150)
    print(f"wrote {OUT / 'oscillations_f_one.png'}")

    fig, axes = plt.subplots(1, 2, figsize=(9, 3.2), sharex=True)
    for ax, (n, eps) in zip(axes.ravel(), [(101, 1e-6), (300, 1e-4)]):
        panel(ax, n, eps, "cos7")
    axes[0].legend(loc="lower left", fontsize=8)
    fig.suptitle("Oscillatory data: the two parity chains still track w and theta")
    fig.tight_layout()
    fig.savefig(OUT / "oscillations_f_cos.png", dpi=150)
    print(f"wrote {OUT / 'oscillations_f_cos.png'}")

    # closed-form check of the decoupled reduced system
    n = 101
    mesh = build_mesh(n)
    one = lambda x: np.ones_like(np.asarray(x, dtype=float))
    u_red = solve_reduced_decoupled(mesh, assemble_load_p1(mesh, one))
    x = mesh.nodes[1:-1]
    j = np.arange(1, n)
    pattern = np.where(j % 2 == 0, x, x - 1.0)
    print("reduced decoupled solve, max deviation from the two-line pattern:",
          f"{np.max(np.abs(u_red.coefficients - pattern)):.2e}")
    for eps in (1e-6, 1e-7, 1e-8):
        _, u_h = galerkin_solution(n, eps, problem("one", eps))
        dev = np.max(np.abs(u_h.coefficients - pattern))
        print(f"full solve at eps={eps:g}: max deviation {dev:.3e} "
              f"(chain offset is 2*eps*n^2 = {2 * eps * n**2:.3e})")


if __name__ == "__main__":
    main()
