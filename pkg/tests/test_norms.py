import numpy as np
import pytest

from convdiff1d.assembly import assemble_standard
from convdiff1d.errors import InvalidParameterError, PreconditionError
from convdiff1d.exact import problem
from convdiff1d.linsolve import solve_banded
from convdiff1d.mesh import build_mesh, p1_interpolant
from convdiff1d.norms import convergence_order, error_norms, interpolant_bounds_check
from convdiff1d.quadrature import integrate

from helpers import p1_callable


def test_report_norm_relations():
    eps, n = 1e-3, 16
    mesh = build_mesh(n)
    instance = problem("two_x", eps)
    u_i = p1_interpolant(mesh, instance.u)
    rep = error_norms(instance.u, instance.du, u_i, eps)
    delta = 2 * mesh.h / 3
    assert rep.balanced**2 == pytest.approx(eps * rep.h1_semi**2 + rep.l2**2, rel=1e-12)
    assert rep.sd**2 == pytest.approx((eps + delta) * rep.h1_semi**2, rel=1e-12)
    assert rep.balanced >= rep.l2
    assert rep.sd >= np.sqrt(eps) * rep.h1_semi
    assert rep.h == mesh.h


def test_interpolant_error_within_eps_free_bound():
    mesh = build_mesh(64)
    instance = problem("one_minus_2x", 1e-6)
    u_i = p1_interpolant(mesh, instance.u)
    rep = error_norms(instance.u, instance.du, u_i, instance.epsilon, resolve_layer=True)
    assert rep.l2 <= mesh.h / np.sqrt(2.0)


def test_zero_error_for_p1_exact_solution():
    mesh = build_mesh(8)
    coeffs = np.linspace(0.1, 0.4, 7)
    exact_fun = p1_callable(mesh, coeffs)
    exact_slope = p1_callable(mesh, coeffs, 1)
    from convdiff1d.solution import DiscreteSolution

    u_h = DiscreteSolution(coeffs, "P1", "manufactured", mesh)
    rep = error_norms(exact_fun, exact_slope, u_h, 1e-3)
    assert rep.l2 == pytest.approx(0.0, abs=1e-14)
    assert rep.h1_semi == pytest.approx(0.0, abs=1e-13)
    assert rep.sd == pytest.approx(0.0, abs=1e-13)
    assert rep.balanced == pytest.approx(0.0, abs=1e-14)


def test_missing_derivative_raises():
    mesh = build_mesh(4)
    instance = problem("one", 1e-2)
    u_i = p1_interpolant(mesh, instance.u)
    with pytest.raises(PreconditionError):
        error_norms(instance.u, None, u_i, 1e-2)


def test_standard_galerkin_errors_frozen_values():
    # frozen from the verified reproduction of the linear-vs-SPLS reference
    # study: on n = 4 with mean-zero data the standard method gives
    # |u - u_h| = 0.2887 and ||u - u_h|| = 0.04564
    mesh = build_mesh(4)
    instance = problem("one_minus_2x", 1e-6)
    u_h = solve_banded(assemble_standard(mesh, instance.epsilon, instance.f))
    rep = error_norms(instance.u, instance.du, u_h, instance.epsilon)
    assert rep.h1_semi == pytest.approx(0.288675, rel=2e-3)
    assert rep.l2 == pytest.approx(0.045644, rel=2e-3)


def test_convergence_order_basic():
    assert np.allclose(convergence_order([4.0, 2.0, 1.0]), [0.0, 1.0, 1.0])
    with pytest.raises(InvalidParameterError):
        convergence_order([1.0, 0.0])
    with pytest.raises(InvalidParameterError):
        convergence_order([1.0, -2.0])


def test_convergence_order_reference_pairs():
    # reference stabilized-method error pairs and the orders they imply
    sd_pair = convergence_order([3.60e-5, 1.27e-5])
    assert sd_pair[1] == pytest.approx(1.50, abs=0.01)
    bal_pair = convergence_order([7.38e-4, 3.70e-4])
    assert bal_pair[1] == pytest.approx(1.00, abs=0.01)


def test_poincare_equality_for_first_neumann_mode():
    # w = cos(pi x) has mean zero and ||w|| = (1/pi) |w| exactly
    w_l2 = integrate(lambda x: np.cos(np.pi * x) ** 2, 0.0, 1.0, order=30)
    dw_l2 = integrate(lambda x: (np.pi * np.sin(np.pi * x)) ** 2, 0.0, 1.0, order=30)
    assert np.sqrt(w_l2) == pytest.approx(np.sqrt(dw_l2) / np.pi, rel=1e-13)


def test_quadrature_order_stability_for_polynomial_data():
    mesh = build_mesh(8)
    instance = problem("cubic", 0.5)
    u_i = p1_interpolant(mesh, instance.u)
    rep7 = error_norms(instance.u, instance.du, u_i, 0.5, order=7)
    rep14 = error_norms(instance.u, instance.du, u_i, 0.5, order=14)
    assert abs(rep7.l2 - rep14.l2) < 1e-8
    assert abs(rep7.h1_semi - rep14.h1_semi) < 1e-8


def test_layer_resolution_matters_for_thin_layers():
    eps = 1e-5
    mesh = build_mesh(16)
    instance = problem("two_x", eps)
    u_i = p1_interpolant(mesh, instance.u)
    plain = error_norms(instance.u, instance.du, u_i, eps)
    refined = error_norms(instance.u, instance.du, u_i, eps, resolve_layer=True)
    # the layer carries O(1/sqrt(eps)) derivative mass that plain Gauss misses
    assert refined.h1_semi > 10 * plain.h1_semi


def test_window_restriction():
    eps = 1e-6
    mesh = build_mesh(32)
    instance = problem("two_x", eps)
    u_i = p1_interpolant(mesh, instance.u)
    full = error_norms(instance.u, instance.du, u_i, eps)
    inner = error_norms(instance.u, instance.du, u_i, eps,
                        window=(3 * mesh.h, 1 - 3 * mesh.h))
    assert inner.l2 <= full.l2
    assert inner.h1_semi <= full.h1_semi


def test_interpolant_bounds_check_reports():
    mesh = build_mesh(32)
    report = interpolant_bounds_check(problem("one_minus_2x", 1e-2), mesh)
    assert report.eps_free_applicable
    assert report.eps_free_holds
    assert report.second_order_holds
    assert report.l2_error <= report.eps_free_bound
    assert report.l2_error <= report.second_order_bound


def test_interpolant_bounds_zero_data():
    mesh = build_mesh(8)
    instance = problem("custom", 1e-2, f=lambda x: 0.0 * np.asarray(x, dtype=float), fbar=0.0)
    report = interpolant_bounds_check(instance, mesh)
    assert report.l2_error == pytest.approx(0.0, abs=1e-11)
    assert report.eps_free_holds and report.second_order_holds


def test_interpolant_bound_not_applicable_for_nonzero_mean():
    mesh = build_mesh(16)
    report = interpolant_bounds_check(problem("two_x", 1e-2), mesh)
    assert not report.eps_free_applicable
