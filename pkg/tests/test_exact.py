import numpy as np
import pytest

from convdiff1d.errors import InvalidParameterError, PreconditionError
from convdiff1d.exact import (
    GREEN_MIN_EPS,
    appendix_bounds,
    canonical_tag,
    exact_solution,
    green_infinity,
    green_kernel,
    green_peak,
    green_quadrature,
    problem,
    reduced_theta,
    reduced_w,
    u1_closed,
)

CLOSED_FORM_TAGS = ("one", "one_minus_2x", "two_x", "cubic", "cos_7pi_half", "cos_pi_half")


def central_second_difference(func, x, step):
    return (func(x + step) - 2.0 * func(x) + func(x - step)) / step**2


def central_difference(func, x, step):
    return (func(x + step) - func(x - step)) / (2.0 * step)


def fourth_order_d1(func, x, s):
    return (func(x - 2 * s) - 8 * func(x - s) + 8 * func(x + s) - func(x + 2 * s)) / (12 * s)


def fourth_order_d2(func, x, s):
    return (
        -func(x - 2 * s) + 16 * func(x - s) - 30 * func(x) + 16 * func(x + s) - func(x + 2 * s)
    ) / (12 * s**2)


# ---------------------------------------------------------------------------
# Green's function


def test_green_boundary_values():
    for eps in (0.5, 1e-2, 1e-6):
        x = np.linspace(0.0, 1.0, 17)
        assert np.allclose(green_kernel(eps, x, np.zeros_like(x)), 0.0, atol=1e-15)
        assert np.allclose(green_kernel(eps, x, np.ones_like(x)), 0.0, atol=1e-15)


@pytest.mark.parametrize("eps", [1e-1, 1e-3])
def test_green_bounds_on_grid(eps):
    xs = np.linspace(0.0, 1.0, 100)
    ss = np.linspace(0.0, 1.0, 100)
    X, S = np.meshgrid(xs, ss, indexing="ij")
    G = green_kernel(eps, X, S)
    g_inf = green_infinity(eps)
    assert np.all(G >= -1e-15)
    peak = green_peak(eps, xs)[:, None]
    assert np.all(G <= peak + 1e-12)
    assert np.all(peak <= g_inf + 1e-12)
    # the gap 1 - G_inf = 2 e^{-1/(2 eps)} underflows relative to 1 for
    # small eps; the strict inequality is only float-visible for eps >~ 0.014
    assert g_inf <= 1.0
    if eps >= 0.02:
        assert g_inf < 1.0


@pytest.mark.parametrize("eps", [1e-1, 1e-3])
def test_green_unimodal_in_s(eps):
    xs = np.linspace(0.05, 0.95, 7)
    ss = np.linspace(0.0, 1.0, 801)
    for x in xs:
        g = green_kernel(eps, np.full_like(ss, x), ss)
        k = np.searchsorted(ss, x)
        assert np.all(np.diff(g[: k + 1]) >= -1e-12)   # increasing left of the peak
        assert np.all(np.diff(g[k + 1 :]) <= 1e-12)    # decreasing right of it


def test_green_infinity_formula():
    for eps in (0.3, 0.05):
        expect = (np.exp(0.5 / eps) - 1.0) / (np.exp(0.5 / eps) + 1.0)
        assert green_infinity(eps) == pytest.approx(expect, rel=1e-14)


def test_green_invalid_eps():
    with pytest.raises(InvalidParameterError):
        green_kernel(0.0, 0.5, 0.5)
    with pytest.raises(InvalidParameterError):
        u1_closed(-1.0, 0.5)


# ---------------------------------------------------------------------------
# closed forms vs the quadrature oracle


def test_u1_boundary_and_interior():
    for eps in (0.5, 1e-3, 1e-6):
        assert u1_closed(eps, 0.0) == 0.0
        assert abs(u1_closed(eps, 1.0)) < 1e-14
    assert u1_closed(1e-6, 0.5) == pytest.approx(0.5, abs=1e-9)


@pytest.mark.parametrize("eps", [1e-1, 1e-3])
def test_u1_matches_green_quadrature(eps):
    instance = problem("one", eps)
    xs = np.linspace(0.01, 0.99, 50)
    oracle = green_quadrature(instance, xs, tol=1e-10)
    assert np.max(np.abs(oracle - u1_closed(eps, xs))) < 1e-8


@pytest.mark.parametrize("eps", [1e-1, 1e-2, 1e-3])
@pytest.mark.parametrize("tag", CLOSED_FORM_TAGS)
def test_closed_forms_match_green_quadrature(tag, eps):
    instance = problem(tag, eps)
    xs = np.linspace(0.01, 0.99, 50)
    oracle = green_quadrature(instance, xs, tol=1e-10)
    assert np.max(np.abs(oracle - instance.u(xs))) < 1e-8


@pytest.mark.parametrize("tag", CLOSED_FORM_TAGS)
def test_ode_residual_by_finite_differences(tag):
    # independent check of the closed forms: residual -eps u'' + u' - f
    # evaluated with fourth-order differences away from the boundary layer
    eps = 1e-1
    instance = problem(tag, eps)
    xs = np.linspace(0.05, 0.85, 40)
    step = 3e-4
    resid = -eps * fourth_order_d2(instance.u, xs, step) \
        + fourth_order_d1(instance.u, xs, step) - instance.f(xs)
    assert np.max(np.abs(resid)) < 1e-8


@pytest.mark.parametrize("tag", CLOSED_FORM_TAGS)
@pytest.mark.parametrize("eps", [1e-1, 1e-4, 1e-8])
def test_analytic_derivatives_are_consistent(tag, eps):
    # inside the layer the three residual terms reach O(1/eps) and cancel,
    # so the check samples away from it, as stated for the instance invariant
    instance = problem(tag, eps)
    xs = np.linspace(0.0, 1.0 - min(0.3, 60 * eps), 101)
    resid = -eps * np.asarray(instance.d2u(xs)) + np.asarray(instance.du(xs)) - instance.f(xs)
    assert np.max(np.abs(resid)) < 1e-8 * max(1.0, np.max(np.abs(instance.f(xs))))


def test_exact_solution_boundary_conditions():
    for tag in CLOSED_FORM_TAGS:
        for eps in (0.2, 1e-4, 1e-10):
            instance = problem(tag, eps)
            assert abs(instance.u(0.0)) < 1e-13
            assert abs(instance.u(1.0)) < 1e-12


def test_two_x_closed_form_expression():
    eps = 0.1
    instance = problem("two_x", eps)
    x = np.linspace(0.0, 1.0, 11)
    expect = x**2 + 2 * eps * x - (1 + 2 * eps) * (np.expm1(x / eps) / np.expm1(1 / eps))
    assert np.allclose(instance.u(x), expect, atol=1e-13)


def test_one_minus_2x_closed_form_expression():
    eps = 0.1
    instance = problem("one_minus_2x", eps)
    x = np.linspace(0.0, 1.0, 11)
    expect = -(x**2) + (1 - 2 * eps) * x + 2 * eps * (np.expm1(x / eps) / np.expm1(1 / eps))
    assert np.allclose(instance.u(x), expect, atol=1e-13)


def test_green_quadrature_preconditions():
    instance = problem("one", 1e-4)
    with pytest.raises(PreconditionError):
        green_quadrature(instance, 0.5)
    assert GREEN_MIN_EPS == 1e-3


def test_green_quadrature_unreachable_tolerance():
    from convdiff1d.errors import AccuracyError

    instance = problem("one", 1e-2)
    with pytest.raises(AccuracyError) as info:
        green_quadrature(instance, 0.37, tol=1e-16)
    assert info.value.achieved is not None and info.value.achieved > 1e-16


@pytest.mark.parametrize("tag", CLOSED_FORM_TAGS)
def test_fbar_matches_quadrature(tag):
    from convdiff1d.quadrature import integrate

    instance = problem(tag, 1e-2)
    assert integrate(instance.f, 0.0, 1.0, order=40) == pytest.approx(
        instance.fbar, abs=1e-12
    )


def test_exact_solution_dispatch():
    # closed-form tags evaluate directly; custom data routes to the oracle
    assert exact_solution(problem("one", 1e-2), 0.5) == pytest.approx(
        u1_closed(1e-2, 0.5), abs=1e-14
    )
    custom = problem("custom", 5e-2, f=lambda x: np.ones_like(np.asarray(x, dtype=float)))
    assert exact_solution(custom, 0.5) == pytest.approx(u1_closed(5e-2, 0.5), abs=1e-9)


def test_custom_problem_uses_oracle():
    f = lambda x: np.sin(np.pi * np.asarray(x, dtype=float))
    instance = problem("custom", 5e-2, f=f)
    assert instance.fbar == pytest.approx(2.0 / np.pi, rel=1e-10)
    u_mid = instance.u(0.5)
    resid = -instance.epsilon * central_second_difference(instance.u, 0.4, 1e-4) \
        + central_difference(instance.u, 0.4, 1e-4) - float(f(0.4))
    assert abs(resid) < 1e-5
    assert np.isfinite(u_mid)


# ---------------------------------------------------------------------------
# reduced problems


def test_reduced_solutions_for_catalogue_data():
    x = np.linspace(0.0, 1.0, 21)
    inst = problem("one", 1e-3)
    assert np.allclose(reduced_w(inst, x), x)
    assert np.allclose(reduced_theta(inst, x), x - 1.0)
    inst = problem("one_minus_2x", 1e-3)
    assert np.allclose(reduced_w(inst, x), x - x**2)
    assert np.allclose(reduced_theta(inst, x), reduced_w(inst, x))  # mean-zero data
    inst = problem("two_x", 1e-3)
    assert np.allclose(reduced_w(inst, x), x**2)
    assert np.allclose(reduced_theta(inst, x), x**2 - 1.0)


def test_reduced_endpoint_conditions_and_shift_identity():
    for tag in CLOSED_FORM_TAGS:
        inst = problem(tag, 1e-2)
        assert reduced_w(inst, 0.0) == pytest.approx(0.0, abs=1e-14)
        assert reduced_theta(inst, 1.0) == pytest.approx(0.0, abs=1e-12)
        x = np.linspace(0, 1, 13)
        assert np.allclose(reduced_theta(inst, x), reduced_w(inst, x) - inst.fbar, atol=1e-14)


def test_reduced_w_custom_matches_quadrature():
    f = lambda x: np.exp(np.asarray(x, dtype=float))
    inst = problem("custom", 5e-2, f=f)
    assert reduced_w(inst, 0.7) == pytest.approx(np.exp(0.7) - 1.0, rel=1e-10)


def test_outflow_values():
    eps = 1e-2
    assert problem("one", eps).outflow_value() == pytest.approx(1.0)
    assert problem("two_x", eps).outflow_value() == pytest.approx(1.0 + 2 * eps)
    assert problem("one_minus_2x", eps).outflow_value() == pytest.approx(-2 * eps)
    assert problem("cubic", eps).outflow_value() == pytest.approx(0.0, abs=1e-15)


# ---------------------------------------------------------------------------
# stability bounds


def test_bounds_tight_for_constant_data():
    report = appendix_bounds(problem("one", 1e-2))
    assert report.all_satisfied
    by_name = {c.name: c for c in report.checks}
    assert by_name["abs_u_le_finf_u1"].worst_margin == pytest.approx(0.0, abs=1e-12)


def test_bounds_all_pass_for_mean_zero_data():
    report = appendix_bounds(problem("one_minus_2x", 1e-2))
    assert len(report.checks) == 5
    assert report.all_satisfied
    assert report.skipped == ()


def test_bounds_skip_derivative_checks_for_nonzero_mean():
    report = appendix_bounds(problem("two_x", 1e-2))
    assert len(report.checks) == 3
    assert report.all_satisfied
    assert "du_le_finf" in report.skipped
    with pytest.raises(PreconditionError):
        appendix_bounds(problem("two_x", 1e-2), derivative_bounds=True)


@pytest.mark.parametrize("tag", CLOSED_FORM_TAGS)
def test_bounds_catalogue_sweep(tag):
    for eps in (1e-1, 1e-3, 1e-6):
        assert appendix_bounds(problem(tag, eps)).all_satisfied


# ---------------------------------------------------------------------------
# overflow safety


@pytest.mark.parametrize("eps", [1.0, 1e-3, 1e-6, 1e-10, 1e-12])
def test_stability_scan(eps):
    xs = np.linspace(0.0, 1.0, 10_000)
    with np.errstate(over="raise", invalid="raise"):
        for tag in CLOSED_FORM_TAGS:
            instance = problem(tag, eps)
            assert np.all(np.isfinite(instance.u(xs)))
            assert np.all(np.isfinite(instance.du(xs)))
        assert np.all(np.isfinite(green_kernel(eps, xs, xs[::-1])))
        assert np.all(np.isfinite(green_peak(eps, xs)))
        assert np.isfinite(green_infinity(eps))


def test_tag_aliases():
    assert canonical_tag("two-x") == "two_x"
    assert canonical_tag("cos7") == "cos_7pi_half"
    with pytest.raises(InvalidParameterError):
        canonical_tag("squiggle")


def test_fbar_values():
    assert problem("cos_7pi_half", 1e-2).fbar == pytest.approx(-2.0 / (7 * np.pi))
    assert problem("cos_pi_half", 1e-2).fbar == pytest.approx(2.0 / np.pi)
    assert problem("cubic", 1e-2).fbar == pytest.approx(0.0, abs=1e-15)
    assert problem("one_minus_2x", 1e-2).fbar == 0.0
