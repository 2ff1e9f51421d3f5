import numpy as np
import pytest

from convdiff1d.errors import InvalidBasisError, InvalidMeshError
from convdiff1d.mesh import BasisId, BasisKind, build_mesh, bubble_moments, eval_basis, p1_interpolant



def test_build_mesh_basic():
    mesh = build_mesh(2)
    assert np.allclose(mesh.nodes, [0.0, 0.5, 1.0])
    assert mesh.h == 0.5
    mesh4 = build_mesh(4)
    assert mesh4.nodes[3] == 0.75
    assert build_mesh(101).h == 1.0 / 101


def test_build_mesh_invariants():
    for n in (2, 7, 33, 101):
        mesh = build_mesh(n)
        assert mesh.nodes[0] == 0.0 and mesh.nodes[-1] == 1.0
        assert np.all(np.diff(mesh.nodes) > 0)
        assert np.allclose(np.diff(mesh.nodes), mesh.h, rtol=0, atol=1e-15)


@pytest.mark.parametrize("bad", [0, 1, -3])
def test_build_mesh_rejects_small_n(bad):
    with pytest.raises(InvalidMeshError):
        build_mesh(bad)


def test_hat_kronecker_property():
    mesh = build_mesh(6)
    for j in range(1, 6):
        bid = BasisId(BasisKind.P1_NODAL, j)
        vals = eval_basis(mesh, bid, mesh.nodes)
        expect = np.zeros(7)
        expect[j] = 1.0
        assert np.allclose(vals, expect, atol=1e-15)


def test_bubble_midpoint_and_nodes():
    mesh = build_mesh(5)
    for i in range(1, 6):
        bid = BasisId(BasisKind.BUBBLE, i)
        a, b = mesh.element(i)
        assert eval_basis(mesh, bid, 0.5 * (a + b)) == pytest.approx(1.0, abs=1e-15)
        assert eval_basis(mesh, bid, a) == pytest.approx(0.0, abs=1e-14)
        assert eval_basis(mesh, bid, b) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("n", [2, 5, 16])
def test_bubble_integral_identities(n):
    # int B = 2h/3, int B' = 0, int (B')^2 = 16/(3h) on every cell
    mesh = build_mesh(n)
    h = mesh.h
    for i in range(1, n + 1):
        m0, m1, m2 = bubble_moments(mesh, i)
        assert m0 == pytest.approx(2 * h / 3, rel=1e-12)
        assert abs(m1) < 1e-12
        assert m2 == pytest.approx(16 / (3 * h), rel=1e-12)


def test_partition_of_unity():
    mesh = build_mesh(9)
    rng = np.random.default_rng(7)
    x = rng.uniform(0.0, 1.0, size=400)
    interior = sum(eval_basis(mesh, BasisId(BasisKind.P1_NODAL, j), x) for j in range(1, 9))
    left = np.clip(1.0 - x / mesh.h, 0.0, None)
    right = np.clip(1.0 - (1.0 - x) / mesh.h, 0.0, None)
    assert np.allclose(interior + left + right, 1.0, atol=1e-14)
    inner = (x >= mesh.nodes[1]) & (x <= mesh.nodes[-2])
    assert np.allclose(interior[inner], 1.0, atol=1e-14)


def test_pg_enriched_nodal_values():
    mesh = build_mesh(7)
    for j in range(1, 7):
        bid = BasisId(BasisKind.PG_ENRICHED, j)
        vals = eval_basis(mesh, bid, mesh.nodes)
        expect = np.zeros(8)
        expect[j] = 1.0
        assert np.allclose(vals, expect, atol=1e-14)


def test_p2_hierarchical_indexing():
    mesh = build_mesh(4)
    # indices 1..n-1 are the hats, n..2n-1 the bubbles
    assert eval_basis(mesh, BasisId(BasisKind.P2, 2), mesh.nodes[2]) == 1.0
    mid = 0.5 * (mesh.nodes[0] + mesh.nodes[1])
    assert eval_basis(mesh, BasisId(BasisKind.P2, 4), mid) == pytest.approx(1.0)


def test_derivative_interface_convention():
    mesh = build_mesh(4)
    h = mesh.h
    bid = BasisId(BasisKind.P1_NODAL, 2)
    # right-limit at the peak node, left-limit at x = 1
    assert eval_basis(mesh, bid, mesh.nodes[2], 1) == pytest.approx(-1 / h)
    assert eval_basis(mesh, bid, mesh.nodes[1], 1) == pytest.approx(1 / h)
    last = BasisId(BasisKind.P1_NODAL, 3)
    assert eval_basis(mesh, last, 1.0, 1) == pytest.approx(-1 / h)


def test_eval_basis_index_validation():
    mesh = build_mesh(4)
    with pytest.raises(InvalidBasisError):
        eval_basis(mesh, BasisId(BasisKind.P1_NODAL, 4), 0.5)
    with pytest.raises(InvalidBasisError):
        eval_basis(mesh, BasisId(BasisKind.BUBBLE, 5), 0.5)
    with pytest.raises(InvalidBasisError):
        eval_basis(mesh, BasisId(BasisKind.P1_NODAL, 0), 0.5)


def test_p1_interpolant_nodal_values():
    mesh = build_mesh(2)
    u_i = p1_interpolant(mesh, lambda x: x * (1 - x))
    assert np.allclose(u_i.coefficients, [0.25])

    from convdiff1d.exact import u1_closed

    mesh = build_mesh(16)
    eps = 0.05
    u_i = p1_interpolant(mesh, lambda x: u1_closed(eps, x))
    assert np.allclose(u_i.coefficients, u1_closed(eps, mesh.nodes[1:-1]), atol=1e-15)


def test_interpolant_is_exact_on_p1_functions():
    mesh = build_mesh(8)
    coeffs = np.sin(np.arange(1, 8))
    from helpers import p1_callable

    func = p1_callable(mesh, coeffs)
    u_i = p1_interpolant(mesh, func)
    assert np.allclose(u_i.coefficients, coeffs, atol=1e-14)
