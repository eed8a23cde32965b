import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from topoforms import fields
from topoforms.groupfield import constant_field, maurer_cartan, trace_cubed_density
from topoforms.lattice import GridSpec
from topoforms.liealg import SymmetricPairSpec, su2, su3
from topoforms.projection import (MatrixGroupField, cs_coincidence_check, exp_algebra_field,
                                  matrix_maurer_cartan, matrix_trace_cubed, project_connection)

SU2_U1 = SymmetricPairSpec(su2(), [2])
SU3_L3 = SymmetricPairSpec(su3(), [2])
GRID = GridSpec.periodic_box((16,) * 3)


def test_full_pair_returns_the_maurer_cartan_components():
    _, g = fields.euler_random(GRID, 0, kmax=2)
    proj = project_connection(g, SymmetricPairSpec(su2(), [0, 1, 2]))
    np.testing.assert_allclose(proj.A.A, maurer_cartan(g).V, atol=1e-14)
    np.testing.assert_allclose(proj.kappa, -2 * np.eye(3), atol=1e-14)


def test_u1_projection_is_third_component():
    _, g = fields.euler_random(GRID, 1, kmax=2)
    proj = project_connection(g, SU2_U1, "euler-analytic")
    assert proj.kappa == pytest.approx(-2.0)
    np.testing.assert_allclose(proj.A.A[0], maurer_cartan(g, "euler-analytic").V[2], atol=1e-14)
    assert proj.A.exterior is not None


def test_non_symmetric_pair_needs_strict_off():
    g = exp_algebra_field(GRID, fields.algebra_field(GRID, np.random.default_rng(0), 8, kmax=1),
                          su3())
    with pytest.raises(ValueError, match="not symmetric"):
        project_connection(g, SU3_L3)
    proj = project_connection(g, SU3_L3, strict=False)
    assert proj.A.A.shape == (1, 3) + GRID.shape


def test_quaternion_pair_must_be_su2():
    _, g = fields.euler_random(GRID, 0, kmax=1)
    with pytest.raises(ValueError, match="su\\(2\\)"):
        project_connection(g, SU3_L3, strict=False)


@settings(max_examples=15)
@given(st.integers(0, 2**31 - 1))
def test_exp_algebra_field_matches_expm(seed):
    grid = GridSpec.periodic_box((4, 4))
    rng = np.random.default_rng(seed)
    alg = su3()
    c = rng.standard_normal((8,) + grid.shape)
    U = exp_algebra_field(grid, c, alg).U
    X = np.tensordot(c, alg.generators, axes=(0, 0))
    np.testing.assert_allclose(U[1, 2], expm(X[1, 2]), atol=1e-12)
    assert exp_algebra_field(grid, c, alg).unitarity_residual() < 1e-12


def test_matrix_route_matches_quaternion_route():
    _, g = fields.euler_random(GRID, 2, kmax=2)
    m = MatrixGroupField.from_quaternions(g)
    a = project_connection(g, SU2_U1).A.A
    b = project_connection(m, SU2_U1).A.A
    np.testing.assert_allclose(a, b, atol=1e-12)
    L = matrix_maurer_cartan(m)
    np.testing.assert_allclose(matrix_trace_cubed(L, GRID), trace_cubed_density(g), atol=1e-12)


@pytest.mark.parametrize("seed", range(3))
def test_coincidence_holds_for_the_symmetric_pair(seed):
    _, g = fields.euler_random(GRID, seed, kmax=2)
    rep = cs_coincidence_check(g, SU2_U1, "analytic")
    assert rep["status"] == "ok"
    assert rep["pointwise_ratio"] == pytest.approx(2 / 3, abs=1e-12)
    assert rep["constancy"] < 1e-6
    assert rep["kappa"] == [[-2.0]]


def test_fd_coincidence_constancy_shrinks():
    spreads = []
    for n in (16, 32):
        grid = GridSpec.periodic_box((n,) * 3)
        _, g = fields.euler_random(grid, 0, kmax=1, amplitude=0.5)
        spreads.append(cs_coincidence_check(g, SU2_U1, "fd")["constancy"])
    assert spreads[1] < spreads[0] / 3


def test_coincidence_fails_for_the_su3_control():
    grid = GridSpec.periodic_box((12,) * 3)
    coeffs = fields.algebra_field(grid, np.random.default_rng(1), 8, kmax=1)
    g = exp_algebra_field(grid, coeffs, su3())
    rep = cs_coincidence_check(g, SU3_L3, "fd", strict=False)
    assert rep["status"] == "ok" and rep["constancy"] > 1e-2
    with pytest.raises(ValueError):
        cs_coincidence_check(g, SU3_L3, "analytic", strict=False)


def test_constant_field_is_indeterminate():
    rep = cs_coincidence_check(constant_field(GRID, [1, 2, 3, 4]), SU2_U1, "fd")
    assert rep["status"] == "indeterminate"
    assert rep["ratio"] is None and rep["constancy"] is None
