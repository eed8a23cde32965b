import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.spatial.transform import Rotation

from topoforms import fields, verify
from topoforms.epsilon import IndexedFactor, levi_civita, naive_contract
from topoforms.lattice import GridSpec, VectorField, diff, integrate
from topoforms.liealg import su2, su3
from topoforms.topo import (FieldStrength, GaugePotential, cp_density_2d, cp_density_4d, cs_1d,
                            cs_current, cs_density_3d, divergence_identity_residual,
                            field_strength, helicity)

G4 = GridSpec.periodic_box((4, 4, 4, 4))


def constant_F(grid, entries, nlie=1):
    F = np.zeros((nlie, grid.dim, grid.dim) + grid.shape)
    for (m, n), v in entries.items():
        F[:, m, n] = v
        F[:, n, m] = -v
    return FieldStrength(grid, F)


def test_cp_constant_field_is_2EB():
    E, B = 1.7, -0.6
    dens = cp_density_4d(constant_F(G4, {(0, 1): E, (2, 3): B})).values
    np.testing.assert_allclose(dens, 2 * E * B, atol=1e-12)
    F = np.zeros((4, 4))
    F[0, 1], F[1, 0], F[2, 3], F[3, 2] = E, -E, B, -B
    fac = IndexedFactor(lambda m, n: F[m, n], 2)
    assert 0.25 * naive_contract(fac, fac) == pytest.approx(2 * E * B, abs=1e-12)


@given(st.integers(0, 2**31 - 1), st.sampled_from([1, 3]))
def test_cp_density_matches_naive_epsilon_sum(seed, nlie):
    rng = np.random.default_rng(seed)
    F = rng.standard_normal((nlie, 4, 4) + G4.shape)
    F = F - np.swapaxes(F, 1, 2)
    dens = cp_density_4d(FieldStrength(G4, F)).values
    site = (1, 2, 0, 3)
    want = 0.0
    for a in range(nlie):
        fac = IndexedFactor(lambda m, n, a=a: F[(a, m, n) + site], 2)
        want += 0.25 * naive_contract(fac, fac)
    assert dens[site] == pytest.approx(want, abs=1e-12)


def test_self_dual_density_is_sum_of_squares(rng):
    f01, f02, f03 = rng.standard_normal(3)
    F = {(0, 1): f01, (2, 3): f01, (0, 2): f02, (1, 3): -f02, (0, 3): f03, (1, 2): f03}
    dens = cp_density_4d(constant_F(G4, F)).values
    np.testing.assert_allclose(dens, sum(v * v for v in F.values()), atol=1e-12)
    anti = {k: (-v if k[0] != 0 else v) for k, v in F.items()}
    np.testing.assert_allclose(cp_density_4d(constant_F(G4, anti)).values,
                               -sum(v * v for v in F.values()), atol=1e-12)


def test_cp_density_2d():
    g = GridSpec.periodic_box((8, 8))
    np.testing.assert_allclose(cp_density_2d(constant_F(g, {(0, 1): 0.75})).values, 0.75)
    pot = verify.random_potential(g, 4, kmax=2)
    want = diff(pot.A[0, 1], g, 0) - diff(pot.A[0, 0], g, 1)
    np.testing.assert_allclose(cp_density_2d(field_strength(pot)).values, want, atol=1e-12)
    with pytest.raises(ValueError):
        cp_density_2d(constant_F(G4, {}))


def test_field_strength_examples():
    g = GridSpec.open_box((8, 8), 0.0, 1.0)
    x, y = g.coords()
    E = 2.5
    pot = GaugePotential.abelian(g, np.stack([0 * x, x * E]))
    np.testing.assert_allclose(field_strength(pot).F[0, 0, 1], E, atol=1e-12)
    # gradient potential with the exact (zero) curl
    g3 = GridSpec.periodic_box((8, 8, 8))
    X, Y, Z = g3.coords()
    grad = np.stack([np.cos(X), np.zeros_like(Y), -np.sin(Z)])
    pot = GaugePotential.abelian(g3, grad, np.zeros((3, 3) + g3.shape))
    assert np.all(field_strength(pot, "analytic").F == 0)
    # commutator-only su(2) field strength
    a, b = 0.4, -1.3
    A = np.zeros((3, 3) + g3.shape)
    A[0, 0], A[1, 1] = a, b
    F = field_strength(GaugePotential(g3, A, su2())).F
    np.testing.assert_allclose(F[2, 0, 1], a * b, atol=1e-12)
    np.testing.assert_allclose(F[2, 1, 0], -a * b, atol=1e-12)


def test_multi_component_potential_needs_algebra():
    g = GridSpec.periodic_box((4, 4))
    with pytest.raises(ValueError):
        GaugePotential(g, np.zeros((3, 2, 4, 4)))


@pytest.mark.parametrize("seed", range(3))
def test_su2_field_strength_is_adjoint_covariant(seed):
    g = GridSpec.periodic_box((8, 8, 8, 8))
    pot = verify.random_potential(g, seed, su2(), kmax=1)
    R = Rotation.random(random_state=seed).as_matrix()
    rotated = GaugePotential(g, np.tensordot(R, pot.A, axes=(1, 0)), su2())
    F = field_strength(pot).F
    np.testing.assert_allclose(field_strength(rotated).F, np.tensordot(R, F, axes=(1, 0)),
                               atol=1e-10)


def test_cs_current_2d_is_reindexing():
    g = GridSpec.periodic_box((8, 8))
    pot = verify.random_potential(g, 0, kmax=2)
    C = cs_current(pot).components
    assert np.array_equal(C[0], pot.A[0, 1]) and np.array_equal(C[1], -pot.A[0, 0])


def test_cs_current_4d_against_naive_oracle(rng):
    g = GridSpec.periodic_box((8, 8, 8, 8))
    x0, x1, x2, x3 = g.coords()
    A = np.zeros((1, 4) + g.shape)
    A[0, 2] = np.sin(x1) + 0.3 * np.cos(2 * x1)
    C = cs_current(GaugePotential(g, A)).components
    D = np.stack([diff(A[0], g, m) for m in range(4)])  # D[b, c] = d_b A_c
    site = (1, 3, 5, 2)
    for mu in range(4):
        want = naive_contract(IndexedFactor(lambda m: 1.0 if m == mu else 0.0, 1),
                              IndexedFactor(lambda a: A[(0, a) + site], 1),
                              IndexedFactor(lambda b, c: D[(b, c) + site], 2))
        assert C[(mu,) + site] == pytest.approx(want, abs=1e-12)


def test_cs_density_3d_against_einsum(rng):
    g = GridSpec.periodic_box((6, 6, 6))
    A = rng.standard_normal((3, 3) + g.shape)
    pot = GaugePotential(g, A, su2())
    D = np.stack([diff(A, g, m) for m in range(3)], axis=1)  # [a, j, k] = d_j A^a_k
    e = levi_civita(3)
    want = (np.einsum("ijk,ai...,ajk...->...", e, A, D)
            + np.einsum("ijk,abc,ai...,bj...,ck...->...", e, e, A, A, A) / 3)
    np.testing.assert_allclose(cs_density_3d(pot).values, want, atol=1e-12)


def test_cs_needs_orthogonal_basis():
    from topoforms.liealg import LieAlgebraSpec
    gens = su2().generators.copy()
    skew = LieAlgebraSpec("skew", np.stack([gens[0], gens[1] + gens[0], gens[2]]))
    g = GridSpec.periodic_box((4, 4, 4))
    with pytest.raises(ValueError, match="orthogonal"):
        cs_density_3d(GaugePotential(g, np.zeros((3, 3, 4, 4, 4)), skew))


def test_gradient_potential_has_no_cs_charge():
    g = GridSpec.periodic_box((32,) * 3)
    v, grad = fields.bandlimited(g, np.random.default_rng(1), 1, kmax=2)
    pot = GaugePotential.abelian(g, grad[0])
    h = g.spacing[0]
    assert abs(integrate(cs_density_3d(pot).values, g)) < h * h
    assert abs(helicity(VectorField(g, grad[0]))) < h * h


def test_abelian_gauge_shift_changes_cs_by_a_total_derivative():
    g = GridSpec.periodic_box((32,) * 3)
    A, _ = fields.bandlimited(g, np.random.default_rng(2), 3, kmax=2)
    _, dlam = fields.bandlimited(g, np.random.default_rng(3), 1, kmax=2)
    base = cs_density_3d(GaugePotential.abelian(g, A)).values
    shifted = cs_density_3d(GaugePotential.abelian(g, A + dlam[0])).values
    assert abs(integrate(shifted - base, g)) < g.spacing[0] ** 2


def test_helicity_equals_integrated_cs_density():
    g = GridSpec.periodic_box((16,) * 3)
    A, _ = fields.bandlimited(g, np.random.default_rng(9), 3, kmax=3)
    assert helicity(VectorField(g, A)) == pytest.approx(
        integrate(cs_density_3d(GaugePotential.abelian(g, A)).values, g), abs=1e-12)


def test_abc_helicity_error_is_the_stencil_symbol():
    """The central stencil turns curl of a k=1 mode into sin(h)/h times the curl."""
    for n in (32, 64, 128):
        g = GridSpec.periodic_box((n,) * 3)
        h = g.spacing[0]
        value = helicity(VectorField(g, fields.abc_flow(g)))
        exact = 3 * (2 * np.pi) ** 3
        assert (exact - value) / exact == pytest.approx(1 - np.sin(h) / h, rel=1e-9)


def test_abc_helicity_with_exact_vorticity():
    g = GridSpec.periodic_box((64,) * 3)
    v = fields.abc_flow(g)
    value = integrate(np.sum(v * v, axis=0), g)  # curl v = v for this flow
    assert value == pytest.approx(3 * (2 * np.pi) ** 3, rel=1e-12)


@pytest.mark.parametrize("fluxes", [(1.0, 1.0), (0.5, 2.0)])
def test_linked_flux_tubes_helicity(fluxes):
    g = GridSpec.open_box((96,) * 3, (-1.5, -1.5, -1.5), (2.5, 1.5, 1.5))
    A = fields.flux_tubes(g, flux1=fluxes[0], flux2=fluxes[1])
    want = 2 * fluxes[0] * fluxes[1]
    assert helicity(VectorField(g, A)) == pytest.approx(want, rel=0.05)


def test_unlinked_flux_tubes_have_no_helicity():
    g = GridSpec.open_box((64,) * 3, (-1.5, -1.5, -1.5), (1.5, 1.5, 1.5))
    x, y, z = g.coords()
    A = fields._tube_potential(x, y, z, 1.0, 0.2, 1.0)
    assert abs(helicity(VectorField(g, A))) < 1e-3


def test_cs_1d():
    g = GridSpec.open_box((2001,), -5.0, 5.0)
    (x,) = g.coords()
    dtheta = 1 / np.cosh(x) ** 2
    A = cs_1d(GaugePotential.abelian(g, dtheta[None])).values
    assert integrate(A, g) == pytest.approx(np.tanh(5) - np.tanh(-5), abs=1e-6)
    g1 = GridSpec.open_box((16,), 0.0, 1.0)
    assert integrate(cs_1d(GaugePotential.abelian(g1, np.ones((1, 16)))).values,
                     g1) == pytest.approx(1.0, abs=1e-12)
    assert integrate(cs_1d(GaugePotential.abelian(g1, np.zeros((1, 16)))).values, g1) == 0


def test_divergence_identity_2d_is_stencil_exact():
    for seed in range(3):
        pot = verify.random_potential(GridSpec.periodic_box((64, 64)), seed, kmax=16)
        assert divergence_identity_residual(pot, norm="max") < 1e-12


def test_divergence_identity_rejects_bad_grids():
    with pytest.raises(ValueError):
        divergence_identity_residual(verify.random_potential(GridSpec.periodic_box((8,) * 3), 0))
    g = GridSpec.open_box((8, 8), 0.0, 1.0)
    with pytest.raises(ValueError):
        divergence_identity_residual(GaugePotential.abelian(g, np.zeros((2, 8, 8))))


def test_su3_potential_runs_through_the_4d_identity():
    g = GridSpec.periodic_box((8,) * 4)
    pot = verify.random_potential(g, 0, su3(), kmax=1, amplitude=0.3)
    fine = verify.random_potential(GridSpec.periodic_box((16,) * 4), 0, su3(), kmax=1,
                                   amplitude=0.3)
    r8, r16 = divergence_identity_residual(pot), divergence_identity_residual(fine)
    assert r16 < r8 / 3
