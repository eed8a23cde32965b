import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from topoforms import fields
from topoforms.clebsch import (ClebschPotentials, abelian_cs_group_identity, assemble_potential,
                               clebsch_from_su2, clebsch_potentials_from_euler,
                               cs_surface_vector, group_cs_densities, helicity_boundary_check,
                               monge_field)
from topoforms.lattice import GridSpec, ScalarField, convergence_order, divergence
from topoforms.topo import cs_density_3d

BOX = GridSpec.open_box((16,) * 3, 0.0, 1.0)


def field(grid, values, grad=None):
    return ScalarField(grid, values, grad)


def linear_potentials(grid):
    x, y, z = grid.coords()
    e = [np.broadcast_to(np.eye(3)[i][:, None, None, None], (3,) + grid.shape) for i in range(3)]
    return ClebschPotentials(field(grid, z, e[2]), field(grid, x, e[0]), field(grid, y, e[1]))


def random_potentials(grid, seed, periods=3.0):
    rng = np.random.default_rng(seed)
    v, g = fields.bandlimited(grid, rng, 3, kmax=1, periods=periods)
    return ClebschPotentials(*(field(grid, v[i], g[i]) for i in range(3)))


def test_linear_clebsch_example():
    c = linear_potentials(BOX)
    x, _, _ = BOX.coords()
    A = assemble_potential(c).A[0]
    np.testing.assert_allclose(A, np.stack([0 * x, x, 1 + 0 * x]), atol=1e-12)
    np.testing.assert_allclose(monge_field(c, "analytic")[2], 1.0)
    for scheme in ("central2", "analytic"):
        res = helicity_boundary_check(c, scheme)
        assert res["volume"] == pytest.approx(1.0, abs=1e-12)
        assert res["surface"] == pytest.approx(1.0, abs=1e-12)


def test_surface_vector_vanishes_with_constant_theta_or_alpha():
    x, y, z = BOX.coords()
    zero = np.zeros((3,) + BOX.shape)
    flat = ClebschPotentials(field(BOX, 0 * x, zero), field(BOX, x * y), field(BOX, np.sin(z)))
    assert np.all(cs_surface_vector(flat).components == 0)
    assert abs(helicity_boundary_check(flat)["volume"]) < 1e-12
    const = ClebschPotentials(field(BOX, x * z), field(BOX, 2.0 + 0 * x), field(BOX, y))
    assert np.all(monge_field(const) == 0)


def test_periodic_grid_is_rejected():
    c = random_potentials(GridSpec.periodic_box((8,) * 3), 0)
    with pytest.raises(ValueError, match="open grid"):
        helicity_boundary_check(c)
    with pytest.raises(ValueError):
        assemble_potential(ClebschPotentials(*(field(GridSpec.periodic_box((8, 8)),
                                                     np.zeros((8, 8))) for _ in range(3))))


def test_divergence_of_surface_vector_converges_to_cs_density():
    errs, hs = [], []
    for n in (16, 32, 64):
        grid = GridSpec.open_box((n,) * 3, 0.0, 1.0)
        c = random_potentials(grid, 1)
        S = cs_surface_vector(c, "analytic").components
        divS = divergence(S, grid)
        dens = cs_density_3d(assemble_potential(c, "analytic"), "analytic").values
        errs.append(np.max(np.abs(divS - dens)))
        hs.append(grid.spacing[0])
    assert convergence_order(errs, hs) >= 1.8


@settings(max_examples=10)
@given(st.integers(0, 2**31 - 1), st.floats(-3, 3))
def test_theta_shift_moves_only_the_surface_by_a_vanishing_flux(seed, shift):
    grid = GridSpec.open_box((24,) * 3, 0.0, 1.0)
    c = random_potentials(grid, seed % 997)
    moved = ClebschPotentials(field(grid, c.theta.values + shift, c.theta.gradient),
                              c.alpha, c.beta)
    a, b = helicity_boundary_check(c, "analytic"), helicity_boundary_check(moved, "analytic")
    assert a["volume"] == b["volume"]
    bound = abs(shift) * 50 * grid.spacing[0] ** 2
    assert abs(a["surface"] - b["surface"]) <= bound


def test_potentials_read_off_an_su2_field():
    grid = GridSpec.periodic_box((8,) * 3)
    angles, _ = fields.euler_random(grid, 0, kmax=2)
    c = clebsch_potentials_from_euler(angles)
    assert c.theta is angles.theta and c.beta is angles.beta
    np.testing.assert_allclose(c.alpha.values, np.cos(angles.gamma.values))


@pytest.mark.parametrize("seed", range(3))
def test_two_routes_agree_analytically(seed):
    grid = GridSpec.periodic_box((16,) * 3)
    angles, _ = fields.euler_random(grid, seed, kmax=2)
    assert clebsch_from_su2(angles, "analytic").gap < 1e-12
    ident = abelian_cs_group_identity(angles, "analytic")
    assert ident["pointwise_gap"] < 1e-10
    assert set(ident["pair_gaps"]) == {"AdA~minus_det_V", "AdA~two_thirds_trace",
                                       "minus_det_V~two_thirds_trace"}


def test_fd_routes_converge():
    route, triple, hs = [], [], []
    for n in (16, 32, 64):
        grid = GridSpec.periodic_box((n,) * 3)
        angles, _ = fields.euler_random(grid, 3, kmax=1, amplitude=0.5)
        route.append(clebsch_from_su2(angles, "fd").gap)
        triple.append(abelian_cs_group_identity(angles, "fd")["pointwise_gap"])
        hs.append(grid.spacing[0])
    assert convergence_order(route, hs) >= 1.8
    assert convergence_order(triple, hs) >= 1.8


def test_density_forms_have_the_two_thirds_relation():
    grid = GridSpec.periodic_box((8,) * 3)
    angles, _ = fields.euler_random(grid, 4, kmax=2)
    d = group_cs_densities(angles)
    full = d["two_thirds_trace"] * 1.5
    np.testing.assert_allclose(d["AdA"], (2 / 3) * full, atol=1e-10)
    with pytest.raises(ValueError):
        group_cs_densities(angles, "spectral")
