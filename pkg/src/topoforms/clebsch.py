"""Clebsch/Monge potentials ``A = grad(theta) + alpha grad(beta)`` and their checks.

With ``B = curl A = grad(alpha) x grad(beta)`` the Abelian Chern-Simons
density is a total derivative, ``A . B = div(theta B)``, so the helicity of
such a potential reduces to a boundary term.
"""
from dataclasses import dataclass

import numpy as np

from .groupfield import euler_components, from_euler, maurer_cartan, trace_cubed_density
from .lattice import ScalarField, VectorField, curl, diff, integrate, surface_flux
from .topo import GaugePotential, cs_density_3d


@dataclass(frozen=True)
class ClebschPotentials:
    """``(theta, alpha, beta)`` on one 3d grid; exact gradients optional."""

    theta: ScalarField
    alpha: ScalarField
    beta: ScalarField

    def __post_init__(self):
        if not (self.theta.grid == self.alpha.grid == self.beta.grid):
            raise ValueError("Clebsch potentials must share one grid")

    @property
    def grid(self):
        return self.theta.grid

    @property
    def analytic(self):
        return all(f.gradient is not None for f in (self.theta, self.alpha, self.beta))


def _grad(f, scheme):
    if scheme == "central2":
        return np.stack([diff(f.values, f.grid, ax) for ax in range(f.grid.dim)])
    if scheme in ("analytic", "analytic-callback"):
        if f.gradient is None:
            raise ValueError("analytic scheme needs potentials carrying exact gradients")
        return np.asarray(f.gradient)
    raise ValueError(f"unknown scheme {scheme!r}")


def _check3d(c):
    if c.grid.dim != 3:
        raise ValueError("Clebsch potentials live on a 3d grid")


def assemble_potential(c, scheme="central2"):
    """``A_i = d_i theta + alpha d_i beta`` as an Abelian :class:`GaugePotential`.

    In analytic mode the exact exterior derivative
    ``d_j alpha d_k beta - d_k alpha d_j beta`` rides along.
    """
    _check3d(c)
    dth, da, db = (_grad(f, scheme) for f in (c.theta, c.alpha, c.beta))
    A = dth + c.alpha.values * db
    ext = None
    if scheme != "central2":
        ext = da[:, None] * db[None, :] - db[:, None] * da[None, :]
    return GaugePotential.abelian(c.grid, A, ext)


def monge_field(c, scheme="central2"):
    """``B = grad(alpha) x grad(beta)``."""
    _check3d(c)
    return np.cross(_grad(c.alpha, scheme), _grad(c.beta, scheme), axis=0)


def cs_surface_vector(c, scheme="central2"):
    """``S^i = theta eps^{ijk} d_j alpha d_k beta``; ``div S`` is the CS density."""
    return VectorField(c.grid, c.theta.values * monge_field(c, scheme))


def helicity_boundary_check(c, scheme="central2"):
    """Compare ``integral A . B`` with the surface flux of ``theta B``.

    The volume side takes the curl of the assembled potential with the
    lattice stencil (or uses the exact ``B`` in analytic mode).
    """
    if c.grid.periodic:
        raise ValueError("helicity_boundary_check needs an open grid; "
                         "a periodic box has no boundary")
    A = assemble_potential(c, scheme).A[0]
    B = curl(A, c.grid) if scheme == "central2" else monge_field(c, scheme)
    volume = integrate(np.einsum("i...,i...->...", A, B), c.grid)
    surface = surface_flux(cs_surface_vector(c, scheme))
    return {"volume": volume, "surface": surface, "gap": abs(volume - surface)}


@dataclass(frozen=True)
class SU2Clebsch:
    """Clebsch data read off an SU(2) field and the potential built both ways."""

    potentials: ClebschPotentials
    group_route: GaugePotential
    clebsch_route: GaugePotential

    @property
    def gap(self):
        return float(np.max(np.abs(self.group_route.A - self.clebsch_route.A)))


def clebsch_potentials_from_euler(angles):
    """``theta' = theta``, ``alpha' = cos(gamma)``, ``beta' = beta``."""
    gm = angles.gamma
    grad = None if gm.gradient is None else -np.sin(gm.values) * gm.gradient
    alpha = ScalarField(gm.grid, np.cos(gm.values), grad)
    return ClebschPotentials(angles.theta, alpha, angles.beta)


def clebsch_from_su2(angles, mode="analytic"):
    """``A = V^3 = d theta + cos(gamma) d beta`` via the group and via Clebsch data.

    Route (i) takes the third Maurer-Cartan component of the group field,
    route (ii) assembles the Clebsch potential. ``mode="fd"`` runs both
    through the central stencil.
    """
    scheme = _scheme(mode)
    c = clebsch_potentials_from_euler(angles)
    g = from_euler(angles)
    mc = maurer_cartan(g, "euler-analytic" if scheme == "analytic" else "central2", angles)
    ext = None if mc.exterior is None else mc.exterior[2]
    group = GaugePotential.abelian(angles.grid, mc.V[2], ext)
    return SU2Clebsch(c, group, assemble_potential(c, scheme))


def _scheme(mode):
    if mode in ("analytic", "euler-analytic"):
        return "analytic"
    if mode in ("fd", "central2"):
        return "central2"
    raise ValueError(f"mode must be 'analytic' or 'fd', got {mode!r}")


def _det3(V):
    return (V[0, 0] * (V[1, 1] * V[2, 2] - V[1, 2] * V[2, 1])
            - V[0, 1] * (V[1, 0] * V[2, 2] - V[1, 2] * V[2, 0])
            + V[0, 2] * (V[1, 0] * V[2, 1] - V[1, 1] * V[2, 0]))


def group_cs_densities(angles, mode="analytic"):
    """The three pointwise forms of the Abelian CS density of ``V^3``.

    Returns ``{"AdA", "minus_det_V", "two_thirds_trace"}``: ``A dA`` of the
    ``V^3`` potential, ``-V^1 V^2 V^3`` (as ``-det V``) and
    ``(2/3) eps^{ijk} tr(L_i L_j L_k)``.
    """
    if angles.grid.dim != 3:
        raise ValueError("the group CS identity lives on a 3d grid")
    scheme = _scheme(mode)
    g = from_euler(angles)
    if scheme == "analytic":
        V, dV = euler_components(angles)
        pot = GaugePotential.abelian(angles.grid, V[2], dV[2])
        tr3 = trace_cubed_density(g, "euler-analytic", angles)
    else:
        V = maurer_cartan(g, "central2").V
        pot = GaugePotential.abelian(angles.grid, V[2])
        tr3 = trace_cubed_density(g, "central2")
    return {
        "AdA": cs_density_3d(pot, scheme).values,
        "minus_det_V": -_det3(V),
        "two_thirds_trace": (2.0 / 3.0) * tr3,
    }


def abelian_cs_group_identity(angles, mode="analytic"):
    """``A dA = V^3 dV^3 = -V^1 V^2 V^3 = (2/3) tr(g^-1 dg)^3`` on the lattice.

    ``lhs`` integrates ``A dA``; ``rhs`` integrates the trace form;
    ``pointwise_gap`` is the largest pairwise max-norm difference of the
    three densities, with each pair also reported.
    """
    d = group_cs_densities(angles, mode)
    grid = angles.grid
    names = list(d)
    gaps = {}
    for i in range(3):
        for j in range(i + 1, 3):
            gaps[f"{names[i]}~{names[j]}"] = float(np.max(np.abs(d[names[i]] - d[names[j]])))
    return {
        "lhs": integrate(d["AdA"], grid),
        "rhs": integrate(d["two_thirds_trace"], grid),
        "pointwise_gap": max(gaps.values()),
        "pair_gaps": gaps,
    }
