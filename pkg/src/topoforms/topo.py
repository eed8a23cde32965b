"""Field strengths, Chern-Pontryagin densities and Chern-Simons currents/forms.

Potentials are stored as ``A[a, mu, *grid]`` with a Lie index ``a`` (length
1 for Abelian fields). Non-Abelian field strengths use
``F^c_{mu nu} = d_mu A^c_nu - d_nu A^c_mu + f_abc A^a_mu A^b_nu``, which is
the component form of ``dA + [A, A]`` for ``[X_a, X_b] = f_abc X_c``.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from . import kernels
from .epsilon import permutation_table
from .lattice import GridSpec, ScalarField, VectorField, curl, diff, integrate, l2_norm
from .liealg import LieAlgebraSpec, structure_constants


@lru_cache(maxsize=32)
def _structure(alg):
    return structure_constants(alg).f


@dataclass(frozen=True)
class GaugePotential:
    """``A[a, mu]`` per site, with an optional algebra and exact exterior derivative.

    ``exterior[a, mu, nu] = d_mu A^a_nu - d_nu A^a_mu`` when known exactly;
    it lets the analytic scheme bypass the stencils.
    """

    grid: GridSpec
    A: np.ndarray
    algebra: Optional[LieAlgebraSpec] = None
    exterior: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        A = np.asarray(self.A, dtype=np.float64)
        nlie = 1 if self.algebra is None else self.algebra.dim
        if A.shape != (nlie, self.grid.dim) + self.grid.shape:
            raise ValueError(f"A has shape {A.shape}, expected "
                             f"{(nlie, self.grid.dim) + self.grid.shape}")
        object.__setattr__(self, "A", A)
        if self.exterior is not None:
            ext = np.asarray(self.exterior, dtype=np.float64)
            if ext.shape != (nlie, self.grid.dim, self.grid.dim) + self.grid.shape:
                raise ValueError("exterior must have shape (nlie, dim, dim, *grid.shape)")
            object.__setattr__(self, "exterior", ext)

    @classmethod
    def abelian(cls, grid, components, exterior=None):
        comps = np.asarray(components, dtype=np.float64)
        ext = None if exterior is None else np.asarray(exterior)[None]
        return cls(grid, comps[None], None, ext)

    @property
    def nlie(self):
        return self.A.shape[0]

    @property
    def abelian_like(self):
        return self.algebra is None

    def structure(self):
        if self.algebra is None:
            return np.zeros((1, 1, 1))
        return _structure(self.algebra)


@dataclass(frozen=True)
class FieldStrength:
    grid: GridSpec
    F: np.ndarray
    algebra: Optional[LieAlgebraSpec] = None


def _site_flat(x, grid):
    return np.ascontiguousarray(x.reshape(x.shape[:x.ndim - grid.dim] + (grid.size,)))


def jacobian(pot):
    """``D[a, mu, nu] = d_mu A^a_nu`` by central differences."""
    return np.stack([diff(pot.A, pot.grid, mu) for mu in range(pot.grid.dim)], axis=1)


def exterior_derivative(pot, scheme="central2"):
    if scheme in ("analytic", "euler-analytic"):
        if pot.exterior is None:
            raise ValueError("analytic scheme needs a potential carrying its exterior derivative")
        return pot.exterior
    if scheme != "central2":
        raise ValueError(f"unknown scheme {scheme!r}")
    D = jacobian(pot)
    return D - np.swapaxes(D, 1, 2)


def field_strength(pot, scheme="central2"):
    """Curl of the potential plus the commutator term for non-Abelian fields."""
    F = exterior_derivative(pot, scheme).copy()
    if pot.algebra is not None:
        f = pot.structure()
        F += np.einsum("abc,am...,bn...->cmn...", f, pot.A, pot.A, optimize=True)
    elif pot.nlie > 1:
        raise ValueError("a multi-component Lie index needs an algebra")
    return FieldStrength(pot.grid, F, pot.algebra)


def cp_density_4d(fs):
    """``(1/4) eps^{mu nu alpha beta} F^a_{mu nu} F^a_{alpha beta}``."""
    if fs.grid.dim != 4:
        raise ValueError("cp_density_4d needs a 4d grid")
    perms, signs = permutation_table(4)
    dens = kernels.eps_pair_contract(_site_flat(fs.F, fs.grid), perms, signs, 0.25)
    return ScalarField(fs.grid, dens.reshape(fs.grid.shape))


def cp_density_2d(fs):
    """``(1/2) eps^{mu nu} F_{mu nu}``, i.e. ``F_01``."""
    if fs.grid.dim != 2:
        raise ValueError("cp_density_2d needs a 2d grid")
    if fs.F.shape[0] != 1:
        raise ValueError("the 2d density is defined for Abelian fields")
    perms, signs = permutation_table(2)
    dens = kernels.eps_pair_contract(_site_flat(fs.F, fs.grid), perms, signs, 0.5)
    return ScalarField(fs.grid, dens.reshape(fs.grid.shape))


def _require_orthogonal(pot):
    if pot.algebra is not None and not pot.algebra.is_orthogonal():
        raise ValueError("Chern-Simons forms need a trace-orthogonal generator basis")


def cs_current(pot):
    """Chern-Simons (anomaly) current ``C^mu`` in 2 or 4 dimensions.

    2d: ``C^mu = eps^{mu nu} A_nu``.
    4d: ``C^mu = eps^{mu a b c} (A^x_a d_b A^x_c + 1/3 f_xyz A^x_a A^y_b A^z_c)``.
    """
    grid = pot.grid
    if grid.dim == 2:
        if pot.nlie != 1:
            raise ValueError("the 2d current is defined for Abelian fields")
        return VectorField(grid, np.stack([pot.A[0, 1], -pot.A[0, 0]]))
    if grid.dim != 4:
        raise ValueError("cs_current supports 2d and 4d grids")
    _require_orthogonal(pot)
    perms, signs = permutation_table(4)
    C = kernels.cs_contract(_site_flat(pot.A, grid), _site_flat(jacobian(pot), grid),
                            pot.structure(), perms, signs, 1)
    return VectorField(grid, C.reshape((4,) + grid.shape))


def divergence_identity_residual(pot, norm="l2"):
    """Norm of ``d_mu C^mu`` minus the Chern-Pontryagin density (periodic grids)."""
    grid = pot.grid
    if grid.dim not in (2, 4):
        raise ValueError("divergence identity is checked in 2 or 4 dimensions")
    if not grid.periodic:
        raise ValueError("divergence identity check expects a periodic grid")
    C = cs_current(pot).components
    div = diff(C[0], grid, 0)
    for mu in range(1, grid.dim):
        div = div + diff(C[mu], grid, mu)
    fs = field_strength(pot)
    dens = cp_density_2d(fs) if grid.dim == 2 else cp_density_4d(fs)
    r = div - dens.values
    if norm == "l2":
        return l2_norm(r, grid)
    if norm == "max":
        return float(np.max(np.abs(r)))
    raise ValueError(f"unknown norm {norm!r}")


def cs_density_3d(pot, scheme="central2"):
    """``eps^{ijk} (A^a_i d_j A^a_k + 1/3 f_abc A^a_i A^b_j A^c_k)`` on a 3d grid."""
    grid = pot.grid
    if grid.dim != 3:
        raise ValueError("cs_density_3d needs a 3d grid")
    _require_orthogonal(pot)
    if scheme == "central2":
        dA = jacobian(pot)
    else:
        # eps only sees the antisymmetric part of d_j A_k
        dA = 0.5 * exterior_derivative(pot, scheme)
    perms, signs = permutation_table(3)
    dens = kernels.cs_contract(_site_flat(pot.A, grid), _site_flat(dA, grid),
                               pot.structure(), perms, signs, 0)
    return ScalarField(grid, dens.reshape(grid.shape))


def cs_1d(pot):
    """The 1d Chern-Simons term is the single component ``A_1``."""
    if pot.grid.dim != 1:
        raise ValueError("cs_1d needs a 1d grid")
    if pot.nlie != 1:
        raise ValueError("cs_1d is defined for Abelian fields")
    return ScalarField(pot.grid, pot.A[0, 0])


def helicity(v):
    """``integral of v . curl v`` (magnetic helicity / kinetic vorticity)."""
    if v.grid.dim != 3:
        raise ValueError("helicity needs a 3d field")
    w = curl(v.components, v.grid)
    return integrate(np.einsum("i...,i...->...", v.components, w), v.grid)
