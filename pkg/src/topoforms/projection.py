"""H-connections projected out of a G pure gauge, and the G/H Chern-Simons check.

``A^a = kappa^{ab} tr(T^b g^-1 dg)`` with ``kappa`` the inverse of the trace
metric restricted to H, so that ``H = G`` hands back the Maurer-Cartan
components unchanged.
"""
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .epsilon import permutation_table
from .groupfield import GroupElementField, maurer_cartan, trace_cubed_density
from .lattice import GridSpec, diff, integrate
from .liealg import check_symmetric_pair, su2
from .topo import GaugePotential, cs_density_3d

DENSITY_THRESHOLD = 1e-2
DENSITY_FLOOR = 1e-12
RATIO_FLOOR = 1e-6


@dataclass(frozen=True)
class MatrixGroupField:
    """Unitary matrices ``U[*grid, n, n]`` for groups beyond SU(2)."""

    grid: GridSpec
    U: np.ndarray

    def __post_init__(self):
        U = np.asarray(self.U, dtype=complex)
        if U.shape[:-2] != self.grid.shape or U.shape[-1] != U.shape[-2]:
            raise ValueError("U must have shape (*grid.shape, n, n)")
        object.__setattr__(self, "U", U)

    @classmethod
    def from_quaternions(cls, g):
        return cls(g.grid, g.matrices())

    def unitarity_residual(self):
        n = self.U.shape[-1]
        UhU = np.einsum("...ji,...jk->...ik", self.U.conj(), self.U)
        return float(np.max(np.abs(UhU - np.eye(n))))


def exp_algebra_field(grid, coeffs, algebra):
    """``g = exp(c^a X_a)`` per site for an algebra-valued lattice field.

    ``c^a X_a`` is anti-Hermitian, so ``-i c^a X_a`` is Hermitian and the
    exponential follows from one eigendecomposition per site.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (algebra.dim,) + grid.shape:
        raise ValueError("coeffs must have shape (algebra.dim, *grid.shape)")
    X = np.tensordot(coeffs, algebra.generators, axes=(0, 0))
    w, v = np.linalg.eigh(-1j * X)
    U = np.einsum("...ij,...j,...kj->...ik", v, np.exp(1j * w), v.conj())
    return MatrixGroupField(grid, U)


def matrix_maurer_cartan(g):
    """``L_i = g^-1 d_i g`` by central differences: ``(dim, *grid, n, n)``."""
    grid = g.grid
    n = g.U.shape[-1]
    # grid axes last so that diff sees the matrix indices as components
    U = np.moveaxis(g.U.reshape(grid.shape + (n * n,)), -1, 0)
    dU = []
    for ax in range(grid.dim):
        d = diff(U.real, grid, ax) + 1j * diff(U.imag, grid, ax)
        dU.append(np.moveaxis(d, 0, -1).reshape(grid.shape + (n, n)))
    Uh = np.swapaxes(g.U.conj(), -1, -2)
    return np.stack([Uh @ d for d in dU])


def _basis_change(G):
    """Rows express the builtin su(2) basis in the generators of ``G``."""
    msg = (f"algebra {G.name!r} is not su(2) in the 2x2 representation; "
           "quaternion fields need an su(2) pair")
    if G.matrix_dim != 2:
        raise ValueError(msg)
    C, res = G.components(su2().generators)
    if float(np.max(res)) > 1e-10:
        raise ValueError(msg)
    return C  # [b, a]: X_a = C[b, a] G_b


@dataclass(frozen=True)
class ProjectedConnection:
    A: GaugePotential
    source: Any = field(repr=False)
    pair: Any = field(repr=False)
    normalization: np.ndarray = None
    hermitian_residue: float = 0.0

    @property
    def kappa(self):
        k = np.asarray(self.normalization)
        return float(k[0, 0]) if k.shape == (1, 1) else k


def _g_components(g, G, scheme, angles):
    """Components ``W[b, i]`` of ``g^-1 d_i g`` in the basis of ``G``, plus exterior."""
    if isinstance(g, GroupElementField):
        mc = maurer_cartan(g, scheme, angles)
        C = _basis_change(G)
        W = np.tensordot(C, mc.V, axes=(1, 0))
        ext = None if mc.exterior is None else np.tensordot(C, mc.exterior, axes=(1, 0))
        return W, ext, mc.hermitian_residue
    if isinstance(g, MatrixGroupField):
        if scheme != "central2":
            raise ValueError("matrix group fields only support the finite-difference scheme")
        if g.U.shape[-1] != G.matrix_dim:
            raise ValueError("group field and algebra have different matrix sizes")
        L = matrix_maurer_cartan(g)
        W, res = G.components(L)  # [b, i, *grid]
        return W, None, float(np.max(res))
    raise TypeError("g must be a GroupElementField or MatrixGroupField")


def project_connection(g, pair, scheme="central2", angles=None, strict=True):
    """``A^a_i = kappa^{ab} tr(T^b g^-1 d_i g)`` over the H generators of ``pair``.

    ``strict`` rejects pairs failing the symmetric-pair conditions; the
    negative control switches it off on purpose.
    """
    if strict and not check_symmetric_pair(pair).passed:
        raise ValueError("pair is not symmetric; pass strict=False to project anyway")
    G = pair.G
    T = list(pair.T_indices)
    W, ext, residue = _g_components(g, G, scheme, angles)
    kappa = np.linalg.inv(G.metric[np.ix_(T, T)])
    P = kappa @ G.metric[T, :]
    A = np.tensordot(P, W, axes=(1, 0))
    A_ext = None if ext is None else np.tensordot(P, ext, axes=(1, 0))
    pot = GaugePotential(g.grid, A, pair.subalgebra(), A_ext)
    return ProjectedConnection(pot, g, pair, kappa, residue)


def matrix_trace_cubed(L, grid):
    """``eps^{ijk} tr(L_i L_j L_k)`` for matrix-valued ``L`` on a 3d grid."""
    perms, signs = permutation_table(3)
    out = np.zeros(grid.shape)
    for p, s in zip(perms, signs):
        out += s * np.einsum("...ab,...bc,...ca->...", L[p[0]], L[p[1]], L[p[2]]).real
    return out


def _scheme(mode):
    if mode in ("analytic", "euler-analytic"):
        return "euler-analytic"
    if mode in ("fd", "central2"):
        return "central2"
    raise ValueError(f"mode must be 'analytic' or 'fd', got {mode!r}")


def cs_coincidence_check(g, pair, mode="analytic", strict=True, angles=None,
                         threshold=DENSITY_THRESHOLD, floor=DENSITY_FLOOR):
    """Compare the H Chern-Simons density of the projected connection with
    ``eps tr(g^-1 dg)^3`` of the G pure gauge.

    ``constancy`` is the relative standard deviation of the pointwise ratio
    over sites where ``|cs_G density| > threshold * max`` and
    ``pointwise_ratio`` its mean. When the G density is below ``floor``
    everywhere the status is "indeterminate"; ``ratio`` (of the integrals)
    is None when ``cs_G`` is negligible next to the integral of ``|density|``.
    """
    grid = g.grid
    if grid.dim != 3:
        raise ValueError("the coincidence check needs a 3d grid")
    scheme = _scheme(mode)
    proj = project_connection(g, pair, scheme, angles, strict)
    dens_H = cs_density_3d(proj.A, "analytic" if scheme != "central2" else "central2").values
    if isinstance(g, GroupElementField):
        dens_G = trace_cubed_density(g, scheme, angles)
    else:
        dens_G = matrix_trace_cubed(matrix_maurer_cartan(g), grid)
    out = {
        "cs_H": integrate(dens_H, grid),
        "cs_G": integrate(dens_G, grid),
        "kappa": np.asarray(proj.normalization).tolist(),
        "mode": "analytic" if scheme != "central2" else "fd",
    }
    peak = float(np.max(np.abs(dens_G)))
    if peak < floor:
        out.update(ratio=None, pointwise_ratio=None, constancy=None, sites=0,
                   status="indeterminate")
        return out
    mask = np.abs(dens_G) > threshold * peak
    r = dens_H[mask] / dens_G[mask]
    mean = float(np.mean(r))
    # topologically trivial fields integrate to ~0; the integral ratio is noise then
    scale = integrate(np.abs(dens_G), grid)
    out.update(
        ratio=out["cs_H"] / out["cs_G"] if abs(out["cs_G"]) > RATIO_FLOOR * scale else None,
        pointwise_ratio=mean,
        constancy=float(np.std(r) / abs(mean)) if mean != 0 else float("inf"),
        sites=int(np.count_nonzero(mask)),
        status="ok",
    )
    return out
