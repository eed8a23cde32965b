"""SU(2)-valued lattice fields stored as unit quaternions.

The quaternion ``(w, x, y, z)`` stands for the matrix ``w - i(x s1 + y s2 + z s3)``
so that the quaternion units map to ``2 X_a`` with ``X_a = sigma^a / 2i``.
For a unit quaternion ``q`` the Maurer-Cartan form ``g^-1 dg`` is the pure
quaternion ``conj(q) dq`` and its components are ``V^a = 2 (conj(q) dq)_a``.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .epsilon import levi_civita, permutation_table
from .lattice import GridSpec, ScalarField, diff, integrate

WINDING_NORMALIZATION = 1.0 / (24.0 * math.pi ** 2)
BOUNDARY_TOL = 1e-6
UNIT_TOL = 1e-12

E3 = levi_civita(3)


@dataclass(frozen=True)
class EulerAngleField:
    """Angles of ``g = exp(X3 beta) exp(X2 gamma) exp(X3 theta)``."""

    beta: ScalarField
    gamma: ScalarField
    theta: ScalarField

    def __post_init__(self):
        if not (self.beta.grid == self.gamma.grid == self.theta.grid):
            raise ValueError("Euler angles must share one grid")

    @property
    def grid(self):
        return self.beta.grid

    @property
    def analytic(self):
        return all(a.gradient is not None for a in (self.beta, self.gamma, self.theta))


@dataclass(frozen=True)
class GroupElementField:
    grid: GridSpec
    q: np.ndarray
    angles: Optional[EulerAngleField] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        q = np.asarray(self.q, dtype=np.float64).view()
        if q.shape != (4,) + self.grid.shape:
            raise ValueError("q must have shape (4, *grid.shape)")
        dev = float(np.max(np.abs(np.sum(q * q, axis=0) - 1.0)))
        if dev > UNIT_TOL * 10:
            raise ValueError(f"quaternions are not unit length (max deviation {dev:.2e})")
        q.flags.writeable = False
        object.__setattr__(self, "q", q)

    def matrices(self):
        """The field as complex 2x2 matrices, shape ``(*grid.shape, 2, 2)``."""
        w, x, y, z = self.q
        m = np.empty(self.grid.shape + (2, 2), dtype=complex)
        m[..., 0, 0] = w - 1j * z
        m[..., 0, 1] = -1j * x - y
        m[..., 1, 0] = -1j * x + y
        m[..., 1, 1] = w + 1j * z
        return m


@dataclass(frozen=True)
class MaurerCartanField:
    """``V[a, i]`` per site with ``g^-1 d_i g = V^a_i X_a``.

    ``exterior`` optionally carries the exact ``d_i V^a_j - d_j V^a_i`` with
    shape ``(3, dim, dim, *grid.shape)``. ``hermitian_residue`` is the largest
    identity component dropped when projecting a finite-difference
    ``g^-1 dg`` back onto the algebra.
    """

    grid: GridSpec
    V: np.ndarray
    exterior: Optional[np.ndarray] = field(default=None, repr=False)
    hermitian_residue: float = 0.0

    def __post_init__(self):
        if self.V.shape != (3, self.grid.dim) + self.grid.shape:
            raise ValueError("V must have shape (3, dim, *grid.shape)")


# ------------------------------------------------------------- quaternions

def qconj(q):
    return np.concatenate([q[:1], -q[1:]])


def qmul(p, q):
    """Hamilton product of quaternion arrays with matching trailing shapes."""
    shape = np.broadcast_shapes(p.shape, q.shape)
    p = np.broadcast_to(p, shape).reshape(4, -1)
    q = np.broadcast_to(q, shape).reshape(4, -1)
    return kernels.quat_mul(p, q).reshape(shape)


def axis_exp(axis, angle):
    """``exp(X_axis * angle)`` as a quaternion array; ``axis`` in 1..3."""
    angle = np.asarray(angle, dtype=float)
    q = np.zeros((4,) + angle.shape)
    q[0] = np.cos(angle / 2)
    q[axis] = np.sin(angle / 2)
    return q


def constant_field(grid, q0):
    q0 = np.asarray(q0, dtype=float)
    q0 = q0 / np.linalg.norm(q0)
    return GroupElementField(grid, np.broadcast_to(q0[:, None], (4, grid.size))
                             .reshape((4,) + grid.shape).copy())


def left_multiply(h0, g):
    """Constant left translation ``h0 * g``."""
    h0 = np.asarray(h0, dtype=float).reshape((4,) + (1,) * g.grid.dim)
    return GroupElementField(g.grid, qmul(h0, g.q))


def product(g1, g2):
    """Site-wise product ``g1 * g2``."""
    if g1.grid != g2.grid:
        raise ValueError("fields live on different grids")
    q = qmul(g1.q, g2.q)
    return GroupElementField(g1.grid, q / np.sqrt(np.sum(q * q, axis=0)))


# ------------------------------------------------------------- operations

def from_euler(angles):
    """``g = exp(X3 beta) exp(X2 gamma) exp(X3 theta)`` at every site."""
    qb = axis_exp(3, angles.beta.values)
    qg = axis_exp(2, angles.gamma.values)
    qt = axis_exp(3, angles.theta.values)
    return GroupElementField(angles.grid, qmul(qmul(qb, qg), qt), angles)


def _mc_from_quaternion_derivative(q, dq):
    """Pure parts of ``conj(q) dq`` per direction; ``dq``: ``(dim, 4, ...)``."""
    qc = qconj(q)
    u = np.stack([qmul(qc, dq[i]) for i in range(dq.shape[0])])
    residue = float(np.max(np.abs(u[:, 0]), initial=0.0))
    u[:, 0] = 0.0
    return u, residue


def euler_quaternion_gradient(angles):
    """Exact ``d_i q`` for a field built by :func:`from_euler`."""
    if not angles.analytic:
        raise ValueError("euler-analytic scheme needs Euler angles with exact gradients")
    qb = axis_exp(3, angles.beta.values)
    qg = axis_exp(2, angles.gamma.values)
    qt = axis_exp(3, angles.theta.values)
    e2 = np.array([0.0, 0.0, 1.0, 0.0]).reshape((4,) + (1,) * angles.grid.dim)
    e3 = np.array([0.0, 0.0, 0.0, 1.0]).reshape((4,) + (1,) * angles.grid.dim)
    q = qmul(qmul(qb, qg), qt)
    gt = qmul(qg, qt)
    pieces = (qmul(e3, q), qmul(qb, qmul(e2, gt)), qmul(q, e3))
    out = []
    for i in range(angles.grid.dim):
        out.append(0.5 * (angles.beta.gradient[i] * pieces[0]
                          + angles.gamma.gradient[i] * pieces[1]
                          + angles.theta.gradient[i] * pieces[2]))
    return np.stack(out)


def _left_invariant_quaternions(g, scheme="central2", angles=None):
    if scheme == "central2":
        dq = np.stack([diff(g.q, g.grid, ax) for ax in range(g.grid.dim)])
    elif scheme in ("euler-analytic", "analytic"):
        angles = angles if angles is not None else g.angles
        if angles is None:
            raise ValueError("euler-analytic scheme needs the Euler angles of the field")
        dq = euler_quaternion_gradient(angles)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return _mc_from_quaternion_derivative(g.q, dq)


def maurer_cartan(g, scheme="central2", angles=None):
    """Components ``V^a_i = tr(i sigma^a g^-1 d_i g)``.

    ``central2`` differentiates the quaternion entries and keeps the
    anti-Hermitian part; ``euler-analytic`` uses exact Euler-angle gradients
    and also attaches the exact exterior derivative of ``V``.
    """
    u, residue = _left_invariant_quaternions(g, scheme, angles)
    V = 2.0 * np.moveaxis(u[:, 1:], 1, 0)
    exterior = None
    if scheme != "central2":
        exterior = euler_components(angles if angles is not None else g.angles)[1]
    return MaurerCartanField(g.grid, V, exterior, residue)


def euler_components(angles):
    """Closed-form ``V^a`` and ``dV^a`` for Euler-angle fields.

    With ``c`` and ``s`` for cosine and sine::

        V1 = s(theta) dgamma - s(gamma) c(theta) dbeta
        V2 = c(theta) dgamma + s(gamma) s(theta) dbeta
        V3 = dtheta + c(gamma) dbeta

    ``dV`` follows from ``d(f dh) = df ^ dh`` and needs first derivatives only.
    Returns ``(V, dV)`` with shapes ``(3, dim, ...)`` and ``(3, dim, dim, ...)``.
    """
    if not angles.analytic:
        raise ValueError("closed-form components need exact angle gradients")
    b, gm, th = angles.beta, angles.gamma, angles.theta
    sg, cg = np.sin(gm.values), np.cos(gm.values)
    st, ct = np.sin(th.values), np.cos(th.values)
    db, dg, dt = b.gradient, gm.gradient, th.gradient
    V = np.stack([st * dg - sg * ct * db, ct * dg + sg * st * db, dt + cg * db])

    def wedge(x, y):
        return x[:, None] * y[None, :] - y[:, None] * x[None, :]

    dV = np.stack([
        ct * wedge(dt, dg) - cg * ct * wedge(dg, db) + sg * st * wedge(dt, db),
        -st * wedge(dt, dg) + cg * st * wedge(dg, db) + sg * ct * wedge(dt, db),
        -sg * wedge(dg, db),
    ])
    return V, dV


def flatness_residual(mc, scheme="central2"):
    """Per-site norm of ``dV^a + eps_abc V^b ^ V^c`` over ``a`` and ``i < j``.

    For ``V = g^-1 dg`` the pure-gauge relation reads
    ``d_i V^a_j - d_j V^a_i = -eps_abc V^b_i V^c_j``.
    """
    grid = mc.grid
    if scheme == "central2":
        D = np.stack([diff(mc.V, grid, ax) for ax in range(grid.dim)], axis=1)  # [a, i, j]
        dV = D - np.swapaxes(D, 1, 2)
    elif scheme in ("analytic", "euler-analytic"):
        if mc.exterior is None:
            raise ValueError("analytic flatness needs an exact exterior derivative")
        dV = mc.exterior
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    quad = np.einsum("abc,bi...,cj...->aij...", E3, mc.V, mc.V)
    r = dV + quad
    iu, ju = np.triu_indices(grid.dim, 1)
    sq = np.sum(r[:, iu, ju] ** 2, axis=(0, 1))
    return ScalarField(grid, np.sqrt(sq))


def trace_cubed_density(g, scheme="central2", angles=None):
    """``eps^{ijk} tr(L_i L_j L_k)`` with ``L = g^-1 dg`` on a 3d grid."""
    if g.grid.dim != 3:
        raise ValueError("trace_cubed_density needs a 3d grid")
    u, _ = _left_invariant_quaternions(g, scheme, angles)
    perms, signs = permutation_table(3)
    dens = kernels.trace_cubed(u.reshape(3, 4, -1), perms, signs)
    return dens.reshape(g.grid.shape)


def boundary_deviation(g):
    """Largest distance of boundary quaternions from the first corner value."""
    q = g.q
    ref = q[(slice(None),) + (0,) * g.grid.dim]
    dev = 0.0
    for ax in range(g.grid.dim):
        for end in (0, -1):
            face = np.take(q, end, axis=ax + 1)
            d = np.max(np.abs(face - ref.reshape((4,) + (1,) * (g.grid.dim - 1))))
            dev = max(dev, float(d))
    return dev


def winding_number(g, scheme="central2", boundary_tol=BOUNDARY_TOL):
    """``(1/24 pi^2) * integral of eps^{ijk} tr(L_i L_j L_k)``.

    The sign makes the hedgehog of :func:`topoforms.fields.hedgehog` wind
    +1 under the quaternion-to-matrix map used here. Open grids must carry
    a constant boundary value (within ``boundary_tol``) so that the field
    compactifies.
    """
    if g.grid.dim != 3:
        raise ValueError("winding number needs a 3d grid")
    if not g.grid.periodic:
        dev = boundary_deviation(g)
        if dev > boundary_tol:
            raise ValueError(f"field is not constant on the boundary (deviation {dev:.2e})")
    return WINDING_NORMALIZATION * integrate(trace_cubed_density(g, scheme), g.grid)
