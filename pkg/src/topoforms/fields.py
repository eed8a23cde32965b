"""Seeded test-field factory.

Random fields are band-limited: truncated Fourier series in every axis with
integer mode numbers ``|k_d| <= kmax`` over the domain extent, so their
exact gradients are available alongside the sampled values.
"""
import math

import numpy as np
from scipy.special import erfc

from .groupfield import EulerAngleField, GroupElementField, from_euler
from .lattice import ScalarField


def default_kmax(grid):
    return max(1, min(grid.shape) // 4)


def bandlimited(grid, rng, ncomp=1, kmax=None, amplitude=1.0, decay=1.0, periods=None):
    """Random real trigonometric series sampled on ``grid``.

    Returns ``(values, gradient)`` with shapes ``(ncomp, *shape)`` and
    ``(ncomp, dim, *shape)``. The same ``rng`` state and ``kmax`` give the
    same continuum field on every grid covering the same domain, which is
    what refinement studies need. ``periods`` overrides the period length
    per axis (default: the grid extent); longer periods make the field
    non-periodic on an open box.
    """
    kmax = default_kmax(grid) if kmax is None else int(kmax)
    ks = np.arange(-kmax, kmax + 1)
    nk = len(ks)
    shape = (ncomp,) + (nk,) * grid.dim
    coef = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    k2 = sum(np.meshgrid(*([ks ** 2] * grid.dim), indexing="ij"))
    coef *= amplitude / (1.0 + k2) ** decay / math.sqrt(nk ** grid.dim)
    periods = grid.extent if periods is None else np.broadcast_to(
        np.asarray(periods, dtype=float), (grid.dim,))
    wave = [2 * np.pi * ks / L for L in periods]
    phases = [np.exp(1j * np.outer(w, x - o)) for w, x, o in zip(wave, grid.axes(), grid.origin)]

    def synth(c):
        out = c
        for ph in phases:
            # contract the leading mode axis, append the grid axis at the end
            out = np.tensordot(out, ph, axes=([1], [0]))
        return out.real

    values = synth(coef)
    grads = []
    for d in range(grid.dim):
        kd = np.reshape(1j * wave[d], (1,) + tuple(nk if e == d else 1 for e in range(grid.dim)))
        grads.append(synth(coef * kd))
    return values, np.stack(grads, axis=1)


def bandlimited_scalar(grid, rng, **kw):
    v, g = bandlimited(grid, rng, 1, **kw)
    return ScalarField(grid, v[0], g[0])


def euler_random(grid, seed, kmax=None, amplitude=1.0):
    """Smooth random Euler angles (with exact gradients) and their group field."""
    rng = np.random.default_rng(seed)
    v, g = bandlimited(grid, rng, 3, kmax=kmax, amplitude=amplitude)
    angles = EulerAngleField(*(ScalarField(grid, 2.0 * v[i], 2.0 * g[i]) for i in range(3)))
    return angles, from_euler(angles)


def abc_flow(grid, A=1.0, B=1.0, C=1.0):
    """Arnold-Beltrami-Childress flow; it is its own curl."""
    x, y, z = grid.coords()
    return np.stack([
        A * np.sin(z) + C * np.cos(y),
        B * np.sin(x) + A * np.cos(z),
        C * np.sin(y) + B * np.cos(x),
    ])


def hedgehog_profile(t, profile="linear"):
    """Profile ``f(t)`` on ``t = r / R in [0, 1]`` with ``f(0) = pi``, ``f(1) = 0``.

    ``pi - f`` is odd in ``t`` for both choices, so the field is smooth at
    the centre. ``"linear"`` is the textbook ansatz (a kink where it meets
    the identity); ``"smooth"`` integrates ``(1 - t^2)^3`` and joins the
    identity with three vanishing derivatives.
    """
    t = np.clip(t, 0.0, 1.0)
    if profile == "linear":
        return np.pi * (1.0 - t)
    if profile == "smooth":
        p = (t - t ** 3 + 0.6 * t ** 5 - t ** 7 / 7.0) * (35.0 / 16.0)
        return np.pi * (1.0 - p)
    raise ValueError(f"unknown hedgehog profile {profile!r}")


def hedgehog(grid, center=(0.0, 0.0, 0.0), radius=1.0, profile="linear", charge=1):
    """``g = cos f + sin f (x_hat . e)`` inside a ball, identity outside.

    ``g(center) = -1``; ``charge=-1`` gives the conjugate field.
    """
    x, y, z = grid.coords()
    dx, dy, dz = x - center[0], y - center[1], z - center[2]
    r = np.sqrt(dx * dx + dy * dy + dz * dz)
    f = hedgehog_profile(r / radius, profile)
    safe = np.where(r > 0, r, 1.0)
    s = np.where(r > 0, np.sin(f) / safe, 0.0)
    sign = 1.0 if charge > 0 else -1.0
    q = np.stack([np.cos(f), sign * s * dx, sign * s * dy, sign * s * dz])
    q /= np.sqrt(np.sum(q * q, axis=0))
    return GroupElementField(grid, q)


def _tube_potential(x, y, z, radius, thickness, flux):
    """Vector potential of a Gaussian flux ring around the z axis.

    The ring field is ``B = G(rho) e_phi`` with ``rho`` the distance from the
    ring core; ``A = A_z e_z`` with ``A_z(r, z) = int_r^inf G dr'`` has that
    curl exactly and is localized in the disc spanned by the ring.
    """
    r = np.sqrt(x * x + y * y)
    a = thickness
    amp = flux / (np.pi * a * a)
    Az = amp * np.exp(-(z / a) ** 2) * (a * np.sqrt(np.pi) / 2) * erfc((r - radius) / a)
    return np.stack([np.zeros_like(Az), np.zeros_like(Az), Az])


def flux_tubes(grid, radius=1.0, thickness=0.2, flux1=1.0, flux2=1.0):
    """Two linked Gaussian flux rings; returns the total vector potential.

    Ring 1 lies in the xy-plane centred at the origin; ring 2 lies in the
    xz-plane centred at ``(radius, 0, 0)``. The helicity of the pair is
    ``2 * flux1 * flux2`` up to thin-tube corrections.
    """
    x, y, z = grid.coords()
    A1 = _tube_potential(x, y, z, radius, thickness, flux1)
    # ring 2: local frame (u, v, w) = (x - R, -z, y), so its axis w is along y
    u, v, w = x - radius, -z, y
    Al = _tube_potential(u, v, w, radius, thickness, flux2)
    # rotate components back: e_u = e_x, e_v = -e_z, e_w = e_y
    A2 = np.stack([Al[0], Al[2], -Al[1]])
    return A1 + A2


def algebra_field(grid, rng, dim_algebra, kmax=None, amplitude=1.0):
    """Random band-limited algebra coefficients ``(dim_algebra, *shape)``."""
    v, _ = bandlimited(grid, rng, dim_algebra, kmax=kmax, amplitude=amplitude)
    return v
