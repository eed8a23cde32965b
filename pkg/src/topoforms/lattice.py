"""Regular grids, second-order stencils, quadrature and convergence estimates.

Site ordering is row-major (C order) with any component axes in front of the
grid axes.
"""
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from . import kernels

PERIODIC = "periodic"
OPEN = "open"

SCHEMES = ("central2", "analytic")


@dataclass(frozen=True)
class GridSpec:
    """A regular d-dimensional sample grid.

    Periodic grids cover ``[origin, origin + shape*spacing)``, open grids
    include both end points: ``[origin, origin + (shape-1)*spacing]``.
    """

    dim: int
    shape: Tuple[int, ...]
    spacing: Tuple[float, ...]
    boundary: str = PERIODIC
    origin: Tuple[float, ...] = None

    def __post_init__(self):
        shape = tuple(int(n) for n in self.shape)
        spacing = tuple(float(h) for h in self.spacing)
        origin = (0.0,) * len(shape) if self.origin is None else tuple(float(o) for o in self.origin)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "origin", origin)
        if self.dim not in (1, 2, 3, 4):
            raise ValueError(f"dim must be 1..4, got {self.dim}")
        if not (len(shape) == len(spacing) == len(origin) == self.dim):
            raise ValueError("shape, spacing and origin must each have dim entries")
        if any(n < 4 for n in shape):
            raise ValueError(f"every axis needs at least 4 samples, got shape {shape}")
        if not all(math.isfinite(h) and h > 0 for h in spacing):
            raise ValueError(f"spacings must be positive and finite, got {spacing}")
        if self.boundary not in (PERIODIC, OPEN):
            raise ValueError(f"boundary must be 'periodic' or 'open', got {self.boundary!r}")

    @classmethod
    def periodic_box(cls, shape, lengths=2 * np.pi, origin=None):
        shape = tuple(shape)
        lengths = np.broadcast_to(np.asarray(lengths, dtype=float), (len(shape),))
        spacing = tuple(float(L / n) for L, n in zip(lengths, shape))
        return cls(len(shape), shape, spacing, PERIODIC, origin)

    @classmethod
    def open_box(cls, shape, lower=0.0, upper=1.0):
        shape = tuple(shape)
        lower = np.broadcast_to(np.asarray(lower, dtype=float), (len(shape),))
        upper = np.broadcast_to(np.asarray(upper, dtype=float), (len(shape),))
        spacing = tuple(float((u - l) / (n - 1)) for l, u, n in zip(lower, upper, shape))
        return cls(len(shape), shape, spacing, OPEN, tuple(float(v) for v in lower))

    @property
    def periodic(self):
        return self.boundary == PERIODIC

    @property
    def size(self):
        return int(np.prod(self.shape))

    @property
    def cell_volume(self):
        return float(np.prod(self.spacing))

    @property
    def extent(self):
        """Domain side lengths (period for periodic axes)."""
        if self.periodic:
            return tuple(n * h for n, h in zip(self.shape, self.spacing))
        return tuple((n - 1) * h for n, h in zip(self.shape, self.spacing))

    def axes(self):
        return [o + h * np.arange(n) for o, h, n in zip(self.origin, self.spacing, self.shape)]

    def coords(self):
        """Coordinate arrays, one per axis, each of full grid shape."""
        return np.meshgrid(*self.axes(), indexing="ij")

    def with_shape(self, shape):
        """Same domain sampled with a different number of points."""
        shape = tuple(shape)
        if self.periodic:
            return GridSpec.periodic_box(shape, self.extent, self.origin)
        upper = tuple(o + L for o, L in zip(self.origin, self.extent))
        return GridSpec.open_box(shape, self.origin, upper)

    def quadrature_weights(self):
        """Per-site weights (without the cell volume); None means all ones."""
        if self.periodic:
            return None
        w = np.ones(self.shape)
        for ax in range(self.dim):
            idx = [slice(None)] * self.dim
            idx[ax] = 0
            w[tuple(idx)] *= 0.5
            idx[ax] = -1
            w[tuple(idx)] *= 0.5
        return w

    def header(self):
        h = {
            "dim": self.dim,
            "shape": list(self.shape),
            "spacing": list(self.spacing),
            "boundary": self.boundary,
        }
        if any(self.origin):
            h["origin"] = list(self.origin)
        return h


def _readonly(a):
    v = np.asarray(a, dtype=np.float64).view()
    v.flags.writeable = False
    return v


@dataclass(frozen=True)
class ScalarField:
    """One real value per site, optionally with its exact gradient."""

    grid: GridSpec
    values: np.ndarray
    gradient: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        values = _readonly(self.values)
        if values.shape != self.grid.shape:
            raise ValueError(f"values shape {values.shape} != grid shape {self.grid.shape}")
        object.__setattr__(self, "values", values)
        if self.gradient is not None:
            grad = _readonly(self.gradient)
            if grad.shape != (self.grid.dim,) + self.grid.shape:
                raise ValueError("gradient must have shape (dim, *grid.shape)")
            object.__setattr__(self, "gradient", grad)


@dataclass(frozen=True)
class VectorField:
    """``grid.dim`` real components per site, component axis first."""

    grid: GridSpec
    components: np.ndarray

    def __post_init__(self):
        comps = _readonly(self.components)
        if comps.shape != (self.grid.dim,) + self.grid.shape:
            raise ValueError(
                f"components shape {comps.shape} != {(self.grid.dim,) + self.grid.shape}")
        object.__setattr__(self, "components", comps)


# ------------------------------------------------------------ derivatives

def diff(values, grid, axis):
    """Central second-order derivative of an array along grid ``axis``.

    ``values`` may carry leading component axes in front of the grid axes.
    Periodic grids wrap around; open grids use one-sided second-order
    stencils on the two faces.
    """
    if not 0 <= axis < grid.dim:
        raise ValueError(f"axis {axis} out of range for a {grid.dim}d grid")
    values = np.asarray(values, dtype=np.float64)
    lead = values.ndim - grid.dim
    if lead < 0 or values.shape[lead:] != grid.shape:
        raise ValueError("trailing axes of values must match the grid shape")
    n = grid.shape[axis]
    if n < 4:
        raise ValueError("shape too small for the stencil")
    pre = int(np.prod(values.shape[:lead + axis]))
    post = int(np.prod(grid.shape[axis + 1:]))
    out = kernels.central_diff(values.reshape(pre, n, post), grid.spacing[axis], grid.periodic)
    return out.reshape(values.shape)


def partial_derivative(f, axis, scheme="central2"):
    """Derivative of a :class:`ScalarField` along ``axis``.

    ``scheme="analytic"`` reads the exact derivative carried by ``f.gradient``.
    """
    if not 0 <= axis < f.grid.dim:
        raise ValueError(f"axis {axis} out of range for a {f.grid.dim}d grid")
    if scheme == "central2":
        return ScalarField(f.grid, diff(f.values, f.grid, axis))
    if scheme in ("analytic", "analytic-callback"):
        if f.gradient is None:
            raise ValueError("analytic scheme needs a field carrying its exact gradient")
        return ScalarField(f.grid, f.gradient[axis])
    raise ValueError(f"unknown scheme {scheme!r}")


def gradient(values, grid):
    """Stack of central derivatives along every axis: ``(dim, *values.shape)``."""
    return np.stack([diff(values, grid, ax) for ax in range(grid.dim)])


def divergence(comps, grid):
    out = diff(comps[0], grid, 0)
    for ax in range(1, grid.dim):
        out = out + diff(comps[ax], grid, ax)
    return out


def curl(comps, grid):
    """Finite-difference curl of a 3-component array on a 3d grid."""
    if grid.dim != 3:
        raise ValueError("curl needs a 3d grid")
    return np.stack([
        diff(comps[2], grid, 1) - diff(comps[1], grid, 2),
        diff(comps[0], grid, 2) - diff(comps[2], grid, 0),
        diff(comps[1], grid, 0) - diff(comps[0], grid, 1),
    ])


# -------------------------------------------------------------- quadrature

def integrate(values, grid):
    """Quadrature of a raw array over ``grid`` with pairwise summation."""
    values = np.asarray(values, dtype=np.float64)
    w = grid.quadrature_weights()
    if w is not None:
        values = values * w
    return kernels.pairwise_sum(values) * grid.cell_volume


def volume_integral(f):
    """Riemann sum (periodic) or trapezoidal rule (open) times the cell volume."""
    return integrate(f.values, f.grid)


def l2_norm(values, grid):
    """Discrete L2 norm ``sqrt(sum |v|^2 dV)`` with plain (unweighted) sums."""
    return math.sqrt(kernels.pairwise_sum(np.square(values)) * grid.cell_volume)


def surface_flux(F):
    """Outward flux of a 3d vector field through the six faces of an open box.

    Face integrals use trapezoidal weights.
    """
    grid = F.grid
    if grid.boundary != OPEN:
        raise ValueError("surface_flux needs an open grid; a periodic grid has no boundary")
    if grid.dim != 3:
        raise ValueError("surface_flux is defined for 3d grids")
    parts = []
    for ax in range(3):
        others = [a for a in range(3) if a != ax]
        area = grid.spacing[others[0]] * grid.spacing[others[1]]
        w = np.full((grid.shape[others[0]], grid.shape[others[1]]), area)
        w[[0, -1], :] *= 0.5
        w[:, [0, -1]] *= 0.5
        hi = np.take(F.components[ax], -1, axis=ax)
        lo = np.take(F.components[ax], 0, axis=ax)
        parts.append(((hi - lo) * w).ravel())
    return kernels.pairwise_sum(np.concatenate(parts))


# ------------------------------------------------------------- convergence

def convergence_order(errors, spacings=None):
    """Least-squares slope of ``log(error)`` against ``log(h)``.

    ``spacings`` defaults to successive halving. Returns ``math.inf`` when any
    error is exactly zero.
    """
    errors = np.asarray(errors, dtype=float)
    if errors.size < 2:
        raise ValueError("need at least two refinement levels")
    if np.any(errors < 0) or not np.all(np.isfinite(errors)):
        raise ValueError("errors must be finite and nonnegative")
    if spacings is None:
        spacings = 0.5 ** np.arange(errors.size)
    spacings = np.asarray(spacings, dtype=float)
    if np.any(errors == 0):
        return math.inf
    slope = np.polyfit(np.log(spacings), np.log(errors), 1)[0]
    return float(slope)


def convergence_study(measure, grids: Sequence[GridSpec]):
    """Evaluate ``measure(grid)`` on each grid; return ``(errors, order)``.

    The order is estimated against the largest spacing of each grid.
    """
    if len(grids) < 3:
        raise ValueError("a convergence study needs at least 3 levels")
    errors = [float(measure(g)) for g in grids]
    spacings = [max(g.spacing) for g in grids]
    return errors, convergence_order(errors, spacings)
