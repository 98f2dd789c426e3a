"""Layered Goupillaud media and their piecewise linear characteristic polygon.

At level ``N`` every layer takes the same time ``dt = 2**-N`` to cross, so
the layer thickness ``dX_k`` and the speed ``C_k`` satisfy
``dX_k = C_k * dt``.  Both the medium and the polygon through the knots
``(t_k, X_k)`` are thin views over a :class:`~goupillaud.levy_paths.GridPath`.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidGrid, OutOfRange, OutOfWindow
from .levy_paths import GridPath, JumpPath, coarsen, increments_at_level

__all__ = [
    "LayeredMedium",
    "PiecewiseLinearPath",
    "build_medium",
    "speed_at",
    "interpolate",
    "inverse",
    "polygon_at_level",
]


def _scalarize(arr, like):
    if np.ndim(like) == 0:
        return float(arr)
    return arr


class LayeredMedium:
    """Boundaries ``X_k`` and speeds ``C_k = dX_k / dt`` at one level.

    Layer ``k`` is the half-open interval ``[X_{k-1}, X_k)``.
    """

    def __init__(self, grid: GridPath):
        if not isinstance(grid, GridPath):
            raise InvalidGrid("a medium is built from a GridPath")
        self.grid = grid

    @property
    def level(self) -> int:
        return self.grid.level

    @property
    def dt(self) -> float:
        return self.grid.dt

    @property
    def boundaries(self) -> np.ndarray:
        return self.grid.knots

    @property
    def thicknesses(self) -> np.ndarray:
        return self.grid.increments

    @property
    def speeds(self) -> np.ndarray:
        # division by a power of two is exact, so speeds * dt == thicknesses
        return self.grid.increments * 2.0 ** self.grid.level

    @property
    def layer_indices(self) -> np.ndarray:
        return np.arange(self.grid.k_lo + 1, self.grid.k_hi + 1)

    def __repr__(self):
        return (f"LayeredMedium(level={self.level}, layers={self.thicknesses.size}, "
                f"span=[{self.boundaries[0]:g}, {self.boundaries[-1]:g}])")


def build_medium(grid: GridPath) -> LayeredMedium:
    return LayeredMedium(grid)


def speed_at(medium: LayeredMedium, x):
    """Speed of the layer ``[X_{k-1}, X_k)`` containing ``x``."""
    xa = np.asarray(x, dtype=float)
    b = medium.boundaries
    if np.any(xa < b[0]) or np.any(xa >= b[-1]) or np.any(np.isnan(xa)):
        raise OutOfRange(f"x outside medium span [{b[0]}, {b[-1]})")
    idx = np.searchsorted(b, xa, side="right") - 1
    return _scalarize(medium.speeds[idx], x)


class PiecewiseLinearPath:
    """Increasing polygon through the knots ``(k / 2**N, X_k)``."""

    def __init__(self, grid: GridPath):
        if not isinstance(grid, GridPath):
            raise InvalidGrid("a polygon is built from a GridPath")
        self.grid = grid

    @property
    def level(self) -> int:
        return self.grid.level

    @property
    def knot_times(self) -> np.ndarray:
        return self.grid.knot_times

    @property
    def knot_values(self) -> np.ndarray:
        return self.grid.knots

    @property
    def domain(self):
        return self.grid.window

    @property
    def range(self):
        return float(self.grid.knots[0]), float(self.grid.knots[-1])

    def __call__(self, tau):
        return interpolate(self, tau)

    def __repr__(self):
        return f"PiecewiseLinearPath(level={self.level}, domain={self.domain})"


def interpolate(pl: PiecewiseLinearPath, tau):
    """Convex combination of the two knots bracketing ``tau``.

    For ``tau`` in ``[t_{k-1}, t_k)`` the weight on ``X_{k-1}`` is
    ``alpha = (t_k - tau) * 2**N``.
    """
    ta = np.asarray(tau, dtype=float)
    g = pl.grid
    scale = 2.0 ** g.level
    lo, hi = g.window
    if np.any(ta < lo) or np.any(ta > hi) or np.any(np.isnan(ta)):
        raise OutOfWindow(f"time outside polygon domain [{lo}, {hi}]")
    # scaling by a power of two is exact, so the cell lookup is exact
    s = ta * scale
    i = np.floor(s).astype(np.int64) - g.k_lo          # offset of t_{k-1}
    i = np.minimum(i, g.k_hi - g.k_lo - 1)             # tau == right end
    alpha = (i + g.k_lo + 1) - s
    knots = g.knots
    out = alpha * knots[i] + (1.0 - alpha) * knots[i + 1]
    return _scalarize(out, tau)


def inverse(pl: PiecewiseLinearPath, x):
    """Exact inverse of the polygon: knot search plus one linear solve."""
    xa = np.asarray(x, dtype=float)
    g = pl.grid
    knots = g.knots
    if np.any(xa < knots[0]) or np.any(xa > knots[-1]) or np.any(np.isnan(xa)):
        raise OutOfRange(f"x outside polygon range [{knots[0]}, {knots[-1]}]")
    i = np.searchsorted(knots, xa, side="right") - 1   # X_i <= x < X_{i+1}
    i = np.minimum(i, knots.size - 2)
    frac = (xa - knots[i]) / g.increments[i]
    out = (i + g.k_lo + frac) * g.dt
    return _scalarize(out, x)


def polygon_at_level(path, level: int) -> PiecewiseLinearPath:
    """Polygon of ``path`` at ``level``.

    A :class:`JumpPath` is sampled at the level-``N`` grid times; a
    :class:`GridPath` is coarsened (never re-sampled).
    """
    if isinstance(path, JumpPath):
        return PiecewiseLinearPath(increments_at_level(path, level))
    if isinstance(path, GridPath):
        return PiecewiseLinearPath(coarsen(path, level))
    if isinstance(path, PiecewiseLinearPath):
        return PiecewiseLinearPath(coarsen(path.grid, level))
    raise TypeError(f"cannot build a polygon from {type(path).__name__}")
