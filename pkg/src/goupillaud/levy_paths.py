"""Increasing Lévy paths with positive drift.

Two drivers are supported:

* compound Poisson with fixed jump size, represented exactly by a
  :class:`JumpPath` (drift plus a finite, sorted list of jumps);
* Gamma subordinator, which has infinitely many jumps on every interval
  and is therefore only represented on a fine dyadic grid
  (:class:`GridPath` at a reference level).

Time is two-sided: a path lives on a window ``[t_lo, t_hi]`` containing
0 and is anchored at ``X(0) = 0``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadLevel,
    BadParameter,
    BadWindow,
    InvalidGrid,
    NonPositiveDrift,
    OutOfRange,
    OutOfWindow,
)

__all__ = [
    "DriverKind",
    "SubordinatorSpec",
    "JumpPath",
    "GridPath",
    "make_rng",
    "replica_seed",
    "sample_compound_poisson",
    "sample_gamma_grid",
    "sample_path",
    "evaluate",
    "left_limit",
    "generalized_inverse",
    "increments_at_level",
    "coarsen",
    "level_index_window",
]

SEED_MAX = 2**64


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Return a PCG64 generator for ``seed`` and an optional stream key.

    The stream for ``(seed, k1, k2, ...)`` is
    ``SeedSequence(seed, spawn_key=(k1, k2, ...))``, i.e. the same stream
    ``SeedSequence(seed).spawn(...)`` would hand to child ``k1``.  Replica
    ``r`` of a Monte Carlo run therefore draws from ``make_rng(master, r)``
    regardless of which worker runs it or in what order.
    """
    if not 0 <= int(seed) < SEED_MAX:
        raise BadParameter(f"seed must be a 64-bit unsigned integer, got {seed}")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def replica_seed(master_seed: int, replica: int) -> int:
    """64-bit path seed for Monte Carlo replica ``replica``.

    First word of ``SeedSequence(master_seed, spawn_key=(replica,))``.
    """
    if not 0 <= int(master_seed) < SEED_MAX:
        raise BadParameter(f"seed must be a 64-bit unsigned integer, got {master_seed}")
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(int(replica),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


class DriverKind(enum.Enum):
    COMPOUND_POISSON = "compound_poisson"
    GAMMA = "gamma"


@dataclass(frozen=True)
class SubordinatorSpec:
    """Law of the driving subordinator.

    Compound Poisson uses ``intensity`` (jumps per unit time, may be 0 for
    the drift-only case) and ``jump_size``.  Gamma uses ``shape`` (per unit
    time) and ``scale``, so that ``X(1) - drift ~ Gamma(shape, scale)``.
    """

    kind: DriverKind
    drift: float
    intensity: float = 0.0
    jump_size: float = 1.0
    shape: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        if not self.drift > 0:
            raise NonPositiveDrift(f"drift must be > 0, got {self.drift}")
        if self.kind is DriverKind.COMPOUND_POISSON:
            if not self.intensity >= 0:
                raise BadParameter(f"intensity must be >= 0, got {self.intensity}")
            if not self.jump_size > 0:
                raise BadParameter(f"jump_size must be > 0, got {self.jump_size}")
        else:
            if not self.shape > 0:
                raise BadParameter(f"shape must be > 0, got {self.shape}")
            if not self.scale > 0:
                raise BadParameter(f"scale must be > 0, got {self.scale}")

    @classmethod
    def compound_poisson(cls, intensity, jump_size, drift):
        return cls(DriverKind.COMPOUND_POISSON, float(drift),
                   intensity=float(intensity), jump_size=float(jump_size))

    @classmethod
    def gamma(cls, shape, scale, drift):
        return cls(DriverKind.GAMMA, float(drift), shape=float(shape), scale=float(scale))

    @classmethod
    def drift_only(cls, drift=1.0):
        return cls.compound_poisson(0.0, 1.0, drift)

    @property
    def is_gamma(self) -> bool:
        return self.kind is DriverKind.GAMMA

    @property
    def mean_rate(self) -> float:
        """E[X(1)]."""
        if self.is_gamma:
            return self.drift + self.shape * self.scale
        return self.drift + self.intensity * self.jump_size


def _check_window(window):
    t_lo, t_hi = float(window[0]), float(window[1])
    if not (math.isfinite(t_lo) and math.isfinite(t_hi)):
        raise BadWindow(f"window must be finite, got {window}")
    if not t_lo < t_hi:
        raise BadWindow(f"empty window [{t_lo}, {t_hi}]")
    if not t_lo <= 0.0 <= t_hi:
        raise BadWindow(f"window [{t_lo}, {t_hi}] does not contain 0")
    return t_lo, t_hi


@dataclass(frozen=True, eq=False)
class JumpPath:
    """Exact càdlàg path ``X(t) = d t + (jumps in (0, t])``, ``X(0) = 0``.

    For negative ``t`` the jumps in ``(t, 0]`` are subtracted instead.
    """

    drift: float
    times: np.ndarray
    sizes: np.ndarray
    t_lo: float
    t_hi: float
    seed: int | None = None
    _cum: np.ndarray = field(init=False, repr=False)
    _cum0: float = field(init=False, repr=False)
    _left: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.drift > 0:
            raise NonPositiveDrift(f"drift must be > 0, got {self.drift}")
        t_lo, t_hi = _check_window((self.t_lo, self.t_hi))
        times = np.array(self.times, dtype=float).reshape(-1)
        sizes = np.array(self.sizes, dtype=float).reshape(-1)
        if times.shape != sizes.shape:
            raise BadParameter("times and sizes must have the same length")
        if times.size:
            if np.any(np.diff(times) <= 0):
                raise BadParameter("jump times must be strictly increasing")
            if times[0] < t_lo or times[-1] > t_hi:
                raise BadParameter("jump times must lie inside the window")
            if np.any(sizes <= 0):
                raise BadParameter("jump sizes must be > 0")
        times.flags.writeable = False
        sizes.flags.writeable = False
        cum = np.concatenate(([0.0], np.cumsum(sizes)))
        cum.flags.writeable = False
        # jumps at times <= 0 are "before the anchor"
        i0 = int(np.searchsorted(times, 0.0, side="right"))
        cum0 = float(cum[i0])
        # X(T_i-) for each jump, increasing in i
        left = self.drift * times + (cum[:-1] - cum0)
        left.flags.writeable = False
        object.__setattr__(self, "t_lo", t_lo)
        object.__setattr__(self, "t_hi", t_hi)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "_cum", cum)
        object.__setattr__(self, "_cum0", cum0)
        object.__setattr__(self, "_left", left)

    @property
    def window(self):
        return (self.t_lo, self.t_hi)

    @property
    def n_jumps(self) -> int:
        return int(self.times.size)

    def _check_t(self, t):
        if np.any(t < self.t_lo) or np.any(t > self.t_hi) or np.any(np.isnan(t)):
            raise OutOfWindow(
                f"time outside window [{self.t_lo}, {self.t_hi}]")

    def __call__(self, t):
        return evaluate(self, t)

    def x_range(self):
        """Closure of the attained values, ``[X(t_lo), X(t_hi)]``."""
        return float(evaluate(self, self.t_lo)), float(evaluate(self, self.t_hi))


def _scalarize(arr, like):
    if np.ndim(like) == 0:
        return float(arr)
    return arr


def evaluate(path: JumpPath, t):
    """Right-continuous value ``X(t)``; accepts scalars or arrays."""
    ta = np.asarray(t, dtype=float)
    path._check_t(ta)
    idx = np.searchsorted(path.times, ta, side="right")
    out = path.drift * ta + (path._cum[idx] - path._cum0)
    return _scalarize(out, t)


def left_limit(path: JumpPath, t):
    """``lim_{s -> t-} X(s)``; equals :func:`evaluate` off the jump set."""
    ta = np.asarray(t, dtype=float)
    path._check_t(ta)
    idx = np.searchsorted(path.times, ta, side="left")
    out = path.drift * ta + (path._cum[idx] - path._cum0)
    return _scalarize(out, t)


def generalized_inverse(path: JumpPath, x):
    """Exact ``inf{t : X(t) >= x}``.

    Values inside a jump gap ``(X(s-), X(s)]`` map to the jump time ``s``;
    elsewhere the drift segment is inverted directly.
    """
    xa = np.asarray(x, dtype=float)
    lo, hi = path.x_range()
    if np.any(xa < lo) or np.any(xa > hi) or np.any(np.isnan(xa)):
        raise OutOfRange(f"value outside attained range [{lo}, {hi}]")
    # m = number of jumps whose left limit lies strictly below x
    m = np.searchsorted(path._left, xa, side="left")
    offset = path._cum[m] - path._cum0
    t = (xa - offset) / path.drift
    if path.n_jumps:
        prev = np.maximum(m - 1, 0)
        right = path._left[prev] + path.sizes[prev]
        in_gap = (m > 0) & (xa <= right)
        t = np.where(in_gap, path.times[prev], t)
    t = np.clip(t, path.t_lo, path.t_hi)
    return _scalarize(t, x)


@dataclass(frozen=True, eq=False)
class GridPath:
    """Increments ``dX_k`` of a path at dyadic level ``N``.

    Knot indices run over ``k_lo..k_hi`` (with ``k_lo <= 0 <= k_hi``); the
    increment ``dX_k`` for ``k = k_lo+1..k_hi`` covers ``[t_{k-1}, t_k]``
    with ``t_k = k / 2**N``.  ``increments[i]`` is ``dX_{k_lo+1+i}``.
    """

    level: int
    k_lo: int
    k_hi: int
    increments: np.ndarray
    seed: int | None = None
    _knots: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.level) != self.level or self.level < 0:
            raise BadLevel(f"level must be a nonnegative integer, got {self.level}")
        if not self.k_lo <= 0 <= self.k_hi or self.k_lo == self.k_hi:
            raise BadWindow(f"index window [{self.k_lo}, {self.k_hi}] must contain 0")
        inc = np.array(self.increments, dtype=float).reshape(-1)
        if inc.size != self.k_hi - self.k_lo:
            raise InvalidGrid(
                f"expected {self.k_hi - self.k_lo} increments, got {inc.size}")
        if not np.all(inc > 0) or not np.all(np.isfinite(inc)):
            raise InvalidGrid("increments must be finite and strictly positive")
        inc.flags.writeable = False
        n_neg = -self.k_lo
        pos = np.cumsum(inc[n_neg:])
        neg = -np.cumsum(inc[:n_neg][::-1])[::-1]
        knots = np.concatenate((neg, [0.0], pos))
        knots.flags.writeable = False
        object.__setattr__(self, "level", int(self.level))
        object.__setattr__(self, "k_lo", int(self.k_lo))
        object.__setattr__(self, "k_hi", int(self.k_hi))
        object.__setattr__(self, "increments", inc)
        object.__setattr__(self, "_knots", knots)

    @property
    def dt(self) -> float:
        return 2.0 ** -self.level

    @property
    def knots(self) -> np.ndarray:
        """``X_k`` for ``k = k_lo..k_hi``; ``X_0 = 0``."""
        return self._knots

    @property
    def knot_times(self) -> np.ndarray:
        return np.arange(self.k_lo, self.k_hi + 1) * self.dt

    @property
    def window(self):
        return (self.k_lo * self.dt, self.k_hi * self.dt)

    def increment(self, k: int) -> float:
        if not self.k_lo < k <= self.k_hi:
            raise OutOfWindow(f"increment index {k} outside ({self.k_lo}, {self.k_hi}]")
        return float(self.increments[k - self.k_lo - 1])

    def knot(self, k: int) -> float:
        if not self.k_lo <= k <= self.k_hi:
            raise OutOfWindow(f"knot index {k} outside [{self.k_lo}, {self.k_hi}]")
        return float(self._knots[k - self.k_lo])


def level_index_window(window, level: int):
    """Largest index window at ``level`` whose knots fit inside ``window``."""
    scale = 2.0 ** level
    return math.ceil(window[0] * scale), math.floor(window[1] * scale)


def sample_compound_poisson(spec: SubordinatorSpec, window, seed: int) -> JumpPath:
    """Drift plus a Poisson number of fixed-size jumps, uniform on ``window``."""
    if spec.kind is not DriverKind.COMPOUND_POISSON:
        raise BadParameter("sample_compound_poisson needs a compound Poisson spec")
    t_lo, t_hi = _check_window(window)
    rng = make_rng(seed)
    n = rng.poisson(spec.intensity * (t_hi - t_lo))
    times = np.unique(rng.uniform(t_lo, t_hi, size=n))
    if times.size < n:
        # coincident draws have probability 0; merge them into one jump
        counts = np.array([np.count_nonzero(times == s) for s in times])
        sizes = counts * spec.jump_size
    else:
        sizes = np.full(n, spec.jump_size)
    return JumpPath(spec.drift, times, sizes, t_lo, t_hi, seed=int(seed))


def sample_gamma_grid(spec: SubordinatorSpec, level: int, index_window, seed: int) -> GridPath:
    """Gamma subordinator with drift, sampled at dyadic ``level``.

    Each increment is ``d * dt + G`` with ``G ~ Gamma(shape * dt, scale)``,
    so sums of ``2**M`` consecutive increments follow the law of the
    coarser level exactly.
    """
    if spec.kind is not DriverKind.GAMMA:
        raise BadParameter("sample_gamma_grid needs a Gamma spec")
    if int(level) != level or level < 0:
        raise BadLevel(f"level must be a nonnegative integer, got {level}")
    k_lo, k_hi = int(index_window[0]), int(index_window[1])
    if not k_lo <= 0 <= k_hi or k_lo == k_hi:
        raise BadWindow(f"index window [{k_lo}, {k_hi}] must contain 0")
    dt = 2.0 ** -level
    rng = make_rng(seed)
    g = rng.gamma(spec.shape * dt, spec.scale, size=k_hi - k_lo)
    return GridPath(int(level), k_lo, k_hi, spec.drift * dt + g, seed=int(seed))


def sample_path(spec: SubordinatorSpec, window, seed: int, n_ref: int = 14):
    """Sample the reference path for ``spec``.

    Compound Poisson gives an exact :class:`JumpPath` on ``window``; Gamma
    gives a :class:`GridPath` at level ``n_ref`` covering ``window``.
    """
    if spec.is_gamma:
        _check_window(window)
        return sample_gamma_grid(spec, n_ref, level_index_window(window, n_ref), seed)
    return sample_compound_poisson(spec, window, seed)


def increments_at_level(path: JumpPath, level: int, index_window=None) -> GridPath:
    """``dX_k = X(t_k) - X(t_{k-1})`` on the level-``N`` grid."""
    if int(level) != level or level < 0:
        raise BadLevel(f"level must be a nonnegative integer, got {level}")
    level = int(level)
    if index_window is None:
        index_window = level_index_window(path.window, level)
    k_lo, k_hi = int(index_window[0]), int(index_window[1])
    if not k_lo <= 0 <= k_hi or k_lo == k_hi:
        raise BadWindow(f"index window [{k_lo}, {k_hi}] must contain 0")
    tk = np.arange(k_lo, k_hi + 1) * 2.0 ** -level
    values = evaluate(path, tk)
    return GridPath(level, k_lo, k_hi, np.diff(values), seed=path.seed)


def coarsen(grid: GridPath, level: int) -> GridPath:
    """Sum blocks of ``2**(grid.level - level)`` children into coarse increments."""
    if int(level) != level or level < 0 or level > grid.level:
        raise BadLevel(f"cannot coarsen level {grid.level} to level {level}")
    level = int(level)
    if level == grid.level:
        return grid
    m = 2 ** (grid.level - level)
    if grid.k_lo % m or grid.k_hi % m:
        raise BadWindow(
            f"index window [{grid.k_lo}, {grid.k_hi}] is not aligned with level {level}")
    coarse = grid.increments.reshape(-1, m).sum(axis=1)
    return GridPath(level, grid.k_lo // m, grid.k_hi // m, coarse, seed=grid.seed)
