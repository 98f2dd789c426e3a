"""Transport along characteristics and Monte Carlo convergence of solutions.

``U_N(t, x) = u0(gamma_N(0; x, t))`` solves the transport equation in the
level-``N`` layered medium; ``U(t, x) = u0(Gamma(0; x, t))`` is its limit.
For the Gamma driver the limit is replaced by the finest-level surrogate
``U_{N_ref}``.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .characteristics import gamma_discrete, gamma_limit
from .dyadic_medium import polygon_at_level
from .errors import (
    BadExponent,
    BadLevel,
    BadParameter,
    GoupillaudError,
    GridMismatch,
    InsufficientWindow,
    OutOfRange,
    OutOfWindow,
)
from .initial_data import InitialData
from .levy_paths import GridPath, JumpPath, SubordinatorSpec, evaluate, replica_seed, sample_path

__all__ = [
    "Box",
    "EvaluationGrid",
    "SolutionField",
    "ErrorReport",
    "auto_window",
    "solve_discrete",
    "solve_limit",
    "solve_reference",
    "lp_error",
    "mc_expected_error",
    "check_decay",
    "jump_gap_flatness",
    "flat_runs",
]


@dataclass(frozen=True)
class Box:
    """Compact space-time box ``[x0, x1] x [t0, t1]``."""

    x0: float
    x1: float
    t0: float
    t1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.t0 < self.t1):
            raise BadParameter(f"degenerate box {self}")

    @property
    def area(self):
        return (self.x1 - self.x0) * (self.t1 - self.t0)


@dataclass(frozen=True, eq=False)
class EvaluationGrid:
    """Tensor grid of increasing ``xs`` and ``ts`` samples.

    Grids built by :meth:`midpoints` are cell centres of a uniform
    subdivision, which is what :func:`lp_error` integrates over.
    """

    xs: np.ndarray
    ts: np.ndarray

    def __post_init__(self):
        xs = np.array(self.xs, dtype=float).reshape(-1)
        ts = np.array(self.ts, dtype=float).reshape(-1)
        if xs.size == 0 or ts.size == 0:
            raise BadParameter("evaluation grid must be nonempty")
        if np.any(np.diff(xs) <= 0) or np.any(np.diff(ts) <= 0):
            raise BadParameter("evaluation grid samples must be increasing")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ts", ts)

    @classmethod
    def midpoints(cls, box: Box, nx=512, nt=257):
        dx = (box.x1 - box.x0) / nx
        dt = (box.t1 - box.t0) / nt
        return cls(box.x0 + dx * (np.arange(nx) + 0.5), box.t0 + dt * (np.arange(nt) + 0.5))

    @property
    def shape(self):
        return (self.ts.size, self.xs.size)

    def same_as(self, other) -> bool:
        return np.array_equal(self.xs, other.xs) and np.array_equal(self.ts, other.ts)


@dataclass(eq=False)
class SolutionField:
    """``values[i, j] = U(ts[i], xs[j])`` plus provenance."""

    grid: EvaluationGrid
    values: np.ndarray
    provenance: dict = field(default_factory=dict)

    @property
    def xs(self):
        return self.grid.xs

    @property
    def ts(self):
        return self.grid.ts


def auto_window(box: Box, drift: float, tau_max=0.0, margin=1.0):
    """Integer time window large enough for every characteristic foot in ``box``.

    A subordinator with drift ``d`` satisfies ``X(s) >= d s`` for ``s >= 0``
    and ``X(s) <= d s`` for ``s <= 0``, so ``X*(x)`` lies between ``0`` and
    ``x / d``.  The window is widened by ``max|t| + max|tau| + margin`` on the
    side the shift moves towards, then rounded outward to integers so that
    every dyadic level has knots on both ends.
    """
    t_span = max(abs(box.t0), abs(box.t1))
    lo = min(box.x0, 0.0) / drift - t_span - abs(tau_max) - margin
    hi = max(box.x1, 0.0) / drift + t_span + abs(tau_max) + margin
    return float(math.floor(lo)), float(math.ceil(hi))


def _check_u0(u0):
    if not isinstance(u0, InitialData):
        raise BadParameter("u0 must be an InitialData instance")


def solve_discrete(path, level: int, u0: InitialData, grid: EvaluationGrid) -> SolutionField:
    """``U_N(t, x) = u0(gamma_N(0; x, t))`` on ``grid``."""
    _check_u0(u0)
    pl = polygon_at_level(path, level)
    foot = gamma_discrete(pl, 0.0, grid.xs[None, :], grid.ts[:, None])
    return SolutionField(grid, u0(foot), {"level": int(level), "seed": path.seed})


def solve_limit(path: JumpPath, u0: InitialData, grid: EvaluationGrid) -> SolutionField:
    """``U(t, x) = u0(Gamma(0; x, t))`` on ``grid``."""
    _check_u0(u0)
    if not isinstance(path, JumpPath):
        raise BadParameter("the exact limit needs a JumpPath; use solve_reference")
    foot = gamma_limit(path, 0.0, grid.xs[None, :], grid.ts[:, None])
    return SolutionField(grid, u0(foot), {"level": "limit", "seed": path.seed})


def solve_reference(path, u0: InitialData, grid: EvaluationGrid) -> SolutionField:
    """Exact limit for a JumpPath, finest-level surrogate for a GridPath."""
    if isinstance(path, GridPath):
        field_ = solve_discrete(path, path.level, u0, grid)
        field_.provenance["level"] = f"surrogate(N_ref={path.level})"
        return field_
    return solve_limit(path, u0, grid)


def lp_error(a: SolutionField, b: SolutionField, p: float, box: Box | None = None) -> float:
    """Midpoint-rule ``L^p(K)`` distance between two fields on the same grid.

    Every grid node with coordinates inside ``box`` stands for one cell of
    area ``dx * dt`` (uniform spacing assumed).
    """
    if not p >= 1 or not math.isfinite(p):
        raise BadExponent(f"p must be a finite real >= 1, got {p}")
    if not a.grid.same_as(b.grid):
        raise GridMismatch("fields are sampled on different evaluation grids")
    xs, ts = a.xs, a.ts
    dx = xs[1] - xs[0] if xs.size > 1 else None
    dt = ts[1] - ts[0] if ts.size > 1 else None
    if dx is None or dt is None:
        raise GridMismatch("lp_error needs at least two samples per axis")
    if box is None:
        box = Box(xs[0] - dx / 2, xs[-1] + dx / 2, ts[0] - dt / 2, ts[-1] + dt / 2)
    tol = 1e-9 * max(dx, dt)
    if (box.x0 < xs[0] - dx / 2 - tol or box.x1 > xs[-1] + dx / 2 + tol
            or box.t0 < ts[0] - dt / 2 - tol or box.t1 > ts[-1] + dt / 2 + tol):
        raise OutOfRange(f"box {box} is not covered by the evaluation grid")
    sx = (xs >= box.x0) & (xs <= box.x1)
    st = (ts >= box.t0) & (ts <= box.t1)
    diff = np.abs(a.values[np.ix_(st, sx)] - b.values[np.ix_(st, sx)])
    return float((np.sum(diff ** p) * dx * dt) ** (1.0 / p))


@dataclass
class ErrorReport:
    """Per-replica ``L^p`` errors and their Monte Carlo summary.

    ``errors[r, i, j]`` is the error of replica ``r`` at ``levels[i]`` for
    exponent ``ps[j]``; failed replicas hold NaN and are listed in
    ``failures`` as ``(replica, message)``.
    """

    levels: list
    ps: list
    errors: np.ndarray
    surrogate: bool = False
    n_ref: int | None = None
    master_seed: int | None = None
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> np.ndarray:
        return ~np.isnan(self.errors[:, 0, 0])

    @property
    def replicas(self) -> int:
        return int(self.ok.sum())

    @property
    def mean(self) -> np.ndarray:
        return self.errors[self.ok].mean(axis=0)

    @property
    def stderr(self) -> np.ndarray:
        good = self.errors[self.ok]
        if good.shape[0] < 2:
            return np.full(good.shape[1:], np.nan)
        return good.std(axis=0, ddof=1) / math.sqrt(good.shape[0])

    @property
    def label(self) -> str:
        return f"surrogate(N_ref={self.n_ref})" if self.surrogate else "exact"

    def rows(self):
        """``(N, mean, stderr, R, p)`` tuples, grouped by ``p``."""
        mean, se, r = self.mean, self.stderr, self.replicas
        return [(n, float(mean[i, j]), float(se[i, j]), r, p)
                for j, p in enumerate(self.ps) for i, n in enumerate(self.levels)]


def _replica(task):
    spec, u0, ps, box, levels, grid, window, n_ref, master_seed, r = task
    try:
        path = sample_path(spec, window, replica_seed(master_seed, r), n_ref=n_ref)
        ref = solve_reference(path, u0, grid)
        out = np.empty((len(levels), len(ps)))
        for i, n in enumerate(levels):
            approx = solve_discrete(path, n, u0, grid)
            for j, p in enumerate(ps):
                out[i, j] = lp_error(approx, ref, p, box)
        return out, None
    except (OutOfWindow, OutOfRange) as exc:
        exc = InsufficientWindow(f"window {window} too small for box {box}: {exc}")
        return np.full((len(levels), len(ps)), np.nan), f"{type(exc).__name__}: {exc}"
    except GoupillaudError as exc:
        return np.full((len(levels), len(ps)), np.nan), f"{type(exc).__name__}: {exc}"


def mc_expected_error(spec: SubordinatorSpec, u0: InitialData, ps, box: Box, levels,
                      replicas: int, master_seed: int, *, n_ref=14, grid_shape=(512, 257),
                      window=None, workers=1) -> ErrorReport:
    """Mean ``L^p(K)`` error between level-``N`` and limit solutions.

    Replica ``r`` samples its path from ``replica_seed(master_seed, r)``;
    results are reduced in replica order, so they do not depend on
    ``workers``.
    """
    _check_u0(u0)
    if replicas < 2:
        raise BadParameter(f"need at least 2 replicas, got {replicas}")
    levels = [int(n) for n in levels]
    if not levels:
        raise BadLevel("levels must be nonempty")
    if spec.is_gamma and max(levels) >= n_ref:
        raise BadLevel(f"levels must stay below N_ref={n_ref} for the Gamma driver")
    ps = [float(p) for p in np.atleast_1d(ps)]
    for p in ps:
        if not p >= 1:
            raise BadExponent(f"p must be >= 1, got {p}")
    if window is None:
        window = auto_window(box, spec.drift)
    grid = EvaluationGrid.midpoints(box, *grid_shape)
    tasks = [(spec, u0, ps, box, levels, grid, window, n_ref, master_seed, r)
             for r in range(replicas)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_replica, tasks))
    else:
        results = [_replica(t) for t in tasks]
    errors = np.stack([res for res, _ in results])
    failures = [(r, msg) for r, (_, msg) in enumerate(results) if msg is not None]
    return ErrorReport(levels, ps, errors, surrogate=spec.is_gamma,
                       n_ref=n_ref if spec.is_gamma else None,
                       master_seed=master_seed, failures=failures)


def check_decay(report: ErrorReport, ratio=0.1, n_se=2.0):
    """Monotone-decay verdict per exponent.

    Means must not increase from one level to the next by more than
    ``n_se`` combined standard errors, and the last mean must be below
    ``ratio`` times the first.  Returns ``{p: (passed, detail)}``.
    """
    mean, se = report.mean, report.stderr
    out = {}
    for j, p in enumerate(report.ps):
        m, s = mean[:, j], se[:, j]
        rises = [(report.levels[i], report.levels[i + 1], m[i + 1] - m[i])
                 for i in range(len(m) - 1)
                 if m[i + 1] - m[i] > n_se * math.hypot(s[i], s[i + 1])]
        final = m[-1] / m[0] if m[0] > 0 else 0.0
        passed = not rises and final < ratio and bool(np.all(m >= 0))
        out[p] = (passed, {"rises": rises, "ratio": final})
    return out


def jump_gap_flatness(path: JumpPath, u0: InitialData, t: float, samples=10):
    """Spread of ``U(t, .)`` over interior samples of every usable jump gap.

    For ``x`` in a gap ``(X(s-), X(s)]`` the generalized inverse is the jump
    time ``s``, so ``Gamma(0; x, t) = X(s - t)`` and ``U(t, .)`` is constant
    there.  Gaps whose foot ``s - t`` leaves the window are skipped.  Returns
    a list of ``(s, gap_lo, gap_hi, max |U - U_first|)``.
    """
    out = []
    for s in path.times:
        if s - t < path.t_lo or s - t > path.t_hi:
            continue
        lo = float(path._left[np.searchsorted(path.times, s)])
        hi = float(evaluate(path, s))
        xs = lo + (hi - lo) * (np.arange(1, samples + 1) / (samples + 1))
        vals = u0(gamma_limit(path, 0.0, xs, t))
        out.append((float(s), lo, hi, float(np.max(np.abs(vals - vals[0])))))
    return out


def flat_runs(values, xs, atol=0.0):
    """Maximal runs of equal consecutive samples, as ``(x_start, x_end)`` pairs."""
    values = np.asarray(values)
    same = np.abs(np.diff(values)) <= atol
    runs, start = [], None
    for i, eq in enumerate(same):
        if eq and start is None:
            start = i
        elif not eq and start is not None:
            runs.append((float(xs[start]), float(xs[i])))
            start = None
    if start is not None:
        runs.append((float(xs[start]), float(xs[-1])))
    return runs
