"""Discrete and limiting characteristic curves.

Every characteristic is a time shift of one reference curve: the polygon
``xi_N`` at level ``N`` for the discrete medium, or the càdlàg path ``X``
itself in the limit::

    gamma_N(tau; x, t) = xi_N(tau + xi_N^{-1}(x) - t)
    Gamma(tau; x, t)   = X(tau + X*(x) - t)

with ``X*`` the generalized inverse.  Nothing here extrapolates: a shifted
time outside the simulated window raises ``OutOfWindow``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .dyadic_medium import PiecewiseLinearPath, interpolate, inverse, polygon_at_level
from .errors import BadParameter, OutOfWindow
from .levy_paths import JumpPath, evaluate, generalized_inverse, left_limit

__all__ = [
    "Kind",
    "Characteristic",
    "gamma_discrete",
    "gamma_limit",
    "gamma_limit_left",
    "is_continuity_point",
    "convergence_probe",
    "probe_batch",
]


def _out(arr, *args):
    if np.broadcast(*args).ndim == 0:
        return arr.item() if isinstance(arr, (np.ndarray, np.generic)) else arr
    return arr


def _shift(tau, inv, t):
    # (tau - t) first: exact for dyadic tau, t, so shifting both by h is exact
    return (np.asarray(tau, dtype=float) - np.asarray(t, dtype=float)) + inv


def gamma_discrete(pl: PiecewiseLinearPath, tau, x, t):
    """Discrete characteristic through ``(x, t)`` evaluated at time ``tau``."""
    s = _shift(tau, inverse(pl, x), t)
    try:
        out = interpolate(pl, s)
    except OutOfWindow as exc:
        raise OutOfWindow(f"shifted time escapes the polygon domain {pl.domain}; "
                          "enlarge the window") from exc
    # the curve passes through its anchor exactly, not up to rounding
    out = np.where(np.asarray(tau) == np.asarray(t), np.asarray(x, dtype=float), out)
    return _out(out, tau, x, t)


def gamma_limit(path: JumpPath, tau, x, t):
    """Limiting characteristic (right-continuous value at a jump)."""
    s = _shift(tau, generalized_inverse(path, x), t)
    try:
        out = evaluate(path, s)
    except OutOfWindow as exc:
        raise OutOfWindow(f"shifted time escapes the path window {path.window}; "
                          "enlarge the window") from exc
    return _out(out, tau, x, t)


def gamma_limit_left(path: JumpPath, tau, x, t):
    """Left limit in ``tau`` of the limiting characteristic."""
    s = _shift(tau, generalized_inverse(path, x), t)
    return _out(left_limit(path, s), tau, x, t)


def is_continuity_point(path: JumpPath, tau0, x, t):
    """True where ``tau0 + X*(x) - t`` is not a stored jump time.

    Jump times are stored, not recomputed, so exact comparison is meaningful.
    """
    s = _shift(tau0, generalized_inverse(path, x), t)
    if np.any(s < path.t_lo) or np.any(s > path.t_hi):
        raise OutOfWindow(f"shifted time escapes the path window {path.window}")
    return _out(~np.isin(s, path.times), tau0, x, t)


class Kind(enum.Enum):
    DISCRETE = "discrete"
    LIMIT = "limit"


@dataclass(frozen=True)
class Characteristic:
    """The curve ``tau -> gamma(tau; x, t)`` through an anchor point.

    ``source`` is a :class:`PiecewiseLinearPath` for the discrete kind and a
    :class:`JumpPath` for the limit kind.
    """

    source: object
    x: float
    t: float

    def __post_init__(self):
        if not isinstance(self.source, (PiecewiseLinearPath, JumpPath)):
            raise BadParameter("source must be a PiecewiseLinearPath or a JumpPath")

    @property
    def kind(self) -> Kind:
        return Kind.LIMIT if isinstance(self.source, JumpPath) else Kind.DISCRETE

    @property
    def level(self):
        return None if self.kind is Kind.LIMIT else self.source.level

    def __call__(self, tau):
        if self.kind is Kind.LIMIT:
            return gamma_limit(self.source, tau, self.x, self.t)
        return gamma_discrete(self.source, tau, self.x, self.t)

    def left(self, tau):
        if self.kind is Kind.LIMIT:
            return gamma_limit_left(self.source, tau, self.x, self.t)
        return self(tau)


def convergence_probe(path: JumpPath, tau0, x, t, levels):
    """``[(N, |gamma_N(tau0; x, t) - Gamma(tau0; x, t)|), ...]``.

    Gaps tend to zero at continuity points; at a discontinuity they settle
    inside the jump gap instead, which is allowed.
    """
    target = gamma_limit(path, tau0, x, t)
    out = []
    for n in levels:
        pl = polygon_at_level(path, n)
        out.append((int(n), abs(gamma_discrete(pl, tau0, x, t) - target)))
    return out


def probe_batch(path: JumpPath, tau0, xs, ts, level):
    """Continuity flags and gaps at ``level`` for many anchor points.

    Returns ``(flags, gaps)`` arrays aligned with ``xs``/``ts``.
    """
    xs = np.asarray(xs, dtype=float)
    ts = np.asarray(ts, dtype=float)
    pl = polygon_at_level(path, level)
    flags = np.atleast_1d(is_continuity_point(path, tau0, xs, ts))
    gaps = np.abs(gamma_discrete(pl, tau0, xs, ts) - gamma_limit(path, tau0, xs, ts))
    return flags, np.atleast_1d(gaps)
