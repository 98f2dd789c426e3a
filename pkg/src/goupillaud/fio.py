"""Oscillatory-integral representation of the transported solution.

``U = (1/2pi) iint exp(i (g - y) eta) u0(y) dy deta`` is evaluated as an
iterated integral: the ``y`` integral is ``uhat0(eta)`` in closed form and
only the ``eta`` integral is discretized (trapezoid rule on ``[-B, B]``).
"""
from __future__ import annotations

import math

import numpy as np

from .errors import BadBandwidth, BadParameter, BadSteps
from .initial_data import InitialData

__all__ = ["fio_evaluate", "fio_tolerance"]


def _check(u0, bandwidth, steps):
    if not u0.integrable_transform:
        raise BadParameter(f"{u0.name} has no absolutely integrable transform")
    if not (bandwidth > 0 and math.isfinite(bandwidth)):
        raise BadBandwidth(f"bandwidth must be positive and finite, got {bandwidth}")
    if int(steps) != steps or steps < 2:
        raise BadSteps(f"steps must be an integer >= 2, got {steps}")


def fio_evaluate(g, u0: InitialData, bandwidth=200.0, steps=2**14, full_output=False):
    """Trapezoid approximation of ``(1/2pi) int_{-B}^{B} exp(i g eta) uhat0(eta) deta``.

    Parameters
    ----------
    g : float or array_like
        Value(s) of the limiting characteristic foot ``Gamma(0; x, t)``.
    u0 : InitialData
    bandwidth : float
        Truncation ``B`` of the frequency axis.
    steps : int
        Number of trapezoid nodes ``M`` (including both endpoints).
    full_output : bool
        Also return the imaginary part, which should vanish for real ``u0``.

    Returns
    -------
    real : float or ndarray
    imag : float or ndarray
        Only if ``full_output``.
    """
    _check(u0, bandwidth, steps)
    steps = int(steps)
    eta = np.linspace(-bandwidth, bandwidth, steps)
    uhat = u0.transform(eta)
    weights = np.full(steps, 2.0 * bandwidth / (steps - 1))
    weights[0] *= 0.5
    weights[-1] *= 0.5
    wu = weights * uhat
    ga = np.asarray(g, dtype=float)
    flat = ga.reshape(-1)
    out = np.empty(flat.size, dtype=complex)
    # chunked to bound memory; a row-wise sum (not a BLAS product) keeps each
    # point's summation order independent of how many points are batched
    chunk = max(1, 2**22 // steps)
    for i in range(0, flat.size, chunk):
        phase = np.exp(1j * np.outer(flat[i:i + chunk], eta))
        out[i:i + chunk] = (phase * wu).sum(axis=1)
    out = (out / (2.0 * math.pi)).reshape(ga.shape)
    if ga.ndim == 0:
        re, im = float(out.real), float(out.imag)
    else:
        re, im = out.real, out.imag
    return (re, im) if full_output else re


def fio_tolerance(g, u0: InitialData, bandwidth=200.0, steps=2**14):
    """Error estimate for :func:`fio_evaluate` against ``u0(g)``.

    Sum of the truncated tail ``int_{|eta|>B} |uhat0| / 2pi`` (a rigorous
    bound), the leading Euler-Maclaurin endpoint term of the trapezoid rule
    (``h^2/12 |f'(B) - f'(-B)|`` with ``f = e^{i g eta} uhat0``, bounded
    termwise) and a roundoff allowance.
    """
    _check(u0, bandwidth, steps)
    h = 2.0 * bandwidth / (int(steps) - 1)
    tail = u0.transform_tail_bound(bandwidth) / (2.0 * math.pi)
    ends = np.array([-bandwidth, bandwidth])
    uhat_end = np.abs(u0.transform(ends)).max()
    duhat_end = np.abs((u0.transform(ends + h) - u0.transform(ends - h)) / (2 * h)).max()
    deriv = np.abs(np.asarray(g, dtype=float)) * uhat_end + duhat_end
    endpoint = h * h / 12.0 * 2.0 * deriv / (2.0 * math.pi)
    roundoff = 64 * np.finfo(float).eps * (1.0 + u0.abs_moment(0))
    out = tail + endpoint + roundoff
    return float(out) if np.ndim(out) == 0 else out
