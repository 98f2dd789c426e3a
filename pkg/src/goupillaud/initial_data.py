"""Initial profiles ``u0`` with closed-form Fourier transforms.

Transform convention: ``uhat(eta) = int exp(-i y eta) u(y) dy``; the inverse
carries ``1 / (2 pi)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import BadParameter

__all__ = [
    "InitialData",
    "Triangular",
    "Gaussian",
    "SmoothedStep",
    "closed_form_transform",
    "from_name",
]

# below this |eta * width| the removable singularity is handled by a series
_SERIES_CUTOFF = 1e-4


class InitialData:
    """Base class: callable profile plus its Fourier transform."""

    name = "base"
    #: False when the transform is not absolutely integrable (FIO unavailable)
    integrable_transform = True

    def __call__(self, y):
        raise NotImplementedError

    def transform(self, eta):
        raise NotImplementedError

    @property
    def bounds(self):
        """``(min u0, max u0)`` over the real line."""
        raise NotImplementedError

    def transform_tail_bound(self, bandwidth):
        """Upper bound for ``int_{|eta| > B} |uhat(eta)| d eta``."""
        raise NotImplementedError

    def abs_moment(self, n):
        """Upper bound for ``int |y|**n |u0(y)| dy``."""
        raise NotImplementedError

    def flat_mask(self, y):
        """True where ``u0`` is locally constant (outside its support)."""
        return np.zeros(np.shape(y), dtype=bool)


@dataclass(frozen=True)
class Triangular(InitialData):
    """Hat function of height ``height`` on ``[center - half_width, center + half_width]``."""

    center: float = 0.0
    half_width: float = 1.0
    height: float = 1.0
    name = "triangular"

    def __post_init__(self):
        if not self.half_width > 0:
            raise BadParameter(f"half_width must be > 0, got {self.half_width}")

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        out = self.height * np.maximum(0.0, 1.0 - np.abs(y - self.center) / self.half_width)
        return float(out) if out.ndim == 0 else out

    def transform(self, eta):
        # h w sinc^2(w eta / 2) exp(-i a eta)
        eta = np.asarray(eta, dtype=float)
        w = self.half_width
        z = 0.5 * w * eta
        small = np.abs(w * eta) < _SERIES_CUTOFF
        z_safe = np.where(small, 1.0, z)
        sinc = np.where(small, 1.0 - z * z / 6.0, np.sin(z_safe) / z_safe)
        out = self.height * w * sinc * sinc * np.exp(-1j * self.center * eta)
        return complex(out) if out.ndim == 0 else out

    @property
    def bounds(self):
        return (min(0.0, self.height), max(0.0, self.height))

    def transform_tail_bound(self, bandwidth):
        # |uhat| <= 4 |h| / (w eta^2)
        return 8.0 * abs(self.height) / (self.half_width * bandwidth)

    def abs_moment(self, n):
        return (abs(self.center) + self.half_width) ** n * abs(self.height) * self.half_width

    def flat_mask(self, y):
        return np.abs(np.asarray(y, dtype=float) - self.center) >= self.half_width


@dataclass(frozen=True)
class Gaussian(InitialData):
    """Normal density with mean ``center`` and standard deviation ``width``.

    Unit mass, so ``uhat(0) = 1`` and ``uhat(eta) = exp(-width^2 eta^2 / 2)``
    for ``center = 0``.
    """

    center: float = 0.0
    width: float = 1.0
    name = "gaussian"

    def __post_init__(self):
        if not self.width > 0:
            raise BadParameter(f"width must be > 0, got {self.width}")

    def __call__(self, y):
        z = (np.asarray(y, dtype=float) - self.center) / self.width
        out = np.exp(-0.5 * z * z) / (self.width * math.sqrt(2.0 * math.pi))
        return float(out) if out.ndim == 0 else out

    def transform(self, eta):
        eta = np.asarray(eta, dtype=float)
        out = np.exp(-0.5 * (self.width * eta) ** 2 - 1j * self.center * eta)
        return complex(out) if out.ndim == 0 else out

    @property
    def bounds(self):
        return (0.0, 1.0 / (self.width * math.sqrt(2.0 * math.pi)))

    def transform_tail_bound(self, bandwidth):
        s = self.width
        return math.sqrt(2.0 * math.pi) / s * special.erfc(s * bandwidth / math.sqrt(2.0))

    def abs_moment(self, n):
        # E|Y|^n <= 2^(n-1) (|c|^n + s^n E|Z|^n) for n >= 1
        if n == 0:
            return 1.0
        ez = 2 ** (n / 2) * special.gamma((n + 1) / 2) / math.sqrt(math.pi)
        return 2 ** (n - 1) * (abs(self.center) ** n + self.width ** n * ez)


@dataclass(frozen=True)
class SmoothedStep(InitialData):
    """``(1 + erf((y - center) / width)) / 2``.

    Bounded and continuous, but its transform is a distribution, so the
    oscillatory-integral representation does not apply.  ``transform``
    returns the regular part ``exp(-i c eta - w^2 eta^2 / 4) / (i eta)``,
    valid for ``eta != 0``.
    """

    center: float = 0.0
    width: float = 1.0
    name = "smoothed_step"
    integrable_transform = False

    def __post_init__(self):
        if not self.width > 0:
            raise BadParameter(f"width must be > 0, got {self.width}")

    def __call__(self, y):
        out = 0.5 * (1.0 + special.erf((np.asarray(y, dtype=float) - self.center) / self.width))
        return float(out) if np.ndim(out) == 0 else out

    def transform(self, eta):
        eta = np.asarray(eta, dtype=float)
        if np.any(eta == 0):
            raise BadParameter("the smoothed step transform is singular at eta = 0")
        out = np.exp(-1j * self.center * eta - 0.25 * (self.width * eta) ** 2) / (1j * eta)
        return complex(out) if out.ndim == 0 else out

    @property
    def bounds(self):
        return (0.0, 1.0)

    def transform_tail_bound(self, bandwidth):
        return math.inf

    def abs_moment(self, n):
        return math.inf


def closed_form_transform(u0: InitialData, eta):
    """Exact ``uhat0(eta)``."""
    return u0.transform(eta)


def from_name(name: str, **params) -> InitialData:
    kinds = {"triangular": Triangular, "gaussian": Gaussian, "smoothed_step": SmoothedStep}
    try:
        cls = kinds[name]
    except KeyError:
        raise BadParameter(f"unknown initial data {name!r}; choose from {sorted(kinds)}")
    return cls(**params)
