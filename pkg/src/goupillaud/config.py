"""Flat ``key = value`` experiment configuration.

Blank lines and ``#`` comments are ignored.  Lists are comma separated;
``levels`` also accepts an inclusive range ``a..b``.  Every error names the
offending line.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, GoupillaudError
from .initial_data import Gaussian, InitialData, SmoothedStep, Triangular
from .levy_paths import SEED_MAX, SubordinatorSpec
from .transport import Box

__all__ = ["ExperimentConfig", "parse_config", "load_config", "EXAMPLE_CONFIG"]

EXAMPLE_CONFIG = """\
# driver: poisson | gamma | drift
driver = poisson
drift = 1
intensity = 1
jump_size = 1
shape = 1
scale = 1
master_seed = 12345
# window = -1, 4        (omit for an automatic window)
levels = 2..10
n_ref = 14
# u0: triangular | gaussian | smoothed_step
u0 = triangular
u0_center = 0
u0_width = 1
u0_height = 1
box = 0, 4, 0, 2
p = 1, 2
replicas = 64
grid = 512, 257
bandwidth = 200
steps = 16384
times = 1, 2, 3
x_range = -2, 8
nx_solve = 1001
fio_points = 100
probe_points = 1000
out = out
"""


@dataclass
class ExperimentConfig:
    driver: str = "poisson"
    drift: float = 1.0
    intensity: float = 1.0
    jump_size: float = 1.0
    shape: float = 1.0
    scale: float = 1.0
    master_seed: int = 12345
    window: tuple | None = None
    levels: list = field(default_factory=lambda: list(range(2, 11)))
    n_ref: int = 14
    u0: str = "triangular"
    u0_center: float = 0.0
    u0_width: float = 1.0
    u0_height: float = 1.0
    box: tuple = (0.0, 4.0, 0.0, 2.0)
    p: list = field(default_factory=lambda: [1.0, 2.0])
    replicas: int = 64
    grid: tuple = (512, 257)
    bandwidth: float = 200.0
    steps: int = 2**14
    times: list = field(default_factory=lambda: [1.0, 2.0, 3.0])
    x_range: tuple = (-2.0, 8.0)
    nx_solve: int = 1001
    fio_points: int = 100
    fio_threshold: float | None = None
    probe_points: int = 1000
    out: str = "out"
    lines: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def spec(self) -> SubordinatorSpec:
        if self.driver == "gamma":
            return SubordinatorSpec.gamma(self.shape, self.scale, self.drift)
        if self.driver == "drift":
            return SubordinatorSpec.drift_only(self.drift)
        return SubordinatorSpec.compound_poisson(self.intensity, self.jump_size, self.drift)

    @property
    def initial_data(self) -> InitialData:
        if self.u0 == "gaussian":
            return Gaussian(self.u0_center, self.u0_width)
        if self.u0 == "smoothed_step":
            return SmoothedStep(self.u0_center, self.u0_width)
        return Triangular(self.u0_center, self.u0_width, self.u0_height)

    @property
    def box_k(self) -> Box:
        return Box(*self.box)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def validate(self):
        def fail(key, msg):
            raise ConfigError(f"{key}: {msg}", line=self.lines.get(key))

        if self.driver not in ("poisson", "gamma", "drift"):
            fail("driver", f"unknown driver {self.driver!r}")
        if self.u0 not in ("triangular", "gaussian", "smoothed_step"):
            fail("u0", f"unknown initial data {self.u0!r}")
        try:
            self.spec
        except GoupillaudError as exc:
            # messages start with the parameter name, e.g. "shape must be > 0"
            key = str(exc).split()[0]
            fail(key if key in _PARSERS else "driver", str(exc))
        try:
            self.initial_data
        except GoupillaudError as exc:
            fail("u0_width", str(exc))
        if not 0 <= self.master_seed < SEED_MAX:
            fail("master_seed", "must be a 64-bit unsigned integer")
        if self.window is not None:
            lo, hi = self.window
            if not lo < hi:
                fail("window", "empty window")
            if not lo <= 0 <= hi:
                fail("window", "window must contain 0")
        if not self.levels:
            fail("levels", "at least one level is required")
        if any(n < 0 for n in self.levels):
            fail("levels", "levels must be nonnegative")
        if self.n_ref < 0:
            fail("n_ref", "must be nonnegative")
        if self.driver == "gamma" and max(self.levels) >= self.n_ref:
            fail("levels", f"Gamma driver needs every level < n_ref = {self.n_ref}")
        try:
            self.box_k
        except GoupillaudError:
            fail("box", "box must satisfy x0 < x1 and t0 < t1")
        if any(not p >= 1 for p in self.p) or not self.p:
            fail("p", "every exponent must be >= 1")
        if self.replicas < 1:
            fail("replicas", "need at least one replica")
        if min(self.grid) < 2:
            fail("grid", "need at least 2 samples per axis")
        if not self.bandwidth > 0:
            fail("bandwidth", "must be > 0")
        if self.steps < 2:
            fail("steps", "must be >= 2")
        if not self.times:
            fail("times", "at least one time is required")
        if not self.x_range[0] < self.x_range[1]:
            fail("x_range", "empty range")
        if self.nx_solve < 2:
            fail("nx_solve", "must be >= 2")
        if self.fio_points < 1:
            fail("fio_points", "must be >= 1")
        if self.probe_points < 0:
            fail("probe_points", "must be >= 0")
        return self


def _floats(text, n=None):
    vals = [float(v) for v in text.split(",") if v.strip()]
    if n is not None and len(vals) != n:
        raise ValueError(f"expected {n} comma-separated numbers")
    return vals


def _levels(text):
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(v) for v in text.split(",") if v.strip()]


def _window(text):
    if text.strip().lower() in ("auto", "none", ""):
        return None
    return tuple(_floats(text, 2))


def _opt_float(text):
    return None if text.strip().lower() in ("none", "") else float(text)


_PARSERS = {
    "driver": lambda s: s.strip().lower(),
    "drift": float,
    "intensity": float,
    "jump_size": float,
    "shape": float,
    "scale": float,
    "master_seed": int,
    "window": _window,
    "levels": _levels,
    "n_ref": int,
    "u0": lambda s: s.strip().lower(),
    "u0_center": float,
    "u0_width": float,
    "u0_height": float,
    "box": lambda s: tuple(_floats(s, 4)),
    "p": _floats,
    "replicas": int,
    "grid": lambda s: tuple(int(v) for v in s.split(",")),
    "bandwidth": float,
    "steps": int,
    "times": _floats,
    "x_range": lambda s: tuple(_floats(s, 2)),
    "nx_solve": int,
    "fio_points": int,
    "fio_threshold": _opt_float,
    "probe_points": int,
    "out": str.strip,
}


def parse_config(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    values = {}
    lines = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=n)
        if key not in _PARSERS:
            raise ConfigError(f"unknown key {key!r}", line=n)
        if key in values:
            raise ConfigError(f"duplicate key {key!r} (first set on line {lines[key]})", line=n)
        try:
            values[key] = _PARSERS[key](value.strip())
        except ValueError as exc:
            raise ConfigError(f"{key}: cannot parse {value.strip()!r} ({exc})", line=n)
        lines[key] = n
    cfg = dataclasses.replace(base or ExperimentConfig(), **values)
    cfg.lines = lines
    return cfg.validate()


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    return parse_config(text)
