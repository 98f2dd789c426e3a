"""Plain-text record formats.

All numbers are written with 17 significant digits, which round-trips
IEEE doubles exactly.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import ConfigError
from .levy_paths import GridPath, JumpPath

__all__ = [
    "fmt",
    "write_jump_path",
    "read_jump_path",
    "write_grid_path",
    "read_grid_path",
    "read_path",
    "write_path",
    "format_medium",
    "format_solution",
    "read_solution",
    "format_error_report",
    "format_probe",
    "format_probe_batch",
]


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _row(*values) -> str:
    return ",".join(fmt(v) for v in values)


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _header(tag: str, **fields) -> str:
    return tag + "".join(f" {k}={v}" for k, v in fields.items())


def _parse_header(line: str, kind: str) -> dict:
    parts = line.split()
    if not parts or parts[0] != kind:
        raise ConfigError(f"expected a {kind} header, got {line!r}", line=1)
    out = {}
    for item in parts[1:]:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"malformed header field {item!r}", line=1)
        out[key] = value
    return out


def _seed(value):
    return None if value in (None, "none") else int(value)


def jump_path_text(p: JumpPath) -> str:
    lines = [_header("jumppath", kind="compound_poisson", drift=fmt(p.drift),
                     window=f"{fmt(p.t_lo)},{fmt(p.t_hi)}",
                     seed="none" if p.seed is None else p.seed)]
    lines += [f"{fmt(t)} {fmt(j)}" for t, j in zip(p.times, p.sizes)]
    return "\n".join(lines) + "\n"


def write_jump_path(path, p: JumpPath):
    _write(path, jump_path_text(p))


def read_jump_path(path) -> JumpPath:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    head = _parse_header(lines[0], "jumppath")
    lo, hi = (float(v) for v in head["window"].split(","))
    times, sizes = [], []
    for n, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            t, j = line.split()
            times.append(float(t))
            sizes.append(float(j))
        except ValueError:
            raise ConfigError(f"malformed jump record {line!r}", line=n)
    return JumpPath(float(head["drift"]), times, sizes, lo, hi, seed=_seed(head.get("seed")))


def grid_path_text(g: GridPath) -> str:
    lines = [_header("gridpath", level=g.level, window=f"{g.k_lo},{g.k_hi}",
                     seed="none" if g.seed is None else g.seed)]
    lines += [fmt(v) for v in g.increments]
    return "\n".join(lines) + "\n"


def write_grid_path(path, g: GridPath):
    _write(path, grid_path_text(g))


def read_grid_path(path) -> GridPath:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    head = _parse_header(lines[0], "gridpath")
    k_lo, k_hi = (int(v) for v in head["window"].split(","))
    inc = np.array([float(v) for v in lines[1:] if v.strip()])
    return GridPath(int(head["level"]), k_lo, k_hi, inc, seed=_seed(head.get("seed")))


def write_path(path, p):
    if isinstance(p, JumpPath):
        write_jump_path(path, p)
    else:
        write_grid_path(path, p)


def read_path(path):
    first = Path(path).read_text(encoding="utf-8").split(None, 1)[0]
    return read_jump_path(path) if first == "jumppath" else read_grid_path(path)


def format_medium(medium) -> str:
    """Rows ``k, X_{k-1}, X_k, C_k``."""
    b = medium.boundaries
    lines = ["k,x_left,x_right,speed"]
    lines += [_row(k, b[i], b[i + 1], c)
              for i, (k, c) in enumerate(zip(medium.layer_indices, medium.speeds))]
    return "\n".join(lines) + "\n"


def format_solution(field) -> str:
    """Header ``t,t1,t2,...`` then rows ``x,U(t1,x),U(t2,x),...``."""
    lines = ["t," + ",".join(fmt(t) for t in field.ts)]
    vals = field.values
    lines += [_row(x, *vals[:, j]) for j, x in enumerate(field.xs)]
    return "\n".join(lines) + "\n"


def read_solution(path):
    """Return ``(ts, xs, values)`` with ``values[i, j] = U(ts[i], xs[j])``."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    ts = np.array([float(v) for v in lines[0].split(",")[1:]])
    rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:] if line])
    return ts, rows[:, 0], rows[:, 1:].T


def format_error_report(report) -> str:
    lines = [f"# limit={report.label} master_seed={report.master_seed}",
             "N,mean,stderr,R,p"]
    lines += [_row(*row) for row in report.rows()]
    lines += [f"# failed replica {r}: {msg}" for r, msg in report.failures]
    return "\n".join(lines) + "\n"


def format_probe(rows) -> str:
    return "N,gap\n" + "".join(_row(n, gap) + "\n" for n, gap in rows)


def format_probe_batch(xs, ts, flags, gaps) -> str:
    lines = ["x,t,continuity_flag,gap_at_Nmax"]
    lines += [_row(x, t, bool(f), g) for x, t, f, g in zip(xs, ts, flags, gaps)]
    return "\n".join(lines) + "\n"
