"""Hand-computed checks on the path with drift 1 and one jump of size 2 at 0.5.

Every expected value is an exact rational; a check passes when the
computed double is within ``ULPS`` units in the last place of it.
"""
from __future__ import annotations

import math
from fractions import Fraction as F

from .characteristics import gamma_discrete, gamma_limit, is_continuity_point
from .dyadic_medium import PiecewiseLinearPath, build_medium, interpolate, inverse, polygon_at_level, speed_at
from .initial_data import Triangular
from .levy_paths import JumpPath, coarsen, evaluate, generalized_inverse, increments_at_level, left_limit
from .transport import EvaluationGrid, solve_discrete, solve_limit

ULPS = 10


def reference_path() -> JumpPath:
    return JumpPath(1.0, [0.5], [2.0], -2.0, 2.0)


def _cases():
    p = reference_path()
    p2 = JumpPath(1.0, [0.5, 0.75], [2.0, 1.0], -2.0, 2.0)
    g1 = increments_at_level(p, 1, (0, 2))
    pl1 = PiecewiseLinearPath(g1)
    pls = {n: polygon_at_level(p, n) for n in (1, 2, 3)}
    u0 = Triangular(0.0, 1.0, 1.0)
    grid = EvaluationGrid([1.0], [0.1])
    medium = build_medium(g1)
    # N=3 inverse of x=1: cell [3/8, 1/2] with slope 17
    s3 = F(3, 8) + (1 - F(3, 8)) / 17 - F(1, 10)
    yield "evaluate(0.25)", evaluate(p, 0.25), F(1, 4)
    yield "evaluate(0.5)", evaluate(p, 0.5), F(5, 2)
    yield "left_limit(0.5)", left_limit(p, 0.5), F(1, 2)
    yield "left_limit(0.75) two jumps", left_limit(p2, 0.75), F(11, 4)
    yield "xi*(1.0)", generalized_inverse(p, 1.0), F(1, 2)
    yield "xi*(0.25)", generalized_inverse(p, 0.25), F(1, 4)
    yield "increment N=1 k=1", g1.increment(1), F(5, 2)
    yield "increment N=1 k=2", g1.increment(2), F(1, 2)
    yield "coarsen to N=0", coarsen(g1, 0).increment(1), F(3)
    yield "speed k=1", medium.speeds[0], F(5)
    yield "speed k=2", medium.speeds[1], F(1)
    yield "speed_at(1.0)", speed_at(medium, 1.0), F(5)
    yield "speed_at(2.5)", speed_at(medium, 2.5), F(1)
    yield "interpolate(0.25)", interpolate(pl1, 0.25), F(5, 4)
    yield "inverse(1.0)", inverse(pl1, 1.0), F(1, 5)
    yield "gamma_1(0;1,0.1)", gamma_discrete(pls[1], 0.0, 1.0, 0.1), F(1, 2)
    yield "gamma_2(0;1,0.1)", gamma_discrete(pls[2], 0.0, 1.0, 0.1), F(7, 30)
    yield "gamma_3(0;1,0.1)", gamma_discrete(pls[3], 0.0, 1.0, 0.1), s3
    yield "Gamma(0;1,0.1)", gamma_limit(p, 0.0, 1.0, 0.1), F(2, 5)
    yield "Gamma(0;1,0)", gamma_limit(p, 0.0, 1.0, 0.0), F(5, 2)
    yield "continuity (0,1,0.1)", float(is_continuity_point(p, 0.0, 1.0, 0.1)), F(1)
    yield "continuity (0,1,0)", float(is_continuity_point(p, 0.0, 1.0, 0.0)), F(0)
    yield "U_2(0.1,1)", solve_discrete(p, 2, u0, grid).values[0, 0], F(23, 30)
    yield "U(0.1,1)", solve_limit(p, u0, grid).values[0, 0], F(3, 5)


def within_ulps(value: float, exact: F, ulps=ULPS) -> bool:
    target = float(exact)
    return abs(value - target) <= ulps * math.ulp(target if target else 1.0)


def run_checks():
    """List of ``(name, value, exact, passed)``."""
    return [(name, float(v), exact, within_ulps(float(v), exact)) for name, v, exact in _cases()]


def main(out=print) -> int:
    results = run_checks()
    for name, value, exact, ok in results:
        out(f"{'PASS' if ok else 'FAIL'} {name}: got {value!r}, expected {exact} = {float(exact)!r}")
    failed = sum(not ok for *_, ok in results)
    out(f"{len(results) - failed}/{len(results)} hand-oracle checks passed")
    return 0 if failed == 0 else 1
