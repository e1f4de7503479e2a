"""The two threshold densities of the model, solved from their defining equations.

gamma2 = 1 / (2x(1-x)) where x in (0, 1) solves exp(-(1-x)/(2x)) = x.
c2 = -ln(y) / (1-y)^2 where y in (0, 1) solves 3(1-y) + (1+2y) ln(y) = 0.

Both auxiliary equations also vanish at 1, which is excluded.  Roots are
bracketed by a coarse scan, bisected, then polished by one Newton step that
is kept only if it stays in the bracket and lowers the residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

SCAN_STEP = 0.01
BRACKET_WIDTH = 1e-13


class BracketError(RuntimeError):
    """The scan did not find exactly one sign change."""


@dataclass(frozen=True)
class ThresholdConstant:
    name: str
    inner_root: float
    value: float
    residual: float
    bracket: tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "inner_root": self.inner_root,
            "residual": self.residual,
            "bracket": list(self.bracket),
        }


def gamma2_equation(x: float) -> float:
    return math.exp(-(1.0 - x) / (2.0 * x)) - x


def gamma2_equation_slope(x: float) -> float:
    return math.exp(-(1.0 - x) / (2.0 * x)) / (2.0 * x * x) - 1.0


def gamma2_from_root(x: float) -> float:
    return 1.0 / (2.0 * x * (1.0 - x))


def c2_equation(y: float) -> float:
    return 3.0 * (1.0 - y) + (1.0 + 2.0 * y) * math.log(y)


def c2_equation_slope(y: float) -> float:
    return -3.0 + 2.0 * math.log(y) + (1.0 + 2.0 * y) / y


def c2_from_root(y: float) -> float:
    return -math.log(y) / (1.0 - y) ** 2


def scan_bracket(f: Callable[[float], float], lo: float = 0.01, hi: float = 0.99,
                 step: float = SCAN_STEP) -> tuple[float, float]:
    """The single grid cell of [lo, hi] where ``f`` changes sign.

    Raises:
        BracketError: if there are zero or several sign changes.
    """
    steps = round((hi - lo) / step)
    grid = [lo + k * step for k in range(steps + 1)]
    changes = []
    prev = f(grid[0])
    for a, b in zip(grid, grid[1:]):
        cur = f(b)
        if prev == 0.0:
            changes.append((a, a))
        elif prev * cur < 0.0:
            changes.append((a, b))
        prev = cur
    if len(changes) != 1:
        raise BracketError(f"expected one sign change on [{lo}, {hi}], found {len(changes)}")
    return changes[0]


def bisect(f: Callable[[float], float], lo: float, hi: float,
           width: float = BRACKET_WIDTH) -> tuple[float, float]:
    flo = f(lo)
    if flo * f(hi) > 0.0:
        raise BracketError(f"no sign change on [{lo}, {hi}]")
    while hi - lo >= width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid, mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def _solve(name, f, slope, from_root) -> ThresholdConstant:
    lo, hi = bisect(f, *scan_bracket(f))
    x = 0.5 * (lo + hi)
    best = abs(f(x))
    d = slope(x)
    if d:
        polished = x - f(x) / d
        if lo <= polished <= hi and abs(f(polished)) < best:
            x, best = polished, abs(f(polished))
    return ThresholdConstant(name, x, from_root(x), best, (lo, hi))


@lru_cache(maxsize=None)
def solve_gamma2() -> ThresholdConstant:
    return _solve("gamma2", gamma2_equation, gamma2_equation_slope, gamma2_from_root)


@lru_cache(maxsize=None)
def solve_c2() -> ThresholdConstant:
    return _solve("c2", c2_equation, c2_equation_slope, c2_from_root)
