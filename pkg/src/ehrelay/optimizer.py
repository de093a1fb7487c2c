"""Search for the time-switching ratio that minimizes secondary outage."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class AlphaOptimum:
    alpha_star: float
    p_out_min: float
    evaluations: int
    method: str


def alpha_grid(grid_lo: float = 0.01, grid_hi: float = 0.99, grid_step: float = 0.01) -> np.ndarray:
    if not 0.0 < grid_lo <= grid_hi < 1.0:
        raise ValueError(f"need 0 < grid_lo <= grid_hi < 1, got [{grid_lo}, {grid_hi}]")
    if not grid_step > 0:
        raise ValueError(f"grid_step must be positive, got {grid_step}")
    # floor with slack so 0.98/0.01 = 97.99999999999999 still counts 99 points
    count = int(math.floor((grid_hi - grid_lo) / grid_step + 1e-9)) + 1
    # k*step rather than accumulated sums, rounded to kill 0.30000000000000004
    return np.round(grid_lo + grid_step * np.arange(count), 12)


def optimize_alpha(
    evaluator: Callable[[float], float],
    grid_lo: float = 0.01,
    grid_hi: float = 0.99,
    grid_step: float = 0.01,
    refine_tol: float = 1e-4,
    refine: bool = True,
    map_fn: Callable = map,
) -> AlphaOptimum:
    """Grid scan over alpha, then golden-section refinement around the best point.

    Ties on the grid go to the smaller alpha. Refinement is confined to the
    two grid cells adjacent to the best grid point and is only accepted if it
    improves on it, so the result is never worse than any grid evaluation.
    Pass ``refine=False`` for noisy (Monte Carlo) evaluators. ``map_fn`` lets
    callers fan the grid out to a worker pool.
    """
    grid = alpha_grid(grid_lo, grid_hi, grid_step)
    values = np.array([_checked(v) for v in map_fn(evaluator, [float(a) for a in grid])])
    best = int(np.argmin(values))  # first minimum, i.e. smallest alpha on ties
    alpha_star, p_min = float(grid[best]), float(values[best])
    evals = len(grid)
    if not refine or len(grid) < 2:
        return AlphaOptimum(alpha_star, p_min, evals, "grid")

    lo = float(grid[max(best - 1, 0)])
    hi = float(grid[min(best + 1, len(grid) - 1)])
    a_ref, p_ref, n_ref = golden_section(lambda a: _checked(evaluator(a)), lo, hi, refine_tol)
    evals += n_ref
    if p_ref < p_min:
        alpha_star, p_min = a_ref, p_ref
    return AlphaOptimum(alpha_star, p_min, evals, "grid+golden")


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float):
    """Minimize f on [lo, hi]; returns (x, f(x), evaluations)."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    n = 2
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        n += 1
    return (c, fc, n) if fc <= fd else (d, fd, n)


def _checked(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"evaluator returned {p}, not a probability")
    return p
