"""Bracketed scalar search: a coarse grid scan followed by golden-section refinement."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(
    f: Callable[[float], float], a: float, b: float, xtol: float = 1e-8, maxiter: int = 200
) -> tuple[float, float]:
    """Minimise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    a, b = min(a, b), max(a, b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a <= xtol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def grid_golden_min(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    points: int = 101,
    xtol: float = 1e-8,
    log: bool = False,
) -> tuple[float, float]:
    """Global-ish minimum of ``f`` on ``[lo, hi]``.

    A ``points``-long grid (linear, or logarithmic with ``log=True``) locates
    the best cell, golden-section search refines inside the neighbouring
    cells.  Ties on the grid resolve to the smallest abscissa.  ``xtol`` is
    absolute, in log10 units when ``log`` is set.  Non-finite values count as
    +inf.
    """
    if log:
        if lo <= 0:
            raise ValueError("log grid needs lo > 0")
        u_lo, u_hi = math.log10(lo), math.log10(hi)

        def to_x(u):
            return 10.0**u
    else:
        u_lo, u_hi = lo, hi

        def to_x(u):
            return u

    def g(u):
        val = f(to_x(u))
        return val if math.isfinite(val) else math.inf

    grid = np.linspace(u_lo, u_hi, points)
    values = [g(u) for u in grid]
    i = int(np.argmin(values))
    best_u, best_val = grid[i], values[i]
    if points > 2 and math.isfinite(best_val):
        left = grid[max(i - 1, 0)]
        right = grid[min(i + 1, points - 1)]
        u, val = golden_section(g, left, right, xtol=xtol)
        if val < best_val:
            best_u, best_val = u, val
    return to_x(best_u), best_val
