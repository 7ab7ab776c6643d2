"""Adaptive panel quadrature for smooth, sharply-featured 1-D integrands.

Each panel is integrated with an 11-point Gauss-Legendre rule and compared
with the sum over its two halves; panels whose two estimates disagree are
split again.  All panels of one refinement level are evaluated in a single
vectorised call, and the integrand may be vector-valued.
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(11)


def _panel_rule(func, a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Panel integrals and the integrals of ``|f|`` (which set the round-off floor)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(func(x.ravel()))
    fx = fx.reshape(fx.shape[:-1] + x.shape)  # (..., panels, nodes)
    return (fx * _WEIGHTS).sum(axis=-1) * half, (np.abs(fx) * _WEIGHTS).sum(axis=-1) * half


def adaptive_quad(
    func: Callable[[np.ndarray], np.ndarray],
    breakpoints: Sequence[float],
    epsabs: float | Sequence[float] = 1e-13,
    epsrel: float = 1e-11,
    abs_floor: float = 1e-12,
    max_depth: int = 40,
    max_panels: int = 200_000,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate ``func`` over ``[breakpoints[0], breakpoints[-1]]``.

    ``func`` maps a 1-D array of abscissae to an array of shape ``(m, n)``
    (``m`` components) or ``(n,)``.  Returns ``(integral, error_estimate)``
    per component.  A panel is accepted once its two estimates agree within
    its width-share of ``max(epsabs, epsrel * |I|)`` or within
    ``abs_floor * int |f|`` over the panel, the level below which round-off
    in ill-conditioned integrands makes further splitting useless.  Raises
    ConvergenceError if the refinement budget runs out first.
    """
    edges = np.unique(np.asarray(breakpoints, dtype=float))
    if edges.size < 2:
        raise ValueError("need at least two distinct breakpoints")
    a, b = edges[:-1], edges[1:]
    coarse, _ = _panel_rule(func, a, b)
    scalar = coarse.ndim == 1
    if scalar:
        coarse = coarse[None, :]
    total_width = edges[-1] - edges[0]
    epsabs = np.broadcast_to(np.asarray(epsabs, dtype=float), coarse.shape[:1])

    total = np.zeros(coarse.shape[0])
    error = np.zeros(coarse.shape[0])
    estimate = np.abs(coarse.sum(axis=-1))
    worst = np.full(coarse.shape[0], np.inf)
    for _ in range(max_depth):
        mid = 0.5 * (a + b)
        left, left_abs = _panel_rule(func, a, mid)
        right, right_abs = _panel_rule(func, mid, b)
        if scalar:
            left, right = left[None, :], right[None, :]
            left_abs, right_abs = left_abs[None, :], right_abs[None, :]
        fine = left + right
        diff = np.abs(fine - coarse)
        tol = np.maximum(epsabs, epsrel * estimate)[:, None] * ((b - a) / total_width)[None, :]
        tol = np.maximum(tol, abs_floor * (left_abs + right_abs))
        done = np.all(diff <= tol, axis=0)
        worst = (diff / tol).max(axis=-1)
        total += fine[:, done].sum(axis=-1)
        error += diff[:, done].sum(axis=-1)
        if done.all():
            return (total[0], error[0]) if scalar else (total, error)
        keep = ~done
        a = np.concatenate([a[keep], mid[keep]])
        b = np.concatenate([mid[keep], b[keep]])
        coarse = np.concatenate([left[:, keep], right[:, keep]], axis=1)
        estimate = np.abs(total + coarse.sum(axis=-1))
        if a.size > max_panels:
            break
    raise ConvergenceError(
        f"adaptive quadrature did not converge ({a.size} unresolved panels, "
        f"worst error/tolerance per component {np.array2string(worst, precision=3)})"
    )
