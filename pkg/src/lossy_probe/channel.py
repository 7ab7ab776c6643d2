"""Lossy two-beamsplitter channel and closed-form QFIs for Gaussian probes.

Alice's mode passes a beamsplitter of known transmission ``t`` (loss port
``c`` in a thermal state) and then the beamsplitter ``theta`` to be estimated
(port ``d`` in vacuum).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants

from .errors import DomainError
from .gaussian_core import GaussianProbe, QuadPair
from .optimize import golden_section

__all__ = [
    "ChannelConfig",
    "planck_occupation",
    "propagate",
    "channel_family",
    "qfi_coherent_thermal",
    "qfi_squeezed_coherent",
    "optimize_squeezing_fraction",
]


@dataclass(frozen=True)
class ChannelConfig:
    t: float
    theta: float
    n_th: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise DomainError(f"transmission t must lie in [0, 1], got {self.t}")
        if not 0.0 <= self.theta <= 1.0:
            raise DomainError(f"theta must lie in [0, 1], got {self.theta}")
        if self.n_th < 0:
            raise DomainError("thermal occupation must be non-negative")


def planck_occupation(temperature: float, freq: float) -> float:
    """Mean thermal photon number of a mode at ``freq`` (Hz) and ``temperature`` (K)."""
    if temperature < 0 or freq <= 0:
        raise DomainError("need temperature >= 0 and freq > 0")
    if temperature == 0:
        return 0.0
    x = constants.h * freq / (constants.k * temperature)
    # e^-x / (1 - e^-x): no overflow for large x
    return math.exp(-x) / -math.expm1(-x)


def propagate(probe: GaussianProbe, cfg: ChannelConfig) -> QuadPair:
    """Output quadrature variances and mean field after both beamsplitters."""
    g = (cfg.theta * cfg.t) ** 2
    thermal = 2.0 * cfg.n_th * cfg.theta**2 * (1.0 - cfg.t**2)
    v_plus = g * math.expm1(-2.0 * probe.r) + thermal + 1.0
    v_minus = g * math.expm1(2.0 * probe.r) + thermal + 1.0
    amp = cfg.theta * cfg.t * probe.alpha_mag
    return QuadPair(v_plus, v_minus, amp * math.cos(probe.theta), amp * math.sin(probe.theta))


def channel_family(probe: GaussianProbe, t: float, n_th: float = 0.0):
    """``theta -> QuadPair`` for fixed probe and loss, for use with ``qfi_numeric``."""

    def family(theta: float) -> QuadPair:
        return propagate(probe, ChannelConfig(t, theta, n_th))

    return family


def qfi_coherent_thermal(cfg: ChannelConfig, alpha_mag: float) -> float:
    """QFI for a coherent probe with a thermal loss port."""
    loss = 1.0 - cfg.t**2
    n = cfg.n_th
    coherent = 4.0 * (cfg.t * alpha_mag) ** 2 / (2.0 * n * cfg.theta**2 * loss + 1.0)
    thermal = 4.0 * n * loss / (n * cfg.theta**2 * loss + 1.0)
    return coherent + thermal


def _squeezed_qfi(
    t: float,
    theta: float,
    r: float,
    alpha_mag: float,
    phase: float = 0.0,
    theta_defect: float | None = None,
) -> float:
    # theta_defect = 1 - theta supplied exactly keeps 1 - (t theta)^2 accurate near theta = 1
    u2 = (t * theta) ** 2
    if theta_defect is None:
        gap = 1.0 - u2
    else:
        gap = (1.0 - t * t) + t * t * theta_defect * (2.0 - theta_defect)
    v_plus = gap + u2 * math.exp(-2.0 * r)
    v_minus = gap + u2 * math.exp(2.0 * r)
    displacement = 4.0 * (alpha_mag * t) ** 2 * (
        math.cos(phase) ** 2 / v_plus + math.sin(phase) ** 2 / v_minus
    )
    if r == 0.0 or t == 0.0:
        return displacement
    if gap <= 0.0:
        return math.inf
    s2 = math.sinh(r) ** 2
    # numerator and denominator multiplied by sinh^2 r: finite as r -> 0
    squeezing = 4.0 * t * t * (2.0 * u2 * u2 - 2.0 * u2 + 1.0) * s2 / (gap * (2.0 * u2 * gap * s2 + 1.0))
    return squeezing + displacement


def qfi_squeezed_coherent(cfg: ChannelConfig, probe: GaussianProbe) -> float:
    """QFI for a squeezed coherent probe with vacuum in both auxiliary ports.

    For a coherent angle other than zero the displacement term is weighted
    by ``cos^2/V+ + sin^2/V-``; the optimum is at angle zero.
    """
    if cfg.n_th != 0.0:
        raise DomainError("closed form holds only for a vacuum loss port (n_th = 0)")
    return _squeezed_qfi(cfg.t, cfg.theta, probe.r, probe.alpha_mag, probe.theta)


def optimize_squeezing_fraction(
    n_bar: float, cfg: ChannelConfig, points: int = 101, xtol: float = 1e-6
) -> tuple[float, float]:
    """Squeezing fraction ``y`` in [0, 1] maximising the squeezed-coherent QFI.

    Returns ``(y_star, qfi_star)``.  If the QFI is flat within 1e-12 the
    smallest fraction wins.
    """
    if n_bar <= 0:
        raise DomainError("n_bar must be positive")

    def qfi(y: float) -> float:
        y = min(max(y, 0.0), 1.0)
        return qfi_squeezed_coherent(cfg, GaussianProbe.from_fraction(n_bar, y))

    ys = [i / (points - 1) for i in range(points)]
    values = [qfi(y) for y in ys]
    i = max(range(points), key=lambda k: (values[k], -k))
    y_best, h_best = ys[i], values[i]
    if 0 < i < points - 1:
        y_ref, neg = golden_section(lambda y: -qfi(y), ys[i - 1], ys[i + 1], xtol=xtol)
        if -neg > h_best:
            y_best, h_best = y_ref, -neg
    if h_best - values[0] <= 1e-12 * max(1.0, abs(values[0])):
        return 0.0, values[0]
    return y_best, h_best
