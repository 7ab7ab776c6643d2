"""Gravitational redshift and the mode overlap it induces between two observers.

Alice at radius ``r_a`` emits a wavepacket with frequency profile ``F``
centred on ``omega0`` with width ``sigma``.  Bob at ``r_b`` receives it
redshifted by the factor ``a = 1 - delta`` and detects with a profile of the
same shape rescaled by ``b = 1 - eps``.  The overlap of the two normalised
profiles acts as the transmission ``theta`` of an effective beamsplitter.

All frequencies are ordinary frequencies in Hz.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy import constants

from .errors import DomainError, KinkError
from .quadrature import adaptive_quad

__all__ = [
    "EARTH_RADIUS",
    "GEOSTATIONARY_RADIUS",
    "EARTH_SCHWARZSCHILD_RADIUS",
    "GeoConfig",
    "ProfileSpec",
    "schwarzschild_radius",
    "redshift_delta",
    "mismatch",
    "eps_for_mismatch",
    "sensitivity_at_mismatch",
    "overlap",
    "overlap_gaussian",
    "overlap_rect",
    "overlap_tanh",
    "tanh_profile",
    "tanh_normalization",
    "gaussian_exponent",
    "dtheta_drs",
    "dtheta_drs_numeric",
    "sensitivity",
]

EARTH_RADIUS = 6.37e6
GEOSTATIONARY_RADIUS = 42.0e6
EARTH_SCHWARZSCHILD_RADIUS = 8.87e-3
EARTH_MASS = 5.972e24

FAMILIES = ("gaussian", "rect", "tanh_rect")

# smallest omega0 / sigma for which negative frequencies can be ignored
MIN_BANDWIDTH_RATIO = 100.0


def schwarzschild_radius(mass: float = EARTH_MASS) -> float:
    return 2.0 * constants.G * mass / constants.c**2


@dataclass(frozen=True)
class GeoConfig:
    r_a: float = EARTH_RADIUS
    r_b: float = GEOSTATIONARY_RADIUS
    r_s: float = EARTH_SCHWARZSCHILD_RADIUS

    def __post_init__(self):
        if not (0.0 <= self.r_s < self.r_a < self.r_b):
            raise DomainError(f"need 0 <= r_s < r_a < r_b, got {self.r_s}, {self.r_a}, {self.r_b}")

    @property
    def length(self) -> float:
        return self.r_b - self.r_a

    @property
    def delta(self) -> float:
        return redshift_delta(self)

    def with_height(self, length: float) -> "GeoConfig":
        return replace(self, r_b=self.r_a + length)


@dataclass(frozen=True)
class ProfileSpec:
    """Frequency profile family, its centre/width, tanh edge smoothing and Bob's detuning."""

    family: str = "gaussian"
    omega0: float = 7.0e14
    sigma: float = 2000.0
    delta_smooth: float = 0.01
    eps: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown profile family {self.family!r}; expected one of {FAMILIES}")
        if self.sigma <= 0 or self.omega0 <= 0:
            raise DomainError("omega0 and sigma must be positive")
        if self.omega0 / self.sigma < MIN_BANDWIDTH_RATIO:
            raise DomainError(
                f"omega0/sigma = {self.omega0 / self.sigma:.3g} is below {MIN_BANDWIDTH_RATIO:g}"
            )
        if self.family == "tanh_rect" and self.delta_smooth <= 0:
            raise DomainError("delta_smooth must be positive for the tanh profile")

    def with_eps(self, eps: float) -> "ProfileSpec":
        return replace(self, eps=eps)


def redshift_delta(geo: GeoConfig, form: str = "linear") -> float:
    """Fractional redshift ``delta = 1 - sqrt(f(r_a)/f(r_b))`` with ``f = 1 - r_s/r``.

    ``form`` selects the first-order expression in ``r_s`` (``"linear"``), the
    same with the geodesic log correction to the separation (``"geodesic"``)
    or the closed form (``"exact"``).
    """
    r_a, r_s, length = geo.r_a, geo.r_s, geo.length
    if form == "linear":
        return 0.5 * r_s * length / (r_a * (r_a + length))
    if form == "geodesic":
        measured = length + r_s * math.log(geo.r_b / r_a)
        return 0.5 * r_s * measured / (r_a * (r_a + measured))
    if form == "exact":
        # 1 - f_a/f_b written without cancellation
        q = r_s * length / (r_a * geo.r_b * (1.0 - r_s / geo.r_b))
        return q / (1.0 + math.sqrt(1.0 - q))
    raise ValueError(f"unknown form {form!r}")


def _ddelta_drs(geo: GeoConfig) -> float:
    return 0.5 * geo.length / (geo.r_a * geo.r_b)


def mismatch(delta: float, eps: float) -> float:
    """Relative scale mismatch ``m = (1 - eps)/(1 - delta) - 1`` between Bob's and Alice's profiles."""
    return (delta - eps) / (1.0 - delta)


def gaussian_exponent(delta: float, spec: ProfileSpec) -> float:
    """Operating point ``x = (delta - eps)^2 omega0^2 / (8 sigma^2)``."""
    return ((delta - spec.eps) * spec.omega0) ** 2 / (8.0 * spec.sigma**2)


def overlap_gaussian(delta: float, spec: ProfileSpec, exact: bool = False) -> float:
    """Overlap of redshifted and detector Gaussian profiles.

    By default the matched-detector form ``exp(-x)``; ``exact=True`` keeps the
    width-mismatch prefactor and the ``c^2 + (1 - delta)^2`` denominator.
    """
    if not exact:
        return math.exp(-gaussian_exponent(delta, spec))
    a = 1.0 - delta
    b = c = 1.0 - spec.eps
    denom = c * c + a * a
    pre = math.sqrt(2.0 * c * a / denom)
    # a - b = eps - delta, formed directly to avoid cancellation
    return pre * math.exp(-((spec.eps - delta) * spec.omega0) ** 2 / (4.0 * denom * spec.sigma**2))


def overlap_rect(delta: float, spec: ProfileSpec, exact: bool = False) -> float:
    """Overlap of two box profiles, ``max(0, 1 - omega0 |delta - eps| / sigma)``.

    ``exact=True`` intersects the redshifted box (centre ``a omega0``, width
    ``a sigma``) with the detector box (``b omega0``, ``b sigma``) directly.
    """
    if not exact:
        return max(0.0, 1.0 - spec.omega0 * abs(delta - spec.eps) / spec.sigma)
    a = 1.0 - delta
    b = 1.0 - spec.eps
    w0, s = spec.omega0, spec.sigma
    # intervals in offsets from omega0 to keep precision
    lo = max(-a * s / 2 - delta * w0, -b * s / 2 - spec.eps * w0)
    hi = min(a * s / 2 - delta * w0, b * s / 2 - spec.eps * w0)
    return max(0.0, hi - lo) / (s * math.sqrt(a * b))


def tanh_normalization(delta_smooth: float, sigma: float) -> float:
    """Prefactor making the tanh-smoothed box of full width ``sigma`` unit-normalised."""
    d = delta_smooth
    return 1.0 / (2.0 * math.sqrt(d * sigma * (-0.5 + 1.0 / (d * math.tanh(2.0 / d)))))


def _sech2(x):
    e = np.exp(-2.0 * np.abs(x))
    return 4.0 * e / (1.0 + e) ** 2


def tanh_profile(offset, sigma: float, delta_smooth: float, derivative: bool = False):
    """Normalised tanh-edged box evaluated at ``offset = omega - omega0`` (Hz).

    With ``derivative=True`` returns ``dF/d omega`` instead.
    """
    w = np.asarray(offset, dtype=float)
    norm = tanh_normalization(delta_smooth, sigma)
    scale = delta_smooth * sigma
    up = (sigma + 2.0 * w) / scale
    down = (sigma - 2.0 * w) / scale
    if derivative:
        return norm * (2.0 / scale) * (_sech2(up) - _sech2(down))
    return norm * (np.tanh(up) + np.tanh(down))


def _sech(x):
    e = np.exp(-np.abs(x))
    return 2.0 * e / (1.0 + e * e)


def _tanh_profile_step(offset, step, sigma: float, delta_smooth: float):
    """``F(offset + step) - F(offset)`` without forming ``offset + step``.

    Uses ``tanh x - tanh y = sinh(x - y) sech(x) sech(y)`` so that tiny steps
    keep full relative precision.
    """
    norm = tanh_normalization(delta_smooth, sigma)
    scale = delta_smooth * sigma
    w = np.asarray(offset, dtype=float)
    d = 2.0 * np.asarray(step, dtype=float) / scale
    up0 = (sigma + 2.0 * w) / scale
    down0 = (sigma - 2.0 * w) / scale
    small = np.abs(d) < 1.0
    ds = np.where(small, d, 0.0)
    rise = np.where(small, np.sinh(ds) * _sech(up0 + ds) * _sech(up0), np.tanh(up0 + d) - np.tanh(up0))
    fall = np.where(
        small, -np.sinh(ds) * _sech(down0 - ds) * _sech(down0), np.tanh(down0 - d) - np.tanh(down0)
    )
    return norm * (rise + fall)


@lru_cache(maxsize=65536)
def _tanh_terms(m: float, omega0: float, sigma: float, delta_smooth: float) -> tuple[float, float]:
    """``(1 - theta, d theta / d m)`` for relative mismatch ``m`` of the tanh profiles.

    With ``rho = 1 + m`` the redshifted profile, written on the detector's
    frequency axis, is ``sqrt(rho) F(rho omega)``.  The defect is integrated
    as ``1/2 int (g1 - g2)^2`` which stays accurate as theta -> 1, and the
    derivative is differentiated under the integral sign.
    """
    rho = 1.0 + m
    sq = math.sqrt(rho)
    shift = -m * omega0 / rho  # centre of the redshifted profile on the offset axis
    half = 0.5 * sigma
    window = 8.0 * sigma * max(1.0, 10.0 * delta_smooth)
    lo = min(0.0, shift) - window
    hi = max(0.0, shift) + window
    edge = delta_smooth * sigma
    marks = [lo, hi]
    for centre in (0.0, shift):
        for side in (-half, half):
            marks += [centre + side + k * edge for k in (-4, -1, 0, 1, 4)]
    marks += list(np.linspace(lo, hi, 17))
    marks = [x for x in marks if lo <= x <= hi]

    sq_minus_one = m / (1.0 + sq)

    def integrand(u):
        step = m * (omega0 + u)
        w1 = u + step
        f2 = tanh_profile(u, sigma, delta_smooth)
        f1 = tanh_profile(w1, sigma, delta_smooth)
        g1 = sq * f1
        d1 = tanh_profile(w1, sigma, delta_smooth, derivative=True)
        diff = sq_minus_one * f1 + _tanh_profile_step(u, step, sigma, delta_smooth)
        dgrad = (g1 / (2.0 * rho) + sq * d1 * (omega0 + u)) * f2
        return np.stack([0.5 * diff * diff, dgrad])

    values, _ = adaptive_quad(
        integrand, marks, epsabs=[1e-16, 1e-12 * omega0 / sigma], epsrel=1e-10
    )
    return float(min(max(values[0], 0.0), 1.0)), float(values[1])


def overlap_tanh(delta: float, spec: ProfileSpec) -> float:
    """Overlap of tanh-smoothed box profiles, by adaptive quadrature."""
    defect, _ = _tanh_terms(mismatch(delta, spec.eps), spec.omega0, spec.sigma, spec.delta_smooth)
    return 1.0 - defect


def overlap(delta: float, spec: ProfileSpec) -> float:
    if spec.family == "gaussian":
        return overlap_gaussian(delta, spec)
    if spec.family == "rect":
        return overlap_rect(delta, spec)
    return overlap_tanh(delta, spec)


def _theta_slope(delta: float, spec: ProfileSpec) -> tuple[float, float, float]:
    """``(theta, 1 - theta, d theta / d delta)``."""
    return _theta_slope_m(mismatch(delta, spec.eps), delta, spec)


def _theta_slope_m(m: float, delta: float, spec: ProfileSpec) -> tuple[float, float, float]:
    # parametrised by the mismatch so that sweeps over delta at fixed m reuse cached integrals
    gap = m * (1.0 - delta)  # delta - eps
    if spec.family == "gaussian":
        x = (gap * spec.omega0) ** 2 / (8.0 * spec.sigma**2)
        theta = math.exp(-x)
        slope = -gap * spec.omega0**2 / (4.0 * spec.sigma**2) * theta
        return theta, -math.expm1(-x), slope
    if spec.family == "rect":
        if m == 0.0:
            raise KinkError("rectangular overlap has no derivative at delta = eps")
        k = spec.omega0 * abs(gap) / spec.sigma
        if k >= 1.0:
            return 0.0, 1.0, 0.0
        return 1.0 - k, k, -math.copysign(spec.omega0 / spec.sigma, gap)
    defect, dtheta_dm = _tanh_terms(m, spec.omega0, spec.sigma, spec.delta_smooth)
    dm_ddelta = (1.0 + m) / (1.0 - delta)
    return 1.0 - defect, defect, dtheta_dm * dm_ddelta


def sensitivity(geo: GeoConfig, spec: ProfileSpec) -> tuple[float, float, float]:
    """``(theta, 1 - theta, r_s * d theta / d r_s)`` at the given geometry."""
    return sensitivity_at_mismatch(geo, spec, mismatch(geo.delta, spec.eps))


def sensitivity_at_mismatch(geo: GeoConfig, spec: ProfileSpec, m: float) -> tuple[float, float, float]:
    """As ``sensitivity`` with the detuning given through the mismatch ``m`` (``spec.eps`` ignored)."""
    theta, defect, slope = _theta_slope_m(m, geo.delta, spec)
    return theta, defect, slope * geo.r_s * _ddelta_drs(geo)


def eps_for_mismatch(delta: float, m: float) -> float:
    """Detuning giving relative mismatch ``m`` at redshift ``delta``."""
    return delta - m * (1.0 - delta)


def dtheta_drs(geo: GeoConfig, spec: ProfileSpec) -> float:
    """Derivative of the overlap with respect to the Schwarzschild radius.

    Analytic for the Gaussian and box profiles; for the tanh profile the
    derivative is integrated alongside the overlap itself.
    """
    return _theta_slope(geo.delta, spec)[2] * _ddelta_drs(geo)


def dtheta_drs_numeric(geo: GeoConfig, spec: ProfileSpec, rel_step: float = 1e-6) -> float:
    """Central finite difference of the overlap in ``r_s`` with step ``rel_step * r_s``."""
    h = rel_step * geo.r_s
    if h <= 0:
        raise DomainError("finite difference needs r_s > 0")
    up = overlap(replace(geo, r_s=geo.r_s + h).delta, spec)
    down = overlap(replace(geo, r_s=geo.r_s - h).delta, spec)
    return (up - down) / (2.0 * h)
