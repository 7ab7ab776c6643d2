"""Cramer-Rao bounds on the relative error of the Schwarzschild radius.

The overlap ``theta`` acts as the transmission of a beamsplitter, so the
channel QFI ``H(theta)`` converts into information on ``r_s`` through the
chain rule and the relative error bound is::

    dr_s / r_s >= 1 / (r_s |d theta/d r_s| sqrt(N H(theta)))

QFIs follow the Bures-distance normalisation throughout, under which an
attenuated coherent state has ``H = 4 |t alpha|^2``.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable

from .channel import _squeezed_qfi
from .errors import BoundDivergenceError, DomainError, KinkError
from .gaussian_core import GaussianProbe
from .optimize import golden_section, grid_golden_min
from .overlap import (
    GeoConfig,
    ProfileSpec,
    eps_for_mismatch,
    gaussian_exponent,
    mismatch,
    sensitivity,
    sensitivity_at_mismatch,
)

__all__ = [
    "BoundQuery",
    "BoundResult",
    "RayleighLink",
    "SweepPoint",
    "evaluate_bound",
    "rel_error_bound",
    "limit_fully_squeezed_gaussian",
    "limit_fully_squeezed_rect",
    "limit_coherent_rect",
    "optimal_coherent_gaussian_bound",
    "optimal_epsilon_gaussian",
    "optimize_epsilon",
    "optimize_fraction_and_epsilon",
    "squeeze_db_to_r",
    "r_to_squeeze_db",
    "rayleigh_transmission",
    "sweep_altitude",
    "measurements_from_sigma",
]


@dataclass(frozen=True)
class BoundQuery:
    geo: GeoConfig = GeoConfig()
    spec: ProfileSpec = ProfileSpec()
    probe: GaussianProbe = GaussianProbe(alpha_mag=math.sqrt(2.0))
    channel_t: float = 1.0
    n_meas: int = 200

    def __post_init__(self):
        if self.n_meas < 1:
            raise DomainError("n_meas must be at least 1")
        if not 0.0 <= self.channel_t <= 1.0:
            raise DomainError("channel_t must lie in [0, 1]")

    def with_eps(self, eps: float) -> "BoundQuery":
        return replace(self, spec=self.spec.with_eps(eps))


@dataclass(frozen=True)
class BoundResult:
    theta: float
    theta_defect: float
    dtheta_drs: float
    qfi: float
    bound: float
    x: float
    """Gaussian operating-point exponent; also reported for the other families."""


def evaluate_bound(q: BoundQuery) -> BoundResult:
    """Overlap, its slope, the channel QFI and the resulting bound at one query."""
    return _bound_at_mismatch(q, mismatch(q.geo.delta, q.spec.eps))


def _bound_at_mismatch(q: BoundQuery, m: float) -> BoundResult:
    theta, defect, rs_slope = sensitivity_at_mismatch(q.geo, q.spec, m)
    p = q.probe
    qfi = _squeezed_qfi(q.channel_t, theta, p.r, p.alpha_mag, p.theta, theta_defect=defect)
    gap = m * (1.0 - q.geo.delta)
    x = (gap * q.spec.omega0) ** 2 / (8.0 * q.spec.sigma**2)
    if rs_slope == 0.0:
        raise BoundDivergenceError("bound diverges: d theta / d r_s = 0")
    if qfi == 0.0:
        raise BoundDivergenceError("bound diverges: the probe carries no information")
    bound = 1.0 / (abs(rs_slope) * math.sqrt(q.n_meas * qfi))
    return BoundResult(theta, defect, rs_slope / q.geo.r_s, qfi, bound, x)


def rel_error_bound(q: BoundQuery) -> float:
    return evaluate_bound(q).bound


def _safe_bound(q: BoundQuery, m: float | None = None) -> float:
    if m is None:
        m = mismatch(q.geo.delta, q.spec.eps)
    try:
        return _bound_at_mismatch(q, m).bound
    except (BoundDivergenceError, KinkError):
        return math.inf


def limit_fully_squeezed_gaussian(q: BoundQuery) -> float:
    """Gaussian profile, squeezed vacuum, ``t = 1``, in the limit ``eps -> delta``."""
    s2 = q.probe.squeezed_photons
    if s2 == 0.0:
        return math.inf
    return q.spec.sigma / (q.spec.omega0 * q.geo.delta * math.sqrt(q.n_meas * s2))


def limit_fully_squeezed_rect(q: BoundQuery) -> float:
    """Box profile, squeezed vacuum, ``t = 1``, leading order in ``omega0 |delta - eps| / sigma``.

    ``1 - theta^2 ~ 2 omega0 |delta - eps| / sigma`` and ``H ~ 4 sinh^2 r / (1 - theta^2)``
    give ``sqrt(sigma |delta - eps|) / (delta sinh r sqrt(2 omega0 N))``.
    """
    delta = q.geo.delta
    gap = abs(delta - q.spec.eps)
    if gap == 0.0:
        raise KinkError("rectangular bound undefined at delta = eps")
    s2 = q.probe.squeezed_photons
    if s2 == 0.0:
        return math.inf
    return math.sqrt(q.spec.sigma * gap / (2.0 * q.spec.omega0 * q.n_meas * s2)) / delta


def limit_coherent_rect(q: BoundQuery) -> float:
    """Box profile, coherent probe, ``t -> 1``: ``sigma / (2 omega0 delta sqrt(N |alpha|^2))``."""
    n = q.probe.alpha_mag**2
    if n == 0.0:
        return math.inf
    return q.spec.sigma / (2.0 * q.spec.omega0 * q.geo.delta * math.sqrt(q.n_meas * n))


def optimal_coherent_gaussian_bound(q: BoundQuery, convention: str = "bures") -> float:
    """Gaussian profile, coherent probe, ``t = 1`` at the optimum ``x = 1/2``.

    ``convention="bures"`` uses ``H = 4|alpha|^2`` (prefactor ``e^{1/2} ~ 1.65``);
    ``convention="unit"`` uses ``H = |alpha|^2`` (prefactor ``2 e^{1/2} ~ 3.30``).
    """
    factors = {"bures": math.exp(0.5), "unit": 2.0 * math.exp(0.5)}
    if convention not in factors:
        raise ValueError(f"unknown convention {convention!r}")
    n = q.probe.alpha_mag**2
    return factors[convention] * q.spec.sigma / (q.spec.omega0 * q.geo.delta * math.sqrt(q.n_meas * n))


@dataclass(frozen=True)
class EpsilonOptimum:
    eps_analytic: float
    x_analytic: float
    eps_numeric: float
    x_numeric: float
    bound_numeric: float


def optimal_epsilon_gaussian(spec: ProfileSpec, delta: float, q: BoundQuery | None = None) -> EpsilonOptimum:
    """Detuning minimising the coherent-state bound for the Gaussian profile.

    Analytically ``eps = delta - 2 sigma / omega0`` (``x = 1/2``); numerically
    by scalar minimisation of the bound over the detuning, with ``q``
    supplying geometry and probe (default: coherent ``|alpha| = 1``, ``t = 1``).
    """
    if spec.family != "gaussian":
        raise DomainError("optimal_epsilon_gaussian needs the gaussian family")
    eps_a = delta - 2.0 * spec.sigma / spec.omega0
    if q is None:
        q = BoundQuery(spec=spec, probe=GaussianProbe(alpha_mag=1.0))
    q = replace(q, spec=spec)
    if abs(q.geo.delta - delta) > 1e-12 * delta:
        raise DomainError("delta does not match the query geometry")
    eps_n, bound_n = optimize_epsilon(q, k_range=(1e-3, 10.0))
    return EpsilonOptimum(eps_a, 0.5, eps_n, gaussian_exponent(delta, spec.with_eps(eps_n)), bound_n)


def optimize_epsilon(
    q: BoundQuery,
    k_range: tuple[float, float] = (1e-7, 10.0),
    points: int = 101,
    side: int = 1,
) -> tuple[float, float]:
    """Detuning ``eps`` minimising the bound at fixed probe, channel and geometry.

    The search runs over the scaled mismatch ``k = |m| omega0 / sigma``
    (essentially ``|delta - eps| omega0 / sigma``) on a log grid with golden-section refinement (``side=+1`` puts ``eps``
    below ``delta``).  Bob's undetuned detector ``eps = 0`` is always tried as
    well.  Returns ``(eps_star, bound_star)``; the bound is ``inf`` if every
    candidate diverges.
    """
    delta = q.geo.delta
    scale = q.spec.sigma / q.spec.omega0

    def objective(k: float) -> float:
        # the grid lives in mismatch space, identical for every delta, so cached overlaps are reused
        return _safe_bound(q, side * k * scale)

    k_star, b_star = grid_golden_min(objective, k_range[0], k_range[1], points=points, log=True, xtol=1e-6)
    b0 = _safe_bound(q.with_eps(0.0))
    if b0 < b_star:
        return 0.0, b0
    return eps_for_mismatch(delta, side * k_star * scale), b_star


def optimize_fraction_and_epsilon(
    q: BoundQuery, n_bar: float, points: int = 21, **eps_kwargs
) -> tuple[float, float, float]:
    """Jointly optimise squeezing fraction and detuning at fixed energy ``n_bar``.

    Returns ``(y_star, eps_star, bound_star)``.
    """

    def best_for(y: float) -> tuple[float, float]:
        probe = GaussianProbe.from_fraction(n_bar, min(max(y, 0.0), 1.0))
        return optimize_epsilon(replace(q, probe=probe), **eps_kwargs)

    ys = [i / (points - 1) for i in range(points)]
    results = [best_for(y) for y in ys]
    i = min(range(points), key=lambda j: (results[j][1], j))
    y_star, (eps_star, b_star) = ys[i], results[i]
    if 0 < i < points - 1 and math.isfinite(b_star):
        y_ref, _ = golden_section(lambda y: best_for(y)[1], ys[i - 1], ys[i + 1], xtol=1e-4)
        eps_ref, b_ref = best_for(y_ref)
        if b_ref < b_star:
            y_star, eps_star, b_star = y_ref, eps_ref, b_ref
    return y_star, eps_star, b_star


def squeeze_db_to_r(db: float) -> float:
    """Squeezing parameter for ``db`` decibels below shot noise: ``e^{-2r} = 10^{-db/10}``."""
    if db < 0:
        raise DomainError("squeezing in dB must be non-negative")
    return db * math.log(10.0) / 20.0


def r_to_squeeze_db(r: float) -> float:
    return 20.0 * r / math.log(10.0)


@dataclass(frozen=True)
class RayleighLink:
    """Diffraction-limited link; ``t = t0`` when Bob sits at the Rayleigh length.

    Give either ``z_r`` or the beam waist and wavelength (``z_r = pi w0^2 / lambda``).
    """

    z_r: float | None = None
    t0: float = 1.0
    w0: float | None = None
    wavelength: float | None = None

    def __post_init__(self):
        beam = None
        if self.w0 is not None and self.wavelength is not None:
            beam = math.pi * self.w0**2 / self.wavelength
        if self.z_r is None:
            if beam is None:
                raise DomainError("RayleighLink needs z_r or (w0, wavelength)")
            object.__setattr__(self, "z_r", beam)
        elif beam is not None and not math.isclose(beam, self.z_r, rel_tol=1e-9):
            raise DomainError(f"z_r={self.z_r} inconsistent with pi w0^2/lambda = {beam}")
        if self.z_r <= 0:
            raise DomainError("z_r must be positive")
        if not 0.0 <= self.t0 <= 1.0:
            raise DomainError("t0 must lie in [0, 1]")


def rayleigh_transmission(link: RayleighLink, distance: float) -> float:
    """Transmission at distance ``L >= z_R``: ``t0 sqrt(2 / (1 + (L/z_R)^2))``."""
    if distance < link.z_r:
        raise DomainError(f"distance {distance} m is inside the Rayleigh length {link.z_r} m")
    ratio = distance / link.z_r
    return min(1.0, link.t0 * math.sqrt(2.0 / (1.0 + ratio * ratio)))


@dataclass(frozen=True)
class SweepPoint:
    length: float
    t: float
    delta: float
    eps: float
    theta: float
    bound: float


def _threads() -> int:
    try:
        n = int(os.environ.get("PROBE_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def sweep_altitude(
    link: RayleighLink,
    q: BoundQuery,
    l_grid: Iterable[float],
    optimize_eps: bool = True,
    threads: int | None = None,
) -> list[SweepPoint]:
    """Bound as a function of Bob's height ``L = r_b - r_a``.

    At every height the redshift and the transmission are recomputed and,
    with ``optimize_eps``, the detuning is re-optimised.  Points where the
    bound diverges are reported with ``bound = inf``.  Results come back in
    grid order regardless of ``threads`` (default ``PROBE_THREADS`` or all
    cores).
    """
    lengths = [float(x) for x in l_grid]

    def point(length: float) -> SweepPoint:
        t = rayleigh_transmission(link, length)
        qq = replace(q, geo=q.geo.with_height(length), channel_t=t)
        if optimize_eps:
            eps, bound = optimize_epsilon(qq)
        else:
            eps, bound = qq.spec.eps, _safe_bound(qq)
        qq = qq.with_eps(eps)
        try:
            theta = sensitivity(qq.geo, qq.spec)[0]
        except KinkError:
            theta = 1.0
        return SweepPoint(length, t, qq.geo.delta, eps, theta, bound)

    workers = threads if threads is not None else _threads()
    if workers <= 1 or len(lengths) <= 1:
        return [point(x) for x in lengths]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(point, lengths))


def measurements_from_sigma(sigma: float) -> int:
    """Rule-of-thumb repetition count ``N = sigma / 10`` (half-up rounding, at least 1)."""
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    return max(1, math.floor(sigma / 10.0 + 0.5))
