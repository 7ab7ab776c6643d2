"""Single-mode Gaussian states, their Uhlmann fidelity and a Bures-distance QFI.

Conventions: ``X = a + a^dagger`` and ``P = -i(a - a^dagger)`` so the vacuum
has unit quadrature variance.  Displacements are stored in amplitude units,
i.e. ``disp_re + 1j * disp_im = <a>``; with that choice the displacement
factor of the fidelity reproduces the coherent-state overlap
``|<alpha|beta>|^2 = exp(-|alpha - beta|^2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import mpmath

from .errors import ConvergenceError, DomainError

__all__ = [
    "QuadPair",
    "GaussianProbe",
    "VACUUM",
    "fidelity",
    "bures_defect",
    "qfi_numeric",
]

# floating-point slack allowed at the purity boundary V+ V- = 1
RADICAND_TOL = 1e-12

# V+ V- - 1 below this is treated as round-off on a pure state
PURE_SNAP = 1e-14

# working precision for the infidelity used by the finite-difference QFI
_MP_DPS = 40


@dataclass(frozen=True)
class QuadPair:
    """Diagonal single-mode Gaussian state: quadrature variances plus mean field."""

    v_plus: float
    v_minus: float
    disp_re: float = 0.0
    disp_im: float = 0.0

    def __post_init__(self):
        if not (self.v_plus > 0 and self.v_minus > 0):
            raise DomainError(f"variances must be positive, got {self.v_plus}, {self.v_minus}")
        if self.v_plus * self.v_minus - 1.0 < -RADICAND_TOL:
            raise DomainError(
                f"uncertainty relation violated: V+ V- = {self.v_plus * self.v_minus!r} < 1"
            )

    @property
    def purity(self) -> float:
        return 1.0 / math.sqrt(self.v_plus * self.v_minus)


VACUUM = QuadPair(1.0, 1.0, 0.0, 0.0)


@dataclass(frozen=True)
class GaussianProbe:
    """Squeezed coherent probe ``D(alpha) S(r)|0>`` with squeezing along X.

    ``alpha_mag`` is ``|alpha|``, ``theta`` the coherent-state angle and ``r``
    the squeezing parameter.
    """

    alpha_mag: float = 0.0
    theta: float = 0.0
    r: float = 0.0

    def __post_init__(self):
        if self.alpha_mag < 0:
            raise DomainError("alpha_mag must be non-negative")
        if self.r < 0:
            raise DomainError("squeezing parameter r must be non-negative")

    @classmethod
    def from_fraction(cls, n_bar: float, y: float, theta: float = 0.0) -> "GaussianProbe":
        """Probe with mean photon number ``n_bar`` of which a fraction ``y`` is squeezed."""
        if n_bar < 0:
            raise DomainError("n_bar must be non-negative")
        if not 0.0 <= y <= 1.0:
            raise DomainError(f"squeezing fraction must lie in [0, 1], got {y}")
        r = math.asinh(math.sqrt(y * n_bar))
        return cls(alpha_mag=math.sqrt((1.0 - y) * n_bar), theta=theta, r=r)

    @property
    def squeezed_photons(self) -> float:
        return math.sinh(self.r) ** 2

    def mean_photons(self) -> float:
        return self.squeezed_photons + self.alpha_mag**2

    def squeezing_fraction(self) -> float:
        n = self.mean_photons()
        return self.squeezed_photons / n if n > 0 else 0.0


def _check_state_angle(phi_s: float) -> None:
    if phi_s != 0.0:
        raise DomainError(
            "only phi_s = 0 is supported; rotate the variances of the second state before calling"
        )


def _purity_factor(s: QuadPair) -> float:
    excess = s.v_plus * s.v_minus - 1.0
    if excess < -RADICAND_TOL:
        raise DomainError(f"negative radicand {excess!r} in fidelity")
    return excess if excess > PURE_SNAP else 0.0


def fidelity(s1: QuadPair, s2: QuadPair, phi_s: float = 0.0) -> float:
    """Uhlmann fidelity between two single-mode Gaussian states with aligned axes.

    The variance part is evaluated as ``2 (sqrt(P) + sqrt(Q)) / ((V1+ + V2+)(V1- + V2-))``,
    algebraically identical to ``2 / (sqrt(P) - sqrt(Q))`` but free of cancellation.
    """
    _check_state_angle(phi_s)
    if s1 == s2:
        return 1.0
    q1 = _purity_factor(s1)
    q2 = _purity_factor(s2)
    p = (s1.v_plus * s2.v_minus + 1.0) * (s1.v_minus * s2.v_plus + 1.0)
    q = q1 * q2
    sum_plus = s1.v_plus + s2.v_plus
    sum_minus = s1.v_minus + s2.v_minus
    f_var = 2.0 * (math.sqrt(p) + math.sqrt(q)) / (sum_plus * sum_minus)
    xr = s2.disp_re - s1.disp_re
    xi = s2.disp_im - s1.disp_im
    f_disp = math.exp(-2.0 * xr * xr / sum_plus - 2.0 * xi * xi / sum_minus)
    return min(f_var * f_disp, 1.0)


def _mp_variances(s: QuadPair, excess: float):
    # states within PURE_SNAP of the boundary are projected onto it exactly:
    # their rounded product V+ V- = 1 + O(1e-16) would otherwise enter the
    # fidelity at first order and swamp the O(h^2) defect of nearby states
    a, b = mpmath.mpf(s.v_plus), mpmath.mpf(s.v_minus)
    if excess <= PURE_SNAP:
        a, b = mpmath.sqrt(a / b), mpmath.sqrt(b / a)
    return a, b


def bures_defect(s1: QuadPair, s2: QuadPair) -> float:
    """``1 - sqrt(F)`` evaluated in extended precision.

    Nearby states have ``1 - sqrt(F) ~ dTheta^2`` which double precision
    cannot resolve from ``F`` itself, so the whole expression is carried out
    with mpmath before rounding back to float.
    """
    if s1 == s2:
        return 0.0
    q1 = _purity_factor(s1)
    q2 = _purity_factor(s2)
    mpf = mpmath.mpf
    with mpmath.workdps(_MP_DPS):
        a1, b1 = _mp_variances(s1, q1)
        a2, b2 = _mp_variances(s2, q2)
        p = (a1 * b2 + 1) * (b1 * a2 + 1)
        q = max((a1 * b1 - 1) * (a2 * b2 - 1), mpf(0))
        log_f = mpmath.log(2 * (mpmath.sqrt(p) + mpmath.sqrt(q)) / ((a1 + a2) * (b1 + b2)))
        xr = mpf(s2.disp_re) - mpf(s1.disp_re)
        xi = mpf(s2.disp_im) - mpf(s1.disp_im)
        log_f -= 2 * xr**2 / (a1 + a2) + 2 * xi**2 / (b1 + b2)
        defect = -mpmath.expm1(log_f / 2)
        return max(float(defect), 0.0)


def qfi_numeric(
    family: Callable[[float], QuadPair],
    theta: float,
    dtheta: float = 1e-6,
    rtol: float = 1e-7,
    max_halvings: int = 10,
) -> float:
    """Quantum Fisher information of ``family`` at ``theta`` from the Bures distance.

    Evaluates ``8 (1 - sqrt(F(rho_theta, rho_theta+h))) / h^2`` for a halving
    sequence of steps.  Forward and backward steps are averaged (a central
    scheme, even in ``h``) and successive levels are Richardson-extrapolated.
    If the forward state is unphysical (e.g. ``theta + h > 1``) only backward
    steps are used and the extrapolation is first order.

    Raises ConvergenceError when, after ``max_halvings`` halvings, consecutive
    extrapolated values still differ by more than 1e-4 relative.
    """
    if dtheta <= 0:
        raise DomainError("dtheta must be positive")
    base = family(theta)

    def one_sided(h: float) -> float:
        return 8.0 * bures_defect(base, family(theta + h)) / (h * h)

    try:
        one_sided(dtheta)
        central = True
    except DomainError:
        central = False

    def estimate(h: float) -> float:
        if central:
            return 0.5 * (one_sided(h) + one_sided(-h))
        return one_sided(-h)

    factor = 4.0 if central else 2.0
    h = dtheta
    prev_raw = estimate(h)
    prev_ext = None
    change = math.inf
    for _ in range(max_halvings):
        h *= 0.5
        raw = estimate(h)
        ext = (factor * raw - prev_raw) / (factor - 1.0)
        if prev_ext is not None:
            change = abs(ext - prev_ext)
            if change <= rtol * abs(ext) + 1e-14:
                return max(ext, 0.0)
        prev_raw, prev_ext = raw, ext
    if change <= 1e-4 * abs(prev_ext) + 1e-14:
        return max(prev_ext, 0.0)
    raise ConvergenceError(
        f"Bures QFI did not settle at theta={theta!r}: last relative change {change / abs(prev_ext):.3g}"
    )
