"""First-order mode algebra for a mode-selective beamsplitter.

Modes are vectors over the orthonormal basis ``(a, a'', b)``: ``a`` is the
detector mode, ``a''`` the part of the received field orthogonal to it and
``b`` the beamsplitter's second input.  The commutator ``[m1, m2^dag]`` of two
such modes is the Hermitian inner product of their coefficient vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["ModeVector", "make_input", "apply_mode_bs", "vacuum_mode", "commutator", "BASIS"]


@dataclass(frozen=True)
class ModeVector:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (3,):
            raise DomainError("a mode has exactly three coefficients")
        object.__setattr__(self, "coeffs", c)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __add__(self, other: "ModeVector") -> "ModeVector":
        return ModeVector(self.coeffs + other.coeffs)

    def __rmul__(self, scalar: complex) -> "ModeVector":
        return ModeVector(scalar * self.coeffs)

    def __neg__(self) -> "ModeVector":
        return ModeVector(-self.coeffs)


BASIS = {name: ModeVector(np.eye(3)[i]) for i, name in enumerate(("a", "a2", "b"))}


def commutator(m1: ModeVector, m2: ModeVector) -> complex:
    """``[m1, m2^dag]`` as the inner product ``sum conj(c2) c1``."""
    return complex(np.vdot(m2.coeffs, m1.coeffs))


def _check_kappa(kappa: float) -> None:
    if not 0.0 <= kappa <= 1.0:
        raise DomainError(f"kappa must lie in [0, 1], got {kappa}")


def make_input(kappa: float) -> ModeVector:
    """Received mode ``a' = sqrt(kappa) a + sqrt(1 - kappa) a''``."""
    _check_kappa(kappa)
    return ModeVector([math.sqrt(kappa), math.sqrt(1.0 - kappa), 0.0])


def vacuum_mode(kappa: float) -> ModeVector:
    """``v' = sqrt(1 - kappa) a - sqrt(kappa) a''``, orthogonal to ``make_input(kappa)``."""
    _check_kappa(kappa)
    return ModeVector([math.sqrt(1.0 - kappa), -math.sqrt(kappa), 0.0])


def _unitary(theta_bs: float) -> np.ndarray:
    c, s = math.cos(theta_bs), math.sin(theta_bs)
    # a -> c a + s b, b -> s a - c b; a'' is untouched
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [s, 0.0, -c]])


def apply_mode_bs(m: ModeVector, theta_bs: float) -> tuple[ModeVector, ModeVector]:
    """Send mode ``m`` into port ``a`` and vacuum into ``b``.

    Returns the transmitted output (the image of ``m``) and the reflected
    output (the image of ``b``), each a unit vector when ``m`` is.  The
    beamsplitter acts only on the ``a`` component with ``sqrt(eta) = cos theta_bs``.
    """
    if not math.isclose(m.norm, 1.0, rel_tol=0.0, abs_tol=1e-12):
        raise DomainError("input mode must have unit norm")
    u = _unitary(theta_bs)
    return ModeVector(u @ m.coeffs), ModeVector(u @ BASIS["b"].coeffs)
