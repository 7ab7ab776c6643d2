import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm, sqrtm

from lossy_probe.errors import ConvergenceError, DomainError
from lossy_probe.gaussian_core import VACUUM, GaussianProbe, QuadPair, bures_defect, fidelity, qfi_numeric

DIM = 70


def fock_state(q: QuadPair) -> np.ndarray:
    """Density matrix of a displaced squeezed thermal state in a truncated Fock basis."""
    a = np.diag(np.sqrt(np.arange(1, DIM)), 1)
    ad = a.T
    r = 0.25 * math.log(q.v_minus / q.v_plus)
    n_th = 0.5 * (math.sqrt(q.v_plus * q.v_minus) - 1.0)
    k = np.arange(DIM)
    rho = np.diag((n_th**k) / (1.0 + n_th) ** (k + 1)) if n_th > 0 else np.diag(k == 0).astype(float)
    s = expm(0.5 * r * (a @ a - ad @ ad))
    alpha = q.disp_re + 1j * q.disp_im
    d = expm(alpha * ad - np.conj(alpha) * a)
    u = d @ s
    return u @ rho @ u.conj().T


def fock_fidelity(q1: QuadPair, q2: QuadPair) -> float:
    r1 = fock_state(q1)
    s1 = sqrtm(r1)
    inner = sqrtm(s1 @ fock_state(q2) @ s1)
    return float(np.real(np.trace(inner)) ** 2)


def squeezed_thermal(n_th, r, alpha=0j):
    v = 2 * n_th + 1
    return QuadPair(v * math.exp(-2 * r), v * math.exp(2 * r), alpha.real, alpha.imag)


@pytest.mark.parametrize(
    "s1,s2",
    [
        (squeezed_thermal(0, 0, 0.5 + 0.2j), squeezed_thermal(0, 0, -0.3 + 0.1j)),
        (squeezed_thermal(0, 0.4), squeezed_thermal(0, 0.1)),
        (squeezed_thermal(0.3, 0.2, 0.4j), squeezed_thermal(0.1, 0.0, 0.1)),
        (squeezed_thermal(0.5, 0.3, 0.3), squeezed_thermal(0.2, 0.5, -0.2j)),
    ],
)
def test_fidelity_matches_fock_density_matrices(s1, s2):
    assert fidelity(s1, s2) == pytest.approx(fock_fidelity(s1, s2), rel=1e-6)


def test_coherent_overlap():
    a, b = 0.7 - 0.2j, -0.1 + 0.4j
    f = fidelity(QuadPair(1, 1, a.real, a.imag), QuadPair(1, 1, b.real, b.imag))
    assert f == pytest.approx(math.exp(-abs(a - b) ** 2), rel=1e-14)


def test_identical_states_and_vacuum():
    s = squeezed_thermal(0.3, 0.7, 1 + 1j)
    assert fidelity(s, s) == 1.0
    assert bures_defect(s, s) == 0.0
    assert VACUUM.purity == 1.0


def test_invalid_states_rejected():
    with pytest.raises(DomainError):
        QuadPair(0.5, 1.0)
    with pytest.raises(DomainError):
        QuadPair(-1.0, 1.0)
    with pytest.raises(DomainError):
        fidelity(VACUUM, VACUUM, phi_s=0.3)


def test_boundary_tolerance():
    # products within 1e-12 of the purity boundary are accepted as pure
    v = 0.3
    QuadPair(v, (1 - 5e-13) / v)


state = st.builds(
    squeezed_thermal,
    st.floats(0, 3),
    st.floats(0, 2),
    st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
)


@settings(max_examples=200, deadline=None)
@given(state, state)
def test_fidelity_symmetric_and_bounded(s1, s2):
    f12, f21 = fidelity(s1, s2), fidelity(s2, s1)
    assert 0.0 <= f12 <= 1.0
    assert f12 == pytest.approx(f21, rel=1e-12, abs=1e-300)


@settings(max_examples=100, deadline=None)
@given(state, state)
def test_bures_defect_consistent_with_fidelity(s1, s2):
    f = fidelity(s1, s2)
    assert bures_defect(s1, s2) == pytest.approx(1 - math.sqrt(f), rel=1e-9, abs=1e-15)


def test_probe_from_fraction():
    p = GaussianProbe.from_fraction(10.0, 0.3)
    assert p.mean_photons() == pytest.approx(10.0)
    assert p.squeezing_fraction() == pytest.approx(0.3)
    assert GaussianProbe.from_fraction(5.0, 0.0).r == 0.0
    with pytest.raises(DomainError):
        GaussianProbe.from_fraction(1.0, 1.5)


def test_qfi_numeric_coherent_displacement():
    # theta -> coherent state with amplitude theta*alpha has QFI 4|alpha|^2
    alpha = 1.7

    def family(theta):
        return QuadPair(1.0, 1.0, theta * alpha, 0.0)

    assert qfi_numeric(family, 0.4) == pytest.approx(4 * alpha**2, rel=1e-7)


def test_qfi_numeric_squeezing_parameter():
    # squeezed vacuum S(r)|0> with r as parameter: QFI = 2
    def family(r):
        return QuadPair(math.exp(-2 * r), math.exp(2 * r))

    assert qfi_numeric(family, 0.8) == pytest.approx(2.0, rel=1e-7)


def test_qfi_numeric_thermal_occupation():
    # thermal state in n: QFI = 1/(n(n+1))
    def family(n):
        return QuadPair(2 * n + 1, 2 * n + 1)

    assert qfi_numeric(family, 0.7) == pytest.approx(1 / (0.7 * 1.7), rel=1e-7)


def test_qfi_numeric_divergent_raises():
    def family(theta):
        # pure-state boundary with an infinite QFI at theta = 1
        g = 1 - theta * theta
        return QuadPair(g + theta * theta * math.exp(-2), g + theta * theta * math.exp(2))

    with pytest.raises(ConvergenceError):
        qfi_numeric(family, 1.0)
