"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line through the ``report`` fixture and then
asserts; the lines are printed in the pytest terminal summary.
"""
import itertools
import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.integrate import quad

from lossy_probe.bounds import (
    BoundQuery,
    RayleighLink,
    limit_coherent_rect,
    limit_fully_squeezed_gaussian,
    limit_fully_squeezed_rect,
    optimal_epsilon_gaussian,
    optimize_epsilon,
    optimize_fraction_and_epsilon,
    rel_error_bound,
    squeeze_db_to_r,
    sweep_altitude,
)
from lossy_probe.channel import (
    ChannelConfig,
    channel_family,
    optimize_squeezing_fraction,
    qfi_coherent_thermal,
    qfi_squeezed_coherent,
)
from lossy_probe.cli import main
from lossy_probe.figures import _mismatch_for_theta, build_figure, csv_text
from lossy_probe.gaussian_core import GaussianProbe, qfi_numeric
from lossy_probe.mode_splitter import apply_mode_bs, commutator, make_input, vacuum_mode
from lossy_probe.overlap import GeoConfig, ProfileSpec, eps_for_mismatch, overlap, redshift_delta, tanh_profile

GEO = GeoConfig()
DELTA = GEO.delta
W0, SIG = 7.0e14, 2000.0


def test_1_closed_form_qfi_matches_bures_oracle(report):
    worst, count = 0.0, 0
    grid = itertools.product([0, 0.25, 0.5, 0.75, 1], [0.5, 0.9, 0.99, 0.999, 1 - 1e-6], [0, 0.5, 1, 2], [0, 1, 10], [0, 2])
    for t, theta, r, alpha, n_th in grid:
        if n_th and r:
            continue  # no closed form for a squeezed probe with a thermal loss port
        probe = GaussianProbe(alpha, 0.0, r)
        cfg = ChannelConfig(t, theta, n_th)
        closed = qfi_coherent_thermal(cfg, alpha) if n_th else qfi_squeezed_coherent(cfg, probe)
        numeric = qfi_numeric(channel_family(probe, t, n_th), theta, dtheta=1e-6)
        err = abs(numeric - closed) / closed if closed else abs(numeric)
        worst = max(worst, err)
        count += 1
    ok = report(1, worst <= 1e-4, f"{count} grid points, worst relative error {worst:.2e}")
    assert ok


def test_2_redshift_delta(report):
    linear, exact = redshift_delta(GEO), redshift_delta(GEO, "exact")
    rel = abs(linear - exact) / linear
    ok = report(2, abs(linear / 6.0e-10 - 1) <= 0.02 and rel <= 1e-6, f"delta = {linear:.4e}, forms differ by {rel:.1e}")
    assert ok


def test_3_optimal_operating_point(report):
    opt = optimal_epsilon_gaussian(ProfileSpec("gaussian"), DELTA)
    ok = report(3, abs(opt.x_numeric - 0.5) <= 1e-3, f"x_opt numeric = {opt.x_numeric:.7f}")
    assert ok


def test_4_limit_forms(report):
    squeezed = GaussianProbe.from_fraction(2.0, 1.0)
    g = BoundQuery(spec=ProfileSpec("gaussian", eps=DELTA * (1 - 1e-6)), probe=squeezed)
    err_g = abs(rel_error_bound(g) / limit_fully_squeezed_gaussian(g) - 1)
    c = BoundQuery(spec=ProfileSpec("rect", eps=DELTA - 1e-6 * SIG / W0), probe=GaussianProbe(10.0))
    err_c = abs(rel_error_bound(c) / limit_coherent_rect(c) - 1)
    err_r = 0.0
    for k in (1e-3, 1e-4, 1e-5):
        q = BoundQuery(spec=ProfileSpec("rect", eps=DELTA - k * SIG / W0), probe=squeezed)
        err_r = max(err_r, abs(rel_error_bound(q) / limit_fully_squeezed_rect(q) - 1))
    worst = max(err_g, err_c, err_r)
    ok = report(4, worst <= 0.01, f"relative gaps: squeezed gaussian {err_g:.1e}, coherent rect {err_c:.1e}, squeezed rect {err_r:.1e}")
    assert ok


def test_5_box_profile_advantage(report):
    gauss = BoundQuery(spec=ProfileSpec("gaussian"))
    tanh = BoundQuery(spec=ProfileSpec("tanh_rect", delta_smooth=0.01))
    _, _, b_gauss = optimize_fraction_and_epsilon(gauss, 2.0)
    _, _, b_tanh = optimize_fraction_and_epsilon(tanh, 2.0)
    ratio = b_gauss / b_tanh
    ok_best = report(5, ratio >= 3, f"best-vs-best ratio {ratio:.2f} (need >= 3)")
    full = GaussianProbe.from_fraction(2.0, 1.0)
    _, f_gauss = optimize_epsilon(replace(gauss, probe=full))
    _, f_tanh = optimize_epsilon(replace(tanh, probe=full))
    full_ratio = f_gauss / f_tanh
    ok_full = report(5, full_ratio >= 30, f"fully squeezed ratio {full_ratio:.2f} (need >= 30)")
    assert ok_best
    assert ok_full


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_6_smoothed_box_converges_to_box(report):
    worst = 0.0
    for k in np.linspace(0.1, 0.9, 17):
        eps = DELTA - k * SIG / W0
        rect = overlap(DELTA, ProfileSpec("rect", eps=eps))
        assert 0.1 - 1e-9 <= rect <= 0.9 + 1e-9
        worst = max(worst, abs(overlap(DELTA, ProfileSpec("tanh_rect", delta_smooth=1e-3, eps=eps)) - rect))
    panels = [-4 * SIG, -SIG / 2, 0.0, SIG / 2, 4 * SIG]
    norm_err = 0.0
    for d in (1e-3, 1e-2, 1e-1):
        total = sum(
            quad(lambda w: float(tanh_profile(w, SIG, d)) ** 2, a, b, limit=400, epsabs=1e-15, epsrel=1e-14)[0]
            for a, b in zip(panels[:-1], panels[1:])
        )
        norm_err = max(norm_err, abs(total - 1))
    ok = report(6, worst <= 1e-2 and norm_err <= 1e-10, f"max |theta_tanh - theta_rect| = {worst:.1e}, normalisation error {norm_err:.1e}")
    assert ok


def test_7_squeezing_regimes(report):
    cfg = ChannelConfig(1.0, 1 - 1e-3)
    ys = np.linspace(0, 1, 101)
    h = [qfi_squeezed_coherent(cfg, GaussianProbe.from_fraction(1.0, float(y))) for y in ys]
    ok_a = report(7, bool(np.all(np.diff(h) > 0)), "(a) QFI increasing in y at n=1, t=1")

    gain = 0.0
    for theta in (0.5, 0.9, 0.999, 1 - 1e-6):
        low = ChannelConfig(0.2, theta)
        _, h_star = optimize_squeezing_fraction(100.0, low)
        h0 = qfi_squeezed_coherent(low, GaussianProbe(10.0))
        gain = max(gain, (h_star - h0) / h0)
    ok_b = report(7, gain <= 0.01, f"(b) best squeezing gain at n=100, t=0.2: {100 * gain:.3f}%")

    details, ok_c = [], True
    for spec in (ProfileSpec("rect"), ProfileSpec("tanh_rect", delta_smooth=0.01)):
        m = (1e-3 * SIG / W0 / (1 - DELTA)) if spec.family == "rect" else _mismatch_for_theta(spec, 0.999)
        eps = eps_for_mismatch(DELTA, m)
        assert overlap(DELTA, spec.with_eps(eps)) == pytest.approx(0.999, abs=1e-9)

        def bound(t, db):
            probe = GaussianProbe(math.sqrt(1000.0), r=squeeze_db_to_r(db))
            return rel_error_bound(BoundQuery(spec=spec.with_eps(eps), probe=probe, channel_t=t))

        gain_1 = 1 - bound(1.0, 10.0) / bound(1.0, 0.0)
        gain_03 = 1 - bound(0.3, 10.0) / bound(0.3, 0.0)
        ok_c = ok_c and gain_1 > 0 and 0 < gain_03 < 0.05
        details.append(f"{spec.family}: {100 * gain_1:.1f}% at t=1, {100 * gain_03:.2f}% at t=0.3")
    ok_c = report(7, ok_c, "(c) 10 dB reduction " + ", ".join(details))
    assert ok_a and ok_b and ok_c


def test_8_altitude_sweep(report):
    detail, ok = [], True
    squeezed = GaussianProbe(math.sqrt(1000.0), r=squeeze_db_to_r(10.0))
    for z_r in (100.0, 1000.0):
        grid = np.logspace(math.log10(z_r), 8.0, 41)
        q = BoundQuery(spec=ProfileSpec("tanh_rect", delta_smooth=0.01), probe=squeezed)
        points = sweep_altitude(RayleighLink(z_r), q, grid)
        best = min(points, key=lambda p: p.bound)
        ok = ok and best.length == grid[0]
        detail.append(f"tanh z_R={z_r:g}: min at L={best.length:.3g}")
    grid = np.logspace(3.0, 8.0, 41)
    q = BoundQuery(spec=ProfileSpec("gaussian"), probe=GaussianProbe(math.sqrt(1000.0)))
    points = sweep_altitude(RayleighLink(1000.0), q, grid)
    best = min(points, key=lambda p: p.bound)
    interior = grid[0] < best.length < grid[-1]
    ok = ok and interior and 1e4 <= best.length <= 1e6
    detail.append(f"gaussian coherent z_R=1000: min at L={best.length:.3g}")
    ok = report(8, ok, ", ".join(detail))
    assert ok


def test_9_mode_splitter(report):
    rng = np.random.default_rng(20240611)
    worst = 0.0
    for kappa in rng.uniform(0, 1, 100):
        a_in = make_input(float(kappa))
        trans, refl = apply_mode_bs(a_in, math.pi / 2)
        v = vacuum_mode(float(kappa))
        gram = np.array([[commutator(x, y) for y in (trans, refl)] for x in (trans, refl)])
        worst = max(
            worst,
            abs(commutator(a_in, refl) - math.sqrt(kappa)),
            abs(commutator(a_in, v)),
            float(np.max(np.abs(gram - np.eye(2)))),
        )
    ok = report(9, worst <= 1e-12, f"100 random kappa, worst deviation {worst:.1e}")
    assert ok


def test_10_determinism_and_exit_codes(report, capsys):
    same = all(csv_text(build_figure(i)) == csv_text(build_figure(i)) for i in (2, 18))
    codes = {
        0: main(["qfi", "--t", "0.5", "--alpha", "1"]),
        2: main(["figure", "11"]),
        3: main(["bound", "--profile", "rect", "--eps", repr(DELTA)]),
        4: main(["qfi", "--t", "1", "--theta", "1", "--r", "1"]),
    }
    capsys.readouterr()
    codes_ok = all(k == v for k, v in codes.items())
    ok = report(10, same and codes_ok, f"figures 2 and 18 byte-identical: {same}; exit codes {sorted(codes.values())}")
    assert ok
