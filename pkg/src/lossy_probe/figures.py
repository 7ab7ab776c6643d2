"""Data pipelines behind the figures: long-format CSV tables and SVG line plots.

Each builder returns a ``FigureData`` whose rows repeat every parameter
they depend on, so a CSV file can be read without this module.  Builders are
deterministic: the same base query always gives byte-identical CSV.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .bounds import (
    BoundQuery,
    RayleighLink,
    _safe_bound,
    optimize_epsilon,
    squeeze_db_to_r,
    sweep_altitude,
)
from .channel import ChannelConfig, optimize_squeezing_fraction, qfi_squeezed_coherent
from .gaussian_core import GaussianProbe
from .overlap import ProfileSpec, _tanh_terms, eps_for_mismatch, overlap, tanh_profile

__all__ = ["FigureData", "FIGURES", "SKIPPED", "build_figure", "write_csv", "write_svg", "format_value"]

BASE_COLUMNS = ("figure", "curve", "r_a", "r_b", "r_s", "sigma", "omega0", "n_meas", "delta")
T_STEPS = [round(0.02 * i, 2) for i in range(1, 51)]


@dataclass
class FigureData:
    fig_id: int
    title: str
    x_key: str
    y_key: str
    columns: tuple[str, ...]
    rows: list[dict] = field(default_factory=list)
    xlog: bool = False
    ylog: bool = False
    xlabel: str = ""
    ylabel: str = ""
    notes: tuple[str, ...] = ()


def format_value(v) -> str:
    """Shortest round-trip text for numbers, locale independent."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def _base_row(fig_id: int, curve: str, q: BoundQuery) -> dict:
    g = q.geo
    return {
        "figure": fig_id,
        "curve": curve,
        "r_a": g.r_a,
        "r_b": g.r_b,
        "r_s": g.r_s,
        "sigma": q.spec.sigma,
        "omega0": q.spec.omega0,
        "n_meas": q.n_meas,
        "delta": g.delta,
    }


def _curve_label(name: str, value) -> str:
    return f"{name}={format_value(value)}"


# QFI figures ---------------------------------------------------------------

def _qfi_vs_fraction(fig_id: int, q: BoundQuery, energies, t_values, with_max: bool) -> FigureData:
    theta = 1.0 - 1e-3
    ys = np.linspace(0.0, 1.0, 51)
    data = FigureData(
        fig_id,
        "QFI versus squeezing fraction",
        "y",
        "qfi",
        BASE_COLUMNS + ("n_bar", "t", "theta", "y", "qfi"),
        xlabel="squeezing fraction y",
        ylabel="H(theta)",
    )
    for n_bar in energies:
        for t in t_values:
            label = _curve_label("n_bar", n_bar) if len(energies) > 1 else _curve_label("t", t)
            cfg = ChannelConfig(t, theta)
            for y in ys:
                h = qfi_squeezed_coherent(cfg, GaussianProbe.from_fraction(n_bar, float(y)))
                data.rows.append({**_base_row(fig_id, label, q), "n_bar": n_bar, "t": t, "theta": theta,
                                  "y": float(y), "qfi": h})
        if with_max:
            for t in t_values:
                y_star, h_star = optimize_squeezing_fraction(n_bar, ChannelConfig(t, theta))
                data.rows.append({**_base_row(fig_id, "max", q), "n_bar": n_bar, "t": t, "theta": theta,
                                  "y": y_star, "qfi": h_star})
    return data


def fig2(q: BoundQuery) -> FigureData:
    return _qfi_vs_fraction(2, q, [1.0, 10.0, 100.0, 1000.0], [1.0], with_max=False)


def _fig_qfi_loss(fig_id: int, n_bar: float):
    def build(q: BoundQuery) -> FigureData:
        return _qfi_vs_fraction(fig_id, q, [n_bar], [round(0.02 * i, 2) for i in range(51)], with_max=True)

    return build


# bound versus squeezing fraction -----------------------------------------

_BOUND_COLUMNS = BASE_COLUMNS + ("family", "delta_smooth", "n_bar", "t", "y", "eps", "offset_hz", "bound")


def _bound_vs_fraction(fig_id: int, q: BoundQuery, family: str, offset_hz: float | None, title: str,
                       t_values=T_STEPS, ys=None) -> FigureData:
    """``offset_hz`` fixes ``(delta - eps) omega0``; ``None`` optimises ``eps`` per point."""
    n_bar = 2.0
    ys = np.linspace(0.0, 1.0, 51) if ys is None else ys
    spec = replace(q.spec, family=family)
    data = FigureData(fig_id, title, "y", "bound", _BOUND_COLUMNS, ylog=True,
                      xlabel="squeezing fraction y", ylabel="relative error bound")
    delta = q.geo.delta
    for t in t_values:
        for y in ys:
            qq = replace(q, spec=spec, probe=GaussianProbe.from_fraction(n_bar, float(y)), channel_t=t)
            if offset_hz is None:
                eps, bound = optimize_epsilon(qq, points=41)
            else:
                eps = delta - offset_hz / spec.omega0
                bound = _safe_bound(qq.with_eps(eps))
            data.rows.append({**_base_row(fig_id, _curve_label("t", t), q), "family": family,
                              "delta_smooth": spec.delta_smooth if family == "tanh_rect" else None,
                              "n_bar": n_bar, "t": t, "y": float(y), "eps": eps,
                              "offset_hz": (delta - eps) * spec.omega0, "bound": bound})
    return data


def fig6(q):
    return _bound_vs_fraction(6, q, "gaussian", 1.0, "Gaussian profile, (delta - eps) omega0 = 1 Hz")


def fig7(q):
    return _bound_vs_fraction(7, q, "gaussian", 2.0 * q.spec.sigma, "Gaussian profile at x = 1/2")


def fig8(q):
    t_values = [0.02] + [round(0.1 * i, 1) for i in range(1, 11)]
    return _bound_vs_fraction(8, q, "gaussian", None, "Gaussian profile, eps optimised", t_values,
                              np.linspace(0.0, 1.0, 21))


def fig9(q):
    return _bound_vs_fraction(9, q, "rect", q.spec.sigma / 2.0, "Box profile, (delta - eps) omega0 = sigma/2")


def fig10(q):
    return _bound_vs_fraction(10, q, "rect", 1.0, "Box profile, (delta - eps) omega0 = 1 Hz")


def fig15(q):
    spec = replace(q.spec, delta_smooth=0.01)
    t_values = [0.02, 0.2, 0.4, 0.6, 0.8, 1.0]
    return _bound_vs_fraction(15, replace(q, spec=spec), "tanh_rect", None, "Smoothed box, eps optimised",
                              t_values, np.linspace(0.0, 1.0, 11))


# smoothed profile ---------------------------------------------------------

def fig12(q: BoundQuery) -> FigureData:
    data = FigureData(12, "Smoothed box profile squared", "offset_hz", "profile_sq",
                      BASE_COLUMNS + ("delta_smooth", "offset_hz", "profile_sq"),
                      xlabel="omega - omega0 (Hz)", ylabel="|F|^2")
    offsets = np.linspace(-1.5 * q.spec.sigma, 1.5 * q.spec.sigma, 601)
    for d in (0.01, 0.1):
        f = tanh_profile(offsets, q.spec.sigma, d)
        for w, v in zip(offsets, f * f):
            data.rows.append({**_base_row(12, _curve_label("Delta", d), q), "delta_smooth": d,
                              "offset_hz": float(w), "profile_sq": float(v)})
    return data


def fig13(q: BoundQuery) -> FigureData:
    data = FigureData(13, "Overlap around the matched detector", "offset_hz", "theta",
                      BASE_COLUMNS + ("delta_smooth", "eps", "offset_hz", "theta"),
                      xlabel="(delta - eps) omega0 (Hz)", ylabel="theta")
    eps = q.geo.delta
    for d in (0.01, 0.1):
        spec = replace(q.spec, family="tanh_rect", delta_smooth=d, eps=eps)
        for off in np.linspace(-2.0 * q.spec.sigma, 2.0 * q.spec.sigma, 161):
            delta = eps + off / spec.omega0
            data.rows.append({**_base_row(13, _curve_label("Delta", d), q), "delta_smooth": d, "eps": eps,
                              "offset_hz": float(off), "theta": overlap(delta, spec)})
    return data


def fig14(q: BoundQuery) -> FigureData:
    data = FigureData(14, "Fully squeezed probe approaching theta = 1", "one_minus_theta", "bound",
                      BASE_COLUMNS + ("delta_smooth", "side", "n_bar", "t", "eps", "offset_hz",
                                      "one_minus_theta", "bound"),
                      xlog=True, ylog=True, xlabel="1 - theta", ylabel="relative error bound")
    probe = GaussianProbe.from_fraction(2.0, 1.0)
    for d in (0.01, 0.1):
        spec = replace(q.spec, family="tanh_rect", delta_smooth=d)
        qq = replace(q, spec=spec, probe=probe, channel_t=1.0)
        for side, name in ((-1, "below"), (1, "above")):
            for k in np.logspace(-6, 0, 61):
                m = side * float(k) * spec.sigma / spec.omega0
                defect = _tanh_terms(m, spec.omega0, spec.sigma, d)[0]
                eps = eps_for_mismatch(q.geo.delta, m)
                data.rows.append({**_base_row(14, f"Delta={format_value(d)} {name}", q), "delta_smooth": d,
                                  "side": name, "n_bar": 2.0, "t": 1.0, "eps": eps,
                                  "offset_hz": (q.geo.delta - eps) * spec.omega0,
                                  "one_minus_theta": defect, "bound": _safe_bound(qq, m)})
    return data


# squeezing on top of a bright coherent pulse -------------------------------

def _mismatch_for_theta(spec: ProfileSpec, theta: float) -> float:
    target = 1.0 - theta

    def gap(m):
        return _tanh_terms(m, spec.omega0, spec.sigma, spec.delta_smooth)[0] - target

    return brentq(gap, 1e-9 * spec.sigma / spec.omega0, spec.sigma / spec.omega0, xtol=1e-30, rtol=1e-12)


def _bound_vs_db(fig_id: int, q: BoundQuery, spec: ProfileSpec, m: float, title: str) -> FigureData:
    data = FigureData(fig_id, title, "db", "bound",
                      BASE_COLUMNS + ("family", "delta_smooth", "alpha_sq", "t", "eps", "db", "theta", "bound"),
                      ylog=True, xlabel="squeezing (dB)", ylabel="relative error bound")
    eps = eps_for_mismatch(q.geo.delta, m)
    for t in (0.02, 0.2, 0.4, 0.6, 0.8, 1.0):
        for db in np.linspace(0.0, 20.0, 41):
            probe = GaussianProbe(math.sqrt(1000.0), r=squeeze_db_to_r(float(db)))
            qq = replace(q, spec=spec.with_eps(eps), probe=probe, channel_t=t)
            theta = overlap(q.geo.delta, qq.spec)
            data.rows.append({**_base_row(fig_id, _curve_label("t", t), q), "family": spec.family,
                              "delta_smooth": spec.delta_smooth if spec.family == "tanh_rect" else None,
                              "alpha_sq": 1000.0, "t": t, "eps": eps, "db": float(db), "theta": theta,
                              "bound": _safe_bound(qq, m)})
    return data


def fig16(q):
    spec = replace(q.spec, family="gaussian")
    m = 2.0 * spec.sigma / spec.omega0 / (1.0 - q.geo.delta)
    return _bound_vs_db(16, q, spec, m, "Gaussian profile at x = 1/2 with added squeezing")


def fig17(q):
    spec = replace(q.spec, family="tanh_rect", delta_smooth=0.01)
    return _bound_vs_db(17, q, spec, _mismatch_for_theta(spec, 0.999), "Smoothed box at theta = 0.999 with added squeezing")


# altitude -----------------------------------------------------------------

def fig18(q: BoundQuery) -> FigureData:
    data = FigureData(18, "Bound versus Bob's height", "length", "bound",
                      BASE_COLUMNS + ("family", "delta_smooth", "z_r", "db", "alpha_sq", "length", "t", "eps",
                                      "theta", "bound"),
                      xlog=True, ylog=True, xlabel="L (m)", ylabel="relative error bound")
    for family, d in (("gaussian", None), ("tanh_rect", 0.001)):
        spec = replace(q.spec, family=family, delta_smooth=d if d is not None else q.spec.delta_smooth)
        for z_r in (100.0, 1000.0):
            for db in (0.0, 10.0):
                probe = GaussianProbe(math.sqrt(1000.0), r=squeeze_db_to_r(db))
                grid = np.logspace(math.log10(z_r), 8.0, 41)
                points = sweep_altitude(RayleighLink(z_r), replace(q, spec=spec, probe=probe), grid)
                label = f"{family} z_r={format_value(z_r)} db={format_value(db)}"
                for p in points:
                    data.rows.append({**_base_row(18, label, q), "family": family, "delta_smooth": d, "z_r": z_r,
                                      "db": db, "alpha_sq": 1000.0, "length": p.length, "t": p.t, "eps": p.eps,
                                      "theta": p.theta, "bound": p.bound, "delta": p.delta,
                                      "r_b": q.geo.r_a + p.length})
    return data


FIGURES: dict[int, tuple[Callable[[BoundQuery], FigureData], str]] = {
    2: (fig2, "QFI vs squeezing fraction, t = 1, several probe energies"),
    3: (_fig_qfi_loss(3, 1.0), "QFI vs squeezing fraction, n_bar = 1, t from 0 to 1"),
    4: (_fig_qfi_loss(4, 10.0), "QFI vs squeezing fraction, n_bar = 10, t from 0 to 1"),
    5: (_fig_qfi_loss(5, 100.0), "QFI vs squeezing fraction, n_bar = 100, t from 0 to 1"),
    6: (fig6, "Gaussian profile bound vs squeezing fraction at 1 Hz detuning"),
    7: (fig7, "Gaussian profile bound vs squeezing fraction at x = 1/2"),
    8: (fig8, "Gaussian profile bound with eps optimised per point"),
    9: (fig9, "Box profile bound at sigma/2 detuning"),
    10: (fig10, "Box profile bound at 1 Hz detuning"),
    12: (fig12, "Smoothed box profile squared for Delta = 0.01, 0.1"),
    13: (fig13, "Smoothed box overlap vs redshift around eps = delta"),
    14: (fig14, "Fully squeezed bound as theta -> 1 from both sides"),
    15: (fig15, "Smoothed box bound with eps optimised per point"),
    16: (fig16, "Gaussian profile, bright coherent pulse plus squeezing"),
    17: (fig17, "Smoothed box at theta = 0.999, bright coherent pulse plus squeezing"),
    18: (fig18, "Bound vs Bob's height for two Rayleigh lengths"),
}

SKIPPED = {
    1: "channel schematic, no data",
    11: "duplicates the box-profile optimisation already covered by figures 8-10 and 15",
}


def build_figure(fig_id: int, q: BoundQuery | None = None) -> FigureData:
    if fig_id not in FIGURES:
        raise KeyError(fig_id)
    return FIGURES[fig_id][0](q if q is not None else BoundQuery())


def csv_text(data: FigureData) -> str:
    buf = io.StringIO()
    buf.write(f"# figure {data.fig_id}: {data.title}\n")
    buf.write(f"# x = {data.x_key}, y = {data.y_key}; one row per curve point, grouped by 'curve'\n")
    buf.write("# empty cells mark parameters that do not apply to the row\n")
    for note in data.notes:
        buf.write(f"# {note}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(data.columns)
    for row in data.rows:
        writer.writerow([format_value(row.get(c)) for c in data.columns])
    return buf.getvalue()


def write_csv(data: FigureData, path: Path) -> Path:
    path = Path(path)
    path.write_text(csv_text(data), encoding="utf-8")
    return path


def write_svg(data: FigureData, path: Path) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "lossy-probe"
    matplotlib.rcParams["svg.fonttype"] = "path"
    curves: dict[str, tuple[list, list]] = {}
    for row in data.rows:
        xs, ys = curves.setdefault(row["curve"], ([], []))
        xs.append(row[data.x_key])
        ys.append(row[data.y_key])
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    cmap = plt.get_cmap("winter")
    n = max(len(curves), 1)
    for i, (label, (xs, ys)) in enumerate(curves.items()):
        xs, ys = np.asarray(xs, float), np.asarray(ys, float)
        ok = np.isfinite(xs) & np.isfinite(ys)
        if data.ylog:
            ok &= ys > 0
        if data.xlog:
            ok &= xs > 0
        style = {"color": "red", "lw": 1.5} if label == "max" else {"color": cmap(i / max(n - 1, 1)), "lw": 0.9}
        marker = "o" if ok.sum() == 1 else None
        ax.plot(xs[ok], ys[ok], marker=marker, label=label if n <= 12 else None, **style)
    if data.xlog:
        ax.set_xscale("log")
    if data.ylog:
        ax.set_yscale("log")
    ax.set_xlabel(data.xlabel or data.x_key)
    ax.set_ylabel(data.ylabel or data.y_key)
    ax.set_title(data.title, fontsize=10)
    if n <= 12 and curves:
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return Path(path)
