"""Command-line entry point ``probe``.

Exit codes: 0 ok, 2 usage or domain error, 3 divergent bound, 4 numerical
non-convergence.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import figures
from .bounds import (
    BoundQuery,
    RayleighLink,
    evaluate_bound,
    optimal_coherent_gaussian_bound,
    optimal_epsilon_gaussian,
    optimize_epsilon,
    squeeze_db_to_r,
    sweep_altitude,
)
from .channel import ChannelConfig, channel_family, qfi_coherent_thermal, qfi_squeezed_coherent
from .errors import BoundDivergenceError, ConvergenceError, DomainError, KinkError
from .gaussian_core import GaussianProbe, qfi_numeric
from .overlap import (
    EARTH_RADIUS,
    EARTH_SCHWARZSCHILD_RADIUS,
    GEOSTATIONARY_RADIUS,
    GeoConfig,
    ProfileSpec,
    dtheta_drs,
    dtheta_drs_numeric,
    overlap,
)

EXIT_OK, EXIT_USAGE, EXIT_DIVERGES, EXIT_NONCONVERGENCE = 0, 2, 3, 4
PROFILES = {"gaussian": "gaussian", "rect": "rect", "tanh": "tanh_rect", "tanh_rect": "tanh_rect"}


@dataclass
class RunConfig:
    """Every knob of a run; defaults are the Earth-to-geostationary baseline."""

    scenario: str = "baseline"
    r_a: float = EARTH_RADIUS
    r_b: float = GEOSTATIONARY_RADIUS
    r_s: float = EARTH_SCHWARZSCHILD_RADIUS
    sigma: float = 2000.0
    omega0: float = 7.0e14
    n_meas: int = 200
    profile: str = "gaussian"
    delta_smooth: float = 0.01
    eps: float | None = None
    offset_hz: float | None = None
    eps_mode: str = "auto"
    t: float = 1.0
    alpha: float | None = None
    coherent: float | None = None
    r: float | None = None
    db: float | None = None
    nbar: float | None = None
    y: float | None = None
    phase: float = 0.0
    z_r: float = 1000.0
    t0: float = 1.0
    outdir: str = "."

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in vars(args).items() if k in names and v is not None})

    def probe(self) -> GaussianProbe:
        if self.nbar is not None:
            if any(v is not None for v in (self.alpha, self.coherent, self.r, self.db)):
                raise DomainError("--nbar/--y cannot be combined with --alpha/--coherent/--r/--db")
            return GaussianProbe.from_fraction(self.nbar, self.y if self.y is not None else 0.0, self.phase)
        if self.alpha is not None and self.coherent is not None:
            raise DomainError("give either --alpha or --coherent, not both")
        if self.r is not None and self.db is not None:
            raise DomainError("give either --r or --db, not both")
        alpha = self.alpha if self.alpha is not None else math.sqrt(self.coherent or 0.0)
        r = self.r if self.r is not None else squeeze_db_to_r(self.db or 0.0)
        if alpha == 0.0 and r == 0.0 and self.coherent is None and self.alpha is None:
            alpha = math.sqrt(2.0)
        return GaussianProbe(alpha, self.phase, r)

    def geo(self) -> GeoConfig:
        return GeoConfig(self.r_a, self.r_b, self.r_s)

    def spec(self) -> ProfileSpec:
        family = PROFILES[self.profile]
        delta = self.geo().delta
        if self.eps is not None and self.offset_hz is not None:
            raise DomainError("give either --eps or --offset-hz, not both")
        if self.eps is not None:
            eps = self.eps
        elif self.offset_hz is not None:
            eps = delta - self.offset_hz / self.omega0
        else:
            eps = 0.0
        return ProfileSpec(family, self.omega0, self.sigma, self.delta_smooth, eps)

    def query(self) -> BoundQuery:
        return BoundQuery(self.geo(), self.spec(), self.probe(), self.t, self.n_meas)


def load_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment, keys use ``_`` or ``-``."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _print_table(rows: list[tuple[str, object]]) -> None:
    width = max(len(k) for k, _ in rows)
    for key, value in rows:
        text = figures.format_value(value) if not isinstance(value, str) else value
        print(f"{key:<{width}}  {text}")


# commands -----------------------------------------------------------------

def cmd_qfi(args) -> int:
    cfg = RunConfig.from_args(args)
    probe = cfg.probe()
    n_th = args.nth
    if n_th > 0 and probe.r > 0:
        raise DomainError("no closed form for a squeezed probe with a thermal loss port")
    chan = ChannelConfig(cfg.t, args.theta, n_th)
    if n_th > 0:
        closed = qfi_coherent_thermal(chan, probe.alpha_mag)
    else:
        closed = qfi_squeezed_coherent(chan, probe)
    numeric = qfi_numeric(channel_family(probe, cfg.t, n_th), args.theta)
    diff = abs(closed - numeric) / abs(closed) if closed != 0 else abs(numeric)
    _print_table([("closed", closed), ("numeric", numeric), ("rel_diff", diff)])
    return EXIT_OK


def cmd_overlap(args) -> int:
    cfg = RunConfig.from_args(args)
    geo, spec = cfg.geo(), cfg.spec()
    rows = [("delta", geo.delta), ("eps", spec.eps), ("theta", overlap(geo.delta, spec))]
    try:
        rows.append(("dtheta_drs", dtheta_drs(geo, spec)))
    except KinkError:
        rows.append(("dtheta_drs", "undefined (kink at delta = eps)"))
    if args.numeric:
        rows.append(("dtheta_drs_numeric", dtheta_drs_numeric(geo, spec)))
    _print_table(rows)
    return EXIT_OK


def _resolve_eps(cfg: RunConfig, q: BoundQuery) -> tuple[BoundQuery, list]:
    extra = []
    mode = cfg.eps_mode
    if mode == "auto":
        mode = "fixed" if cfg.eps is not None or cfg.offset_hz is not None else "optimal"
    if mode == "optimal":
        if q.spec.family == "gaussian" and q.probe.r == 0.0:
            opt = optimal_epsilon_gaussian(q.spec, q.geo.delta, q)
            q = q.with_eps(opt.eps_analytic)
            extra.append(("eps_numeric", opt.eps_numeric))
        else:
            eps, _ = optimize_epsilon(q)
            q = q.with_eps(eps)
    elif mode == "delta":
        q = q.with_eps(q.geo.delta)
    return q, extra


def cmd_bound(args) -> int:
    cfg = RunConfig.from_args(args)
    q, extra = _resolve_eps(cfg, cfg.query())
    res = evaluate_bound(q)
    rows = [
        ("profile", q.spec.family),
        ("delta", q.geo.delta),
        ("eps", q.spec.eps),
        ("theta", res.theta),
        ("dtheta_drs", res.dtheta_drs),
        ("qfi", res.qfi),
        ("bound", res.bound),
        ("x", res.x),
    ] + extra
    if q.spec.family == "gaussian" and q.probe.r == 0.0 and q.probe.alpha_mag > 0:
        rows.append(("coherent_optimum_bures", optimal_coherent_gaussian_bound(q, "bures")))
        rows.append(("coherent_optimum_unit", optimal_coherent_gaussian_bound(q, "unit")))
    _print_table(rows)
    return EXIT_OK


SWEEP_VARIABLES = ("L", "t", "y", "offset_hz", "db")


def cmd_sweep(args) -> int:
    cfg = RunConfig.from_args(args)
    if args.points < 1:
        raise DomainError("--points must be at least 1")
    lo, hi = args.min, args.max
    if args.log:
        if lo <= 0 or hi <= 0:
            raise DomainError("log sweep needs positive bounds")
        grid = np.logspace(math.log10(lo), math.log10(hi), args.points)
    else:
        grid = np.linspace(lo, hi, args.points)
    var = args.variable
    q = cfg.query()
    data = figures.FigureData(
        0, f"sweep over {var}", "value", "bound",
        figures.BASE_COLUMNS + ("family", "variable", "value", "t", "eps", "theta", "bound"),
        xlog=args.log, ylog=True, xlabel=var, ylabel="relative error bound",
    )

    def row(qq: BoundQuery, value: float, bound: float, theta: float, t: float) -> dict:
        base = figures._base_row(0, cfg.scenario, qq)
        return {**base, "family": qq.spec.family, "variable": var, "value": float(value), "t": t,
                "eps": qq.spec.eps, "theta": theta, "bound": bound}

    if var == "L":
        link = RayleighLink(cfg.z_r, cfg.t0)
        for p in sweep_altitude(link, q, grid, optimize_eps=cfg.eps_mode in ("auto", "optimal")):
            qq = replace(q, geo=q.geo.with_height(p.length)).with_eps(p.eps)
            data.rows.append(row(qq, p.length, p.bound, p.theta, p.t))
    else:
        for value in grid:
            qq = q
            if var == "t":
                qq = replace(q, channel_t=float(value))
            elif var == "y":
                if cfg.nbar is None:
                    raise DomainError("sweeping y needs --nbar")
                qq = replace(q, probe=GaussianProbe.from_fraction(cfg.nbar, float(value), cfg.phase))
            elif var == "offset_hz":
                qq = q.with_eps(q.geo.delta - float(value) / q.spec.omega0)
            elif var == "db":
                qq = replace(q, probe=replace(q.probe, r=squeeze_db_to_r(float(value))))
            qq, _ = _resolve_eps(cfg, qq)
            try:
                res = evaluate_bound(qq)
                bound, theta = res.bound, res.theta
            except (BoundDivergenceError, KinkError):
                bound, theta = math.inf, overlap(qq.geo.delta, qq.spec)
            data.rows.append(row(qq, value, bound, theta, qq.channel_t))
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = figures.write_csv(data, outdir / "sweep.csv")
    svg_path = figures.write_svg(data, outdir / "sweep.svg")
    print(csv_path)
    print(svg_path)
    return EXIT_OK


def cmd_figure(args) -> int:
    if args.id not in figures.FIGURES:
        print(f"probe: unknown figure id {args.id}; see 'probe list-figures'", file=sys.stderr)
        return EXIT_USAGE
    cfg = RunConfig.from_args(args)
    q = BoundQuery(cfg.geo(), ProfileSpec("gaussian", cfg.omega0, cfg.sigma, cfg.delta_smooth), n_meas=cfg.n_meas)
    data = figures.build_figure(args.id, q)
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    print(figures.write_csv(data, outdir / f"fig{args.id}.csv"))
    if not args.no_svg:
        print(figures.write_svg(data, outdir / f"fig{args.id}.svg"))
    return EXIT_OK


def cmd_list_figures(args) -> int:
    for fig_id in sorted(set(figures.FIGURES) | set(figures.SKIPPED)):
        if fig_id in figures.FIGURES:
            print(f"{fig_id:>3}  {figures.FIGURES[fig_id][1]}")
        else:
            print(f"{fig_id:>3}  not reproduced: {figures.SKIPPED[fig_id]}")
    return EXIT_OK


# parser -------------------------------------------------------------------

def _add_geometry(p):
    g = p.add_argument_group("geometry and profile")
    g.add_argument("--r-a", type=float, help="Alice's radius (m)")
    g.add_argument("--r-b", type=float, help="Bob's radius (m)")
    g.add_argument("--r-s", type=float, help="Schwarzschild radius (m)")
    g.add_argument("--sigma", type=float, help="spectral width (Hz)")
    g.add_argument("--omega0", type=float, help="centre frequency (Hz)")
    g.add_argument("--delta-smooth", type=float, help="edge smoothing of the tanh profile")


def _add_detuning(p):
    g = p.add_argument_group("detector")
    g.add_argument("--profile", choices=sorted(PROFILES), help="frequency profile")
    g.add_argument("--eps", type=float, help="detector detuning")
    g.add_argument("--offset-hz", type=float, help="set eps through (delta - eps) * omega0")


def _add_probe(p):
    g = p.add_argument_group("probe and channel")
    g.add_argument("--t", type=float, help="channel transmission")
    g.add_argument("--alpha", type=float, help="coherent amplitude |alpha|")
    g.add_argument("--coherent", type=float, help="coherent photon number |alpha|^2")
    g.add_argument("--r", type=float, help="squeezing parameter")
    g.add_argument("--db", type=float, help="squeezing in dB below shot noise")
    g.add_argument("--nbar", type=float, help="total mean photon number")
    g.add_argument("--y", type=float, help="squeezing fraction (with --nbar)")
    g.add_argument("--phase", type=float, help="coherent angle relative to the squeezing axis")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="probe", description="Schwarzschild-radius estimation bounds")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; command-line flags win")
    common.add_argument("--outdir", help="output directory for files")
    common.add_argument("--scenario", help="label echoed into outputs")

    p = sub.add_parser("qfi", parents=[common], help="closed-form vs numerical QFI")
    _add_probe(p)
    p.add_argument("--theta", type=float, default=1.0 - 1e-3, help="overlap parameter")
    p.add_argument("--nth", type=float, default=0.0, help="thermal occupation of the loss port")
    p.set_defaults(func=cmd_qfi)

    p = sub.add_parser("overlap", parents=[common], help="overlap and its r_s derivative")
    _add_geometry(p)
    _add_detuning(p)
    p.add_argument("--numeric", action="store_true", help="also print a finite-difference derivative")
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("bound", parents=[common], help="relative error bound on r_s")
    _add_geometry(p)
    _add_detuning(p)
    _add_probe(p)
    p.add_argument("--n-meas", type=int, help="number of measurements")
    p.add_argument("--eps-mode", choices=("auto", "fixed", "optimal", "delta"),
                   help="how eps is chosen (auto: optimal unless --eps/--offset-hz is given)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", parents=[common], help="bound along one parameter axis")
    _add_geometry(p)
    _add_detuning(p)
    _add_probe(p)
    p.add_argument("--n-meas", type=int, help="number of measurements")
    p.add_argument("--eps-mode", choices=("auto", "fixed", "optimal", "delta"),
                   help="how eps is chosen (auto: optimal unless --eps/--offset-hz is given)")
    p.add_argument("--variable", choices=SWEEP_VARIABLES, default="L")
    p.add_argument("--min", type=float, required=True)
    p.add_argument("--max", type=float, required=True)
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--log", action="store_true", help="logarithmic grid")
    p.add_argument("--z-r", type=float, help="Rayleigh length for L sweeps (m)")
    p.add_argument("--t0", type=float, help="transmission at the Rayleigh length")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", parents=[common], help="write figure data (CSV) and plot (SVG)")
    p.add_argument("id", type=int)
    _add_geometry(p)
    p.add_argument("--n-meas", type=int, help="number of measurements")
    p.add_argument("--no-svg", action="store_true", help="skip the SVG plot")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("list-figures", help="list reproducible figures")
    p.set_defaults(func=cmd_list_figures)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    subparsers = parser._subparsers._group_actions[0].choices
    if known.config and known.command in subparsers:
        sub = subparsers[known.command]
        values = load_config(known.config)
        actions = {a.dest: a for a in sub._actions}
        unknown = sorted(set(values) - set(actions))
        if unknown:
            sub.error(f"unknown config keys: {', '.join(unknown)}")
        converted = {}
        for dest, raw in values.items():
            action = actions[dest]
            if action.nargs == 0:  # on/off flags
                converted[dest] = raw.lower() in ("1", "true", "yes", "on")
            else:
                try:
                    converted[dest] = action.type(raw) if action.type else raw
                except ValueError:
                    sub.error(f"config key {dest}: invalid value {raw!r}")
            action.required = False
        # the file only supplies defaults, so explicit flags still win
        sub.set_defaults(**converted)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except (BoundDivergenceError, KinkError) as exc:
        print(f"probe: bound diverges ({exc})", file=sys.stderr)
        return EXIT_DIVERGES
    except ConvergenceError as exc:
        print(f"probe: numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (DomainError, ValueError, OSError) as exc:
        print(f"probe: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
