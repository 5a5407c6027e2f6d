"""Command-line front end.

    outcoupling bound-state --trap box --coupling 100
    outcoupling spectrum --trap harmonic --coupling 0.1 --atoms 21 --out s.csv --plot-script
    outcoupling figure fig2a --out fig2a.csv

Times on the command line are the dimensionless tau of each trap (box:
tau = t, oscillator: tau = 2t).  Output is CSV (``# key=value`` metadata,
a column header, rows) or JSON; both are byte-for-byte reproducible.

Exit codes: 0 success, 2 bad configuration, 3 numerical failure.
"""

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, dynamics, fano, observables, specfun, traps
from .errors import BracketError, ConvergenceError, DomainError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

TOLERANCE_RANGE = (1e-12, 1e-2)

TASKS = ("bound-state", "population", "spectrum", "spectrum-time", "correlation", "wavepacket", "figure")

# Fig. 1 pole offset: delta^2 / (2 pi^2) = 0.2
FIG1_DELTA = math.pi * math.sqrt(0.4)


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    task: str
    trap: str = traps.BOX
    coupling: float = 0.1
    atoms: int = 21
    statistics: str = dynamics.FERMI
    tau: float = None
    taus: tuple = None
    k_min: float = None
    k_max: float = None
    k_points: int = None
    x_grid: tuple = None
    x_prime: float = None
    level: int = None
    method: str = "exact"
    include_bound: bool = False
    exact_field: bool = False
    fmt: str = "csv"
    out: str = None
    tolerance: float = 1e-6
    plot_script: bool = False
    preset: str = None

    def echo(self):
        keys = ("task", "preset", "trap", "coupling", "atoms", "statistics", "tau", "taus", "k_min", "k_max",
                "k_points", "x_grid", "x_prime", "level", "method", "include_bound", "exact_field", "tolerance")
        return {k: _plain(getattr(self, k)) for k in keys}


def _plain(v):
    if isinstance(v, tuple):
        return [_plain(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


# ---------------------------------------------------------------------------
# figure presets


def _fig(task, **kw):
    return dict(task=task, **kw)


PRESETS = {
    "fig1": _fig("wavepacket", trap=traps.BOX, coupling=FIG1_DELTA, level=1, x_prime=20.0,
                 taus=(0.005, 10.0, 2000), atoms=1),
    "fig2a": _fig("spectrum", trap=traps.BOX, coupling=0.1),
    "fig2b": _fig("spectrum", trap=traps.BOX, coupling=10.0),
    "fig2c": _fig("spectrum", trap=traps.BOX, coupling=100.0),
    "fig3a": _fig("spectrum", trap=traps.HARMONIC, coupling=0.1),
    "fig3b": _fig("spectrum", trap=traps.HARMONIC, coupling=1.0),
    # caption repeats 0.1 for the strong-coupling panel; 100 follows the box series
    "fig3c": _fig("spectrum", trap=traps.HARMONIC, coupling=100.0),
    "fig4a": _fig("spectrum", trap=traps.BOX, coupling=0.1, statistics=dynamics.BOSE),
    "fig4b": _fig("spectrum", trap=traps.BOX, coupling=10.0, statistics=dynamics.BOSE),
    "fig4c": _fig("spectrum", trap=traps.BOX, coupling=100.0, statistics=dynamics.BOSE),
    "fig5a": _fig("spectrum", trap=traps.HARMONIC, coupling=0.1, statistics=dynamics.BOSE),
    "fig5b": _fig("spectrum", trap=traps.HARMONIC, coupling=10.0, statistics=dynamics.BOSE),
    "fig5c": _fig("spectrum", trap=traps.HARMONIC, coupling=100.0, statistics=dynamics.BOSE),
    "fig6a": _fig("spectrum-time", trap=traps.BOX, coupling=100.0, tau=0.5),
    "fig6b": _fig("spectrum-time", trap=traps.BOX, coupling=100.0, tau=2.0),
    "fig6c": _fig("spectrum-time", trap=traps.BOX, coupling=100.0, tau=5.0),
    "fig6d": _fig("spectrum-time", trap=traps.BOX, coupling=100.0, tau=10.0),
    "fig7a-strong": _fig("correlation", trap=traps.HARMONIC, coupling=100.0, tau=10.0,
                         x_grid=(0.0, 10.0, 201), x_prime=5.0, exact_field=True),
    "fig7a-weak": _fig("correlation", trap=traps.HARMONIC, coupling=0.1, tau=10.0,
                       x_grid=(0.0, 10.0, 201), x_prime=5.0, exact_field=True),
    "fig7b-strong": _fig("correlation", trap=traps.BOX, coupling=100.0, tau=10.0,
                         x_grid=(15.0, 25.0, 201), x_prime=20.0, exact_field=True),
    "fig7b-weak": _fig("correlation", trap=traps.BOX, coupling=0.1, tau=10.0,
                       x_grid=(15.0, 25.0, 201), x_prime=20.0, exact_field=True),
}


# ---------------------------------------------------------------------------
# parsing


def _grid_spec(text):
    """'start:stop:count' -> (start, stop, count)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must look like start:stop:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if count < 1 or not (math.isfinite(start) and math.isfinite(stop)) or (count > 1 and stop <= start):
        raise argparse.ArgumentTypeError("grid needs finite start < stop and count >= 1")
    return (start, stop, count)


def _finite(text):
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("value must be finite")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="outcoupling", description="Output coupling of trapped atoms: exact numerics.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("task", choices=TASKS)
    p.add_argument("preset", nargs="?", help="figure preset (figure task only): " + ", ".join(PRESETS))
    p.add_argument("--trap", choices=traps.KINDS)
    p.add_argument("--coupling", type=_finite, help="delta (box) or delta' (harmonic)")
    p.add_argument("--atoms", type=int)
    p.add_argument("--statistics", choices=(dynamics.FERMI, dynamics.BOSE))
    p.add_argument("--tau", type=_finite, help="dimensionless time")
    p.add_argument("--tau-grid", type=_grid_spec, dest="taus", help="start:stop:count (population, wavepacket)")
    p.add_argument("--k-min", type=_finite)
    p.add_argument("--k-max", type=_finite)
    p.add_argument("--k-points", type=int)
    p.add_argument("--x-grid", type=_grid_spec, help="start:stop:count")
    p.add_argument("--x-prime", type=_finite, help="reference point (correlation) or position (wavepacket)")
    p.add_argument("--level", type=int, help="coupled level index j (population) or odd n (wavepacket)")
    p.add_argument("--method", choices=("exact", "weak", "strong"))
    p.add_argument("--include-bound", action="store_true", default=None)
    p.add_argument("--exact-field", action="store_true", default=None,
                   help="keep transients in the field amplitudes (slower)")
    p.add_argument("--format", choices=("csv", "json"), dest="fmt")
    p.add_argument("--out")
    p.add_argument("--tolerance", type=_finite)
    p.add_argument("--plot-script", action="store_true", default=None)
    return p


def config_from_args(args):
    values = {}
    if args.task == "figure":
        if args.preset not in PRESETS:
            raise ConfigError(f"unknown or missing preset {args.preset!r}; choose from {', '.join(PRESETS)}")
        values.update(PRESETS[args.preset])
        values["preset"] = args.preset
    elif args.preset is not None:
        raise ConfigError("a preset name is only accepted by the figure task")
    else:
        values["task"] = args.task
    for key in ("trap", "coupling", "atoms", "statistics", "tau", "taus", "k_min", "k_max", "k_points", "x_grid",
                "x_prime", "level", "method", "include_bound", "exact_field", "fmt", "out", "tolerance",
                "plot_script"):
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    cfg = RunConfig(**values)
    validate(cfg)
    return cfg


def validate(cfg):
    if not cfg.coupling > 0:
        raise ConfigError("--coupling must be positive")
    if cfg.atoms < 1:
        raise ConfigError("--atoms must be >= 1")
    if not TOLERANCE_RANGE[0] <= cfg.tolerance <= TOLERANCE_RANGE[1]:
        raise ConfigError(f"--tolerance must lie in [{TOLERANCE_RANGE[0]:g}, {TOLERANCE_RANGE[1]:g}]")
    if cfg.tau is not None and cfg.tau < 0:
        raise ConfigError("--tau must be >= 0")
    if cfg.k_points is not None and cfg.k_points < 2:
        raise ConfigError("--k-points must be >= 2")
    if cfg.k_min is not None and cfg.k_min <= 0:
        raise ConfigError("--k-min must be positive")
    if cfg.k_min is not None and cfg.k_max is not None and cfg.k_max <= cfg.k_min:
        raise ConfigError("--k-max must exceed --k-min")
    if cfg.task == "spectrum-time" and cfg.tau is None:
        raise ConfigError("spectrum-time needs --tau")
    if cfg.task == "correlation":
        if cfg.tau is None or cfg.tau <= 0:
            raise ConfigError("correlation needs --tau > 0")
        if cfg.x_grid is None or cfg.x_prime is None:
            raise ConfigError("correlation needs --x-grid and --x-prime")
        if cfg.statistics != dynamics.FERMI:
            raise ConfigError("g2 is defined here for fermions; bosonic g1 is trivially 1")
    if cfg.task == "wavepacket":
        if cfg.trap != traps.BOX:
            raise ConfigError("the wave-packet transient is the box weak-coupling form")
        n = 1 if cfg.level is None else cfg.level
        if n < 1 or n % 2 == 0:
            raise ConfigError("wavepacket --level is the odd quantum number n")
        if cfg.taus is not None and cfg.taus[0] <= 0:
            raise ConfigError("wavepacket times must be > 0")
    if cfg.task == "population" and cfg.taus is not None and cfg.taus[0] < 0:
        raise ConfigError("population times must be >= 0")
    if cfg.plot_script and (cfg.out is None or cfg.fmt != "csv"):
        raise ConfigError("--plot-script needs --out and CSV output")
    if cfg.method != "exact" and cfg.task != "spectrum":
        raise ConfigError("--method applies to the spectrum task only")


# ---------------------------------------------------------------------------
# tasks


@dataclass
class Table:
    columns: tuple
    rows: list
    meta: dict
    extra: dict = field(default_factory=dict)


def _setup(cfg):
    trap = traps.TrapModel(cfg.trap, cfg.coupling)
    make = dynamics.occupations_fermi if cfg.statistics == dynamics.FERMI else dynamics.occupations_bose
    occ = make(trap, cfg.atoms)
    return trap, occ


def _linspace(spec):
    start, stop, count = spec
    return np.linspace(start, stop, count) if count > 1 else np.array([start])


def _k_grid(cfg, trap, occ):
    # same axis for either statistics: a bosonic filling still emits into
    # the dressed lines up to the fermionic Fermi level
    levels = max(len(occ), len(dynamics.occupations_fermi(trap, cfg.atoms)))
    top = float(trap.resonance_k(levels - 1))
    if trap.kind == traps.HARMONIC:
        # dressed peak above the Fermi level still matters at strong coupling
        top = max(top, float(trap.dressed_k(levels)))
    if cfg.k_min is None and cfg.k_max is None and cfg.k_points is None:
        return observables.figure_grid(trap, 1.3 * top)
    k_max = cfg.k_max if cfg.k_max is not None else 1.3 * top
    k_min = cfg.k_min if cfg.k_min is not None else k_max / (cfg.k_points or 2001)
    if k_max <= k_min:
        raise ConfigError("--k-max must exceed --k-min")
    return np.linspace(k_min, k_max, cfg.k_points or 2001)


def _base_meta(cfg, trap, occ):
    return {
        "version": __version__,
        "task": cfg.task,
        "preset": cfg.preset,
        "trap": trap.kind,
        "coupling": trap.coupling,
        "units": traps.UNITS[trap.kind],
        "atoms": cfg.atoms,
        "statistics": occ.statistics,
        "coupled_levels": len(occ),
        "occupations": occ.digest(),
    }


def task_bound_state(cfg):
    trap, occ = _setup(cfg)
    bs = fano.solve_bound_state(trap)
    meta = _base_meta(cfg, trap, occ)
    d = trap.coupling
    if trap.kind == traps.BOX:
        weak, strong = d**4 / 64.0, d**2 / 4.0
        weak_full, strong_full = d**4 / 16.0, d**2 / 2.0
    else:
        r = specfun.gamma_ratio(0.25, 0.75)
        weak, strong = 2.0 * d**4 * r * r, 2.0 * d**2
        weak_full, strong_full = 8.0 * d**4 * r * r, 8.0 * d**2
    meta.update(
        mu=bs.mu,
        mu2=bs.mu2,
        energy=bs.energy,
        eigen_residual=bs.eigen_residual(),
        completeness=bs.completeness(),
        mu2_weak_asymptote=weak,
        mu2_strong_asymptote=strong,
        mu2_weak_full_line=weak_full,
        mu2_strong_full_line=strong_full,
        n_max_infty=dynamics.n_max_infty(bs),
        total_residual=dynamics.total_residual(bs, occ),
    )
    rows = []
    for lv in traps.coupled_levels(trap, len(occ)):
        rows.append((lv.index, lv.n, bs.alpha(lv.index), dynamics.residual_population(bs, occ, lv.index)))
    return Table(("level", "n", "alpha_mu", "residual"), rows, meta)


def task_population(cfg):
    trap, occ = _setup(cfg)
    bs = fano.solve_bound_state(trap)
    cc = fano.ContinuumCoeffs(trap, bs)
    taus = _linspace(cfg.taus or (0.0, 5.0, 51))
    levels = [cfg.level] if cfg.level is not None else occ.occupied
    if any(j < 0 for j in levels):
        raise ConfigError("--level must be >= 0")
    rows = []
    for j in levels:
        for tau in taus:
            rows.append((float(tau), j, dynamics.population_fraction(cc, j, trap.time_from_tau(tau), cfg.tolerance)))
    meta = _base_meta(cfg, trap, occ)
    meta.update(mu2=bs.mu2, time_variable="tau")
    return Table(("t", "level", "fraction"), rows, meta)


def task_spectrum(cfg):
    trap, occ = _setup(cfg)
    k = _k_grid(cfg, trap, occ)
    if cfg.method == "exact":
        bs = fano.solve_bound_state(trap)
        t = None if cfg.tau is None else trap.time_from_tau(cfg.tau)
        res = observables.spectrum_infinite(trap, bs, occ, k, include_bound=cfg.include_bound, t=t)
    else:
        pick = {
            (traps.BOX, "weak"): observables.spectrum_weak_box,
            (traps.BOX, "strong"): observables.spectrum_strong_box,
            (traps.HARMONIC, "weak"): observables.spectrum_weak_ho,
            (traps.HARMONIC, "strong"): observables.spectrum_strong_ho,
        }[(trap.kind, cfg.method)]
        res = pick(trap.coupling, occ, k)
    meta = _base_meta(cfg, trap, occ)
    meta.update(method=res.method, include_bound=cfg.include_bound)
    return Table(("k", "value"), list(zip(res.k.tolist(), res.values.tolist())), meta)


def task_spectrum_time(cfg):
    trap, occ = _setup(cfg)
    k = _k_grid(cfg, trap, occ)
    bs = fano.solve_bound_state(trap)
    cc = fano.ContinuumCoeffs(trap, bs)
    res = observables.spectrum_time(trap, cc, occ, k, trap.time_from_tau(cfg.tau), cfg.tolerance)
    meta = _base_meta(cfg, trap, occ)
    meta.update(method=res.method, tau=cfg.tau, normalisation="same as the infinite-time spectrum")
    return Table(("k", "value"), list(zip(res.k.tolist(), res.values.tolist())), meta)


def task_correlation(cfg):
    trap, occ = _setup(cfg)
    bs = fano.solve_bound_state(trap)
    x = _linspace(cfg.x_grid)
    res = observables.correlations(trap, bs, occ, x, cfg.x_prime, trap.time_from_tau(cfg.tau),
                                   exact=cfg.exact_field, tol=cfg.tolerance)
    rows = [(float(xi), res.x_prime, float(g.real), float(g.imag), float(g2))
            for xi, g, g2 in zip(res.x, res.g1, res.g2)]
    meta = _base_meta(cfg, trap, occ)
    meta.update(tau=cfg.tau, field_path="exact" if cfg.exact_field else "asymptotic")
    return Table(("x", "x_prime", "g1_re", "g1_im", "g2"), rows, meta)


def task_wavepacket(cfg):
    n = 1 if cfg.level is None else cfg.level
    x = 20.0 if cfg.x_prime is None else cfg.x_prime
    taus = _linspace(cfg.taus or (0.005, 10.0, 2000))
    vals = observables.moshinsky_packet(n, x, taus, cfg.coupling, tol=min(cfg.tolerance, 1e-8))
    vals = np.atleast_1d(vals)
    rows = [(float(t), float(abs(v)), float(v.real), float(v.imag)) for t, v in zip(taus, vals)]
    meta = {
        "version": __version__,
        "task": cfg.task,
        "preset": cfg.preset,
        "trap": traps.BOX,
        "coupling": cfg.coupling,
        "units": traps.UNITS[traps.BOX],
        "n": n,
        "x": x,
    }
    return Table(("tau", "abs", "re", "im"), rows, meta)


RUNNERS = {
    "bound-state": task_bound_state,
    "population": task_population,
    "spectrum": task_spectrum,
    "spectrum-time": task_spectrum_time,
    "correlation": task_correlation,
    "wavepacket": task_wavepacket,
}


# ---------------------------------------------------------------------------
# output


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render(cfg, table):
    if cfg.fmt == "json":
        doc = {
            "version": __version__,
            "config": cfg.echo(),
            "meta": {k: _plain(v) for k, v in table.meta.items()},
            "columns": list(table.columns),
            "rows": [[_plain(v) for v in row] for row in table.rows],
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    buf = io.StringIO()
    for key, v in table.meta.items():
        buf.write(f"# {key}={_fmt(v)}\n")
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def plot_script(cfg, table, data_path):
    cols = table.columns
    if cols[:2] == ("k", "value"):
        xcol, ycol, xlabel, ylabel = 1, 2, "k", "<b_k^+ b_k>"
    elif cols[0] == "x":
        xcol, ycol, xlabel, ylabel = 1, 5, "x", "g2(x, x')"
    elif cols[0] == "tau":
        xcol, ycol, xlabel, ylabel = 1, 2, "tau", "|N|"
    elif cols[0] == "t":
        xcol, ycol, xlabel, ylabel = 1, 3, "tau", "population fraction"
    else:
        xcol, ycol, xlabel, ylabel = 2, 3, cols[1], cols[2]
    title = cfg.preset or cfg.task
    name = Path(data_path).name
    return (
        "set datafile separator ','\n"
        "set datafile commentschars '#'\n"
        "set key off\n"
        f"set title '{title}'\n"
        f"set xlabel '{xlabel}'\n"
        f"set ylabel '{ylabel}'\n"
        f"plot '{name}' every ::1 using {xcol}:{ycol} with lines\n"
    )


def run(cfg):
    """Execute one configuration; returns the rendered text."""
    table = RUNNERS[cfg.task](cfg)
    text = render(cfg, table)
    if cfg.out:
        out = Path(cfg.out)
        out.write_text(text)
        if cfg.plot_script:
            out.with_suffix(".gp").write_text(plot_script(cfg, table, out))
    return text


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        cfg = config_from_args(args)
        text = run(cfg)
    except observables.DegenerateIntensityError as exc:
        print(f"outcoupling: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, DomainError) as exc:
        print(f"outcoupling: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, BracketError, FloatingPointError, ArithmeticError) as exc:
        print(f"outcoupling: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"outcoupling: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if not cfg.out:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
