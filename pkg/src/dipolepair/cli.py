"""Command-line front end: reproducible CSV (and optional SVG) outputs.

Subcommands mirror the workflows: ``rates`` (coupling curves vs separation),
``simulate`` (one-photon trajectories with the dual-solver cross-check),
``decay`` (vacuum decay from a chosen state), ``coherent`` (coherent-pulse
trajectories and the peak-vs-separation sweep), ``optimize`` (bandwidth
scans).  Presets fig2..fig8 regenerate the standard figure data; all outputs
are plain CSV written atomically (temp file + rename), so a failed run leaves
no partial files.  Exit codes: 0 ok, 2 validation, 3 numerical, 4 I/O.
"""

from __future__ import annotations

import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

import click
import numpy as np

from .coherent import CoherentDrive, evolve_coherent, peak_population_vs_separation
from .couplings import AtomPairConfig, collective_rates, rates_sweep
from .errors import DomainError, NumericalError
from .fock import decay_only, default_time_grid, evolve_amplitudes, evolve_hierarchy
from .optimize import OptimizationProblem, bandwidth_scan, optimize as run_optimize
from .pulses import (
    ANTISYMMETRIC, EQUAL_SUPERPOSITION, SYMMETRIC,
    antisymmetric_pulse, symmetric_pulse,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

_TARGETS = {
    "s": (SYMMETRIC, ("s",)),
    "a": (ANTISYMMETRIC, ("a",)),
    "eg": (EQUAL_SUPERPOSITION, ("s", "a")),
}


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(d):
        raise FileNotFoundError(f"output directory does not exist: {d}")
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_rows(path: str, header: str, rows):
    lines = [header]
    for row in rows:
        lines.append(",".join(_fmt(float(v)) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _load_config(preset: str | None, config_path: str | None) -> dict:
    cfg: dict = {}
    if preset is not None:
        ref = resources.files("dipolepair").joinpath(f"presets/{preset}.json")
        if not ref.is_file():
            raise DomainError(f"unknown preset {preset!r}")
        cfg.update(json.loads(ref.read_text()))
    if config_path is not None:
        with open(config_path) as fh:
            cfg.update(json.load(fh))
    if not cfg:
        raise DomainError("no configuration: pass --preset and/or --config")
    return cfg


def _kr_list(cfg: dict) -> list[float]:
    kr = cfg.get("kr")
    if kr is None:
        raise DomainError("config key 'kr' is required")
    if isinstance(kr, dict):
        return list(np.linspace(float(kr["start"]), float(kr["stop"]), int(kr["num"])))
    if isinstance(kr, (int, float)):
        return [float(kr)]
    return [float(v) for v in kr]


def _validated_pairs(cfg: dict) -> list[AtomPairConfig]:
    """Build all pair configs up front so domain errors precede any output."""
    theta = float(cfg.get("theta", math.pi / 2))
    gamma = float(cfg.get("gamma", 1.0))
    pairs = []
    for i, kr in enumerate(_kr_list(cfg)):
        try:
            pairs.append(AtomPairConfig(kr=kr, theta=theta, gamma=gamma))
        except DomainError as exc:
            raise DomainError(f"kr entry {i}: {exc}") from exc
    return pairs


def _target_setup(cfg: dict, rates):
    target = cfg.get("target", "s")
    if target not in _TARGETS:
        raise DomainError(f"target = {target!r} must be one of s, a, eg")
    profile, channels = _TARGETS[target]
    env_s = symmetric_pulse(rates) if "s" in channels else None
    env_a = antisymmetric_pulse(rates) if "a" in channels else None
    return target, profile, (env_s, env_a)


def _grid(cfg: dict, env, gamma: float):
    time_cfg = cfg.get("time", {})
    return default_time_grid(
        env, gamma=gamma,
        t_end=time_cfg.get("t_end"),
        n=int(time_cfg.get("samples", 1001)),
    )


def _run_parallel(tasks, workers: int):
    """Run callables concurrently; results returned in task order."""
    if workers <= 1 or len(tasks) <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(t) for t in tasks]
        return [f.result() for f in futures]


def _maybe_plot(plot: bool, out: str, name: str, curves, xlabel, ylabel):
    if not plot:
        return
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, x, y in curves:
        ax.plot(x, y, label=label, lw=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = os.path.join(out, name)
    tmp = path + ".tmp"
    fig.savefig(tmp, format="svg")
    plt.close(fig)
    os.replace(tmp, path)


def _common(fn):
    fn = click.option("--workers", type=int, default=1, show_default=True,
                      help="concurrent sweep entries")(fn)
    fn = click.option("--plot", is_flag=True, help="also write an SVG plot")(fn)
    fn = click.option("--out", type=click.Path(file_okay=False), default=".",
                      show_default=True, help="output directory")(fn)
    fn = click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                      default=None, help="JSON config file")(fn)
    fn = click.option("--preset", default=None, help="named preset (fig2..fig8, opt_*)")(fn)
    return fn


@click.group()
def cli():
    """Two-atom single-photon excitation toolkit."""


@cli.command()
@_common
def rates(preset, config_path, out, plot, workers):
    """Collective decay rate and level shift vs separation (CSV)."""
    cfg = _load_config(preset, config_path)
    pairs = _validated_pairs(cfg)
    rows = rates_sweep([p.kr for p in pairs], pairs[0].theta, pairs[0].gamma)
    path = os.path.join(out, cfg.get("output", "rates.csv"))
    _write_rows(path, "kr,gamma12_over_gamma,lambda12_over_gamma", rows)
    click.echo(f"wrote {path} ({len(rows)} rows)")
    kr = [r[0] for r in rows]
    _maybe_plot(plot, out, "rates.svg",
                [("gamma12/gamma", kr, [r[1] for r in rows]),
                 ("lambda12/gamma", kr, [r[2] for r in rows])],
                "kr", "rate ratio")


@cli.command()
@_common
def simulate(preset, config_path, out, plot, workers):
    """One-photon trajectories per kr, hierarchy solver with amplitude cross-check."""
    cfg = _load_config(preset, config_path)
    pairs = _validated_pairs(cfg)
    field = cfg.get("field", {"statistics": "fock1"})
    if field.get("statistics") != "fock1":
        raise DomainError("simulate requires field.statistics = 'fock1'; see 'coherent'")
    cross_check = bool(cfg.get("cross_check", True))

    def one(pair):
        r = collective_rates(pair)
        target, profile, env = _target_setup(cfg, r)
        grid = _grid(cfg, env, r.gamma)
        traj = evolve_hierarchy(r, profile, env, grid=grid)
        dev = 0.0
        if cross_check:
            ref = evolve_amplitudes(r, profile, env, grid)
            dev = max(
                float(np.max(np.abs(traj.P_s - ref.P_s))),
                float(np.max(np.abs(traj.P_a - ref.P_a))),
            )
        return traj, dev

    results = _run_parallel([lambda p=p: one(p) for p in pairs], workers)
    curves = []
    for pair, (traj, dev) in zip(pairs, results):
        path = os.path.join(out, f"trajectory_kr{_fmt(pair.kr)}.csv")
        _atomic_write(path, traj.to_csv_text())
        msg = f"wrote {path} (max P_s={traj.P_s.max():.6f}, max P_a={traj.P_a.max():.6f}"
        if cross_check:
            msg += f", solver dev={dev:.2e}"
        click.echo(msg + ")")
        which = {"s": traj.P_s, "a": traj.P_a, "eg": traj.P_atom1}[cfg.get("target", "s")]
        curves.append((f"kr={pair.kr:g}", traj.times, which))
        if cfg.get("write_envelopes", False):
            r = collective_rates(pair)
            _, _, env = _target_setup(cfg, r)
            for chan, e in zip(("s", "a"), env):
                if e is None:
                    continue
                ts = np.linspace(max(e.support[0], traj.times[0]), e.support[1], 600)
                rows = [(t, v.real, v.imag) for t, v in zip(ts, e.value(ts))]
                epath = os.path.join(out, f"envelope_{chan}_kr{_fmt(pair.kr)}.csv")
                _write_rows(epath, "t,re_xi,im_xi", rows)
                click.echo(f"wrote {epath}")
    _maybe_plot(plot, out, "simulate.svg", curves, "t (1/gamma)", "population")


@cli.command()
@_common
def decay(preset, config_path, out, plot, workers):
    """Vacuum decay from a chosen initial state, per kr."""
    cfg = _load_config(preset, config_path)
    pairs = _validated_pairs(cfg)
    initials = cfg.get("initial", ["s", "a"])
    if isinstance(initials, str):
        initials = [initials]
    t_end = float(cfg.get("time", {}).get("t_end", 8.0))
    n = int(cfg.get("time", {}).get("samples", 801))
    grid = np.linspace(0.0, t_end, n)

    combos = [(p, ini) for p in pairs for ini in initials]

    def one(pair, ini):
        return decay_only(collective_rates(pair), ini, grid)

    results = _run_parallel([lambda c=c: one(*c) for c in combos], workers)
    curves = []
    for (pair, ini), traj in zip(combos, results):
        path = os.path.join(out, f"decay_{ini}_kr{_fmt(pair.kr)}.csv")
        _atomic_write(path, traj.to_csv_text())
        click.echo(f"wrote {path}")
        pop = {"s": traj.P_s, "a": traj.P_a, "ee": traj.P_ee,
               "eg": traj.P_atom1, "ge": traj.P_atom2, "gg": traj.P_gg}[ini]
        curves.append((f"|{ini}>, kr={pair.kr:g}", traj.times, pop))
    _maybe_plot(plot, out, "decay.svg", curves, "t (1/gamma)", "population")


@cli.command()
@_common
def coherent(preset, config_path, out, plot, workers):
    """Coherent-pulse trajectories per kr plus the peak-population sweep."""
    cfg = _load_config(preset, config_path)
    pairs = _validated_pairs(cfg)
    alpha = complex(cfg.get("alpha", 1.0))
    target = cfg.get("target", "s")
    if target not in ("s", "a"):
        raise DomainError("coherent target must be 's' or 'a'")

    def one(pair):
        r = collective_rates(pair)
        _, profile, env = _target_setup(cfg, r)
        env_single = env[0] if target == "s" else env[1]
        grid = _grid(cfg, env_single, r.gamma)
        drive = CoherentDrive(alpha=alpha, profile=profile, envelope=env_single)
        return evolve_coherent(r, drive, grid)

    results = _run_parallel([lambda p=p: one(p) for p in pairs], workers)
    curves = []
    for pair, traj in zip(pairs, results):
        path = os.path.join(out, f"coherent_kr{_fmt(pair.kr)}.csv")
        _atomic_write(path, traj.to_csv_text())
        click.echo(f"wrote {path} (max P_{target}={getattr(traj, 'P_' + target).max():.6f})")
        curves.append((f"kr={pair.kr:g}", traj.times, getattr(traj, "P_" + target)))

    rows = peak_population_vs_separation(
        [p.kr for p in pairs], theta=pairs[0].theta, gamma=pairs[0].gamma,
        alpha=alpha, target=target,
    )
    sweep_path = os.path.join(out, "coherent_sweep.csv")
    other = "Pa" if target == "s" else "Ps"
    _write_rows(sweep_path, f"kr,maxP{target},Pee,{other},Pgg", rows)
    click.echo(f"wrote {sweep_path}")
    _maybe_plot(plot, out, "coherent.svg", curves, "t (1/gamma)", f"P_{target}")


@cli.command()
@_common
def optimize(preset, config_path, out, plot, workers):
    """Scan an envelope family and report the peak-excitation optimum."""
    cfg = _load_config(preset, config_path)
    pairs = _validated_pairs(cfg)
    if len(pairs) != 1:
        raise DomainError("optimize expects a single kr value")
    r = collective_rates(pairs[0])
    family = cfg.get("family", "rising_exponential")
    target = cfg.get("target", "s")
    lo, hi = cfg.get("bounds", [0.2, 8.0])
    budget = int(cfg.get("budget", 60))
    problem = OptimizationProblem(rates=r, target=target, family=family,
                                  bounds=(float(lo), float(hi)))
    result = run_optimize(problem, budget)
    scan_n = int(cfg.get("scan_points", 41))
    scan = bandwidth_scan(problem, np.linspace(float(lo), float(hi), scan_n))
    param_name = {"rising_exponential": "bandwidth", "square": "duration",
                  "gaussian": "width"}[family]
    path = os.path.join(out, f"scan_{family}_{target}.csv")
    _write_rows(path, f"{param_name},peak", scan)
    click.echo(f"wrote {path}")
    click.echo(
        f"optimum: {param_name} = {_fmt(result.best_params[0])}, "
        f"peak = {_fmt(result.best_peak)} "
        f"({result.evaluations} evaluations, converged={result.converged})"
    )
    _maybe_plot(plot, out, f"scan_{family}_{target}.svg",
                [(family, [p for p, _ in scan], [v for _, v in scan])],
                param_name, "peak population")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return EXIT_OK
    except click.ClickException as exc:
        exc.show()
        return EXIT_VALIDATION
    except click.Abort:
        return EXIT_VALIDATION
    except DomainError as exc:
        click.echo(f"validation error: {exc}", err=True)
        return EXIT_VALIDATION
    except NumericalError as exc:
        click.echo(f"numerical error: {exc}", err=True)
        return EXIT_NUMERICAL
    except OSError as exc:
        click.echo(f"I/O error: {exc}", err=True)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
