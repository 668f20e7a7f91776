"""Command-line surface composing the simulator into reproducible runs.

Subcommands: herald | table1 | wigner | sweep | loss | targets.  Every run
writes its resolved configuration (including auto-chosen cutoffs and windows)
next to the data so it can be reproduced exactly.  There is no randomness
anywhere; identical configs give identical files.

Exit codes: 0 success, 2 configuration error, 3 numerical/truncation error.
"""

from __future__ import annotations

import dataclasses
import functools
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import click

from . import fock, herald, loss, states, wigner
from .fidelity import fit_named_targets, fidelity, optimize_cat_fit
from .fock import Cutoff, SimulationError, auto_cutoff
from .herald import GainParam, critical_gain, herald_single_photon
from .states import CatSpec, SqueezeParam
from .wigner import PhaseSpaceWindow, negativity_sweep, sweep_window, wigner_of_state

INPUT_FAMILIES = ("sv", "coherent", "cat-even", "cat-odd", "fock")

CONFIG_KEYS = {
    "input", "r", "alpha", "n", "g", "dim", "window", "kappa_t", "out", "format",
}


class ConfigError(Exception):
    """Bad flags or config file; maps to exit code 2."""


@dataclass
class ExperimentConfig:
    """Resolved run parameters; serialized into every output directory."""

    input: str = "sv"
    r: float = 1.0
    alpha: float = 1.0
    n: int = 1
    g: tuple = ()
    g_critical: bool = False
    dim: str | int = "auto"
    window: str | tuple = "auto"
    kappa_t: tuple = (0.1, 0.5, 1.0)
    out: str = "results"
    format: str = "csv"

    def resolved(self, **extra):
        data = dataclasses.asdict(self)
        data.update(extra)
        return data


def _fmt(x) -> str:
    return f"{x:.12g}"


def _load_config_file(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return data


def _merge_config(config_path, **flags) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if config_path:
        file_data = _load_config_file(config_path)
        for key, val in file_data.items():
            if key == "g":
                _assign_gain(cfg, val)
            elif key == "kappa_t":
                cfg.kappa_t = tuple(float(v) for v in (val if isinstance(val, list) else [val]))
            elif key == "window":
                cfg.window = tuple(val) if isinstance(val, list) else val
            elif key == "dim":
                cfg.dim = val
            else:
                setattr(cfg, key, val)
    for key, val in flags.items():
        if val is None or (isinstance(val, tuple) and not val):
            continue
        if key == "g":
            _assign_gain(cfg, list(val))
        elif key == "kappa_t":
            cfg.kappa_t = tuple(float(v) for v in val)
        elif key == "window":
            cfg.window = _parse_window_flag(val)
        elif key == "dim":
            cfg.dim = _parse_dim_flag(val)
        else:
            setattr(cfg, key, val)
    _validate_config(cfg)
    return cfg


def _assign_gain(cfg, val):
    vals = val if isinstance(val, list) else [val]
    if any(str(v).lower() == "critical" for v in vals):
        if len(vals) != 1:
            raise ConfigError("'critical' cannot be combined with numeric gains")
        cfg.g_critical = True
        cfg.g = ()
    else:
        try:
            cfg.g = tuple(float(v) for v in vals)
        except ValueError as exc:
            raise ConfigError(f"bad gain value: {exc}")
        cfg.g_critical = False


def _parse_dim_flag(val):
    if str(val).lower() == "auto":
        return "auto"
    try:
        return int(val)
    except ValueError:
        raise ConfigError(f"--dim expects 'auto' or an integer, got {val!r}")


def _parse_window_flag(val):
    if str(val).lower() == "auto":
        return "auto"
    parts = str(val).split(",")
    if len(parts) != 6:
        raise ConfigError("--window expects 'auto' or xmin,xmax,pmin,pmax,nx,np")
    try:
        xmin, xmax, pmin, pmax = (float(p) for p in parts[:4])
        nx, npts = int(parts[4]), int(parts[5])
    except ValueError as exc:
        raise ConfigError(f"bad window spec: {exc}")
    return (xmin, xmax, pmin, pmax, nx, npts)


def _validate_config(cfg):
    if cfg.input not in INPUT_FAMILIES:
        raise ConfigError(f"--input must be one of {INPUT_FAMILIES}, got {cfg.input!r}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"--format must be csv or json, got {cfg.format!r}")
    if not cfg.g_critical and any(g < 1.0 for g in cfg.g):
        raise ConfigError("gains must be >= 1")


# ---------------------------------------------------------------------------
# state construction


def _input_builder(cfg):
    fam = cfg.input

    def build(cutoff):
        if fam == "sv":
            return states.squeezed_vacuum(SqueezeParam(cfg.r), cutoff)
        if fam == "coherent":
            return states.coherent(cfg.alpha, cutoff)
        if fam == "cat-even":
            return states.cat(CatSpec(cfg.alpha, "even"), cutoff)
        if fam == "cat-odd":
            return states.cat(CatSpec(cfg.alpha, "odd"), cutoff)
        return states.fock_state(cfg.n, cutoff)

    return build


def _resolve_cutoff(cfg) -> Cutoff:
    if cfg.dim != "auto":
        return Cutoff(int(cfg.dim))
    return auto_cutoff(_input_builder(cfg))


def _resolve_gains(cfg):
    if cfg.g_critical:
        if cfg.input not in ("cat-even", "cat-odd", "coherent"):
            raise ConfigError("--g critical requires a coherent-amplitude input")
        return (critical_gain(cfg.alpha),)
    return tuple(GainParam(g) for g in cfg.g)


def _resolve_window(cfg, state) -> PhaseSpaceWindow:
    if cfg.window == "auto":
        return sweep_window(state)
    xmin, xmax, pmin, pmax, nx, npts = cfg.window
    return PhaseSpaceWindow(xmin, xmax, pmin, pmax, nx, npts)


def _window_meta(win: PhaseSpaceWindow):
    return {"x_min": win.x_min, "x_max": win.x_max, "p_min": win.p_min,
            "p_max": win.p_max, "nx": win.nx, "np": win.np}


def _write_meta(outdir: Path, command: str, cfg: ExperimentConfig, **resolved):
    meta = {"command": command, "config": cfg.resolved(), "resolved": resolved}
    with open(outdir / "run_meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, default=str)


def _state_json(state, path, **extra):
    payload = {
        "dim": state.dim,
        "norm2": state.norm2(),
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
    }
    payload.update(extra)
    with open(path, "w") as fh:
        json.dump(payload, fh)


def _density_json(rho, path, **extra):
    payload = {
        "dim": rho.dim,
        "trace": rho.trace(),
        "real": [[float(v) for v in row] for row in rho.elements.real],
        "imag": [[float(v) for v in row] for row in rho.elements.imag],
    }
    payload.update(extra)
    with open(path, "w") as fh:
        json.dump(payload, fh)


# ---------------------------------------------------------------------------
# command plumbing


def _run_guarded(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConfigError as exc:
            click.echo(json.dumps({"error": "config", "message": str(exc)}), err=True)
            sys.exit(2)
        except (SimulationError, ValueError) as exc:
            click.echo(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
                       err=True)
            sys.exit(3)
    return wrapper


_shared_options = [
    click.option("--config", "config_path", type=click.Path(exists=True), default=None,
                 help="JSON config file; flags override its values."),
    click.option("--input", "input", type=click.Choice(INPUT_FAMILIES), default=None),
    click.option("--r", type=float, default=None, help="squeeze magnitude for sv input"),
    click.option("--alpha", type=float, default=None, help="coherent amplitude"),
    click.option("--n", type=int, default=None, help="Fock level for fock input"),
    click.option("--g", multiple=True, help="gain(s); repeatable, or 'critical'"),
    click.option("--dim", default=None, help="Fock cutoff per mode: auto or N"),
    click.option("--window", default=None,
                 help="auto or xmin,xmax,pmin,pmax,nx,np"),
    click.option("--kappa-t", "kappa_t", multiple=True, type=float,
                 help="dimensionless loss times; repeatable"),
    click.option("--out", default=None, help="output directory"),
    click.option("--format", "format", type=click.Choice(["csv", "json"]), default=None),
]


def _with_shared_options(func):
    for opt in reversed(_shared_options):
        func = opt(func)
    return func


def _prepare(kwargs):
    config_path = kwargs.pop("config_path", None)
    cfg = _merge_config(config_path, **kwargs)
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    return cfg, outdir


@click.group()
def main():
    """Heralded optical-parametric-amplifier state engineering toolkit."""


@main.command("herald")
@_with_shared_options
@_run_guarded
def cmd_herald(**kwargs):
    """Run the heralding protocol; write the output state and probabilities."""
    cfg, outdir = _prepare(kwargs)
    if not cfg.g and not cfg.g_critical:
        cfg.g = (2.5,)
    cutoff = _resolve_cutoff(cfg)
    state = _input_builder(cfg)(cutoff).normalized()
    gains = _resolve_gains(cfg)

    results = []
    for gain in gains:
        outcome = herald_single_photon(state, gain)
        entry = {"g": gain.g, "p_success": outcome.success_probability}
        closed = _closed_form_for(cfg, gain, cutoff)
        if closed is not None:
            entry["fidelity_vs_closed_form"] = fidelity(outcome.state, closed)
        tag = _fmt(gain.g).replace(".", "p")
        _state_json(outcome.state, outdir / f"state_g{tag}.json", **entry)
        results.append(entry)

    _write_meta(outdir, "herald", cfg, dim=cutoff.dim,
                gains=[g.g for g in gains], results=results)
    for entry in results:
        click.echo(json.dumps(entry))


def _closed_form_for(cfg, gain, cutoff):
    if cfg.input == "sv":
        _, realized = herald.sv_output_closed_form(cfg.r, 0.0, gain, cutoff)
        return realized
    if cfg.input == "coherent":
        return herald.coherent_output_closed_form(cfg.alpha, gain, cutoff)
    if cfg.input in ("cat-even", "cat-odd"):
        parity = "even" if cfg.input == "cat-even" else "odd"
        return herald.cat_output_closed_form(CatSpec(cfg.alpha, parity), gain, cutoff)
    return None


@main.command("table1")
@_with_shared_options
@_run_guarded
def cmd_table1(**kwargs):
    """Fit heralded squeezed-vacuum outputs to squeezed even-cat targets
    over a gain list; emit CSV columns g, gamma, alpha, F."""
    cfg, outdir = _prepare(kwargs)
    if not cfg.g:
        cfg.g = (1.0, 1.5, 2.5, 5.0, 7.5, 10.0)
    cfg.input = "sv"
    cutoff = _resolve_cutoff(cfg)
    state = _input_builder(cfg)(cutoff).normalized()

    rows = []
    for g in cfg.g:
        outcome = herald_single_photon(state, GainParam(g))
        fit = optimize_cat_fit(outcome.state)
        rows.append((g, fit.gamma_opt, fit.alpha_opt, fit.fidelity))

    path = outdir / "table1.csv"
    with open(path, "w") as fh:
        fh.write("g,gamma,alpha,F\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    if cfg.format == "json":
        with open(outdir / "table1.json", "w") as fh:
            json.dump([dict(zip(("g", "gamma", "alpha", "F"), row)) for row in rows], fh)
    _write_meta(outdir, "table1", cfg, dim=cutoff.dim, r=cfg.r)
    click.echo(f"wrote {path}")


@main.command("wigner")
@_with_shared_options
@_run_guarded
def cmd_wigner(**kwargs):
    """Wigner grid of the input state, or of the heralded output when --g
    is given; CSV (x, p, w) plus JSON."""
    cfg, outdir = _prepare(kwargs)
    cutoff = _resolve_cutoff(cfg)
    state = _input_builder(cfg)(cutoff).normalized()
    label = "input"
    if cfg.g or cfg.g_critical:
        gain = _resolve_gains(cfg)[0]
        state = herald_single_photon(state, gain).state
        label = f"output_g{_fmt(gain.g)}"
    state = fock.compact(state, tol=1e-13)
    window = _resolve_window(cfg, state)
    grid = wigner_of_state(state, window)
    wigner.grid_to_csv(grid, outdir / "wigner.csv")
    if cfg.format == "json":
        wigner.grid_to_json(grid, outdir / "wigner.json")
    _write_meta(outdir, "wigner", cfg, dim=cutoff.dim, evaluated=label,
                wigner_dim=state.dim, window=_window_meta(window))
    click.echo(f"wrote {outdir / 'wigner.csv'}")


@main.command("sweep")
@click.option("--family", type=click.Choice(["sv", "even_cat", "odd_cat"]),
              default="sv")
@click.option("--param", "param_spec", default="0:1.5:0.1",
              help="sweep grid start:stop:step for r (sv) or alpha (cats)")
@_with_shared_options
@_run_guarded
def cmd_sweep(family, param_spec, **kwargs):
    """Negativity-volume sweep over an input family and gain list."""
    cfg, outdir = _prepare(kwargs)
    try:
        start, stop, step = (float(p) for p in param_spec.split(":"))
    except ValueError:
        raise ConfigError("--param expects start:stop:step")
    params = [round(start + i * step, 12) for i in range(int(round((stop - start) / step)) + 1)]
    gains = cfg.g if cfg.g else (1.0, 1.5, 2.5, 5.0)
    rows = negativity_sweep(family, params, gains)
    path = outdir / "negativity_sweep.csv"
    wigner.sweep_to_csv(rows, path)
    _write_meta(outdir, "sweep", cfg, family=family, params=params,
                gains=list(gains))
    click.echo(f"wrote {path}")


@main.command("loss")
@_with_shared_options
@_run_guarded
def cmd_loss(**kwargs):
    """Photon-loss decay of the heralded output: negativity curve (CSV) and
    density-matrix snapshots (JSON)."""
    cfg, outdir = _prepare(kwargs)
    cutoff = _resolve_cutoff(cfg)
    state = _input_builder(cfg)(cutoff).normalized()
    if cfg.g or cfg.g_critical:
        gain = _resolve_gains(cfg)[0]
        state = herald_single_photon(state, gain).state
    state = fock.compact(state, tol=1e-13)
    schedule = loss.LossSchedule(tuple(cfg.kappa_t))

    snaps = loss.evolve_loss(state, schedule)
    for t, snap in zip(schedule.kappa_t_points, snaps):
        tag = _fmt(t).replace(".", "p")
        _density_json(snap, outdir / f"rho_kt{tag}.json", kappa_t=t)

    curve = loss.negativity_decay_curve(state, schedule)
    path = outdir / "negativity_decay.csv"
    with open(path, "w") as fh:
        fh.write("kappa_t,N\n")
        for t, n_val in curve:
            fh.write(f"{_fmt(t)},{_fmt(n_val)}\n")
    _write_meta(outdir, "loss", cfg, dim=cutoff.dim, loss_dim=state.dim,
                kappa_t=list(schedule.kappa_t_points))
    click.echo(f"wrote {path}")


@main.command("targets")
@_with_shared_options
@_run_guarded
def cmd_targets(**kwargs):
    """Fidelities of the heralded output against the named-target catalog."""
    cfg, outdir = _prepare(kwargs)
    cutoff = _resolve_cutoff(cfg)
    state = _input_builder(cfg)(cutoff).normalized()
    gain_val = None
    if cfg.g or cfg.g_critical:
        gain = _resolve_gains(cfg)[0]
        state = herald_single_photon(state, gain).state
        gain_val = gain.g
    rows = fit_named_targets(state)
    path = outdir / "targets.csv"
    with open(path, "w") as fh:
        fh.write("name,F,r_opt\n")
        for name, f_val, params in rows:
            r_opt = _fmt(params["r"]) if "r" in params else ""
            fh.write(f"{name},{_fmt(f_val)},{r_opt}\n")
    _write_meta(outdir, "targets", cfg, dim=cutoff.dim, gain=gain_val)
    click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
