"""Command-line interface for code generation, decoding, and simulation.

Options can come from a YAML config file (``--config``); explicit flags
override file values.  Simulation output goes to stdout or ``--out`` as
CSV (sweeps) or JSON (everything else).
"""

import json
import sys

import click
import numpy as np
import yaml

from . import channel, engine, kernels, montecarlo, presets, tanner


def _load_graph(code, gen, seed):
    if code and gen:
        raise click.UsageError("give either --code or --gen, not both")
    if code:
        with open(code) as f:
            return tanner.parse_alist(f.read())
    if gen:
        parts = gen.split(",")
        if len(parts) not in (3, 4):
            raise click.UsageError("--gen expects N,dv,dc[,min_girth]")
        n, dv, dc = (int(p) for p in parts[:3])
        min_girth = int(parts[3]) if len(parts) == 4 else 6
        return tanner.generate_regular(n, dv, dc, seed=seed,
                                       min_girth=min_girth)
    raise click.UsageError("a code is required: --code FILE or --gen N,dv,dc")


def _build_config(preset_name, overrides):
    if preset_name:
        return presets.preset(preset_name, **overrides)
    return engine.DecoderConfig(**overrides)


def _merge_yaml(ctx, config_path):
    """Fill unset options from a YAML file (flags win)."""
    if not config_path:
        return {}
    with open(config_path) as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise click.UsageError("config file must hold a mapping")
    return data


def _opt(ctx, filecfg, key, default=None):
    """Option precedence: explicit flag > YAML entry > default."""
    src = ctx.get_parameter_source(key)
    val = ctx.params.get(key)
    if src is not None and src.name != "DEFAULT":
        return val
    if key in filecfg:
        return filecfg[key]
    return val if val is not None else default


_DECODER_KEYS = ("ff_kind", "fbs_kind", "schedule", "alpha1", "alpha2",
                 "alpha3", "eta", "delta", "delta_fs", "delta_fi", "theta0",
                 "theta1", "theta2", "w", "noise_scale", "l_max",
                 "hard_decision", "loop_breaker", "fi_mode", "nms_factor")


def _decoder_overrides(ctx, filecfg):
    out = {}
    for k in _DECODER_KEYS:
        if k in ctx.params:
            src = ctx.get_parameter_source(k)
            if src is not None and src.name != "DEFAULT":
                out[k] = ctx.params[k]
                continue
        if k in filecfg:
            out[k] = filecfg[k]
    return out


def _emit(text, out):
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def common_options(f):
    for deco in reversed([
        click.option("--code", type=click.Path(exists=True),
                     help="parity-check matrix in alist format"),
        click.option("--gen", help="generate a code: N,dv,dc[,min_girth]"),
        click.option("--seed", type=int, default=0, show_default=True),
        click.option("--config", "config_path",
                     type=click.Path(exists=True),
                     help="YAML file with option defaults"),
        click.option("--preset", "preset_name",
                     type=click.Choice(presets.preset_names()),
                     help="named decoder configuration"),
        click.option("--l-max", "l_max", type=int, default=50,
                     show_default=True),
        click.option("--hard-decision/--soft-decision", default=False),
        click.option("--loop-breaker/--no-loop-breaker", default=True),
        click.option("--out", type=click.Path(), help="output file"),
    ]):
        f = deco(f)
    return f


@click.group()
@click.version_option(package_name="dwbf")
def main():
    """Bit-flipping LDPC decoding and Monte Carlo simulation."""


@main.command()
@common_options
@click.option("--snr", type=float, default=None, help="Eb/N0 in dB")
@click.option("--frames", type=int, default=1, show_default=True)
@click.pass_context
def decode(ctx, code, gen, seed, config_path, preset_name, l_max,
           hard_decision, loop_breaker, out, snr, frames):
    """Decode sample frames and print per-frame outcomes."""
    filecfg = _merge_yaml(ctx, config_path)
    graph = _load_graph(_opt(ctx, filecfg, "code"),
                        _opt(ctx, filecfg, "gen"), seed)
    cfg = _build_config(_opt(ctx, filecfg, "preset_name"),
                        _decoder_overrides(ctx, filecfg)).validate(graph)
    snr = _opt(ctx, filecfg, "snr")
    if snr is None:
        raise click.UsageError("--snr is required (flag or config file)")
    sigma = channel.ebn0_to_sigma(float(snr), graph.rate)
    u = np.zeros(graph.N, dtype=np.uint8)
    rows = []
    for i in range(frames):
        fr = channel.transmit(u, sigma, channel.frame_rng(seed, i))
        rng = channel.frame_rng(seed ^ 0x9E3779B97F4A7C15, i)
        o = engine.decode(graph, fr, cfg, rng=rng)
        rows.append({"frame": i, "converged": o.converged,
                     "iterations": o.iterations_used,
                     "bit_errors": int(o.u_hat.sum()),
                     "flips": o.flips_total,
                     "loop_events": o.loop_events,
                     "real_cmp": int(o.real_cmp.sum()),
                     "int_cmp": int(o.int_cmp.sum())})
    _emit(json.dumps(rows, indent=2) + "\n", out)


@main.command()
@common_options
@click.option("--snr", default=None,
              help="Eb/N0 list in dB, comma separated (e.g. 3.0,3.5,4.0)")
@click.option("--frames", type=int, default=100_000, show_default=True,
              help="frame budget per point")
@click.option("--frame-errors", type=int, default=100, show_default=True,
              help="stop a point after this many frame errors")
@click.option("--threads", type=int, default=1, show_default=True,
              help="worker processes")
@click.pass_context
def sweep(ctx, code, gen, seed, config_path, preset_name, l_max,
          hard_decision, loop_breaker, out, snr, frames, frame_errors,
          threads):
    """BER/FER sweep over Eb/N0 points; emits CSV."""
    filecfg = _merge_yaml(ctx, config_path)
    graph = _load_graph(_opt(ctx, filecfg, "code"),
                        _opt(ctx, filecfg, "gen"), seed)
    pname = _opt(ctx, filecfg, "preset_name")
    cfg = _build_config(pname, _decoder_overrides(ctx, filecfg))
    cfg.validate(graph)
    snr = _opt(ctx, filecfg, "snr")
    if snr is None:
        raise click.UsageError("--snr is required (flag or config file)")
    points = [float(s) for s in str(snr).split(",")]
    label = pname or cfg.ff_kind
    reports = montecarlo.run_sweep(
        graph, [(label, cfg)], points, master_seed=seed,
        max_frames=_opt(ctx, filecfg, "frames"),
        target_frame_errors=_opt(ctx, filecfg, "frame_errors"),
        workers=threads)
    _emit(montecarlo.reports_to_csv(reports), out)


@main.command()
@common_options
@click.option("--snr", type=float, default=None)
@click.option("--frames", type=int, default=2000, show_default=True)
@click.option("--iterations", default="1,30", show_default=True,
              help="iteration numbers to sample, comma separated")
@click.option("--bins", type=int, default=200, show_default=True)
@click.pass_context
def hist(ctx, code, gen, seed, config_path, preset_name, l_max,
         hard_decision, loop_breaker, out, snr, frames, iterations, bins):
    """Flipping-function histograms split by bit hypothesis; emits JSON."""
    filecfg = _merge_yaml(ctx, config_path)
    graph = _load_graph(_opt(ctx, filecfg, "code"),
                        _opt(ctx, filecfg, "gen"), seed)
    cfg = _build_config(_opt(ctx, filecfg, "preset_name"),
                        _decoder_overrides(ctx, filecfg)).validate(graph)
    snr = _opt(ctx, filecfg, "snr")
    if snr is None:
        raise click.UsageError("--snr is required (flag or config file)")
    iters = [int(s) for s in str(iterations).split(",")]
    seps = montecarlo.collect_ff_separation(graph, cfg, float(snr), iters,
                                            frames=frames, master_seed=seed,
                                            bins=bins)
    data = []
    for l in sorted(seps):
        s = seps[l]
        data.append({"iteration": l, "n_correct": s.n_correct,
                     "n_erroneous": s.n_erroneous,
                     "mean_correct": s.mean_correct,
                     "mean_erroneous": s.mean_erroneous,
                     "separation": s.separation,
                     "hist_edges": s.hist_edges.tolist(),
                     "hist_correct": s.hist_correct.tolist(),
                     "hist_erroneous": s.hist_erroneous.tolist()})
    _emit(json.dumps(data, indent=2) + "\n", out)


@main.command()
@click.option("--gen", required=True, help="N,dv,dc[,min_girth]")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), help="alist output file")
def codegen(gen, seed, out):
    """Generate a regular code and emit it in alist format."""
    graph = _load_graph(None, gen, seed)
    _emit(tanner.emit_alist(graph), out)
    click.echo(f"# N={graph.N} M={graph.M} girth={tanner.girth(graph)}",
               err=True)


@main.command()
@click.option("--code", type=click.Path(exists=True), required=True)
def girth(code):
    """Measure the girth of a stored code."""
    with open(code) as f:
        graph = tanner.parse_alist(f.read())
    g = tanner.girth(graph)
    click.echo("inf" if g == tanner.ACYCLIC else str(int(g)))


@main.command("presets")
def list_presets():
    """List the named decoder configurations."""
    for name in presets.preset_names():
        cfg = presets.preset(name)
        click.echo(f"{name}: ff={cfg.ff_kind} fbs={cfg.fbs_kind}"
                   + (f" schedule={cfg.schedule}" if cfg.schedule else ""))


@main.command()
def backend():
    """Show which kernel backend is active."""
    click.echo(kernels.backend_name())


if __name__ == "__main__":
    main()
