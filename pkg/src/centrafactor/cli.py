"""Command-line interface.

Three subcommands: ``analyze`` one edge list, ``corpus`` a manifest of
edge lists and generator tokens, and ``generate`` a synthetic network.
Every analysis knob is a flag; defaults can also come from a TOML config
file (``--config``), with precedence defaults < file < environment < flags.
Environment variables use the ``CENTRAFACTOR_`` prefix, for example
``CENTRAFACTOR_CORPUS_WORKERS=4``.

Exit codes: 0 success, 1 no usable analysis was produced, 2 I/O error,
3 configuration error.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import __version__
from .generators import GeneratorError, GeneratorSpec, generate
from .graph import EdgeListError, parse_edge_list, serialize_edge_list
from .pipeline import (
    AnalysisConfig,
    ConfigError,
    analyze_network,
    build_corpus_report,
    emit_reports,
    load_manifest,
    run_corpus,
)
from . import plots

EXIT_NO_RESULTS = 1
EXIT_IO = 2
EXIT_CONFIG = 3


def _load_config_file(ctx: click.Context, param: click.Parameter, value: str | None):
    if not value:
        return None
    try:
        with open(value, "rb") as handle:
            data = tomllib.load(handle)
    except OSError as exc:
        raise click.exceptions.Exit(_fail(EXIT_IO, f"cannot read config file: {exc}"))
    except tomllib.TOMLDecodeError as exc:
        raise click.exceptions.Exit(_fail(EXIT_CONFIG, f"bad config file: {exc}"))
    ctx.default_map = {name: dict(data) for name in ("analyze", "corpus", "generate")}
    return value


def _fail(code: int, message: str) -> int:
    click.echo(f"error: {message}", err=True)
    return code


def analysis_options(command):
    """Attach every AnalysisConfig field as a flag."""
    options = [
        click.option("--communality-threshold", type=float, default=0.98,
                     show_default=True, help="Minimum communality to accept a factor model."),
        click.option("--variance-threshold", type=float, default=0.99,
                     show_default=True, help="Variance share for the retention rule."),
        click.option("--strong-threshold", type=float, default=0.79,
                     show_default=True, help="Cutoff between strong and weak-moderate regimes."),
        click.option("--kaiser-normalize/--no-kaiser-normalize", default=False,
                     show_default=True, help="Row-normalize loadings before rotation."),
        click.option("--tie-tol", type=float, default=1e-6, show_default=True,
                     help="Loading-magnitude tolerance for dominant-factor ties."),
        click.option("--power-tol", type=float, default=1e-10, show_default=True,
                     help="Power-iteration convergence tolerance."),
        click.option("--power-max-iter", type=int, default=1000, show_default=True,
                     help="Power-iteration iteration budget."),
        click.option("--varimax-tol", type=float, default=1e-10, show_default=True,
                     help="Varimax per-sweep improvement tolerance."),
        click.option("--varimax-max-sweeps", type=int, default=500, show_default=True,
                     help="Varimax sweep budget."),
        click.option("--lcc-policy", type=click.Choice(["extract", "error"]),
                     default="extract", show_default=True,
                     help="Handling of disconnected input graphs."),
        click.option("--seed", type=int, default=0, show_default=True,
                     help="Base seed for generator sources without an explicit seed."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _build_config(**kwargs) -> AnalysisConfig:
    try:
        cfg = AnalysisConfig(**kwargs)
        cfg.validate()
    except ConfigError as exc:
        raise SystemExit(_fail(EXIT_CONFIG, str(exc)))
    return cfg


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(version=__version__, prog_name="centrafactor")
@click.option("--config", "config_path", type=click.Path(dir_okay=False),
              is_eager=True, expose_value=False, callback=_load_config_file,
              help="TOML file supplying defaults for the flags below.")
def cli():
    """Centrality metrics, factor analysis, and canonical correlation for
    undirected networks."""


@cli.command()
@click.argument("edgelist", type=click.Path(dir_okay=False))
@click.option("--json", "json_out", type=click.Path(dir_okay=False),
              help="Write the network report as JSON here (default: stdout).")
@click.option("--svg", "svg_dir", type=click.Path(file_okay=False),
              help="Also emit the figure set into this directory.")
@click.option("--dataset-csv", type=click.Path(dir_okay=False),
              help="Write the per-node centrality dataset as CSV here.")
@analysis_options
def analyze(edgelist, json_out, svg_dir, dataset_csv, **config_kwargs):
    """Analyze a single edge-list file."""
    import json as json_mod

    from . import centrality as centrality_mod
    from .graph import largest_connected_component

    cfg = _build_config(**config_kwargs)
    try:
        text = Path(edgelist).read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemExit(_fail(EXIT_IO, str(exc)))
    try:
        g, diagnostics = parse_edge_list(text)
    except EdgeListError as exc:
        raise SystemExit(_fail(EXIT_NO_RESULTS, f"{edgelist}: {exc}"))

    report = analyze_network(g, cfg, name=Path(edgelist).name,
                             parse_diagnostics=diagnostics)
    payload = json_mod.dumps(report.to_dict(), indent=2) + "\n"
    try:
        if json_out:
            Path(json_out).write_text(payload, encoding="utf-8")
        else:
            click.echo(payload, nl=False)
        if dataset_csv:
            target = g if g.is_connected() else largest_connected_component(g)
            dataset = centrality_mod.centrality_dataset(
                target, evc_tol=cfg.power_tol, evc_max_iter=cfg.power_max_iter
            )
            Path(dataset_csv).write_text(dataset.to_csv(target.labels),
                                         encoding="utf-8")
        if svg_dir:
            corpus = build_corpus_report([report], cfg)
            plots.emit_plots(corpus, svg_dir, cfg.strong_threshold)
    except OSError as exc:
        raise SystemExit(_fail(EXIT_IO, str(exc)))
    except (centrality_mod.GraphTooSmallError,
            centrality_mod.DisconnectedGraphError) as exc:
        raise SystemExit(_fail(EXIT_NO_RESULTS, str(exc)))


@cli.command()
@click.argument("manifest", type=click.Path(dir_okay=False))
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False),
              help="Directory for reports and figures.")
@click.option("--formats", default="json,csv", show_default=True,
              help="Comma-separated report formats (json, csv).")
@click.option("--svg/--no-svg", "emit_svg", default=True, show_default=True,
              help="Emit the figure set alongside the reports.")
@click.option("--workers", type=int, default=1, show_default=True,
              help="Concurrent analysis processes (output is identical).")
@analysis_options
def corpus(manifest, out_dir, formats, emit_svg, workers, **config_kwargs):
    """Analyze every source in a manifest file."""
    cfg = _build_config(**config_kwargs)
    wanted = tuple(part.strip() for part in formats.split(",") if part.strip())
    unknown = set(wanted) - {"json", "csv"}
    if unknown:
        raise SystemExit(_fail(EXIT_CONFIG, f"unknown formats: {sorted(unknown)}"))
    try:
        sources = load_manifest(manifest, default_seed=cfg.seed)
    except OSError as exc:
        raise SystemExit(_fail(EXIT_IO, str(exc)))
    except (ValueError, GeneratorError) as exc:
        raise SystemExit(_fail(EXIT_CONFIG, str(exc)))

    report = run_corpus(sources, cfg, workers=workers)
    try:
        written = emit_reports(report, out_dir, formats=wanted)
        if emit_svg:
            written.update(plots.emit_plots(report, out_dir, cfg.strong_threshold))
    except OSError as exc:
        raise SystemExit(_fail(EXIT_IO, str(exc)))
    loaded = sum(1 for r in report.networks if r.loaded)
    click.echo(
        f"analyzed {report.analyzed_count}/{len(report.networks)} networks fully; "
        f"wrote {', '.join(str(p) for p in written.values())}",
        err=True,
    )
    if loaded == 0:
        raise SystemExit(EXIT_NO_RESULTS)


@cli.command(name="generate")
@click.option("--model", required=True, type=click.Choice(["random", "scale-free", "small-world"]))
@click.option("--nodes", "n", required=True, type=int, help="Node count.")
@click.option("--p", type=float, help="Edge probability (random model).")
@click.option("--edges-per-node", "m", type=int, help="Edges per new node (scale-free model).")
@click.option("--ring-k", "k", type=int, help="Even ring degree (small-world model).")
@click.option("--rewire-beta", "beta", type=float, help="Rewire probability (small-world model).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              help="Write the edge list here (default: stdout).")
def generate_cmd(model, n, p, m, k, beta, seed, out_path):
    """Generate a synthetic network as a canonical edge list."""
    try:
        spec = GeneratorSpec(model=model, n=n, p=p, m=m, k=k, beta=beta, seed=seed)
        g = generate(spec)
    except GeneratorError as exc:
        raise SystemExit(_fail(EXIT_CONFIG, str(exc)))
    text = serialize_edge_list(g)
    try:
        if out_path:
            Path(out_path).write_text(text, encoding="utf-8")
        else:
            click.echo(text, nl=False)
    except OSError as exc:
        raise SystemExit(_fail(EXIT_IO, str(exc)))


def main() -> None:
    try:
        cli.main(standalone_mode=False, auto_envvar_prefix="CENTRAFACTOR")
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.UsageError as exc:
        exc.show()
        sys.exit(EXIT_CONFIG)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)


if __name__ == "__main__":
    main()
