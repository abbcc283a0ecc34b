"""Command line entry points: build, validate, inspect, report."""

from __future__ import annotations

import dataclasses
import logging
import sys

import click

from .config import BuildConfig, ConfigError, load_config
from .pipeline import PipelineError, run_build
from .projection import load_export
from .report import write_report

_CONFIG_FLAGS = [
    ("--corpus", str, "Corpus file (csv or jsonl)"),
    ("--format", str, "Corpus format: csv | jsonl"),
    ("--rootlist", str, "Root term list, one root per line, variants split by |"),
    ("--unit", str, "Period unit: week | month | year"),
    ("--length", int, "Period length in units"),
    ("--origin", str, "Period origin (ISO date; defaults to earliest document)"),
    ("--edge-threshold", float, "Confidence threshold for similarity edges"),
    ("--symmetrize", str, "Confidence symmetrization: max | min"),
    ("--mode", str, "Field detection: cliques | itemsets"),
    ("--min-support", int, "Itemset mode: minimum document support"),
    ("--window", int, "Matching window in periods"),
    ("--floor", float, "Matching similarity floor"),
    ("--min-periods", int, "Minimum period span for a branch to survive"),
    ("--output", str, "Export path (suffixed per level on multi-level builds)"),
    ("--sea-mode", str, "Foliation mode: adaptive | fixed"),
    ("--fixed-delta", float, "Global threshold for fixed sea mode"),
    ("--jobs", int, "Parallel matching workers"),
]


def _apply_flags(config: BuildConfig, kwargs: dict) -> BuildConfig:
    updates = {}
    for key, value in kwargs.items():
        if value is None:
            continue
        if key == "level":
            if value:
                updates["levels"] = list(value)
            continue
        if key in BuildConfig.__dataclass_fields__:
            updates[key] = value
    return dataclasses.replace(config, **updates)


def _add_config_options(cmd):
    for flag, ftype, help_text in reversed(_CONFIG_FLAGS):
        cmd = click.option(flag, type=ftype, default=None, help=help_text)(cmd)
    cmd = click.option(
        "--level", type=float, multiple=True,
        help="Level of observation in [0, 1]; repeat for multi-level builds",
    )(cmd)
    cmd = click.option("--keep-singletons", is_flag=True, default=None,
                       help="Keep one-term fields in clique mode")(cmd)
    cmd = click.option("--all-above-floor", is_flag=True, default=None,
                       help="Keep every candidate above the floor, not only the best")(cmd)
    cmd = click.option("--diagnostics", is_flag=True, default=None,
                       help="Dump per-period edge lists, the link list and the split trace")(cmd)
    return cmd


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Verbose stage logging")
def main(verbose: bool) -> None:
    """Reconstruct and explore inheritance networks of knowledge."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )


@main.command()
@click.option("--config", "config_path", type=click.Path(), help="TOML config file")
@_add_config_options
def build(config_path, **kwargs) -> None:
    """Run the full reconstruction and write the export file(s)."""
    try:
        config = load_config(config_path) if config_path else BuildConfig()
        config = _apply_flags(config, kwargs)
        errors = config.validate()
        if errors:
            for e in errors:
                click.echo(f"config error: {e}", err=True)
            sys.exit(2)
        outputs = run_build(config)
    except (ConfigError, PipelineError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    for path in outputs:
        click.echo(path)


@main.command()
@click.argument("config_path", type=click.Path())
def validate(config_path: str) -> None:
    """Statically validate a config file without side effects."""
    try:
        config = load_config(config_path)
    except (ConfigError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    errors = config.validate()
    if errors:
        for e in errors:
            click.echo(f"error: {e}")
        sys.exit(1)
    click.echo("ok")


@main.command()
@click.argument("export_path", type=click.Path())
@click.option("--branch", "branch_id", help="Branch id to summarize")
@click.option("--term", help="Term whose lineage to report")
def inspect(export_path: str, branch_id: str, term: str) -> None:
    """Textual report on a branch or a term of an export file."""
    try:
        projection = load_export(export_path)
    except (OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    if branch_id:
        match = [b for b in projection["branches"] if b["id"] == branch_id]
        if not match:
            click.echo(f"error: branch not found: {branch_id}", err=True)
            sys.exit(1)
        b = match[0]
        groups = [g for g in projection["groups"] if g["branch"] == branch_id]
        click.echo(f"branch {b['id']}")
        click.echo(f"  label      {' '.join(b['label'])}")
        click.echo(f"  span       {b['span'][0]} .. {b['span'][1]}")
        click.echo(f"  elevation  {b['elevation']}")
        click.echo(f"  groups     {len(groups)}")
        return

    if term:
        entries = [t for t in projection["terms"] if t["id"] == term]
        if not entries:
            click.echo(f"error: term not found: {term}", err=True)
            sys.exit(1)
        t = entries[0]
        group_ids = projection["search_index"].get(term, [])
        branch_ids = sorted({g["branch"] for g in projection["groups"] if g["id"] in set(group_ids)})
        click.echo(f"term {term}")
        click.echo(f"  periods       {t['first_period']} .. {t['last_period']}")
        click.echo(f"  groups        {len(group_ids)}: {', '.join(group_ids)}")
        click.echo(f"  branches      {', '.join(branch_ids)} (cross_branch={t['cross_branch']})")
        click.echo(f"  emerging in   {', '.join(t['emerging_groups'])}")
        click.echo(f"  decreasing in {', '.join(t['decreasing_groups'])}")
        click.echo(f"  freq at last period {t['freq_last']}")
        return

    click.echo("error: pass --branch or --term", err=True)
    sys.exit(2)


@main.command()
@click.argument("export_path", type=click.Path())
@click.option("--outdir", default="report", show_default=True, help="Report directory")
def report(export_path: str, outdir: str) -> None:
    """Render figures and delimited tables from an export file."""
    try:
        projection = load_export(export_path)
        paths = write_report(projection, outdir)
    except (OSError, ValueError, KeyError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    for path in paths:
        click.echo(path)


if __name__ == "__main__":
    main()
