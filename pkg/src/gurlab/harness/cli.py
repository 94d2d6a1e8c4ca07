"""``gurlab`` command line: seeded campaigns, replay and oracle cross-checks.

Exit codes: 0 when every record passes, 1 when any record fails, 2 for
configuration or I/O errors.
"""

from __future__ import annotations

import json
import sys
from dataclasses import replace
from pathlib import Path

import click

from ..errors import ConfigError
from . import reports
from .campaign import render_summary, run_campaign, run_one, summarize
from .config import CampaignConfig, load_config, make_plan, parse_dims
from .experiments import EXPERIMENTS

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _apply_overrides(config, experiments, dims, trials, seed, out, fmt, jobs):
    plans = list(config.plans)
    if experiments:
        plans = [make_plan(n) for n in experiments]
    if dims is not None:
        parsed = parse_dims(dims, field_name="--dims")
        plans = [make_plan(p.name, parsed, p.trials, p.tolerance) for p in plans]
    if trials is not None:
        plans = [make_plan(p.name, p.dims, trials, p.tolerance) for p in plans]
    return replace(
        config, plans=tuple(plans),
        seed=config.seed if seed is None else seed,
        out=config.out if out is None else Path(out),
        format=config.format if fmt is None else fmt,
        jobs=config.jobs if jobs is None else jobs,
    )


def _write_outputs(config, records, rows):
    if config.out is None:
        return
    ext = "jsonl" if config.format == "json" else "csv"
    try:
        reports.emit_reports(records, config.format, config.out / f"records.{ext}")
        (config.out / "summary.csv").write_text(reports.summary_csv(rows))
        (config.out / "slack_histogram.csv").write_text(reports.slack_histogram_csv(records))
    except OSError as exc:
        raise ConfigError(f"cannot write to {config.out}: {exc.strerror}") from None
    click.echo(f"wrote {len(records)} records to {config.out}", err=True)


def _execute(config: CampaignConfig):
    records = run_campaign(config)
    rows = summarize(records)
    _write_outputs(config, records, rows)
    click.echo(render_summary(rows))
    return EXIT_OK if all(r.passed for r in records) else EXIT_FAIL


def campaign_options(f):
    f = click.option("--jobs", type=click.IntRange(min=1), default=None, help="Worker processes.")(f)
    f = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None,
                     help="Record file format.")(f)
    f = click.option("--out", type=click.Path(file_okay=False), default=None,
                     help="Output directory for records and summaries.")(f)
    f = click.option("--seed", type=int, default=None, envvar="GURLAB_SEED",
                     help="Master seed (falls back to GURLAB_SEED).")(f)
    f = click.option("--trials", type=click.IntRange(min=1), default=None, help="Trials per dimension.")(f)
    f = click.option("--dims", default=None, help="Dimensions, e.g. 2-12 or 2,4,8.")(f)
    f = click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                     help="INI campaign file.")(f)
    return f


def _guard(fn):
    """Map configuration and I/O errors to exit code 2."""
    try:
        return fn()
    except (ConfigError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_CONFIG


@click.group()
def main():
    """Numerical certification of two-state uncertainty bounds."""


@main.command()
@click.option("--experiment", "-e", "experiments", multiple=True,
              type=click.Choice(list(EXPERIMENTS)), help="Experiment to run (repeatable).")
@campaign_options
def run(experiments, config_path, dims, trials, seed, out, fmt, jobs):
    """Run a seeded campaign."""
    def go():
        base = load_config(config_path) if config_path else CampaignConfig()
        if not config_path and not experiments:
            raise ConfigError("nothing to run: give --config or --experiment")
        return _execute(_apply_overrides(base, experiments, dims, trials, seed, out, fmt, jobs))
    sys.exit(_guard(go))


@main.command()
@click.argument("experiment", type=click.Choice([n for n, e in EXPERIMENTS.items() if e.oracle]))
@campaign_options
def oracle(experiment, config_path, dims, trials, seed, out, fmt, jobs):
    """Cross-check an engine-backed experiment against the brute-force oracles."""
    def go():
        base = load_config(config_path) if config_path else CampaignConfig()
        exp = EXPERIMENTS[experiment]
        default_dims = ",".join(str(d) for d in exp.dims if d <= 8) or str(exp.dims[0])
        cfg = _apply_overrides(base, [experiment], dims or default_dims, trials or 5, seed, out,
                               fmt, jobs)
        cfg = replace(cfg, oracle=True,
                      plans=tuple(replace(p, tolerance=1e-6) for p in cfg.plans))
        return _execute(cfg)
    sys.exit(_guard(go))


@main.command()
@click.argument("seed", type=int)
@click.option("--experiment", "-e", required=True, type=click.Choice(list(EXPERIMENTS)))
@click.option("--dim", required=True, type=int)
@click.option("--tolerance", type=float, default=None, help="Override the experiment tolerance.")
@click.option("--oracle", "use_oracle", is_flag=True, help="Replay the oracle path.")
def replay(seed, experiment, dim, tolerance, use_oracle):
    """Re-run one record from the seed it carries."""
    rec = run_one(experiment, dim, seed, tolerance, oracle=use_oracle)
    click.echo(json.dumps(reports.record_to_dict(rec), indent=2))
    sys.exit(EXIT_OK if rec.passed else EXIT_FAIL)


@main.command("list-experiments")
def list_experiments():
    """Show the available experiments and their defaults."""
    for name, exp in EXPERIMENTS.items():
        dims = exp.dims
        span = f"{dims[0]}-{dims[-1]}" if len(dims) > 2 else ",".join(map(str, dims))
        tag = " [oracle]" if exp.oracle else ""
        click.echo(f"{name:<18} dims={span:<10} tol={exp.tolerance:<8g} {exp.description}{tag}")


if __name__ == "__main__":
    main()
