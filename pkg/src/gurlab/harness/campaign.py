"""Seeded campaign execution and per-experiment summaries."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .. import matlin
from ..errors import GurlabError
from ..records import ExperimentRecord, make_record
from .config import CampaignConfig
from .experiments import EXPERIMENTS, ORACLE_REL_TOL, experiment_index


def record_seed(master, name, dim, trial):
    return matlin.derive_seed(master, experiment_index(name), dim, trial)


def run_one(name, dim, seed, tolerance=None, oracle=False, trial=0) -> ExperimentRecord:
    """Run a single experiment instance; errors become failing records with a diagnostic flag."""
    exp = EXPERIMENTS[name]
    runner = exp.oracle if oracle else exp.runner
    if runner is None:
        raise ValueError(f"{name} has no oracle path")
    if tolerance is None:
        tolerance = ORACLE_REL_TOL if oracle else exp.tolerance
    try:
        rec = runner(dim, seed, tolerance)
    except (GurlabError, ValueError, ArithmeticError) as exc:
        rec = make_record(name, dim, math.nan, math.nan, tolerance,
                          failures=[f"Error_{type(exc).__name__}"])
    # the configured tolerance is kept so a replay can reproduce overrides
    extra = dict(rec.extra, config_tolerance=float(tolerance))
    return replace(rec, experiment_id=f"{name}/{dim}/{trial}", seed=seed, extra=extra)


def _task(args):
    return run_one(*args)


def campaign_tasks(config: CampaignConfig):
    """Task tuples in the deterministic (experiment, dim, trial) order."""
    tasks = []
    for plan in config.plans:
        for dim in plan.dims:
            for trial in range(plan.trials):
                seed = record_seed(config.seed, plan.name, dim, trial)
                tasks.append((plan.name, dim, seed, plan.tolerance, config.oracle, trial))
    return tasks


def run_campaign(config: CampaignConfig):
    tasks = campaign_tasks(config)
    if config.jobs <= 1 or len(tasks) < 2:
        return [run_one(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        # map keeps submission order, whatever the completion order
        return list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * config.jobs))))


@dataclass(frozen=True)
class SummaryRow:
    experiment: str
    count: int
    passed: int
    min_slack: float
    min_slack_seed: int
    failing_seeds: tuple

    @property
    def pass_rate(self):
        return self.passed / self.count if self.count else 1.0


def _experiment_name(rec: ExperimentRecord):
    return rec.experiment_id.split("/", 1)[0] if rec.experiment_id else rec.model


def summarize(records):
    """One row per experiment, in first-appearance order; NaN slack counts as the minimum."""
    groups = {}
    for rec in records:
        groups.setdefault(_experiment_name(rec), []).append(rec)
    rows = []
    for name, recs in groups.items():
        worst = min(recs, key=lambda r: -math.inf if math.isnan(r.slack) else r.slack)
        rows.append(SummaryRow(
            experiment=name, count=len(recs), passed=sum(r.passed for r in recs),
            min_slack=worst.slack, min_slack_seed=worst.seed,
            failing_seeds=tuple(r.seed for r in recs if not r.passed),
        ))
    return rows


def render_summary(rows):
    head = f"{'experiment':<20} {'count':>7} {'pass_rate':>9} {'min_slack':>13} {'min_slack_seed':>22}"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(f"{r.experiment:<20} {r.count:>7} {r.pass_rate:>9.4f} {r.min_slack:>13.4e} "
                     f"{r.min_slack_seed:>22}")
        for s in r.failing_seeds[:5]:
            lines.append(f"  failing seed {s}")
    return "\n".join(lines)
