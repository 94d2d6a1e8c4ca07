"""Campaign driver: experiment registry, configuration, reports and CLI."""

from .campaign import SummaryRow, render_summary, run_campaign, run_one, summarize
from .config import CampaignConfig, ExperimentPlan, load_config, make_plan, parse_config, parse_dims
from .experiments import EXPERIMENTS, Experiment, get_experiment
from .reports import emit_reports, from_json_lines, to_csv, to_json_lines

__all__ = [
    "SummaryRow", "render_summary", "run_campaign", "run_one", "summarize",
    "CampaignConfig", "ExperimentPlan", "load_config", "make_plan", "parse_config", "parse_dims",
    "EXPERIMENTS", "Experiment", "get_experiment",
    "emit_reports", "from_json_lines", "to_csv", "to_json_lines",
]
