"""Campaign configuration: an INI file with one section per experiment.

Grammar (``configparser`` syntax, ``#`` or ``;`` comments)::

    [campaign]
    experiments = weyl, gur        # names from ``gurlab list-experiments``
    dims = 2-12                    # ranges and/or comma lists, e.g. 2-8,16,32
    trials = 200                   # per dimension, >= 1
    seed = 12345                   # master seed
    out = results                  # output directory (optional)
    format = json                  # json or csv
    jobs = 1                       # worker processes

    [experiment.weyl]              # optional per-experiment overrides
    dims = 2,3,4
    trials = 50
    tolerance = 1e-10              # >= 0

``experiments`` may be empty.  An experiment without a ``dims`` entry in
either section uses its registry default.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..errors import ConfigError
from .experiments import EXPERIMENTS

CAMPAIGN_KEYS = {"experiments", "dims", "trials", "seed", "out", "format", "jobs"}
EXPERIMENT_KEYS = {"dims", "trials", "tolerance"}
FORMATS = ("json", "csv")


@dataclass(frozen=True)
class ExperimentPlan:
    name: str
    dims: tuple
    trials: int
    tolerance: float


@dataclass(frozen=True)
class CampaignConfig:
    plans: tuple = ()
    seed: int = 0
    out: Optional[Path] = None
    format: str = "json"
    jobs: int = 1
    oracle: bool = False

    @property
    def experiments(self):
        return [p.name for p in self.plans]

    @property
    def n_records(self):
        return sum(len(p.dims) * p.trials for p in self.plans)


def parse_dims(text, field_name="dims", line=None):
    """``"2-5,8"`` -> ``(2, 3, 4, 5, 8)``; order is kept, duplicates dropped."""
    dims = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"(\d+)\s*-\s*(\d+)|(\d+)", part)
        if m is None:
            raise ConfigError(f"bad dimension entry {part!r}", line=line, field=field_name)
        if m.group(3):
            rng = [int(m.group(3))]
        else:
            lo, hi = int(m.group(1)), int(m.group(2))
            if hi < lo:
                raise ConfigError(f"empty range {part!r}", line=line, field=field_name)
            rng = range(lo, hi + 1)
        dims.extend(d for d in rng if d not in dims)
    if not dims:
        raise ConfigError("no dimensions given", line=line, field=field_name)
    return tuple(dims)


def _int(value, field_name, line, minimum=None):
    try:
        v = int(str(value).strip())
    except ValueError:
        raise ConfigError(f"expected an integer, got {value!r}", line=line, field=field_name) from None
    if minimum is not None and v < minimum:
        raise ConfigError(f"must be >= {minimum}, got {v}", line=line, field=field_name)
    return v


def _tolerance(value, field_name="tolerance", line=None):
    try:
        v = float(str(value).strip())
    except ValueError:
        raise ConfigError(f"expected a number, got {value!r}", line=line, field=field_name) from None
    if not v >= 0.0 or v == float("inf"):
        raise ConfigError(f"tolerance must be finite and >= 0, got {value!r}", line=line,
                          field=field_name)
    return v


def make_plan(name, dims=None, trials=1, tolerance=None, line=None) -> ExperimentPlan:
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {name!r}", line=line, field="experiments")
    exp = EXPERIMENTS[name]
    dims = exp.dims if dims is None else tuple(dims)
    low = [d for d in dims if d < exp.min_dim]
    if low:
        raise ConfigError(f"{name} needs dims >= {exp.min_dim}, got {low}", line=line, field="dims")
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}", line=line, field="trials")
    tol = exp.tolerance if tolerance is None else _tolerance(tolerance, line=line)
    return ExperimentPlan(name, dims, int(trials), tol)


def _line_index(text):
    """Map ``(section, key)`` to 1-based line numbers for diagnostics."""
    where, section = {}, None
    for i, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s.startswith("[") and s.endswith("]"):
            section = s[1:-1].strip()
            where[(section, None)] = i
        elif section and s and s[0] not in "#;" and ("=" in s or ":" in s):
            key = re.split(r"[=:]", s, maxsplit=1)[0].strip().lower()
            where.setdefault((section, key), i)
    return where


def parse_config(text, source="<config>") -> CampaignConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate key in [{exc.section}]", line=exc.lineno, field=exc.option) from None
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section [{exc.section}]", line=exc.lineno) from None
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("content before the first section header", line=exc.lineno) from None
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ConfigError("unparsable line", line=line) from None
    where = _line_index(text)

    def loc(section, key=None):
        return where.get((section, key), where.get((section, None)))

    if not parser.has_section("campaign"):
        raise ConfigError("missing [campaign] section")
    camp = parser["campaign"]
    for key in camp:
        if key not in CAMPAIGN_KEYS:
            raise ConfigError("unknown key", line=loc("campaign", key), field=key)
    names = [n.strip() for n in camp.get("experiments", "").split(",") if n.strip()]
    default_dims = (parse_dims(camp["dims"], line=loc("campaign", "dims"))
                    if "dims" in camp else None)
    default_trials = _int(camp.get("trials", "1"), "trials", loc("campaign", "trials"), minimum=1)
    seed = _int(camp.get("seed", "0"), "seed", loc("campaign", "seed"))
    fmt = camp.get("format", "json").strip()
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}", line=loc("campaign", "format"),
                          field="format")
    jobs = _int(camp.get("jobs", "1"), "jobs", loc("campaign", "jobs"), minimum=1)
    out = Path(camp["out"].strip()) if camp.get("out", "").strip() else None

    for sec in parser.sections():
        if sec == "campaign":
            continue
        if not sec.startswith("experiment."):
            raise ConfigError(f"unknown section [{sec}]", line=loc(sec))
        name = sec[len("experiment."):]
        if name not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {name!r}", line=loc(sec))
        for key in parser[sec]:
            if key not in EXPERIMENT_KEYS:
                raise ConfigError("unknown key", line=loc(sec, key), field=key)

    plans = []
    for name in names:
        if name not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {name!r}", line=loc("campaign", "experiments"),
                              field="experiments")
        sec = f"experiment.{name}"
        over = parser[sec] if parser.has_section(sec) else {}
        dims = (parse_dims(over["dims"], line=loc(sec, "dims")) if "dims" in over
                else default_dims)
        trials = (_int(over["trials"], "trials", loc(sec, "trials"), minimum=1) if "trials" in over
                  else default_trials)
        tol = over.get("tolerance") if "tolerance" in over else None
        line = loc(sec, "tolerance") if tol is not None else loc("campaign", "experiments")
        try:
            plans.append(make_plan(name, dims, trials, tol))
        except ConfigError as exc:
            if exc.line is None:
                raise ConfigError(exc.message, line=line, field=exc.field) from None
            raise
    return CampaignConfig(tuple(plans), seed, out, fmt, jobs)


def load_config(path) -> CampaignConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, source=str(path))
