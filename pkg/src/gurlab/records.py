"""Result rows shared by the model checkers and the campaign harness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# flags that make an inequality hold trivially (e.g. a factor 0 * inf)
TRIVIALIZING = frozenset({"InfiniteSpread", "Trivial"})


@dataclass(frozen=True)
class ExperimentRecord:
    experiment_id: str
    model: str
    dim: int
    seed: int
    lhs: float
    rhs: float
    slack: float
    flags: frozenset = field(default_factory=frozenset)
    passed: bool = True
    extra: dict = field(default_factory=dict)


def make_record(model, dim, lhs, rhs, tolerance, *, flags=(), extra=None,
                failures=(), experiment_id="", seed=0) -> ExperimentRecord:
    """Build a record whose ``passed`` follows the slack/flag rule.

    ``rhs`` may be ``math.inf`` when a spread is infinite; such records carry
    the ``InfiniteSpread`` flag.  Every entry of ``failures`` is added as a
    diagnostic flag and forces ``passed = False``.
    """
    flags = frozenset(flags) | frozenset(failures)
    slack = rhs - lhs
    ok = slack >= -tolerance or bool(flags & TRIVIALIZING)
    if math.isnan(slack):
        ok = False
    extra = dict(extra or {})
    extra.setdefault("tolerance", float(tolerance))
    return ExperimentRecord(
        experiment_id=experiment_id, model=model, dim=int(dim), seed=int(seed),
        lhs=float(lhs), rhs=float(rhs), slack=float(slack), flags=flags,
        passed=bool(ok and not failures), extra=extra,
    )
