# commands/critical.py
"""Critical coupling of an integrable family and its transition order."""

from __future__ import annotations

import pandas as pd

from config import RunConfig
from emit import CommandResult
from semiclassical import CANONICAL_PATHS, TRANSITION_BRANCHES, critical_point, detect_bifurcation, transition_derivatives


def run(cfg: RunConfig) -> CommandResult:
    family = cfg.family
    ratio = critical_point(family, verify=cfg.verify)
    numeric = detect_bifurcation(CANONICAL_PATHS[family]) if cfg.verify else None
    report = transition_derivatives(family)
    branch_a, branch_b = TRANSITION_BRANCHES[family]
    frame = pd.DataFrame([{
        "family": family,
        "critical": ratio,
        "numeric": numeric if numeric is not None else float("nan"),
        "branch_a": branch_a, "branch_b": branch_b,
        "d1a": report.d1a, "d1b": report.d1b,
        "d2a": report.d2a, "d2b": report.d2b,
        "second_order": report.second_order,
    }])
    return CommandResult(frame)
