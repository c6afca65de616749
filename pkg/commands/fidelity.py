# commands/fidelity.py
"""Ground-state fidelity against the untilted ground state."""

from __future__ import annotations

import numpy as np

from config import RunConfig
from correspondence import fidelity_scan
from emit import CommandResult


def run(cfg: RunConfig) -> CommandResult:
    p = cfg.model_params(epsilon=0.0)
    return CommandResult(fidelity_scan(p, np.linspace(cfg.start, cfg.stop, cfg.steps)))
