# commands/correspond.py
"""Quantum/classical deviation per boson number; smallest N within tolerance."""

from __future__ import annotations

import numpy as np

from config import RunConfig
from correspondence import AGREEMENT_QUANTITIES, agreement_profile
from emit import CommandResult
from errors import ConfigError


def run(cfg: RunConfig) -> CommandResult:
    quantity = cfg.quantity or "energy"
    if quantity not in AGREEMENT_QUANTITIES:
        raise ConfigError(f"option 'quantity': correspond needs one of {', '.join(AGREEMENT_QUANTITIES)}, got {quantity!r}")
    values = np.linspace(cfg.start, cfg.stop, cfg.steps) if cfg.axis is not None else None
    profile = agreement_profile(cfg.model_params(N=1), cfg.n_max, axis=cfg.axis, values=values, n_jobs=cfg.n_jobs)
    within = profile.loc[profile[quantity] < cfg.tol, "N"]
    min_n = int(within.iloc[0]) if not within.empty else None
    return CommandResult(profile, {"quantity": quantity, "min_n": min_n})
