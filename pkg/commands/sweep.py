# commands/sweep.py
"""Classical minimum vs exact ground state along one coupling."""

from __future__ import annotations

import pandas as pd

from config import RunConfig
from correspondence import rows_frame, sweep
from emit import CommandResult
from errors import ParameterError

UNIT_COLUMN = {"J": "j", "eps": "eps"}


def normalize_rows(frame: pd.DataFrame, per: str, N: int) -> pd.DataFrame:
    """E/N → E/(N unit), gaps → gap/(N unit); the unit may vary along the sweep."""
    if per == "none" or frame.empty:
        return frame
    unit = frame[UNIT_COLUMN[per]]
    if (unit == 0).any():
        raise ParameterError(f"cannot express energies per {per}: it vanishes on the sweep")
    frame = frame.copy()
    frame[["classical_e", "quantum_e"]] = frame[["classical_e", "quantum_e"]].div(unit, axis=0)
    frame[["gap1", "gap2"]] = frame[["gap1", "gap2"]].div(unit * N, axis=0)
    return frame


def run(cfg: RunConfig) -> CommandResult:
    fixed = cfg.model_params(**{cfg.axis: 0.0})
    rows = sweep(cfg.axis, cfg.start, cfg.stop, cfg.steps, fixed, n_jobs=cfg.n_jobs)
    failed = sum(not r.ok for r in rows)
    return CommandResult(normalize_rows(rows_frame(rows), cfg.per, fixed.N), {"failed_cells": failed})
