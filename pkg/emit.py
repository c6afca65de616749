# emit.py -----------------------------------------------------------------
"""CSV / JSON serialization of command results.

Floats are printed with `precision` significant digits via printf-style
formatting, which is locale independent; line endings are always `\\n`.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from config import TOOL_VERSION, RunConfig
from errors import OutputError


@dataclass(frozen=True)
class CommandResult:
    frame: pd.DataFrame
    meta: dict = field(default_factory=dict)


def _round(value, precision: int):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(f"{value:.{precision}g}")
    if isinstance(value, dict):
        return {k: _round(v, precision) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round(v, precision) for v in value]
    return value


def to_csv(frame: pd.DataFrame, precision: int) -> str:
    return frame.to_csv(index=False, float_format=f"%.{precision}g", na_rep="nan", lineterminator="\n")


def to_json(result: CommandResult, cfg: RunConfig) -> str:
    meta = {**cfg.meta(), **result.meta, "version": TOOL_VERSION}
    rows = [
        {col: _round(value, cfg.precision) for col, value in zip(result.frame.columns, record)}
        for record in result.frame.itertuples(index=False, name=None)
    ]
    return json.dumps({"meta": _round(meta, cfg.precision), "rows": rows}, indent=2, allow_nan=False) + "\n"


def emit(result: CommandResult, cfg: RunConfig) -> bytes:
    """Serialize and write to cfg.output (stdout when unset); returns the bytes written."""
    text = to_json(result, cfg) if cfg.format == "json" else to_csv(result.frame, cfg.precision)
    payload = text.encode("utf-8")
    try:
        if cfg.output:
            Path(cfg.output).write_bytes(payload)
        else:
            sys.stdout.buffer.write(payload)
            sys.stdout.flush()
    except OSError as exc:
        raise OutputError(f"cannot write results to {cfg.output or 'stdout'}: {exc}") from exc
    return payload
