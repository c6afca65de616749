# commands/grid.py
"""Classical occupation density over (U/J, eps/J)."""

from __future__ import annotations

from config import RunConfig
from correspondence import DEFAULT_GRID_STEPS, QUANTITIES, cells_frame, grid2d
from emit import CommandResult
from errors import ConfigError


def run(cfg: RunConfig) -> CommandResult:
    quantity = cfg.quantity or "n2"
    if quantity not in QUANTITIES:
        raise ConfigError(f"option 'quantity': grid needs one of {', '.join(QUANTITIES)}, got {quantity!r}")
    steps = (cfg.steps, cfg.steps) if cfg.steps is not None else DEFAULT_GRID_STEPS
    cells = grid2d(
        u_range=(cfg.u_start, cfg.u_stop),
        eps_range=(cfg.eps_start, cfg.eps_stop),
        steps=steps,
        quantity=quantity,
        J=cfg.j if cfg.j is not None else 1.0,
        n_jobs=cfg.n_jobs,
    )
    return CommandResult(cells_frame(cells), {"shape": list(steps)})
