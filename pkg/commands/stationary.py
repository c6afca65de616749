# commands/stationary.py
"""All classical stationary points with energies, multipliers and residuals."""

from __future__ import annotations

import logging

import pandas as pd

from config import RunConfig
from emit import CommandResult
from quantum_spectra import normalize_energy
from semiclassical import classify_regime, stationarity_residual, stationary_points

logger = logging.getLogger(__name__)

COLUMNS = ["label", "n1", "n2", "n3", "phi12", "phi23", "energy", "lagrange", "residual"]


def run(cfg: RunConfig) -> CommandResult:
    p = cfg.model_params(N=1)
    regime = classify_regime(p)
    logger.info("stationary points in regime %s", regime.value)

    rows = []
    for pt in stationary_points(p):
        phi12, phi23 = pt.phases if pt.phases is not None else (float("nan"), float("nan"))
        rows.append({
            "label": pt.label,
            "n1": pt.occ_frac[0], "n2": pt.occ_frac[1], "n3": pt.occ_frac[2],
            "phi12": phi12, "phi23": phi23,
            "energy": normalize_energy(pt.energy_per_particle, p, cfg.per),
            "lagrange": pt.lagrange,
            "residual": stationarity_residual(pt, p),
        })
    return CommandResult(pd.DataFrame(rows, columns=COLUMNS), {"regime": regime.value})
