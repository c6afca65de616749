# commands/spectrum.py
"""Exact diagonalization: ground-state summary or the full clustered spectrum."""

from __future__ import annotations

import pandas as pd

from config import RunConfig
from emit import CommandResult
from quantum_spectra import (
    build_hamiltonian,
    cluster_labels,
    full_spectrum,
    ground_observables,
    normalize_energy,
)


def run(cfg: RunConfig) -> CommandResult:
    p = cfg.model_params()

    if cfg.levels == "all":
        spec = full_spectrum(build_hamiltonian(p))
        frame = pd.DataFrame({
            "level": range(len(spec.eigenvalues)),
            "energy": [normalize_energy(e / p.N, p, cfg.per) for e in spec.eigenvalues],
            "cluster": cluster_labels(spec.eigenvalues, cfg.cluster_tol),
        })
        return CommandResult(frame, {"dimension": len(spec.eigenvalues)})

    obs = ground_observables(p)
    frame = pd.DataFrame([{
        "n": p.N, "u": p.U, "j": p.J, "eps": p.epsilon,
        "e0": normalize_energy(obs.e0_per_particle, p, cfg.per),
        "gap1": normalize_energy(obs.gap1 / p.N, p, cfg.per),
        "gap2": normalize_energy(obs.gap2 / p.N, p, cfg.per),
        "qn1": obs.occ_fraction[0], "qn2": obs.occ_fraction[1], "qn3": obs.occ_fraction[2],
        "degenerate": obs.degenerate,
    }])
    return CommandResult(frame)
