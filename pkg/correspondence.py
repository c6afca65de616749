"""
Triple-Well Bosons · Quantum/classical correspondence
────────────────────────────────────────────────────────────────────────
• 1D sweeps: classical minimum vs exact ground state along one coupling.
• 2D grids: classical minimum-energy occupation over (U/J, eps/J).
• Agreement vs boson number, smallest N meeting a tolerance.
• Ground-state fidelity against tilt.

Cells are independent; joblib evaluates them and returns them in input order,
so the output does not depend on n_jobs.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from errors import ParameterError, TrimerError
from quantum_spectra import ModelParams, fidelity, ground_observables, ground_state
from semiclassical import ParameterPath, min_energy_point

logger = logging.getLogger(__name__)

AXES = ("U", "J", "epsilon")
QUANTITIES = ("n1", "n2", "n3")
AGREEMENT_QUANTITIES = ("energy", "occupations")
DEFAULT_U_RANGE = (-3.0, 3.0)
DEFAULT_EPS_RANGE = (0.0, 1.0)
DEFAULT_GRID_STEPS = (300, 300)

ROW_COLUMNS = [
    "ratio", "u", "j", "eps",
    "classical_e", "quantum_e",
    "qn1", "qn2", "qn3", "cn1", "cn2", "cn3",
    "gap1", "gap2", "degenerate", "error",
]
CELL_COLUMNS = ["u_over_j", "eps_over_j", "quantity", "value", "error"]

_NAN3 = (math.nan, math.nan, math.nan)


# ────────────────────────────────────────────────────────────
# 1. Row types
# ────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class SweepRow:
    ratio: float
    params: ModelParams
    classical_e: float
    quantum_e: float
    classical_occ: tuple[float, float, float]
    quantum_occ: tuple[float, float, float]
    gap1: float
    gap2: float
    degenerate: bool
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error


@dataclass(frozen=True)
class GridCell:
    u_over_j: float
    eps_over_j: float
    quantity: str
    value: float
    error: str = ""


def _error_text(exc: Exception) -> str:
    return f"{type(exc).__name__}: {exc}"


def _check_axis(axis: str) -> None:
    if axis not in AXES:
        raise ParameterError(f"unknown sweep axis {axis!r}; expected one of {AXES}")


def _linspace(start: float, stop: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise ParameterError(f"need at least 2 steps, got {steps}")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise ParameterError(f"range [{start}, {stop}] is not finite")
    return np.linspace(start, stop, steps)


# ────────────────────────────────────────────────────────────
# 2. 1D sweep
# ────────────────────────────────────────────────────────────
def evaluate_row(p: ModelParams, ratio: float) -> SweepRow:
    """Both engines at one parameter point; failures become an error marker."""
    try:
        best, ties = min_energy_point(p)
        ground = ground_observables(p)
    except TrimerError as exc:
        logger.warning("cell %s failed: %s", p, exc)
        return SweepRow(
            ratio=ratio, params=p, classical_e=math.nan, quantum_e=math.nan,
            classical_occ=_NAN3, quantum_occ=_NAN3, gap1=math.nan, gap2=math.nan,
            degenerate=False, error=_error_text(exc),
        )
    return SweepRow(
        ratio=ratio,
        params=p,
        classical_e=best.energy_per_particle,
        quantum_e=ground.e0_per_particle,
        classical_occ=best.occ_frac,
        quantum_occ=ground.occ_fraction,
        gap1=ground.gap1,
        gap2=ground.gap2,
        degenerate=ground.degenerate or len(ties) > 1,
    )


def sweep(
    axis: str,
    start: float,
    stop: float,
    steps: int,
    fixed: ModelParams,
    n_jobs: int = 1,
) -> list[SweepRow]:
    """One row per grid point of `axis`, ascending in the axis value."""
    _check_axis(axis)
    values = np.sort(_linspace(start, stop, steps))
    path = ParameterPath(fixed, axis, float(values[0]), float(values[-1]))
    logger.info("sweep %s over %d points at N=%d", axis, steps, fixed.N)
    return Parallel(n_jobs=n_jobs)(delayed(evaluate_row)(path.at(v), float(v)) for v in values)


def rows_frame(rows: list[SweepRow]) -> pd.DataFrame:
    records = [
        {
            "ratio": r.ratio, "u": r.params.U, "j": r.params.J, "eps": r.params.epsilon,
            "classical_e": r.classical_e, "quantum_e": r.quantum_e,
            "qn1": r.quantum_occ[0], "qn2": r.quantum_occ[1], "qn3": r.quantum_occ[2],
            "cn1": r.classical_occ[0], "cn2": r.classical_occ[1], "cn3": r.classical_occ[2],
            "gap1": r.gap1, "gap2": r.gap2, "degenerate": r.degenerate, "error": r.error,
        }
        for r in rows
    ]
    return pd.DataFrame.from_records(records, columns=ROW_COLUMNS)


# ────────────────────────────────────────────────────────────
# 3. 2D grid (classical only)
# ────────────────────────────────────────────────────────────
def evaluate_cell(U: float, epsilon: float, J: float, quantity: str) -> GridCell:
    try:
        best, _ = min_energy_point(ModelParams(U=U, J=J, epsilon=epsilon))
        value = best.occ_frac[QUANTITIES.index(quantity)]
        return GridCell(U / J, epsilon / J, quantity, float(value))
    except TrimerError as exc:
        logger.warning("grid cell U=%g eps=%g failed: %s", U, epsilon, exc)
        return GridCell(U / J, epsilon / J, quantity, math.nan, _error_text(exc))


def grid2d(
    u_range: tuple[float, float] = DEFAULT_U_RANGE,
    eps_range: tuple[float, float] = DEFAULT_EPS_RANGE,
    steps: tuple[int, int] = DEFAULT_GRID_STEPS,
    quantity: str = "n2",
    J: float = 1.0,
    n_jobs: int = 1,
) -> list[GridCell]:
    """Row-major over U (outer) then eps (inner)."""
    if quantity not in QUANTITIES:
        raise ParameterError(f"unknown grid quantity {quantity!r}; expected one of {QUANTITIES}")
    if J == 0:
        raise ParameterError("grid axes are ratios to J; J must be nonzero")
    us = _linspace(*u_range, steps[0]) * J
    es = _linspace(*eps_range, steps[1]) * J
    logger.info("grid %s on %dx%d cells", quantity, len(us), len(es))
    return Parallel(n_jobs=n_jobs)(
        delayed(evaluate_cell)(float(u), float(e), J, quantity) for u in us for e in es
    )


def cells_frame(cells: list[GridCell]) -> pd.DataFrame:
    records = [
        {"u_over_j": c.u_over_j, "eps_over_j": c.eps_over_j, "quantity": c.quantity,
         "value": c.value, "error": c.error}
        for c in cells
    ]
    return pd.DataFrame.from_records(records, columns=CELL_COLUMNS)


# ────────────────────────────────────────────────────────────
# 4. Agreement vs boson number
# ────────────────────────────────────────────────────────────
def _family_points(base: ModelParams, axis: str | None, values) -> list[ModelParams]:
    if axis is None:
        return [base]
    _check_axis(axis)
    return [base.with_(**{axis: float(v)}) for v in values]


def _deviations(points: list[ModelParams], classical: list, N: int) -> dict[str, float]:
    """Worst energy and occupation deviation over the family points at N bosons."""
    worst = dict.fromkeys(AGREEMENT_QUANTITIES, 0.0)
    for p, cl in zip(points, classical):
        ground = ground_observables(p.with_(N=N))
        worst["energy"] = max(worst["energy"], abs(ground.e0_per_particle - cl.energy_per_particle))
        occ_dev = float(np.max(np.abs(np.subtract(ground.occ_fraction, cl.occ_frac))))
        worst["occupations"] = max(worst["occupations"], occ_dev)
    return worst


def agreement_profile(
    base: ModelParams,
    N_max: int,
    axis: str | None = None,
    values=None,
    n_jobs: int = 1,
) -> pd.DataFrame:
    """Per N: max |E0/N - E_cl| and max |<Nk>/N - n_k| over the family points."""
    if N_max < 1:
        raise ParameterError(f"N_max must be at least 1, got {N_max}")
    points = _family_points(base, axis, values)
    classical = [min_energy_point(p)[0] for p in points]

    def row(N: int) -> dict:
        return {"N": N, **_deviations(points, classical, N)}

    records = Parallel(n_jobs=n_jobs)(delayed(row)(N) for N in range(1, N_max + 1))
    return pd.DataFrame.from_records(records, columns=["N", *AGREEMENT_QUANTITIES])


def min_bosons_for_agreement(
    base: ModelParams,
    quantity: str,
    tol: float,
    N_max: int,
    axis: str | None = None,
    values=None,
) -> int | None:
    """Smallest N <= N_max whose deviation is below tol; None when no N qualifies."""
    if quantity not in AGREEMENT_QUANTITIES:
        raise ParameterError(f"unknown agreement quantity {quantity!r}")
    if tol <= 0:
        raise ParameterError(f"tolerance must be positive, got {tol}")
    if N_max < 1:
        raise ParameterError(f"N_max must be at least 1, got {N_max}")
    points = _family_points(base, axis, values)
    classical = [min_energy_point(p)[0] for p in points]
    for N in range(1, N_max + 1):
        worst = _deviations(points, classical, N)[quantity]
        logger.debug("N=%d: max %s deviation %.3e", N, quantity, worst)
        if worst < tol:
            return N
    logger.info("no N <= %d reaches %s deviation below %g", N_max, quantity, tol)
    return None


# ────────────────────────────────────────────────────────────
# 5. Fidelity against tilt
# ────────────────────────────────────────────────────────────
def fidelity_scan(p: ModelParams, eps_values) -> pd.DataFrame:
    """|<psi(eps=0)|psi(eps)>| for each eps; p.epsilon is ignored."""
    reference = ground_state(p.with_(epsilon=0.0))
    records = [
        {"eps": float(e), "fidelity": fidelity(reference, ground_state(p.with_(epsilon=float(e))))}
        for e in eps_values
    ]
    return pd.DataFrame.from_records(records, columns=["eps", "fidelity"])
