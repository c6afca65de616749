"""
Triple-Well Bosons · Semiclassical stationary points
────────────────────────────────────────────────────────────────────────
Energy per particle on the unit sphere rho1^2 + rho2^2 + rho3^2 = 1:

    E = U S^2 + eps (rho3^2 - rho1^2) + sqrt2 J (rho1 rho2 + rho2 rho3),
    S = rho1^2 - rho2^2 + rho3^2

with the phase differences absorbed into the signs of rho1 and rho3
(rho2 >= 0 fixes the global phase).

• Closed-form tables for the three integrable limits (U=0, J=0, eps=0).
• General case: roots of a degree-7 polynomial in rho2^2, four X branches
  per root, residual filter, Newton polish on the full stationarity system.
• Minimum-energy selection with tie detection, directional-derivative test
  for second-order transitions, bisection for bifurcations along a path.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

from errors import BranchUndefinedError, NumericalError, ParameterError, PolishingError
from quantum_spectra import ModelParams

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)

# ────────────────────────────────────────────────────────────
# 0. Tunables
# ────────────────────────────────────────────────────────────
DISPATCH_THRESHOLD = 1e-12   # coupling / largest coupling below this → integrable table
NEAR_LIMIT = 1e-3            # coupling / largest coupling below this → Newton also seeded from the limit table
CONSTRAINT_TOL = 1e-8        # occupation fractions must sum to 1 within this
RESIDUAL_TOL = 1e-6          # candidate acceptance before polishing (× coupling scale)
POLISHED_TOL = 1e-9          # every returned point satisfies this (× coupling scale)
NEWTON_MAX_ITER = 60
DEDUP_TOL = 1e-8
TIE_TOL = 1e-12
ROOT_IMAG_TOL = 1e-6
SINGULAR_X_TOL = 1e-10
SIGN_EPS = 1e-14

FIRST_STEP = 1e-4
SECOND_STEP = 1e-3
TOL1 = 1e-6
TOL2 = 1e-3

CRITICAL_RATIOS = {"J0": 0.25, "eps0": -0.5}
BISECTION_TOL = 1e-6
SCAN_SAMPLES = 64


class Regime(str, Enum):
    U0 = "U0"
    J0 = "J0"
    EPS0 = "eps0"
    GENERAL = "general"


# Branches that only exist past a bifurcation and take over the minimum there
BORN_LABELS = {
    Regime.J0: frozenset({"x2", "x5"}),
    Regime.EPS0: frozenset({"x4", "x5"}),
}


# ────────────────────────────────────────────────────────────
# 1. Types
# ────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class StationaryPoint:
    occ_frac: tuple[float, float, float]
    phases: tuple[float, float] | None      # (phi12, phi23) in {0, pi}; None when J = 0
    energy_per_particle: float
    lagrange: float | None
    label: str

    @property
    def amplitudes(self) -> np.ndarray:
        """Signed rho with rho2 >= 0; phases folded into the signs of rho1, rho3."""
        rho = np.sqrt(np.clip(np.asarray(self.occ_frac, dtype=float), 0.0, None))
        if self.phases is not None:
            rho[0] *= math.cos(self.phases[0])
            rho[2] *= math.cos(self.phases[1])
        return rho

    @property
    def imbalance(self) -> float:
        """S = n1 - n2 + n3 in occupation fractions."""
        n1, n2, n3 = self.occ_frac
        return n1 - n2 + n3


@dataclass(frozen=True)
class PolynomialCoeffs:
    c: np.ndarray                            # c[m] multiplies (rho2^2)^m, m = 0..7

    def highest_first(self) -> np.ndarray:
        return self.c[::-1]

    def __call__(self, r):
        return np.polyval(self.highest_first(), r)


@dataclass(frozen=True)
class SolverCandidate:
    rho2_sq: float
    X: float                                 # lambda - 2U(1 - 2 rho2^2)
    sign_choices: tuple[int, int]            # (outer sign of X, inner radical sign)


# ────────────────────────────────────────────────────────────
# 2. Energy, gradient, residual
# ────────────────────────────────────────────────────────────
def classical_energy(occ_frac: Sequence[float], phases: Sequence[float] | None, p: ModelParams) -> float:
    occ = np.asarray(occ_frac, dtype=float)
    if abs(occ.sum() - 1.0) > CONSTRAINT_TOL or (occ < -CONSTRAINT_TOL).any():
        raise ParameterError(f"occupation fractions {tuple(occ)} violate n1 + n2 + n3 = 1")
    rho = np.sqrt(np.clip(occ, 0.0, None))
    S = occ[0] - occ[1] + occ[2]
    energy = p.U * S * S + p.epsilon * (occ[2] - occ[0])
    if phases is None:
        if p.J != 0:
            raise ParameterError("phases are required when J != 0")
        return float(energy)
    c12, c23 = math.cos(phases[0]), math.cos(phases[1])
    return float(energy + SQRT2 * p.J * (rho[0] * rho[1] * c12 + rho[1] * rho[2] * c23))


def _amplitude_energy(rho: np.ndarray, p: ModelParams) -> float:
    r1, r2, r3 = rho
    S = r1 * r1 - r2 * r2 + r3 * r3
    return p.U * S * S + p.epsilon * (r3 * r3 - r1 * r1) + SQRT2 * p.J * (r1 * r2 + r2 * r3)


def best_fit_lagrange(rho: np.ndarray, p: ModelParams) -> float:
    """Least-squares lambda over the three amplitude equations: E + U S^2 on the sphere."""
    r1, r2, r3 = rho
    S = r1 * r1 - r2 * r2 + r3 * r3
    return float(_amplitude_energy(rho, p) + p.U * S * S) / float(rho @ rho)


def stationarity_gradient(x: np.ndarray, p: ModelParams) -> np.ndarray:
    """Partial derivatives of the Lagrangian w.r.t. (rho1, rho2, rho3, lambda)."""
    r1, r2, r3, lam = x
    S = r1 * r1 - r2 * r2 + r3 * r3
    U, J, eps = p.U, p.J, p.epsilon
    return np.array([
        4 * U * S * r1 - 2 * eps * r1 + SQRT2 * J * r2 - 2 * lam * r1,
        -4 * U * S * r2 + SQRT2 * J * (r1 + r3) - 2 * lam * r2,
        4 * U * S * r3 + 2 * eps * r3 + SQRT2 * J * r2 - 2 * lam * r3,
        1 - r1 * r1 - r2 * r2 - r3 * r3,
    ])


def _bordered_hessian(x: np.ndarray, p: ModelParams) -> np.ndarray:
    r1, r2, r3, lam = x
    S = r1 * r1 - r2 * r2 + r3 * r3
    U, J, eps = p.U, p.J, p.epsilon
    t = SQRT2 * J
    return np.array([
        [4 * U * S + 8 * U * r1 * r1 - 2 * eps - 2 * lam, -8 * U * r1 * r2 + t, 8 * U * r1 * r3, -2 * r1],
        [-8 * U * r1 * r2 + t, -4 * U * S + 8 * U * r2 * r2 - 2 * lam, -8 * U * r2 * r3 + t, -2 * r2],
        [8 * U * r1 * r3, -8 * U * r2 * r3 + t, 4 * U * S + 8 * U * r3 * r3 + 2 * eps - 2 * lam, -2 * r3],
        [-2 * r1, -2 * r2, -2 * r3, 0.0],
    ])


def stationarity_residual(pt: StationaryPoint, p: ModelParams) -> float:
    rho = pt.amplitudes
    lam = pt.lagrange if pt.lagrange is not None else best_fit_lagrange(rho, p)
    return float(np.linalg.norm(stationarity_gradient(np.append(rho, lam), p)))


def coherent_state_energy(pt: StationaryPoint, p: ModelParams) -> float:
    """<H>/N in the fixed-N SU(3) coherent state built on pt; bounds E0/N from above."""
    S = pt.imbalance
    return pt.energy_per_particle + p.U * (1.0 - S * S) / p.N


# ────────────────────────────────────────────────────────────
# 3. Point construction helpers
# ────────────────────────────────────────────────────────────
def _canonical_sign(rho: np.ndarray) -> np.ndarray:
    # rho2 >= 0; when rho2 vanishes, rho1 (then rho3) >= 0
    for k in (1, 0, 2):
        if abs(rho[k]) > SIGN_EPS:
            return rho if rho[k] > 0 else -rho
    return rho


def _make_point(rho: Iterable[float], p: ModelParams, label: str, lagrange: float | None = None) -> StationaryPoint:
    rho = np.asarray(list(rho), dtype=float)
    rho = _canonical_sign(rho / np.linalg.norm(rho))
    occ = tuple(float(x * x) for x in rho)
    phases = None if p.J == 0 else (0.0 if rho[0] >= 0 else math.pi, 0.0 if rho[2] >= 0 else math.pi)
    if lagrange is None:
        lagrange = best_fit_lagrange(rho, p)
    return StationaryPoint(
        occ_frac=occ,
        phases=phases,
        energy_per_particle=classical_energy(occ, phases, p),
        lagrange=float(lagrange),
        label=label,
    )


def point_distance(a: StationaryPoint, b: StationaryPoint) -> float:
    """Distance between signed amplitudes (occupations and phases together)."""
    return float(np.linalg.norm(a.amplitudes - b.amplitudes))


def _dedupe(points: Iterable[StationaryPoint], tol: float = DEDUP_TOL) -> list[StationaryPoint]:
    kept: list[StationaryPoint] = []
    for pt in points:
        if all(point_distance(pt, other) >= tol for other in kept):
            kept.append(pt)
    return kept


def _sorted(points: Iterable[StationaryPoint]) -> list[StationaryPoint]:
    return sorted(points, key=lambda pt: (pt.energy_per_particle, pt.occ_frac, pt.label))


# ────────────────────────────────────────────────────────────
# 4. Integrable tables
# ────────────────────────────────────────────────────────────
def stationary_points_U0(J: float, epsilon: float) -> list[StationaryPoint]:
    """x1 (E=0), x2 (E=-sgn(eps) sqrt(eps^2+J^2)), x3 (E=+sgn(eps) sqrt(eps^2+J^2))."""
    if J == 0 and epsilon == 0:
        raise ParameterError("U=0 table needs J != 0 or eps != 0")
    p = ModelParams(U=0.0, J=J, epsilon=epsilon)
    T = epsilon * epsilon + J * J
    root = math.sqrt(T)
    sgn = 1.0 if epsilon >= 0 else -1.0
    w = math.sqrt(epsilon * epsilon * T)
    table = {
        "x1": (0.0, (J * J / (2 * T), epsilon * epsilon / T, J * J / (2 * T))),
        "x2": (-sgn * root, ((T + w) ** 2 / (4 * T * T), J * J / (2 * T), (T - w) ** 2 / (4 * T * T))),
        "x3": (sgn * root, ((T - w) ** 2 / (4 * T * T), J * J / (2 * T), (T + w) ** 2 / (4 * T * T))),
    }
    points = []
    for label, (lam, occ) in table.items():
        rho2 = math.sqrt(occ[1])
        if J == 0:
            rho = np.sqrt(occ)
        elif rho2 == 0.0:
            # only x1 at eps = 0: rho1 = -rho3 keeps the rho2 equation balanced
            rho = np.array([math.sqrt(occ[0]), 0.0, -math.sqrt(occ[2])])
        else:
            # lambda = E at U = 0; signs follow rho_k = J rho2 / (sqrt2 (lambda +- eps))
            rho = np.array([J * rho2 / (SQRT2 * (lam + epsilon)), rho2, J * rho2 / (SQRT2 * (lam - epsilon))])
        points.append(_make_point(rho, p, label, lagrange=lam))
    return points


def stationary_points_J0(U: float, epsilon: float) -> list[StationaryPoint]:
    """Fock points x1, x3, x4 always; x2 and x5 iff |U| >= |eps|/4."""
    p = ModelParams(U=U, J=0.0, epsilon=epsilon)
    table: dict[str, tuple[float, float, float]] = {"x1": (0.0, 0.0, 1.0)}
    mixed = U != 0 and abs(U) >= abs(epsilon) / 4
    if mixed:
        q = epsilon / (8 * U)
        table["x2"] = (0.0, 0.5 + q, 0.5 - q)
    table["x3"] = (0.0, 1.0, 0.0)
    table["x4"] = (1.0, 0.0, 0.0)
    if mixed:
        table["x5"] = (0.5 + q, 0.5 - q, 0.0)
    return [_make_point(np.sqrt(np.clip(occ, 0.0, None)), p, label) for label, occ in table.items()]


def stationary_points_eps0(U: float, J: float) -> list[StationaryPoint]:
    """x1, x2, x3 always; x4 and x5 iff |U| >= |J|/2. All have n1 = n3."""
    if J == 0:
        raise ParameterError("eps=0 table needs J != 0; use stationary_points_J0")
    p = ModelParams(U=U, J=J, epsilon=0.0)
    half = math.sqrt(0.5)
    rows: list[tuple[str, np.ndarray]] = [
        ("x1", np.array([half, 0.0, -half])),
        ("x2", np.array([0.5, half, 0.5])),
        ("x3", np.array([-0.5, half, -0.5])),
    ]
    if abs(U) >= abs(J) / 2:
        root = math.sqrt(max(0.0, 4.0 - (J / U) ** 2))
        sign = 1.0 if U * J > 0 else -1.0     # (0,0) for U/J > 1/2, (pi,pi) for U/J < -1/2
        for label, n13, n2 in (
            ("x4", 0.25 + root / 8, 0.5 - root / 4),
            ("x5", 0.25 - root / 8, 0.5 + root / 4),
        ):
            r13 = sign * math.sqrt(max(n13, 0.0))
            rows.append((label, np.array([r13, math.sqrt(max(n2, 0.0)), r13])))
    return [_make_point(rho, p, label) for label, rho in rows]


# ────────────────────────────────────────────────────────────
# 5. General case
# ────────────────────────────────────────────────────────────
def polynomial_coefficients(U: float, J: float, epsilon: float) -> PolynomialCoeffs:
    u2, j2, e2 = U * U, J * J, epsilon * epsilon
    u4, j4, e4 = u2 * u2, j2 * j2, e2 * e2
    j6, e6 = j4 * j2, e4 * e2
    c = np.array([
        -e2 * j4,
        4 * e4 * j2 + 5 * e2 * j4 + j6 + 64 * e2 * j2 * u2,
        -4 * e6 - 12 * e4 * j2 - 12 * e2 * j4 - 4 * j6
        + 128 * e4 * u2 - 576 * e2 * j2 * u2 - 16 * j4 * u2 - 1024 * e2 * u4,
        4 * e6 + 12 * e4 * j2 + 12 * e2 * j4 + 4 * j6 - 640 * e4 * u2
        + 1856 * e2 * j2 * u2 + 80 * j4 * u2 + 9216 * e2 * u4,
        1024 * e4 * u2 - 2560 * e2 * j2 * u2 - 128 * j4 * u2 - 32768 * e2 * u4,
        -512 * e4 * u2 + 1280 * e2 * j2 * u2 + 64 * j4 * u2 + 57344 * e2 * u4,
        -49152 * e2 * u4,
        16384 * e2 * u4,
    ], dtype=float)
    return PolynomialCoeffs(c=c)


def _polish_root(coeffs: PolynomialCoeffs, r: float, steps: int = 4) -> float:
    poly = coeffs.highest_first()
    deriv = np.polyder(poly)
    for _ in range(steps):
        slope = np.polyval(deriv, r)
        if slope == 0:
            break
        step = np.polyval(poly, r) / slope
        if not math.isfinite(step) or abs(step) > 1e-3:
            break
        r -= step
    return float(r)


def real_roots_unit_interval(coeffs: PolynomialCoeffs) -> np.ndarray:
    """Real roots of the polynomial strictly inside (0, 1), via companion-matrix eigenvalues."""
    poly = np.trim_zeros(coeffs.highest_first(), "f")
    if poly.size < 2:
        return np.zeros(0)
    roots = np.roots(poly)
    real = roots[np.abs(roots.imag) <= ROOT_IMAG_TOL * np.maximum(1.0, np.abs(roots))].real
    found = sorted(_polish_root(coeffs, float(r)) for r in real)
    unique: list[float] = []
    for r in found:
        if 0.0 < r < 1.0 and (not unique or r - unique[-1] > 1e-14):
            unique.append(r)
    return np.array(unique)


def polynomial_real_roots(p: ModelParams) -> np.ndarray:
    return real_roots_unit_interval(polynomial_coefficients(p.U, p.J, p.epsilon))


def x_branches(rho2_sq: float, J: float, epsilon: float) -> list[SolverCandidate]:
    """The four X values for one rho2^2; complex ones are skipped."""
    r = rho2_sq
    s = 1.0 - r
    inner = math.sqrt(J * J + 8.0 * s * epsilon * epsilon / r)
    out = []
    for inner_sign in (1, -1):
        x_sq = epsilon * epsilon + J * r * (J + inner_sign * inner) / (2.0 * s)
        if x_sq < 0:
            continue
        for outer_sign in (1, -1):
            out.append(SolverCandidate(rho2_sq=r, X=outer_sign * math.sqrt(x_sq), sign_choices=(outer_sign, inner_sign)))
    return out


def _candidate_state(cand: SolverCandidate, p: ModelParams) -> np.ndarray | None:
    X, r = cand.X, cand.rho2_sq
    guard = SINGULAR_X_TOL * max(1.0, p.scale)
    if abs(X + p.epsilon) < guard or abs(X - p.epsilon) < guard:
        return None
    rho2 = math.sqrt(r)
    rho1 = SQRT2 / 2 * p.J * rho2 / (X + p.epsilon)
    rho3 = SQRT2 / 2 * p.J * rho2 / (X - p.epsilon)
    lam = X + 2 * p.U * (1 - 2 * r)
    return np.array([rho1, rho2, rho3, lam])


def newton_polish(rho: Sequence[float], lagrange: float, p: ModelParams) -> tuple[np.ndarray, float]:
    """Newton iteration on the 4-equation stationarity system."""
    x = np.append(np.asarray(rho, dtype=float), lagrange)
    scale = max(1.0, p.scale)
    for _ in range(NEWTON_MAX_ITER):
        F = stationarity_gradient(x, p)
        if np.linalg.norm(F) < 1e-15 * scale:
            break
        H = _bordered_hessian(x, p)
        try:
            dx = np.linalg.solve(H, -F)
        except np.linalg.LinAlgError:
            dx = np.linalg.lstsq(H, -F, rcond=None)[0]
        x = x + dx
        if not np.all(np.isfinite(x)):
            raise PolishingError(f"Newton iterate left the finite range at {p}")
        if np.linalg.norm(dx) < 1e-15 * max(1.0, np.linalg.norm(x)):
            break
    residual = float(np.linalg.norm(stationarity_gradient(x, p)))
    if residual > POLISHED_TOL * scale:
        raise PolishingError(f"Newton polish stalled at residual {residual:.3e} for {p}")
    return x[:3], float(x[3])


def _near_limit_seeds(p: ModelParams) -> list[StationaryPoint]:
    """Closed-form points of every integrable limit whose vanishing coupling is small in p."""
    threshold = NEAR_LIMIT * p.scale
    seeds: list[StationaryPoint] = []
    if abs(p.U) < threshold:
        seeds += stationary_points_U0(p.J, p.epsilon)
    if abs(p.J) < threshold:
        seeds += stationary_points_J0(p.U, p.epsilon)
    if abs(p.epsilon) < threshold:
        seeds += stationary_points_eps0(p.U, p.J)
    return seeds


def general_stationary_points(p: ModelParams) -> list[StationaryPoint]:
    regime = classify_regime(p)
    if regime is not Regime.GENERAL:
        return _table_points(regime, p)

    scale = max(1.0, p.scale)
    roots = polynomial_real_roots(p)
    logger.debug("general solver %s: %d real roots in (0,1)", p, len(roots))

    polished: list[StationaryPoint] = []
    for r in roots:
        for cand in x_branches(float(r), p.J, p.epsilon):
            state = _candidate_state(cand, p)
            if state is None:
                continue
            if np.linalg.norm(stationarity_gradient(state, p)) >= RESIDUAL_TOL * scale:
                continue
            try:
                rho, lam = newton_polish(state[:3], state[3], p)
            except PolishingError as exc:
                logger.warning("candidate rho2^2=%.12g X=%.12g rejected: %s", cand.rho2_sq, cand.X, exc)
                continue
            polished.append(_make_point(rho, p, "general", lagrange=lam))

    # boundary Fock configurations lie outside the rho2^2 parametrization
    for rho in np.eye(3):
        lam = best_fit_lagrange(rho, p)
        if np.linalg.norm(stationarity_gradient(np.append(rho, lam), p)) < POLISHED_TOL * scale:
            polished.append(_make_point(rho, p, "general", lagrange=lam))

    # near an integrable line the polynomial loses roots to round-off; the limit table does not
    for seed in _near_limit_seeds(p):
        rho = seed.amplitudes
        try:
            rho, lam = newton_polish(rho, best_fit_lagrange(rho, p), p)
        except PolishingError as exc:
            logger.debug("seed %s from the limit table rejected: %s", seed.label, exc)
            continue
        polished.append(_make_point(rho, p, "general", lagrange=lam))

    return _sorted(_dedupe(polished))


# ────────────────────────────────────────────────────────────
# 6. Dispatch and minimum selection
# ────────────────────────────────────────────────────────────
def classify_regime(p: ModelParams) -> Regime:
    scale = p.scale
    if scale == 0:
        raise ParameterError("all couplings vanish; nothing to analyse")
    threshold = DISPATCH_THRESHOLD * scale
    if abs(p.U) <= threshold:
        return Regime.U0
    if abs(p.J) <= threshold:
        return Regime.J0
    if abs(p.epsilon) <= threshold:
        return Regime.EPS0
    return Regime.GENERAL


def _table_points(regime: Regime, p: ModelParams) -> list[StationaryPoint]:
    if regime is Regime.U0:
        return stationary_points_U0(p.J, p.epsilon)
    if regime is Regime.J0:
        return stationary_points_J0(p.U, p.epsilon)
    return stationary_points_eps0(p.U, p.J)


def stationary_points(p: ModelParams) -> list[StationaryPoint]:
    """Every stationary point for p's regime, lowest energy first."""
    return _sorted(general_stationary_points(p))


def min_energy_point(p: ModelParams) -> tuple[StationaryPoint, list[StationaryPoint]]:
    """Lowest point (lexicographically smallest occupations among ties) and all tied points."""
    points = general_stationary_points(p)
    if not points:
        raise NumericalError(f"no stationary point found for {p}")
    emin = min(pt.energy_per_particle for pt in points)
    ties = [pt for pt in points if pt.energy_per_particle <= emin + TIE_TOL * max(1.0, p.scale)]
    ties.sort(key=lambda pt: (pt.occ_frac, pt.label))
    return ties[0], ties


# ────────────────────────────────────────────────────────────
# 7. Phase-transition diagnostics
# ────────────────────────────────────────────────────────────
BranchEnergy = Callable[[float, float], float]

_FAMILY_BRANCHES: dict[str, dict[str, BranchEnergy]] = {
    # coordinates (U, eps)
    "J0": {
        "x1": lambda U, eps: U + eps,
        "x2": lambda U, eps: -eps * eps / (16 * U) + eps / 2,
        "x3": lambda U, eps: U,
        "x4": lambda U, eps: U - eps,
        "x5": lambda U, eps: -eps * eps / (16 * U) - eps / 2,
    },
    # coordinates (U, J)
    "eps0": {
        "x1": lambda U, J: U,
        "x2": lambda U, J: J,
        "x3": lambda U, J: -J,
        "x4": lambda U, J: U + J * J / (4 * U),
        "x5": lambda U, J: U + J * J / (4 * U),
    },
}

TRANSITION_BRANCHES = {"J0": ("x4", "x5"), "eps0": ("x3", "x4")}


def branch_energy(family: str, label: str) -> BranchEnergy:
    try:
        return _FAMILY_BRANCHES[family][label]
    except KeyError:
        raise ParameterError(f"no closed-form branch {label!r} in family {family!r}") from None


@dataclass(frozen=True)
class DerivativeReport:
    d1a: float
    d1b: float
    d2a: float
    d2b: float
    second_order: bool


def _evaluate(branch: BranchEnergy, a: float, b: float) -> float:
    try:
        value = branch(a, b)
    except (ZeroDivisionError, ValueError) as exc:
        raise BranchUndefinedError(f"branch undefined at ({a}, {b}): {exc}") from exc
    if not math.isfinite(value):
        raise BranchUndefinedError(f"branch undefined at ({a}, {b})")
    return value


def _directional(branch: BranchEnergy, at: tuple[float, float], v: np.ndarray):
    a0, b0 = at
    f = lambda t: _evaluate(branch, float(a0 + t * v[0]), float(b0 + t * v[1]))
    f0 = f(0.0)

    def d1(step):
        return (f(step) - f(-step)) / (2 * step)

    def d2(step):
        return (f(step) - 2 * f0 + f(-step)) / (step * step)

    return d1, d2


def directional_derivative_test(
    branch_a: BranchEnergy,
    branch_b: BranchEnergy,
    at: tuple[float, float],
    v: tuple[float, float],
) -> DerivativeReport:
    """First/second directional derivatives of two branches; central stencils + one Richardson step."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ParameterError("direction vector must be nonzero")
    v = v / norm
    scale = max(1.0, abs(at[0]), abs(at[1]))
    h1, h2 = FIRST_STEP * scale, SECOND_STEP * scale

    values = []
    for branch in (branch_a, branch_b):
        d1, d2 = _directional(branch, at, v)
        first = (4 * d1(h1 / 2) - d1(h1)) / 3
        second = (4 * d2(h2 / 2) - d2(h2)) / 3
        values.append((first, second))
    (d1a, d2a), (d1b, d2b) = values
    second_order = abs(d1a - d1b) < TOL1 and abs(d2a - d2b) > TOL2
    return DerivativeReport(d1a=d1a, d1b=d1b, d2a=d2a, d2b=d2b, second_order=second_order)


def transition_derivatives(family: str, v: tuple[float, float] = (1.0, 0.0)) -> DerivativeReport:
    """Directional-derivative test at the family's critical point (second coupling = 1)."""
    label_a, label_b = TRANSITION_BRANCHES[family]
    at = (critical_point(family), 1.0)
    return directional_derivative_test(branch_energy(family, label_a), branch_energy(family, label_b), at, v)


@dataclass(frozen=True)
class ParameterPath:
    base: ModelParams
    axis: str                                # "U", "J" or "epsilon"
    start: float
    stop: float

    def at(self, t: float) -> ModelParams:
        return self.base.with_(**{self.axis: float(t)})


def bifurcation_predicate(p: ModelParams) -> bool:
    """Minimum degenerate, or held by a branch that only exists past a bifurcation."""
    best, ties = min_energy_point(p)
    if len(_dedupe(ties)) > 1:
        return True
    return best.label in BORN_LABELS.get(classify_regime(p), frozenset())


def detect_bifurcation(path: ParameterPath, tol: float = BISECTION_TOL, samples: int = SCAN_SAMPLES) -> float | None:
    """First change of the bifurcation predicate along the path, bisected to tol; None if constant."""
    ts = np.linspace(path.start, path.stop, samples + 1)
    flags = [bifurcation_predicate(path.at(t)) for t in ts]
    for k in range(samples):
        if flags[k] != flags[k + 1]:
            lo, hi, flag_lo = float(ts[k]), float(ts[k + 1]), flags[k]
            while abs(hi - lo) > tol:
                mid = 0.5 * (lo + hi)
                if bifurcation_predicate(path.at(mid)) == flag_lo:
                    lo = mid
                else:
                    hi = mid
            found = 0.5 * (lo + hi)
            logger.info("bifurcation along %s at %s = %.9f", path.base, path.axis, found)
            return found
    logger.info("no bifurcation along %s in [%g, %g]", path.axis, path.start, path.stop)
    return None


CANONICAL_PATHS = {
    "J0": ParameterPath(ModelParams(U=0.0, J=0.0, epsilon=1.0), "U", 0.0, 1.0),
    "eps0": ParameterPath(ModelParams(U=0.0, J=1.0, epsilon=0.0), "U", -2.0, 0.0),
}


def critical_point(family: str, verify: bool = False) -> float:
    """U/eps = 1/4 for the J=0 family, U/J = -1/2 for the eps=0 family."""
    if family not in CRITICAL_RATIOS:
        raise ParameterError(f"unknown family {family!r}; expected one of {sorted(CRITICAL_RATIOS)}")
    ratio = CRITICAL_RATIOS[family]
    if verify:
        found = detect_bifurcation(CANONICAL_PATHS[family])
        if found is None or abs(found - ratio) > BISECTION_TOL:
            raise NumericalError(f"numeric critical point {found} disagrees with {ratio} for {family}")
    return ratio
