"""
Triple-Well Bosons · Quantum spectra
────────────────────────────────────────────────────────────────────────
• Hamiltonian in the Fock basis:
      H = (U/N)(N1 - N2 + N3)^2 + eps (N3 - N1)
          + (J/sqrt2)(a1+ a2 + a2+ a1) + (J/sqrt2)(a2+ a3 + a3+ a2)
• Dense exact diagonalization (LAPACK through scipy.linalg.eigh).
• Ground-state observables: E0/N, gaps, <Nk>, degeneracy flag.
• Fidelity, exhaustive J=0 Fock minimization, symmetric double-well
  comparison spectrum, eigenvalue clustering, 1<->3 exchange parity.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from errors import BasisError, EigensolverError, FidelityError, ParameterError
from fock_basis import Basis, FockState, enumerate_basis, occupation_table, rank_array, reflect_index

logger = logging.getLogger(__name__)

# ────────────────────────────────────────────────────────────
# 0. Tunables
# ────────────────────────────────────────────────────────────
DEGENERACY_RTOL = 1e-8       # gap1 below this (relative) flags a degenerate ground state
PHASE_EPS = 1e-12            # components below this (relative) count as zero for the sign rule
NORM_TOL = 1e-8              # fidelity inputs must be normalized to this
ENERGY_UNITS = ("J", "eps", "none")


# ────────────────────────────────────────────────────────────
# 1. Parameters
# ────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class ModelParams:
    U: float
    J: float
    epsilon: float
    N: int = 1

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 1:
            raise ParameterError(f"boson number must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        for name in ("U", "J", "epsilon"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ParameterError(f"coupling {name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    @property
    def scale(self) -> float:
        """Largest coupling magnitude; sets tolerances."""
        return max(abs(self.U), abs(self.J), abs(self.epsilon))

    def canonical(self) -> "ModelParams":
        """Same physics with J >= 0 (the spectrum does not depend on the sign of J)."""
        return replace(self, J=abs(self.J))

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)


def normalize_energy(e_per_particle: float, p: ModelParams, per: str = "none") -> float:
    """E/N → E/(NJ), E/(N eps) or unchanged."""
    if per == "none":
        return e_per_particle
    if per not in ENERGY_UNITS:
        raise ParameterError(f"unknown energy unit '{per}'")
    unit = p.J if per == "J" else p.epsilon
    if unit == 0:
        raise ParameterError(f"cannot express energies per {per}: it is zero")
    return e_per_particle / unit


# ────────────────────────────────────────────────────────────
# 2. Hamiltonian
# ────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class HamiltonianMatrix:
    matrix: np.ndarray
    basis: Basis

    @property
    def D(self) -> int:
        return self.matrix.shape[0]


def fock_diagonal(p: ModelParams, basis: Basis) -> np.ndarray:
    occ = occupation_table(basis)
    n1, n2, n3 = occ[:, 0], occ[:, 1], occ[:, 2]
    return (p.U / p.N) * (n1 - n2 + n3).astype(float) ** 2 + p.epsilon * (n3 - n1)


def build_hamiltonian(p: ModelParams, basis: Basis | None = None) -> HamiltonianMatrix:
    if basis is None:
        basis = enumerate_basis(p.N)
    if basis.N != p.N:
        raise BasisError(f"basis holds N={basis.N} bosons but parameters say N={p.N}")

    occ = occupation_table(basis)
    n1, n2, n3 = occ[:, 0], occ[:, 1], occ[:, 2]
    H = np.diag(fock_diagonal(p, basis))
    t = p.J / math.sqrt(2.0)

    # a1+ a2 : |n1,n2,n3> -> |n1+1,n2-1,n3>
    src = np.nonzero(n2 > 0)[0]
    dst = rank_array(basis, n1[src] + 1, n2[src] - 1)
    amp = t * np.sqrt((n1[src] + 1) * n2[src])
    H[dst, src] = amp
    H[src, dst] = amp

    # a2+ a3 : |n1,n2,n3> -> |n1,n2+1,n3-1>
    src = np.nonzero(n3 > 0)[0]
    dst = rank_array(basis, n1[src], n2[src] + 1)
    amp = t * np.sqrt((n2[src] + 1) * n3[src])
    H[dst, src] = amp
    H[src, dst] = amp

    return HamiltonianMatrix(matrix=H, basis=basis)


# ────────────────────────────────────────────────────────────
# 3. Diagonalization
# ────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def max_residual(self, H: HamiltonianMatrix) -> float:
        """max_i ||H v_i - E_i v_i|| relative to the spectral norm of H."""
        A = H.matrix
        resid = A @ self.eigenvectors - self.eigenvectors * self.eigenvalues
        norm = max(np.abs(self.eigenvalues).max(), 1e-300)
        return float(np.linalg.norm(resid, axis=0).max() / norm)

    def orthonormality_defect(self) -> float:
        V = self.eigenvectors
        return float(np.abs(V.T @ V - np.eye(V.shape[1])).max())


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """First non-negligible component of every column made positive."""
    mags = np.abs(vectors)
    first = np.argmax(mags > PHASE_EPS * mags.max(axis=0), axis=0)
    signs = np.sign(vectors[first, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _eigh(A: np.ndarray, count: int | None = None):
    try:
        if count is None or count >= A.shape[0]:
            return scipy.linalg.eigh(A)
        return scipy.linalg.eigh(A, subset_by_index=[0, count - 1])
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise EigensolverError(f"eigensolver did not converge for D={A.shape[0]}: {exc}") from exc


def full_spectrum(H: HamiltonianMatrix) -> SpectrumResult:
    values, vectors = _eigh(H.matrix)
    return SpectrumResult(eigenvalues=values, eigenvectors=_fix_phases(vectors))


def lowest_levels(H: HamiltonianMatrix, count: int = 3) -> SpectrumResult:
    values, vectors = _eigh(H.matrix, count)
    return SpectrumResult(eigenvalues=values, eigenvectors=_fix_phases(vectors))


# ────────────────────────────────────────────────────────────
# 4. Ground-state observables
# ────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class GroundObservables:
    e0_per_particle: float
    gap1: float
    gap2: float
    occ: tuple[float, float, float]
    degenerate: bool

    @property
    def occ_fraction(self) -> tuple[float, float, float]:
        total = sum(self.occ)
        return tuple(x / total for x in self.occ)


def occupations(vector: np.ndarray, basis: Basis) -> tuple[float, float, float]:
    """<Nk> = sum_s nk(s) |<s|v>|^2."""
    probs = np.abs(vector) ** 2
    return tuple(float(x) for x in probs @ occupation_table(basis))


def degeneracy_threshold(e0: float, p: ModelParams) -> float:
    return DEGENERACY_RTOL * max(abs(e0), p.N * p.scale)


def ground_observables(p: ModelParams) -> GroundObservables:
    H = build_hamiltonian(p)
    spec = lowest_levels(H, 3)
    E = spec.eigenvalues
    e0 = float(E[0])
    gap1 = float(E[1] - E[0]) if len(E) > 1 else math.inf
    gap2 = float(E[2] - E[0]) if len(E) > 2 else math.inf
    degenerate = gap1 < degeneracy_threshold(e0, p)
    if degenerate:
        logger.warning("degenerate ground state at %s (gap1=%.3e); <Nk> is basis dependent", p, gap1)
    return GroundObservables(
        e0_per_particle=e0 / p.N,
        gap1=gap1,
        gap2=gap2,
        occ=occupations(spec.eigenvectors[:, 0], H.basis),
        degenerate=bool(degenerate),
    )


def ground_state(p: ModelParams) -> np.ndarray:
    return lowest_levels(build_hamiltonian(p), 1).eigenvectors[:, 0]


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise FidelityError(f"state vectors differ in dimension: {a.shape} vs {b.shape}")
    for name, v in (("a", a), ("b", b)):
        if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
            raise FidelityError(f"state vector {name} is not normalized (norm={np.linalg.norm(v):.3e})")
    return float(min(abs(np.vdot(a, b)), 1.0))


# ────────────────────────────────────────────────────────────
# 5. Integrable checks and comparisons
# ────────────────────────────────────────────────────────────
def fock_ground_J0(p: ModelParams) -> tuple[FockState, float]:
    """Exhaustive integer minimization of the diagonal energy (ties → lowest index)."""
    if p.J != 0:
        raise ParameterError(f"Fock minimization needs J=0, got J={p.J}")
    basis = enumerate_basis(p.N)
    diag = fock_diagonal(p, basis)
    best = int(np.argmin(diag))
    return basis.states[best], float(diag[best]) / p.N


def double_well_spectrum(p: ModelParams) -> np.ndarray:
    """Spectrum of (U/N)(Nb - N2)^2 + J(b+ a2 + a2+ b) on |Nb, N2>, Nb + N2 = N."""
    if p.epsilon != 0:
        raise ParameterError(f"double-well mapping needs eps=0, got eps={p.epsilon}")
    n2 = np.arange(p.N + 1)
    nb = p.N - n2
    H = np.diag((p.U / p.N) * (nb - n2).astype(float) ** 2)
    # <Nb+1, N2-1| b+ a2 |Nb, N2> = sqrt((Nb+1) N2), state k+1 -> k
    hop = p.J * np.sqrt((nb[1:] + 1) * n2[1:])
    H[n2[:-1], n2[1:]] = hop
    H[n2[1:], n2[:-1]] = hop
    try:
        return scipy.linalg.eigh(H, eigvals_only=True)
    except scipy.linalg.LinAlgError as exc:
        raise EigensolverError(f"double-well eigensolver did not converge: {exc}") from exc


def cluster_labels(values: np.ndarray, cluster_tol: float) -> np.ndarray:
    """Cluster id per sorted eigenvalue; a new cluster starts at every gap >= tol."""
    if cluster_tol <= 0:
        raise ParameterError(f"cluster tolerance must be positive, got {cluster_tol}")
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return np.zeros(0, dtype=np.int64)
    breaks = np.diff(values) >= cluster_tol
    return np.concatenate(([0], np.cumsum(breaks))).astype(np.int64)


def degeneracy_clusters(spectrum: SpectrumResult | np.ndarray, cluster_tol: float) -> list[int]:
    values = spectrum.eigenvalues if isinstance(spectrum, SpectrumResult) else spectrum
    labels = cluster_labels(values, cluster_tol)
    return np.bincount(labels).tolist() if labels.size else []


def well_exchange_parity(vector: np.ndarray, basis: Basis) -> float:
    """<v|P13|v> where P13 swaps the occupations of wells 1 and 3."""
    return float(np.vdot(vector, vector[reflect_index(basis)]).real)
