import logging
import math

import numpy as np
import pytest

from errors import BasisError, FidelityError, ParameterError
from fock_basis import enumerate_basis
from quantum_spectra import (
    ModelParams,
    build_hamiltonian,
    degeneracy_clusters,
    double_well_spectrum,
    fidelity,
    fock_ground_J0,
    full_spectrum,
    ground_observables,
    ground_state,
    lowest_levels,
    normalize_energy,
    well_exchange_parity,
)
from semiclassical import coherent_state_energy, min_energy_point


def test_single_particle_matrix():
    p = ModelParams(U=0.7, J=1.3, epsilon=0.4, N=1)
    t = 1.3 / math.sqrt(2)
    expected = np.array([
        [0.7 - 0.4, t, 0.0],
        [t, 0.7, t],
        [0.0, t, 0.7 + 0.4],
    ])
    np.testing.assert_allclose(build_hamiltonian(p).matrix, expected, atol=1e-15)


@pytest.mark.parametrize("N", [1, 4, 9])
def test_hamiltonian_is_symmetric(N):
    H = build_hamiltonian(ModelParams(U=-1.2, J=0.8, epsilon=0.3, N=N)).matrix
    D = (N + 1) * (N + 2) // 2
    assert H.shape == (D, D)
    np.testing.assert_array_equal(H, H.T)


def test_basis_mismatch():
    with pytest.raises(BasisError):
        build_hamiltonian(ModelParams(U=1, J=1, epsilon=0, N=3), enumerate_basis(4))


@pytest.mark.parametrize("kwargs", [{"N": 0}, {"N": 2.5}, {"U": math.inf}, {"J": math.nan}])
def test_invalid_parameters(kwargs):
    values = {"U": 1.0, "J": 1.0, "epsilon": 0.0, "N": 2, **kwargs}
    with pytest.raises(ParameterError):
        ModelParams(**values)


def test_eigenpairs_are_accurate():
    H = build_hamiltonian(ModelParams(U=-2.0, J=1.0, epsilon=0.3, N=12))
    spec = full_spectrum(H)
    assert spec.max_residual(H) < 1e-10
    assert spec.orthonormality_defect() < 1e-10
    low = lowest_levels(H, 3)
    np.testing.assert_allclose(low.eigenvalues, spec.eigenvalues[:3], atol=1e-10)


# ─────────────────────────── integrable limits ──────────────────────────
@pytest.mark.parametrize("N", [1, 20])
def test_noninteracting_ground_energy_is_single_particle(N):
    for J in np.linspace(-3, 3, 61):
        p = ModelParams(U=0.0, J=float(J), epsilon=1.0, N=N)
        obs = ground_observables(p)
        assert obs.e0_per_particle == pytest.approx(-math.sqrt(1.0 + J * J), abs=1e-10)
        T = 1.0 + J * J
        n1 = (T + math.sqrt(T)) ** 2 / (4 * T * T)
        n3 = (T - math.sqrt(T)) ** 2 / (4 * T * T)
        tol = 1e-10 if N == 1 else 1e-8
        np.testing.assert_allclose(obs.occ_fraction, (n1, J * J / (2 * T), n3), atol=tol)


@pytest.mark.parametrize("N", range(1, 21))
def test_weak_interaction_without_hopping_fills_lowest_well(N):
    p = ModelParams(U=0.1, J=0.0, epsilon=1.0, N=N)
    obs = ground_observables(p)
    assert obs.e0_per_particle == pytest.approx(0.1 - 1.0, abs=1e-12)
    np.testing.assert_allclose(obs.occ, (N, 0, 0), atol=1e-12)
    state, energy = fock_ground_J0(p)
    assert tuple(state) == (N, 0, 0)
    assert energy == pytest.approx(obs.e0_per_particle, abs=1e-12)


@pytest.mark.parametrize("N", range(2, 21, 2))
def test_strong_interaction_splits_between_two_wells(N):
    obs = ground_observables(ModelParams(U=50.0, J=0.0, epsilon=1.0, N=N))
    assert obs.occ[0] == pytest.approx(N / 2, abs=1e-8)
    assert obs.occ[1] == pytest.approx(N / 2, abs=1e-8)


def test_fock_minimization_needs_zero_hopping():
    with pytest.raises(ParameterError):
        fock_ground_J0(ModelParams(U=1, J=0.1, epsilon=1, N=3))


# ─────────────────────────── spectral structure ─────────────────────────
def test_spectrum_flips_with_interaction_sign():
    up = full_spectrum(build_hamiltonian(ModelParams(U=2.0, J=1.0, epsilon=0.0, N=6))).eigenvalues
    down = full_spectrum(build_hamiltonian(ModelParams(U=-2.0, J=1.0, epsilon=0.0, N=6))).eigenvalues
    np.testing.assert_allclose(up, -down[::-1], atol=1e-9)


@pytest.mark.parametrize("U, eps", [(1.0, 0.4), (-0.7, 1.3), (2.5, -0.2)])
def test_tilt_reflection_mirrors_outer_wells(U, eps):
    left = ModelParams(U=U, J=1.0, epsilon=eps, N=6)
    right = left.with_(epsilon=-eps)
    np.testing.assert_allclose(
        full_spectrum(build_hamiltonian(left)).eigenvalues,
        full_spectrum(build_hamiltonian(right)).eigenvalues,
        atol=1e-9,
    )
    a, b = ground_observables(left), ground_observables(right)
    assert not a.degenerate
    np.testing.assert_allclose(a.occ, b.occ[::-1], atol=1e-8)


@pytest.mark.parametrize("U, eps", [(1.0, 0.4), (-1.5, 0.0), (0.0, 2.0)])
def test_spectrum_ignores_hopping_sign(U, eps):
    plus = ModelParams(U=U, J=0.8, epsilon=eps, N=5)
    minus = plus.with_(J=-0.8)
    np.testing.assert_allclose(
        full_spectrum(build_hamiltonian(plus)).eigenvalues,
        full_spectrum(build_hamiltonian(minus)).eigenvalues,
        atol=1e-9,
    )


def test_strong_coupling_clusters():
    spec = full_spectrum(build_hamiltonian(ModelParams(U=1e4, J=1.0, epsilon=0.0, N=6)))
    sizes = degeneracy_clusters(spec, 1.0)
    assert sizes == [4, 8, 8, 8]
    assert sum(sizes) == 28


def test_attractive_ground_state_is_quasi_degenerate(caplog):
    p = ModelParams(U=-2.0, J=1.0, epsilon=0.0, N=20)
    with caplog.at_level(logging.WARNING, logger="quantum_spectra"):
        obs = ground_observables(p)
    assert "basis dependent" in caplog.text
    assert obs.gap1 / (p.N * p.J) < 1e-6
    assert obs.degenerate


def test_excited_levels_cross_between_symmetry_sectors():
    N = 20
    basis = enumerate_basis(N)
    us = np.linspace(-1.0, 0.0, 41)
    parities, gaps = [], []
    for U in us:
        p = ModelParams(U=float(U), J=1.0, epsilon=0.0, N=N)
        spec = lowest_levels(build_hamiltonian(p), 3)
        parities.append(well_exchange_parity(spec.eigenvectors[:, 1], basis))
        E = spec.eigenvalues
        gaps.append(((E[1] - E[0]) / N, (E[2] - E[0]) / N))
    assert parities[0] > 0.5
    assert parities[-1] < -0.5
    flip = next(k for k in range(len(us)) if parities[k] < 0)
    assert max(gaps[flip]) < 0.1


def test_double_well_levels_approach_ground_cluster():
    def distance(U):
        p = ModelParams(U=U, J=1.0, epsilon=0.0, N=20)
        triple = lowest_levels(build_hamiltonian(p), p.N + 2).eigenvalues
        double = double_well_spectrum(p)
        return max(np.abs(double - e).min() for e in triple) / p.N

    assert distance(-10.0) < distance(-2.0)


def test_double_well_ground_matches_triple_well():
    p = ModelParams(U=-2.0, J=1.0, epsilon=0.0, N=10)
    assert double_well_spectrum(p)[0] == pytest.approx(ground_observables(p).e0_per_particle * p.N, abs=1e-9)


def test_double_well_needs_zero_tilt():
    with pytest.raises(ParameterError):
        double_well_spectrum(ModelParams(U=-2.0, J=1.0, epsilon=0.1, N=4))


# ─────────────────────────── variational ceiling ────────────────────────
@pytest.mark.parametrize("U, eps", [(-3.0, 0.0), (-1.0, 0.5), (0.5, 0.2), (2.0, 0.0), (2.0, 0.7)])
def test_ground_energy_below_coherent_state(U, eps):
    for N in (1, 2, 8):
        p = ModelParams(U=U, J=1.0, epsilon=eps, N=N)
        best, _ = min_energy_point(p)
        e0 = ground_observables(p).e0_per_particle
        assert e0 <= coherent_state_energy(best, p) + 1e-9
        if U <= 0:
            assert e0 <= best.energy_per_particle + 1e-9


@pytest.mark.parametrize("N", [10, 20, pytest.param(60, marks=pytest.mark.slow)])
def test_repulsive_deviation_leading_order(N):
    p = ModelParams(U=2.0, J=1.0, epsilon=0.0, N=N)
    best, _ = min_energy_point(p)
    deviation = ground_observables(p).e0_per_particle - best.energy_per_particle
    assert 0 < deviation < 2 * (math.sqrt(5.0) - 1.0) / N


@pytest.mark.slow
def test_repulsive_deviation_decreases_with_N():
    devs = []
    for N in (10, 20, 60):
        p = ModelParams(U=2.0, J=1.0, epsilon=0.0, N=N)
        devs.append(abs(ground_observables(p).e0_per_particle - min_energy_point(p)[0].energy_per_particle))
    assert devs[0] > devs[1] > devs[2]


@pytest.mark.slow
def test_full_spectrum_sixty_bosons():
    H = build_hamiltonian(ModelParams(U=1.0, J=1.0, epsilon=0.5, N=60))
    assert H.D == 1891
    assert full_spectrum(H).max_residual(H) < 1e-10


# ─────────────────────────── fidelity ───────────────────────────────────
def test_fidelity_robust_to_small_tilt():
    p = ModelParams(U=1.0, J=1.0, epsilon=0.0, N=20)
    assert fidelity(ground_state(p), ground_state(p.with_(epsilon=0.05))) > 0.9


def test_fidelity_of_state_with_itself():
    v = ground_state(ModelParams(U=-0.3, J=1.0, epsilon=0.2, N=5))
    assert fidelity(v, -v) == pytest.approx(1.0, abs=1e-12)


def test_fidelity_errors():
    a = np.array([1.0, 0.0, 0.0])
    with pytest.raises(FidelityError):
        fidelity(a, np.array([1.0, 0.0]))
    with pytest.raises(FidelityError):
        fidelity(a, np.array([1.0, 1.0, 0.0]))


def test_parity_is_sharp_without_tilt():
    p = ModelParams(U=0.5, J=1.0, epsilon=0.0, N=6)
    spec = full_spectrum(build_hamiltonian(p))
    basis = enumerate_basis(p.N)
    for k in range(spec.eigenvectors.shape[1]):
        neighbours = np.abs(np.delete(spec.eigenvalues, k) - spec.eigenvalues[k])
        if neighbours.min() > 1e-6:
            assert abs(abs(well_exchange_parity(spec.eigenvectors[:, k], basis)) - 1.0) < 1e-8


def test_normalize_energy():
    p = ModelParams(U=1.0, J=2.0, epsilon=0.5, N=3)
    assert normalize_energy(-3.0, p, "J") == -1.5
    assert normalize_energy(-3.0, p, "eps") == -6.0
    assert normalize_energy(-3.0, p, "none") == -3.0
    with pytest.raises(ParameterError):
        normalize_energy(1.0, p.with_(epsilon=0.0), "eps")
    with pytest.raises(ParameterError):
        normalize_energy(1.0, p, "U")
