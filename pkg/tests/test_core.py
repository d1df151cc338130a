import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from workfluct.core import (
    HADAMARD, PAULI_X, PAULI_Z, HamiltonianSpec, ThermalConfig, UnitarySpec,
    commutator_norm, dephase, eigh, evolve, gibbs_state, partition_function,
    pure_state, time_ordered_unitary, validate_density,
)
from workfluct.errors import (
    DimensionMismatch, NotHermitian, NotPositive, NotUnitary, NotUnitTrace, ValidationError,
)
from workfluct.instances import random_density, random_hamiltonian, random_unitary, rng_for

from oracles import spectral_norm_2x2

seeds = st.integers(0, 2**32 - 1)


def random_hermitian(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


class TestValidateDensity:
    def test_maximally_mixed(self):
        rho = validate_density(np.eye(2) / 2)
        assert np.allclose(rho.eigenvalues(), [0.5, 0.5])

    def test_negative_eigenvalue(self):
        with pytest.raises(NotPositive, match="-0.1"):
            validate_density([[0.5, 0.6], [0.6, 0.5]])

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            validate_density([[1, 1j], [1j, 0]])

    def test_trace(self):
        with pytest.raises(NotUnitTrace):
            validate_density(np.eye(2))

    def test_not_square(self):
        with pytest.raises(DimensionMismatch):
            validate_density(np.ones((2, 3)))

    def test_immutable(self):
        rho = validate_density(np.eye(2) / 2)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1


class TestEigh:
    def test_diagonal(self):
        h = eigh(np.diag([0.0, 1.0]))
        assert np.allclose(h.energies, [0, 1])
        assert np.allclose(np.abs(h.eigenvectors), np.eye(2))

    def test_pauli_x(self):
        h = eigh(PAULI_X)
        assert np.allclose(h.energies, [-1, 1])
        minus = np.array([1, -1]) / np.sqrt(2)
        plus = np.array([1, 1]) / np.sqrt(2)
        assert abs(abs(np.vdot(minus, h.eigenvectors[:, 0])) - 1) < 1e-12
        assert abs(abs(np.vdot(plus, h.eigenvectors[:, 1])) - 1) < 1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            eigh([[0, 1], [0, 0]])

    @settings(max_examples=60, deadline=None)
    @given(seed=seeds, d=st.integers(1, 16))
    def test_round_trip(self, seed, d):
        rng = np.random.default_rng(seed)
        m = random_hermitian(d, rng)
        h = eigh(m)
        assert np.max(np.abs(h.matrix - m)) <= 1e-9
        v = h.eigenvectors
        assert np.max(np.abs(m @ v - v * h.energies)) <= 1e-9
        assert np.max(np.abs(v.conj().T @ v - np.eye(d))) <= 1e-10

    def test_degeneracy_flag(self):
        assert HamiltonianSpec.from_energies([1.0, 1.0 + 1e-12]).degenerate
        assert not HamiltonianSpec.from_energies([0.0, 1.0]).degenerate
        assert HamiltonianSpec.from_energies([0.0, 1.0, 1.0]).eigenspace_blocks() == [[0], [1, 2]]

    def test_sorted(self):
        h = HamiltonianSpec.from_energies([2.0, 0.0, 1.0])
        assert list(h.energies) == [0, 1, 2]
        assert np.allclose(np.abs(h.eigenvectors[:, 0]), [0, 1, 0])


class TestThermal:
    def test_high_temperature(self):
        h = HamiltonianSpec.from_energies([0.0, 1.0])
        g = gibbs_state(h, ThermalConfig(1e-9)).matrix
        assert np.allclose(g, np.eye(2) / 2, atol=1e-8)

    def test_qubit_beta_one(self):
        h = HamiltonianSpec.from_energies([0.0, 1.0])
        g = gibbs_state(h, ThermalConfig(1.0)).matrix
        assert np.allclose(np.diag(g).real, [0.7310585786300049, 0.2689414213699951], atol=1e-15)

    def test_degenerate(self):
        h = HamiltonianSpec.from_energies([3.0, 3.0])
        for beta in (0.1, 1, 50):
            assert np.allclose(gibbs_state(h, ThermalConfig(beta)).matrix, np.eye(2) / 2)

    def test_partition_function(self):
        assert partition_function(HamiltonianSpec.from_energies([0.0, 0.0]), ThermalConfig(3.0)) == pytest.approx(2)
        assert partition_function(HamiltonianSpec.from_energies([0.0, 1.0]), ThermalConfig(1.0)) == pytest.approx(1.3678794411714423, abs=1e-15)
        z = partition_function(HamiltonianSpec.from_energies([0.0, 1000.0]), ThermalConfig(1.0))
        assert abs(z - 1) <= 1e-12

    def test_no_overflow(self):
        h = HamiltonianSpec.from_energies([-1000.0, 0.0])
        g = gibbs_state(h, ThermalConfig(1.0)).matrix
        assert np.all(np.isfinite(g))
        assert g[0, 0].real == pytest.approx(1.0)

    @pytest.mark.parametrize("beta", [0.0, -1.0, float("inf")])
    def test_bad_beta(self, beta):
        with pytest.raises(ValidationError):
            ThermalConfig(beta)

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds, d=st.integers(1, 8), beta=st.floats(0.01, 20))
    def test_commutes(self, seed, d, beta):
        h = random_hamiltonian(d, np.random.default_rng(seed), width=3.0)
        assert commutator_norm(gibbs_state(h, ThermalConfig(beta)).matrix, h.matrix) <= 1e-12


class TestDephase:
    def test_fixed_point(self):
        h = HamiltonianSpec.from_energies([0.0, 1.0])
        rho = validate_density(np.diag([0.3, 0.7]))
        assert np.allclose(dephase(rho, h).matrix, rho.matrix)

    def test_plus(self):
        h = HamiltonianSpec.from_energies([0.0, 1.0])
        plus = pure_state([1, 1])
        assert np.allclose(dephase(plus, h).matrix, np.eye(2) / 2)

    def test_degenerate_block_kept(self):
        h = HamiltonianSpec.from_energies([0.0, 0.0, 1.0])
        rho = pure_state([1, 1, 1])
        out = dephase(rho, h).matrix
        assert abs(out[0, 1]) == pytest.approx(1 / 3)
        assert abs(out[0, 2]) == 0

    def test_dimension(self):
        with pytest.raises(DimensionMismatch):
            dephase(np.eye(3) / 3, HamiltonianSpec.from_energies([0.0, 1.0]))

    def test_projection_properties(self):
        for k in range(1000):
            rng = rng_for(7, k)
            d = int(rng.integers(1, 9))
            h = random_hamiltonian(d, rng)
            rho = random_density(d, rng)
            once = dephase(rho, h)
            twice = dephase(once, h)
            assert np.max(np.abs(once.matrix - twice.matrix)) <= 1e-12
            assert abs(np.trace(once.matrix) - 1) <= 1e-12
            assert np.linalg.eigvalsh(once.matrix)[0] >= -1e-12


class TestEvolve:
    def test_identity(self):
        rho = pure_state([0.6, 0.8j])
        assert np.allclose(evolve(rho, np.eye(2)).matrix, rho.matrix)

    def test_hadamard(self):
        out = evolve(pure_state([1, 0]), HADAMARD).matrix
        assert np.allclose(out, np.full((2, 2), 0.5))

    def test_rejects_non_unitary(self):
        with pytest.raises(NotUnitary):
            evolve(pure_state([1, 0]), np.diag([1, 2]))

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds, d=st.integers(1, 8))
    def test_spectrum_preserved(self, seed, d):
        rng = np.random.default_rng(seed)
        rho = random_density(d, rng)
        out = evolve(rho, random_unitary(d, rng))
        assert abs(np.trace(out.matrix) - 1) <= 1e-10
        assert np.max(np.abs(out.eigenvalues() - rho.eigenvalues())) <= 1e-10


class TestTimeOrdered:
    def test_single_segment(self):
        w, t = 1.7, 0.9
        u = time_ordered_unitary(UnitarySpec(schedule=((np.diag([0, w]), t),)))
        assert np.allclose(u, np.diag([1, np.exp(-1j * w * t)]), atol=1e-14)

    def test_commuting_segments(self):
        a, b = np.diag([0.3, -1.1]), np.diag([2.0, 0.5])
        u = time_ordered_unitary(UnitarySpec(schedule=((a, 0.4), (b, 1.3))))
        expected = np.diag(np.exp(-1j * (np.diag(a) * 0.4 + np.diag(b) * 1.3)))
        assert np.max(np.abs(u - expected)) <= 1e-12

    def test_empty_schedule(self):
        assert np.allclose(time_ordered_unitary(UnitarySpec(size=3)), np.eye(3))

    def test_order(self):
        u = time_ordered_unitary(UnitarySpec(schedule=((PAULI_X, np.pi / 4), (PAULI_Z, np.pi / 3))))
        ux = np.cos(np.pi / 4) * np.eye(2) - 1j * np.sin(np.pi / 4) * PAULI_X
        uz = np.cos(np.pi / 3) * np.eye(2) - 1j * np.sin(np.pi / 3) * PAULI_Z
        assert np.allclose(u, uz @ ux, atol=1e-14)

    def test_explicit_verbatim(self):
        u = random_unitary(3, np.random.default_rng(0))
        assert np.array_equal(time_ordered_unitary(UnitarySpec(explicit=u)), u)

    def test_explicit_not_unitary(self):
        with pytest.raises(NotUnitary):
            UnitarySpec(explicit=np.ones((2, 2)))

    def test_nonpositive_duration(self):
        with pytest.raises(ValidationError):
            UnitarySpec(schedule=((PAULI_X, 0.0),))

    @settings(max_examples=30, deadline=None)
    @given(seed=seeds, d=st.integers(1, 6), n=st.integers(1, 5))
    def test_refinement(self, seed, d, n):
        rng = np.random.default_rng(seed)
        segs = [(random_hermitian(d, rng), float(rng.uniform(0.1, 2))) for _ in range(n)]
        halves = [(h, dt / 2) for h, dt in segs for _ in range(2)]
        u1 = time_ordered_unitary(UnitarySpec(schedule=tuple(segs)))
        u2 = time_ordered_unitary(UnitarySpec(schedule=tuple(halves)))
        assert np.max(np.abs(u1 - u2)) <= 1e-12
        assert np.max(np.abs(u1.conj().T @ u1 - np.eye(d))) <= 1e-9


class TestCommutatorNorm:
    def test_same(self):
        assert commutator_norm(PAULI_X, PAULI_X) == 0

    def test_pauli_oracle(self):
        comm = PAULI_X @ PAULI_Z - PAULI_Z @ PAULI_X
        assert commutator_norm(PAULI_X, PAULI_Z) == pytest.approx(spectral_norm_2x2(comm), abs=1e-14)
        assert spectral_norm_2x2(comm) == pytest.approx(2.0)

    def test_diagonal(self):
        assert commutator_norm(np.diag([1, 2, 3]), np.diag([4, 5, 6])) == 0

    def test_dimension(self):
        with pytest.raises(DimensionMismatch):
            commutator_norm(np.eye(2), np.eye(3))
