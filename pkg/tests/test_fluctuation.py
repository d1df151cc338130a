import itertools

import numpy as np
import pytest

from workfluct.core import HADAMARD, HamiltonianSpec, ThermalConfig, dephase, gibbs_state, pure_state
from workfluct.errors import NotAProbability, SingularGibbsState
from workfluct.fluctuation import (
    allahverdyan_check, allahverdyan_suite, average_work_check, delta_f, energy_change,
    exp_beta_work, inverse_gibbs, jarzynski_check, jarzynski_suite, random_protocol,
    tail_bound_check, upsilon,
)
from workfluct.instances import random_density, rng_for, state_diagonal_in
from workfluct.work import TPM, WEAK, WorkDistribution, WorkPoint, tpm_distribution, weak_distribution

from conftest import qubit_protocol


def thermal_qubit_outcomes(beta):
    """Brute-force enumeration of the four TPM outcomes for the Hadamard qubit."""
    z = 1 + np.exp(-beta)
    p_i = [1 / z, np.exp(-beta) / z]
    energies = [0.0, 1.0]
    return [((energies[j] - energies[i]), p_i[i] * 0.5) for i, j in itertools.product(range(2), repeat=2)]


class TestDeltaF:
    def test_same(self):
        h = HamiltonianSpec.from_energies([0.0, 0.4, 2.0])
        assert delta_f(h, h, ThermalConfig(0.7)) == 0

    def test_qubit(self):
        h0 = HamiltonianSpec.from_energies([0.0, np.log(3)])
        ht = HamiltonianSpec.from_energies([0.0, 0.0])
        assert delta_f(h0, ht, ThermalConfig(1.0)) == pytest.approx(-0.4054651081081644, abs=1e-14)

    @pytest.mark.parametrize("beta", [0.2, 1.0, 9.0])
    def test_shift(self, beta):
        h0 = HamiltonianSpec.from_energies([0.0, 0.3, 1.1])
        ht = HamiltonianSpec.from_energies([0.2, 0.5, 0.9])
        shifted = HamiltonianSpec.from_energies(ht.energies + 2.5)
        t = ThermalConfig(beta)
        assert delta_f(h0, shifted, t) - delta_f(h0, ht, t) == pytest.approx(2.5, abs=1e-12)


class TestExpBetaWork:
    def test_single_point(self):
        assert exp_beta_work(WorkDistribution((WorkPoint(0.0, 0, 0, 1.0),), TPM), ThermalConfig(2.0)) == 1

    def test_zero_beta(self, plus_state):
        d = weak_distribution(plus_state, qubit_protocol())
        assert exp_beta_work(d, 0.0) == pytest.approx(1.0)

    def test_thermal_qubit(self):
        p = qubit_protocol(HADAMARD)
        t = ThermalConfig(1.0)
        d = tpm_distribution(gibbs_state(p.h_initial, t), p)
        brute = sum(v * np.exp(-w) for w, v in thermal_qubit_outcomes(1.0))
        assert exp_beta_work(d, t) == pytest.approx(brute, abs=1e-15)
        assert abs(brute - 1.0) <= 1e-12


class TestJarzynski:
    def test_suite(self):
        rows = jarzynski_suite(200, seed=5)
        assert all(r["passed"] for r in rows)
        assert max(r["rel_residual"] for r in rows) <= 1e-10

    def test_non_thermal_reported(self):
        p = qubit_protocol(HADAMARD, et=(0.0, 2.0))
        rep = jarzynski_check(pure_state([1, 0]), p, ThermalConfig(1.0))
        assert not rep.thermal
        assert rep.residual == rep.lhs - rep.rhs

    def test_trivial(self):
        p = qubit_protocol(np.eye(2))
        t = ThermalConfig(0.4)
        rep = jarzynski_check(gibbs_state(p.h_initial, t), p, t)
        assert rep.lhs == pytest.approx(1) and rep.rhs == pytest.approx(1) and rep.passed and rep.thermal


class TestAllahverdyan:
    def test_thermal_upsilon(self):
        for k in range(50):
            rng = rng_for(4, k)
            d = int(rng.integers(2, 9))
            p = random_protocol(rng, d)
            t = ThermalConfig(float(rng.uniform(0.1, 5)))
            rep = allahverdyan_check(gibbs_state(p.h_initial, t), p, t)
            assert abs(rep.upsilon - 1) <= 1e-12 and rep.passed

    def test_suite(self):
        assert all(r["passed"] for r in allahverdyan_suite(500, seed=8))

    def test_incoherent_not_thermal(self):
        hits = 0
        for k in range(20):
            rng = rng_for(6, k)
            p = random_protocol(rng, 3)
            t = ThermalConfig(1.5)
            rho = state_diagonal_in(p.h_initial, rng)
            rep = allahverdyan_check(rho, p, t)
            assert rep.passed
            hits += abs(rep.upsilon - 1) > 1e-3
        assert hits > 0

    def test_inverse_gibbs(self):
        h = HamiltonianSpec.from_energies([0.0, 0.7, 1.9])
        t = ThermalConfig(2.0)
        assert np.allclose(inverse_gibbs(h, t) @ gibbs_state(h, t).matrix, np.eye(3), atol=1e-12)

    def test_singular(self):
        p = qubit_protocol(et=(0.0, 1.0), e0=(0.0, 1000.0))
        with pytest.raises(SingularGibbsState):
            upsilon(np.eye(2) / 2, p, ThermalConfig(1.0))


class TestAverageWork:
    def test_weak_always(self):
        for k in range(100):
            rng = rng_for(9, k)
            p = random_protocol(rng, int(rng.integers(2, 9)))
            assert average_work_check(random_density(p.dim, rng), p, WEAK)[2]

    def test_tpm_incoherent(self):
        for k in range(50):
            rng = rng_for(10, k)
            p = random_protocol(rng, int(rng.integers(2, 9)))
            rho = dephase(random_density(p.dim, rng), p.h_initial)
            assert average_work_check(rho, p, TPM)[2]

    def test_tpm_counterexample(self, plus_state):
        theta = 0.4
        u = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]], dtype=complex)
        p = qubit_protocol(u, et=(0.0, 2.0))
        lhs, rhs, ok = average_work_check(plus_state, p, TPM)
        assert not ok and abs(lhs - rhs) > 1e-3

    def test_energy_change(self):
        p = qubit_protocol(HADAMARD)
        assert energy_change(pure_state([1, 0]), p) == pytest.approx(0.5)


class TestTailBound:
    def setup_method(self):
        self.p = qubit_protocol(HADAMARD)
        self.t = ThermalConfig(1.0)
        self.d = tpm_distribution(gibbs_state(self.p.h_initial, self.t), self.p)
        self.df = delta_f(self.p.h_initial, self.p.h_final, self.t)

    def test_zero(self):
        assert tail_bound_check(self.d, self.t, self.df, 0.0)[1:] == (1.0, True)

    def test_half(self):
        prob, bound, holds = tail_bound_check(self.d, self.t, self.df, 0.5)
        brute = sum(v for w, v in thermal_qubit_outcomes(1.0) if w < self.df - 0.5)
        assert prob == pytest.approx(brute) and holds
        assert bound == pytest.approx(0.6065306597126334)

    def test_large(self):
        assert tail_bound_check(self.d, self.t, self.df, 50.0)[0] == 0

    def test_upper_tail_is_not_bounded(self):
        # W > dF + x carries no exp(-beta x) bound; instance 9 of this stream violates it
        rng = rng_for(11, 9)
        p = random_protocol(rng, int(rng.integers(2, 9)))
        t = ThermalConfig(float(rng.uniform(0.1, 5)))
        d = tpm_distribution(gibbs_state(p.h_initial, t), p)
        df = delta_f(p.h_initial, p.h_final, t)
        upper = float(np.sum(d.values[d.works > df + 0.5]))
        assert upper > np.exp(-t.beta * 0.5)
        assert tail_bound_check(d, t, df, 0.5)[2]

    def test_rejects_quasi(self):
        with pytest.raises(NotAProbability):
            tail_bound_check(WorkDistribution((WorkPoint(0, 0, 0, 1.2), WorkPoint(1, 0, 1, -0.2)), WEAK),
                             self.t, 0.0, 0.0)

    def test_random_thermal(self):
        for k in range(100):
            rng = rng_for(11, k)
            p = random_protocol(rng, int(rng.integers(2, 9)))
            t = ThermalConfig(float(rng.uniform(0.1, 5)))
            d = tpm_distribution(gibbs_state(p.h_initial, t), p)
            df = delta_f(p.h_initial, p.h_final, t)
            for x in (0.0, 0.1, 0.5, 2.0):
                assert tail_bound_check(d, t, df, x)[2]
