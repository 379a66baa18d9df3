"""Generator construction: jump decompositions, Redfield/Davies, coarse-grained
coefficients against independent quadrature oracles, and limit relations."""

import numpy as np
import pytest

from qme.generators import (
    DiscretizationParams,
    GeneratorConfig,
    cgme_gamma,
    cgme_generator,
    cgme_lamb_F,
    cgme_lamb_shift,
    cgme_x,
    davies_generator,
    decompose_coupling,
    discretization_params,
    kossakowski_matrix,
    multi_coupling_generator,
    redfield_filtered,
    redfield_generator,
)
from qme.operators import HermitianOperator, eigensystem, operator_norm
from scipy.linalg import expm

from conftest import IDENT, PAULI_X, PAULI_Z
import oracles


class TestJumpDecomposition:
    def test_sums_to_coupling(self, benchmark_jd):
        total = sum(op for op in benchmark_jd.operators)
        assert np.allclose(total, benchmark_jd.coupling, atol=1e-12)

    def test_frequencies_antisymmetric(self, benchmark_jd):
        f = benchmark_jd.frequencies
        assert np.allclose(np.sort(f), np.sort(-f), atol=1e-10)

    def test_conjugation_identity(self, benchmark_jd):
        # e^{iHt} A_w e^{-iHt} = e^{-iwt} A_w, summed over w
        assert benchmark_jd.conjugation_residual() < 1e-10

    def test_adjoint_pairing(self, benchmark_jd):
        for w, Aw in benchmark_jd.terms():
            Am = benchmark_jd.operator_at(-w)
            assert np.allclose(Aw.conj().T, Am, atol=1e-10)

    def test_single_qubit_sigma_z_coupling_x(self):
        jd = decompose_coupling(eigensystem(HermitianOperator(PAULI_Z)),
                                HermitianOperator(PAULI_X))
        freqs = sorted(np.round(jd.frequencies, 10))
        assert freqs in ([-2.0, 2.0], [-2.0, 0.0, 2.0])
        a_plus = jd.operator_at(2.0)
        assert np.allclose(a_plus, [[0, 0], [1, 0]], atol=1e-12)


class TestRedfieldAndDavies:
    def test_filtered_operator_coefficients(self, benchmark_jd, toy_bath):
        A_f = redfield_filtered(benchmark_jd, toy_bath)
        expected = np.zeros_like(A_f)
        for w, Aw in benchmark_jd.terms():
            expected += np.conj(oracles.half_fourier_reference(toy_bath.correlation, -w)) * Aw
        assert np.max(np.abs(A_f - expected)) < 1e-6

    def test_lambless_uses_half_gamma(self, benchmark_jd, toy_bath):
        A_f = redfield_filtered(benchmark_jd, toy_bath, lambless=True)
        expected = sum(0.5 * float(toy_bath.gamma(-w)) * Aw
                       for w, Aw in benchmark_jd.terms())
        assert np.max(np.abs(A_f - expected)) < 1e-10

    def test_davies_weights_are_gamma(self, benchmark_jd, toy_bath):
        gen = davies_generator(benchmark_jd, toy_bath)
        weights = sorted(w for w, _ in gen.lindblad_ops)
        expected = sorted(float(toy_bath.gamma(w)) for w in benchmark_jd.frequencies)
        assert np.allclose(weights, expected, rtol=1e-10)

    def test_davies_lamb_is_secular_redfield_drift(self, benchmark_jd, toy_bath):
        # the anti-Hermitian part of the Redfield drift, projected on the
        # energy diagonal, must reproduce the Davies Lamb shift
        A, A_f = benchmark_jd.coupling, redfield_filtered(benchmark_jd, toy_bath)
        drift = (A @ A_f.conj().T - A_f @ A) / 2j
        eig = eigensystem(HermitianOperator(benchmark_jd.hamiltonian))
        secular = sum(p @ drift @ p for p in eig.projectors)
        H_LS = davies_generator(benchmark_jd, toy_bath).meta["H_LS"]
        assert np.max(np.abs(0.5 * (secular + secular.conj().T) - H_LS)) < 1e-10

    def test_davies_commutes_with_hamiltonian_part(self, benchmark_jd, toy_bath):
        H_LS = davies_generator(benchmark_jd, toy_bath).meta["H_LS"]
        comm = benchmark_jd.hamiltonian @ H_LS - H_LS @ benchmark_jd.hamiltonian
        assert np.max(np.abs(comm)) < 1e-9


class TestCoarseGrainedCoefficients:
    T_A = 1.12

    def test_gamma_matches_tensor_oracle(self, toy_bath):
        for w, wp in ((0.0, 0.0), (1.7, -1.7), (2.4, 0.9), (-3.1, 1.2)):
            ref = oracles.cgme_gamma_tensor(w, wp, self.T_A, toy_bath.correlation)
            assert abs(ref.imag) < 1e-7
            ours = cgme_gamma(w, wp, self.T_A, toy_bath)
            assert abs(ours - ref.real) < 1e-7 * max(1.0, abs(ref.real))

    def test_gamma_methods_agree(self, toy_bath):
        for w, wp in ((0.0, 0.0), (2.4, 0.9), (-1.3, -1.3)):
            a = cgme_gamma(w, wp, self.T_A, toy_bath, method="epsilon")
            b = cgme_gamma(w, wp, self.T_A, toy_bath, method="time")
            assert abs(a - b) < 1e-7 * max(1.0, abs(a))

    def test_x_matches_nested_oracle(self, toy_bath):
        for w, wp in ((0.0, 0.0), (1.7, -0.4)):
            ref = oracles.cgme_x_nested(w, wp, self.T_A, toy_bath.correlation)
            ours = cgme_x(w, wp, self.T_A, toy_bath)
            assert abs(ours - ref) < 1e-6 * max(1.0, abs(ref))

    def test_coefficient_identity(self, toy_bath):
        # gamma_{w w'} = 2 Re x_{w w'} and x_{w w'} = x_{-w' -w} for random triples
        rng = np.random.default_rng(7)
        for _ in range(20):
            w, wp = rng.uniform(-4, 4, size=2)
            t_a = rng.uniform(0.4, 3.0)
            g = cgme_gamma(w, wp, t_a, toy_bath, method="time")
            x1 = cgme_x(w, wp, t_a, toy_bath)
            assert abs(g - 2.0 * x1.real) < 1e-6 * max(1.0, abs(g))
            assert abs(x1 - cgme_x(-wp, -w, t_a, toy_bath)) < 1e-8 * max(1.0, abs(x1))

    def test_lamb_F_matches_direct_oracle(self, toy_bath):
        for w, wp in ((1.0, 2.0), (-1.4, 0.6), (2.0, -2.0)):
            ref = oracles.lamb_f_direct(w, wp, self.T_A, toy_bath.correlation)
            ours = cgme_lamb_F(w, wp, self.T_A, toy_bath)
            assert abs(ours - ref) < 1e-5 * max(1.0, abs(ref))

    def test_lamb_F_removable_singularity(self, toy_bath):
        # w+ = 0 exactly vs a tiny offset: the sinc form must be continuous
        at_zero = cgme_lamb_F(2.0, -2.0, self.T_A, toy_bath)
        nearby = cgme_lamb_F(2.0 + 1e-7, -2.0 + 1e-7, self.T_A, toy_bath)
        assert abs(at_zero - nearby) < 1e-5


class TestKossakowski:
    def test_positive_semidefinite(self, benchmark_jd, toy_bath):
        K = kossakowski_matrix(benchmark_jd, toy_bath, 1.12)
        vals = np.linalg.eigvalsh(0.5 * (K + K.conj().T))
        assert vals.min() > -1e-9

    def test_entries_are_gamma_coefficients(self, benchmark_jd, toy_bath):
        K = kossakowski_matrix(benchmark_jd, toy_bath, 1.12)
        freqs = benchmark_jd.frequencies
        for i in (0, 2):
            for j in (1, 3):
                ref = cgme_gamma(freqs[i], -freqs[j], 1.12, toy_bath, method="time")
                assert abs(K[i, j] - ref) < 1e-6 * max(1.0, abs(ref))

    def test_dissipator_from_weights_matches_matrix_form(self, benchmark_jd, toy_bath):
        # diagonalized Lindblad form reproduces sum_{ww'} K A X A^dag - ...
        cfg = GeneratorConfig(equation_kind="cgme_frequency", T_a=1.12, lambless=True)
        gen = cgme_generator(benchmark_jd, toy_bath, cfg)
        K = gen.meta["kossakowski"]
        rng = np.random.default_rng(11)
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        rho = g @ g.conj().T
        rho /= np.trace(rho)
        direct = np.zeros((4, 4), dtype=complex)
        ops = benchmark_jd.operators
        for i in range(len(ops)):
            for j in range(len(ops)):
                L, M = ops[i], ops[j]
                direct += K[i, j] * (L @ rho @ M.conj().T
                                     - 0.5 * (M.conj().T @ L @ rho + rho @ M.conj().T @ L))
        via_lindblad = np.zeros_like(direct)
        for wgt, L in gen.lindblad_ops:
            ldl = L.conj().T @ L
            via_lindblad += wgt * (L @ rho @ L.conj().T - 0.5 * (ldl @ rho + rho @ ldl))
        assert np.max(np.abs(direct - via_lindblad)) < 1e-8


class TestCgmeGenerator:
    def test_discrete_close_to_frequency_form(self, benchmark_jd, toy_bath):
        t_a = 1.12
        freq = cgme_generator(
            benchmark_jd, toy_bath,
            GeneratorConfig(equation_kind="cgme_frequency", T_a=t_a),
        ).to_superoperator()
        disc_params = DiscretizationParams(delta_epsilon=0.05, k_star=800, T_a=t_a)
        disc = cgme_generator(
            benchmark_jd, toy_bath,
            GeneratorConfig(equation_kind="cgme_discrete", T_a=t_a,
                            discretization=disc_params),
        ).to_superoperator()
        diff = np.linalg.norm(freq.matrix - disc.matrix, 2)
        assert diff < 1e-3

    def test_converges_to_davies(self, benchmark_jd, toy_bath):
        davies = davies_generator(benchmark_jd, toy_bath).to_superoperator().matrix
        dist = []
        for t_a in (5.0 * 0.6858, 80.0 * 0.6858):
            cg = cgme_generator(
                benchmark_jd, toy_bath,
                GeneratorConfig(equation_kind="cgme_frequency", T_a=t_a),
            ).to_superoperator().matrix
            dist.append(np.linalg.norm(cg - davies, 2))
        assert dist[1] < dist[0]
        assert dist[1] < 0.02

    def test_lamb_shift_converges_to_davies(self, benchmark_jd, toy_bath):
        H_davies = davies_generator(benchmark_jd, toy_bath).meta["H_LS"]
        H_cg = cgme_lamb_shift(benchmark_jd, toy_bath, 80.0 * 0.6858)
        assert np.max(np.abs(H_cg - H_davies)) < 0.02

    def test_requires_ta(self, benchmark_jd, toy_bath):
        with pytest.raises(ValueError):
            GeneratorConfig(equation_kind="cgme_frequency")

    def test_discrete_requires_params(self, benchmark_jd, toy_bath):
        with pytest.raises(ValueError):
            cgme_generator(benchmark_jd, toy_bath,
                           GeneratorConfig(equation_kind="cgme_discrete", T_a=1.0))


class TestDiscretizationParams:
    def test_worst_case_sizes(self, toy_bath, benchmark_hamiltonian, benchmark_coupling):
        comm = benchmark_hamiltonian.entries @ benchmark_coupling.entries - \
            benchmark_coupling.entries @ benchmark_hamiltonian.entries
        dp = discretization_params(toy_bath.timescales(), operator_norm(comm))
        assert dp.delta_epsilon > 0
        assert dp.k_star >= 1
        # the grid must span well past the filter width 1/T_a
        assert dp.delta_epsilon * dp.k_star > 1.0 / dp.T_a

    def test_rejects_zero_tau_b(self):
        class TS:
            tau_SB, tau_B = 10.0, 0.0
        with pytest.raises(ValueError):
            discretization_params(TS(), 1.0)


class TestMultiCoupling:
    @staticmethod
    def _dissipator(gen, jd):
        from qme.operators import hamiltonian_superop
        return gen.to_superoperator().matrix - hamiltonian_superop(jd.hamiltonian)

    def test_fully_correlated_couplings_quadruple_single(self, benchmark_jd, toy_bath):
        # gamma_ij = gamma * ones(2) with the same A twice acts like the
        # single coupling 2A: the dissipator quadruples
        cfg = GeneratorConfig(equation_kind="cgme_frequency", T_a=1.12, lambless=True)
        single = cgme_generator(benchmark_jd, toy_bath, cfg)

        def gmat(eps):
            return float(toy_bath.gamma(eps)) * np.ones((2, 2))

        multi = multi_coupling_generator([benchmark_jd, benchmark_jd], gmat, cfg)
        diff = self._dissipator(multi, benchmark_jd) \
            - 4.0 * self._dissipator(single, benchmark_jd)
        assert np.linalg.norm(diff, 2) < 1e-6

    def test_uncorrelated_couplings_add(self, benchmark_jd, toy_bath):
        cfg = GeneratorConfig(equation_kind="cgme_frequency", T_a=1.12, lambless=True)
        single = cgme_generator(benchmark_jd, toy_bath, cfg)

        def gmat(eps):
            return float(toy_bath.gamma(eps)) * np.eye(2)

        multi = multi_coupling_generator([benchmark_jd, benchmark_jd], gmat, cfg)
        diff = self._dissipator(multi, benchmark_jd) \
            - 2.0 * self._dissipator(single, benchmark_jd)
        assert np.linalg.norm(diff, 2) < 1e-6

    def test_rejects_lamb(self, benchmark_jd, toy_bath):
        cfg = GeneratorConfig(equation_kind="cgme_frequency", T_a=1.12, lambless=False)
        with pytest.raises(NotImplementedError):
            multi_coupling_generator([benchmark_jd], lambda e: np.eye(1), cfg)
