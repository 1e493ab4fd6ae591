import cmath
import math

import numpy as np
import pytest

import ringpair as rp

I2 = np.eye(2)


def assert_unitary(x, tol=1e-12):
    assert np.abs(x @ x.conj().T - I2).max() < tol
    assert abs(abs(np.linalg.det(x)) - 1.0) < tol


class TestDirectionalCoupler:
    def test_uncoupling_point_is_identity(self):
        # kappa * L an integer multiple of 2*pi: zero cross transmission
        kappa = 0.064e6
        dc = rp.DirectionalCoupler(kappa, 2 * math.pi / kappa)
        assert np.abs(dc.transfer_matrix() - I2).max() < 1e-12

    def test_quarter_beat_full_crossover(self):
        kappa = 0.1e6
        dc = rp.DirectionalCoupler(kappa, 0.5 * math.pi / kappa)
        expected = np.array([[0, -1j], [-1j, 0]])
        assert np.abs(dc.transfer_matrix() - expected).max() < 1e-12

    @pytest.mark.parametrize("kappa,length", [
        (0.064e6, 98.2e-6), (0.068e6, 98.2e-6), (0.02e6, 300e-6)])
    def test_unitarity(self, kappa, length):
        assert_unitary(rp.DirectionalCoupler(kappa, length).transfer_matrix())

    def test_envelopes_boundary_condition(self):
        dc = rp.DirectionalCoupler(0.05e6, 100e-6)
        f1, f2 = 0.8 - 0.1j, 0.3 + 0.5j
        env = dc.envelopes(f1, f2, 0.0)
        assert env.f_up == pytest.approx(f1)
        assert env.f_lo == pytest.approx(f2)

    def test_envelopes_full_transfer(self):
        kappa = 0.05e6
        dc = rp.DirectionalCoupler(kappa, math.pi / kappa)
        env = dc.envelopes(1.0, 0.0, 0.5 * math.pi / kappa)
        assert abs(env.f_up) < 1e-12
        assert env.f_lo == pytest.approx(-1j, abs=1e-12)

    def test_near_uncoupling_residual(self):
        # kappa*L = 2*pi*1.0003...: cross power below 4e-4 at the far end
        kappa, length = 0.064e6, 98.2e-6
        dc = rp.DirectionalCoupler(kappa, length)
        env = dc.envelopes(0.0, 1.0, length)
        residual = abs(env.f_up) ** 2
        assert residual == pytest.approx(math.sin(kappa * length) ** 2,
                                         abs=1e-15)
        assert residual < 4e-4

    def test_matches_transfer_matrix_at_exit(self):
        dc = rp.DirectionalCoupler(0.043e6, 173e-6)
        f_in = np.array([0.2 + 0.7j, -0.5 + 0.1j])
        env = dc.envelopes(f_in[0], f_in[1], dc.length)
        out = dc.transfer_matrix() @ f_in
        assert abs(env.f_up - out[0]) < 1e-15
        assert abs(env.f_lo - out[1]) < 1e-15

    def test_energy_conserved_along_z(self):
        dc = rp.DirectionalCoupler(0.05e6, 200e-6)
        z = np.linspace(0.0, dc.length, 501)
        env = dc.envelopes(0.6 + 0.3j, -0.2 + 0.5j, z)
        power = np.abs(env.f_up) ** 2 + np.abs(env.f_lo) ** 2
        assert np.ptp(power) / power[0] < 1e-12

    def test_z_outside_is_domain_error(self):
        dc = rp.DirectionalCoupler(0.05e6, 100e-6)
        with pytest.raises(ValueError):
            dc.envelopes(1.0, 0.0, 101e-6)
        with pytest.raises(ValueError):
            dc.envelopes(1.0, 0.0, -1e-9)


class TestMachZehnder:
    def test_pi_phase_identical_couplers_uncouples(self):
        # |X11| = 1 for any splitting ratio when delta_phi = pi
        for sigma in (0.1, 0.4, 2 ** -0.5, 0.9):
            mzi = rp.MachZehnder(sigma, sigma, math.pi, 50e-6)
            x = mzi.transfer_matrix()
            assert abs(x[0, 0]) == pytest.approx(1.0, abs=1e-12)
            assert abs(x[0, 1]) < 1e-12

    @pytest.mark.parametrize("ssx,sdx,phi", [
        (0.7, 0.7, 0.0), (0.3, 0.9, 1.1), (2 ** -0.5, 2 ** -0.5, math.pi),
        (1.0, 0.2, 2.5), (0.0, 0.0, 0.7)])
    def test_unitarity(self, ssx, sdx, phi):
        assert_unitary(rp.MachZehnder(ssx, sdx, phi, 50e-6).transfer_matrix())

    def test_matrix_composition(self):
        # splitter(sigma_sx) . arm phases . splitter(sigma_dx) reproduces
        # the coupler matrix elementwise
        mzi = rp.MachZehnder(0.6, 0.35, 0.83, 50e-6)

        def point(sigma):
            kappa = math.sqrt(1 - sigma ** 2)
            return np.array([[sigma, 1j * kappa], [1j * kappa, sigma]])

        phases = np.diag([1.0, cmath.exp(1j * mzi.delta_phi)])
        composed = point(mzi.sigma_sx) @ phases @ point(mzi.sigma_dx)
        assert np.abs(composed - mzi.transfer_matrix()).max() < 1e-12

    def test_envelopes_transparent_splitter(self):
        mzi = rp.MachZehnder(0.5, 1.0, 0.9, 50e-6)
        f1, f2 = 0.3 + 0.4j, -0.6j
        env = mzi.envelopes(f1, f2)
        assert env.f_up == pytest.approx(f1)
        assert env.f_lo == pytest.approx(f2 * cmath.exp(0.9j))

    def test_envelopes_5050_split(self):
        mzi = rp.MachZehnder(2 ** -0.5, 2 ** -0.5, math.pi, 50e-6)
        env = mzi.envelopes(1.0, 0.0)
        assert abs(env.f_up) ** 2 == pytest.approx(0.5, abs=1e-12)
        assert abs(env.f_lo) ** 2 == pytest.approx(0.5, abs=1e-12)

    def test_envelopes_full_cross(self):
        mzi = rp.MachZehnder(0.5, 0.0, 0.4, 50e-6)
        env = mzi.envelopes(1.0, 0.0)
        assert abs(env.f_up) < 1e-12
        assert abs(env.f_lo) == pytest.approx(1.0, abs=1e-12)

    def test_envelopes_then_exit_splitter_match_matrix(self):
        mzi = rp.MachZehnder(0.81, 0.27, 1.7, 50e-6)
        f_in = np.array([0.9 - 0.2j, 0.1 + 0.4j])
        env = mzi.envelopes(f_in[0], f_in[1])
        ksx = mzi.kappa_sx
        out1 = mzi.sigma_sx * env.f_up + 1j * ksx * env.f_lo
        out2 = 1j * ksx * env.f_up + mzi.sigma_sx * env.f_lo
        expected = mzi.transfer_matrix() @ f_in
        assert abs(out1 - expected[0]) < 1e-12
        assert abs(out2 - expected[1]) < 1e-12


class TestSigmaMzi:
    def test_balanced_pi_gives_unity(self):
        s = rp.sigma_mzi(2 ** -0.5, 2 ** -0.5, math.pi)
        assert s == pytest.approx(1.0, abs=1e-12)

    def test_balanced_zero_phase_cancels(self):
        assert abs(rp.sigma_mzi(2 ** -0.5, 2 ** -0.5, 0.0)) < 1e-12

    def test_transparent_dx(self):
        for phi in (0.0, 1.0, math.pi):
            assert rp.sigma_mzi(0.37, 1.0, phi) == pytest.approx(0.37)

    def test_equals_matrix_element(self):
        mzi = rp.MachZehnder(0.42, 0.77, 2.1, 50e-6)
        assert rp.sigma_mzi(0.42, 0.77, 2.1) == pytest.approx(
            complex(mzi.transfer_matrix()[0, 0]), abs=1e-15)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            rp.sigma_mzi(1.2, 0.5, 0.0)


class TestGenericUnitary:
    def test_exact_input_is_kept(self):
        x = rp.GenericUnitary.identity()
        assert np.abs(x.transfer_matrix() - I2).max() < 1e-15

    def test_from_cross_coupling(self):
        x = rp.GenericUnitary.from_cross_coupling(-0.00161j)
        m = x.transfer_matrix()
        assert m[0, 1] == pytest.approx(-0.00161j, abs=1e-9)
        assert_unitary(m)

    def test_renormalizes_slightly_off_input(self):
        eps = 3e-7
        x = rp.GenericUnitary(1.0 + eps, 0.0, 0.0, 1.0 - eps)
        assert_unitary(x.transfer_matrix(), tol=1e-12)

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError):
            rp.GenericUnitary(1.0, 0.5, 0.0, 1.0)

    def test_random_unitaries_stay_unitary(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            # random unitary via QR of a complex Gaussian matrix
            m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            q, r = np.linalg.qr(m)
            q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
            x = rp.GenericUnitary(q[0, 0], q[0, 1], q[1, 0], q[1, 1])
            assert_unitary(x.transfer_matrix())


def test_functional_wrappers_match_methods():
    dc = rp.DirectionalCoupler(0.05e6, 120e-6)
    env_m = dc.envelopes(0.5, -0.25j, 60e-6)
    env_f = rp.dc_envelopes(0.5, -0.25j, 0.05e6, 60e-6, length=120e-6)
    assert env_f.f_up == pytest.approx(env_m.f_up)
    assert env_f.f_lo == pytest.approx(env_m.f_lo)
    mzi = rp.MachZehnder(0.6, 0.7, 0.5, 80e-6)
    assert rp.mzi_envelopes(1.0, 2.0, mzi) == mzi.envelopes(1.0, 2.0)
    assert np.abs(rp.transfer_matrix(mzi) - mzi.transfer_matrix()).max() == 0
