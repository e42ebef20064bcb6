import cmath
import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from mollowg2.physics import (ALL_PAIRS, K_LASER, BandPair, DegenerateDressingError,
                              DriveParams, ElasticityError, Geometry, PairPhases,
                              StrongDrivingWarning, UnsupportedConfigurationError,
                              WeakFieldWarning, detector_wavevectors, dressed_params,
                              geometry_transfers, laser_wavevector, momentum_transfers,
                              pair_g2, pair_phases, strong_field_intensities,
                              weak_field_intensity)

angles = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)
phases = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)
delays = st.floats(min_value=0.0, max_value=20.0, allow_nan=False)


def P(label):
    return BandPair.parse(label)


class TestDressedParams:
    def test_resonance(self):
        d = dressed_params(DriveParams(5.0, 0.0), warn=False)
        assert d.omega_tilde == 5.0
        assert d.theta == pytest.approx(math.pi / 4, abs=1e-15)
        assert (d.omega_plus, d.omega_minus) == (10.0, -10.0)

    def test_pythagorean_rabi(self):
        assert dressed_params(DriveParams(3.0, 8.0), warn=False).omega_tilde == 5.0

    def test_cot_relation(self):
        drive = DriveParams(4.0, 3.0)
        theta = dressed_params(drive, warn=False).theta
        assert 1 / math.tan(2 * theta) == pytest.approx(3.0 / 8.0, rel=1e-14)

    def test_undriven_is_degenerate(self):
        with pytest.raises(DegenerateDressingError):
            dressed_params(DriveParams(0.0, 2.0))

    def test_weak_drive_warns(self):
        with pytest.warns(StrongDrivingWarning):
            dressed_params(DriveParams(2.0, 0.0))

    def test_invalid_drive(self):
        with pytest.raises(ValueError):
            DriveParams(gamma=0.0)
        with pytest.raises(ValueError):
            DriveParams(rabi_half=-1.0)

    @given(st.floats(1e-3, 1e3), st.floats(-1e3, 1e3))
    def test_bounds(self, omega, delta):
        d = dressed_params(DriveParams(omega, delta), warn=False)
        assert d.omega_tilde >= omega
        assert d.omega_tilde >= abs(delta) / 2
        assert 0 < d.theta < math.pi / 2


class TestGeometry:
    def test_forward(self):
        k1, k2 = detector_wavevectors(0.0, 0.0)
        np.testing.assert_array_equal(k1, laser_wavevector())
        np.testing.assert_array_equal(k2, laser_wavevector())

    def test_antipodal_opening(self):
        k1, k2 = detector_wavevectors(0.0, math.pi)
        cos_angle = np.dot(k1, k2) / K_LASER ** 2
        assert cos_angle == pytest.approx(-1.0, abs=1e-15)
        assert np.dot(k1, laser_wavevector()) == pytest.approx(0.0, abs=1e-12)
        assert np.dot(k2, laser_wavevector()) == pytest.approx(0.0, abs=1e-12)

    def test_zero_opening_follows_bisector(self):
        k1, k2 = detector_wavevectors(0.05, 0.0)
        angle = math.acos(np.dot(k1, laser_wavevector()) / K_LASER ** 2)
        assert angle == pytest.approx(0.05, rel=1e-9)
        np.testing.assert_array_equal(k1, k2)

    @given(angles, angles)
    def test_bisector_and_opening(self, phi, phi0):
        k1, k2 = detector_wavevectors(phi, phi0)
        assert np.linalg.norm(k1) == pytest.approx(K_LASER, rel=1e-14)
        assert np.linalg.norm(k2) == pytest.approx(K_LASER, rel=1e-14)
        cos_open = np.clip(np.dot(k1, k2) / K_LASER ** 2, -1, 1)
        assert math.cos(phi0) == pytest.approx(cos_open, abs=1e-12)

    def test_geometry_range(self):
        with pytest.raises(ValueError):
            Geometry(phi=4.0)


class TestMomentumTransfers:
    def test_forward_is_zero(self):
        t = geometry_transfers(Geometry(0.0, 0.0))
        assert t.q_plus == 0.0 and t.q_minus == 0.0

    def test_closed_forms_on_grid(self):
        grid = np.linspace(-math.pi, math.pi, 721)
        sym = geometry_transfers_arrays(np.zeros_like(grid), grid)
        np.testing.assert_allclose(sym.q_minus, 2 * K_LASER * np.abs(np.sin(grid / 2)), rtol=0, atol=1e-12)
        np.testing.assert_allclose(sym.q_plus, 2 * K_LASER * (1 - np.cos(grid / 2)), rtol=0, atol=1e-12)
        same = geometry_transfers_arrays(grid, np.zeros_like(grid))
        np.testing.assert_allclose(same.q_plus, 4 * K_LASER * np.abs(np.sin(grid / 2)), rtol=0, atol=1e-12)
        np.testing.assert_array_equal(same.q_minus, 0.0)

    def test_explicit_vectors(self):
        # oracle: subtract the vectors by hand, component by component
        phi, phi0 = 0.3, 0.7
        a1, a2 = phi + phi0 / 2, phi - phi0 / 2
        k1 = [K_LASER * math.sin(a1), 0.0, K_LASER * math.cos(a1)]
        k2 = [K_LASER * math.sin(a2), 0.0, K_LASER * math.cos(a2)]
        kl = [0.0, 0.0, K_LASER]
        t = momentum_transfers(k1, k2, kl)
        assert t.q_plus == pytest.approx(math.dist([a + b for a, b in zip(k1, k2)],
                                                   [2 * c for c in kl]), abs=1e-12)
        assert t.q_minus == pytest.approx(math.dist(k1, k2), abs=1e-12)
        assert t.q1 == pytest.approx(math.dist(k1, kl), abs=1e-12)
        assert t.q2 == pytest.approx(math.dist(k2, kl), abs=1e-12)

    def test_elasticity_violation(self):
        with pytest.raises(ElasticityError):
            momentum_transfers([0, 0, 7.0], [0, 0, K_LASER], [0, 0, K_LASER])

    @given(angles, angles)
    def test_invariants(self, phi, phi0):
        t = geometry_transfers_arrays(phi, phi0)
        assert t.q_plus >= 0 and t.q_minus >= 0
        assert t.q_plus <= t.q1 + t.q2 + 1e-12


def geometry_transfers_arrays(phi, phi0):
    k1, k2 = detector_wavevectors(phi, phi0)
    return momentum_transfers(k1, k2, laser_wavevector())


class TestPhases:
    def test_zero_separation(self):
        p = pair_phases([1.0, 2.0, 3.0], [0.5, 0.0, 1.0], [0.0, 0.0, 0.0])
        assert (p.delta1, p.delta2, p.delta_plus, p.delta_minus) == (0, 0, 0, 0)

    def test_orthogonal_separation(self):
        p = pair_phases([1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 5.0, 0.0])
        assert p.delta1 == 0.0 and p.delta2 == 0.0

    def test_sum_and_difference(self):
        p = PairPhases(0.3, 0.1)
        assert p.delta_plus == pytest.approx(0.4)
        assert p.delta_minus == pytest.approx(0.2)


class TestPairG2:
    def test_examples(self):
        zero = PairPhases(0.0, 0.0)
        assert pair_g2(P("CC"), 0.0, zero) == 3.0
        assert pair_g2(P("LR"), 0.0, zero) == 2.0
        assert pair_g2(P("CC"), math.log(2) / 2, zero) == pytest.approx(2.0, abs=1e-15)

    @given(delays, phases, phases)
    def test_central_cross_pairs_uncorrelated(self, tau, d1, d2):
        for label in ("CL", "CR", "LC", "RC"):
            assert pair_g2(P(label), tau, PairPhases(d1, d2)) == 1.0

    @given(delays, phases, phases)
    def test_symmetries_and_forms(self, tau, d1, d2):
        ph = PairPhases(d1, d2)
        assert pair_g2(P("LL"), tau, ph) == pair_g2(P("RR"), tau, ph)
        assert pair_g2(P("LR"), tau, ph) == pair_g2(P("RL"), tau, ph)
        product_form = 1 + 2 * math.cos(d1) * math.cos(d2) * math.exp(-2 * tau)
        assert pair_g2(P("CC"), tau, ph) == pytest.approx(product_form, abs=1e-13)

    @given(delays, phases, phases)
    def test_bounds(self, tau, d1, d2):
        ph = PairPhases(d1, d2)
        e3, e2 = math.exp(-3 * tau), math.exp(-2 * tau)
        for label in ("LL", "RR", "LR", "RL"):
            assert 1 - e3 - 1e-15 <= pair_g2(P(label), tau, ph) <= 1 + e3 + 1e-15
        assert 1 - 2 * e2 - 1e-15 <= pair_g2(P("CC"), tau, ph) <= 1 + 2 * e2 + 1e-15

    def test_long_delay(self):
        ph = PairPhases(0.4, -1.1)
        for pair in ALL_PAIRS:
            assert pair_g2(pair, 40.0, ph) == pytest.approx(1.0, abs=1e-15)

    def test_negative_delay_rejected(self):
        with pytest.raises(ValueError):
            pair_g2(P("CC"), -0.1, PairPhases(0, 0))

    def test_pair_parsing(self):
        assert str(P("lr")) == "LR"
        with pytest.raises(ValueError):
            P("CX")


def weak_field_oracle(omega, delta, n, q, r, gamma=1.0):
    s_z = -(gamma ** 2 + delta ** 2) / (2 * (gamma ** 2 + delta ** 2 + omega ** 2))
    s_plus = (1j * omega * (gamma ** 2 + delta ** 2)
              / ((gamma - 1j * delta) * (gamma ** 2 + delta ** 2 + omega ** 2)))
    phase = q[0] * r[0] + q[1] * r[1] + q[2] * r[2]
    return n * (0.5 + s_z) + n * (n - 1) * abs(s_plus) ** 2 * cmath.cos(phase).real


class TestWeakField:
    def test_undriven_scatters_nothing(self):
        assert weak_field_intensity(DriveParams(0.0, 3.0), [0, 1, 0], [4, 5, 6], 50) == 0.0

    def test_resonant_inversion(self):
        from mollowg2.physics import spin_expectations
        s_z, _ = spin_expectations(DriveParams(0.4, 0.0))
        assert s_z == pytest.approx(-1 / (2 * (1 + 0.16)), rel=1e-15)

    def test_two_atoms_forward(self):
        # hand substitution: S_z = -1/(2*1.25) = -0.4, |S+|^2 = 0.25/1.5625 = 0.16
        value = weak_field_intensity(DriveParams(0.5, 0.0), [0, 0, 0], [0, 0, 0], 2)
        assert value == pytest.approx(2 * 0.1 + 2 * 0.16, abs=1e-15)

    def test_detuned_matches_complex_modulus(self):
        got = weak_field_intensity(DriveParams(0.5, 2.0), [0.1, 0, 0], [3.0, 0, 0], 10)
        assert got == pytest.approx(weak_field_oracle(0.5, 2.0, 10, [0.1, 0, 0], [3.0, 0, 0]),
                                    abs=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            weak_field_intensity(DriveParams(0.5), [0, 0, 0], [0, 0, 0], 0)
        with pytest.warns(WeakFieldWarning):
            weak_field_intensity(DriveParams(2.0), [0, 0, 0], [0, 0, 0], 2)


class TestStrongField:
    def test_resonant_ratios_symbolic(self):
        theta = sympy.pi / 4
        half = sympy.Rational(1, 2)
        expected = [sympy.sin(2 * theta) ** 2 / 4, sympy.sin(theta) ** 4 * half,
                    sympy.cos(theta) ** 4 * half]
        got = strong_field_intensities(DriveParams(10.0), 1)
        for g, e in zip(got, expected):
            assert g == pytest.approx(float(sympy.nsimplify(e)), abs=1e-15)
        assert [sympy.nsimplify(e) for e in expected] == [sympy.Rational(1, 4),
                                                         sympy.Rational(1, 8),
                                                         sympy.Rational(1, 8)]

    def test_linear_in_n(self):
        a = strong_field_intensities(DriveParams(10.0), 37)
        b = strong_field_intensities(DriveParams(10.0), 74)
        np.testing.assert_allclose(b, 2 * np.array(a), rtol=1e-15)

    def test_sidebands_equal_on_resonance(self):
        _, i_l, i_r = strong_field_intensities(DriveParams(10.0), 1)
        assert i_l == pytest.approx(i_r, rel=1e-14)

    def test_detuned_needs_populations(self):
        with pytest.raises(UnsupportedConfigurationError):
            strong_field_intensities(DriveParams(10.0, 3.0), 5)
        i_c, i_l, i_r = strong_field_intensities(DriveParams(10.0, 3.0), 5, populations=(0.3, 0.7))
        assert i_l > 0 and i_r > 0 and i_c > 0
