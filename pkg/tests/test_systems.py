import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from geomphase.systems import (
    DOUBLET_LABELS,
    JX,
    JY,
    JZ,
    ParityDoubletSystem,
    SpinHalfSystem,
    hamiltonian_doublet,
    hamiltonian_spinhalf,
    static_mix,
)

pos = st.floats(0.05, 20.0)


class TestConstruction:
    def test_gamma_must_be_nonzero(self):
        with pytest.raises(ValueError):
            SpinHalfSystem(0.0)

    @pytest.mark.parametrize("args", [(0.0, 1.0), (1.0, 0.0), (1.0, 1.0, -0.1)])
    def test_doublet_bounds(self, args):
        with pytest.raises(ValueError):
            ParityDoubletSystem(*args)

    def test_mu0_defaults_to_zero(self):
        assert ParityDoubletSystem(1.0, 1.0).mu0 == 0.0


class TestStaticMix:
    def test_zero_field(self):
        s = static_mix(ParityDoubletSystem(1.0, 1.0), 0.0)
        assert (s.xi, s.delta0, s.delta1) == (0.0, 2.0, 0.0)
        assert (s.energy_tilde10, s.energy_tilde00) == (1.0, -1.0)

    def test_equal_stark_and_splitting(self):
        s = static_mix(ParityDoubletSystem(1.0, 1.0), 1.0)
        assert s.xi == pytest.approx(math.pi / 4, rel=1e-15)
        assert s.delta0 == pytest.approx(1 + math.sqrt(2), rel=1e-15)
        assert s.delta1 == pytest.approx(1 - math.sqrt(2), rel=1e-14)

    def test_strong_field_mixing_weight(self):
        s = static_mix(ParityDoubletSystem(1.0, 1.0), 10.0)
        expected = (math.sqrt(101) - 1) / (2 * math.sqrt(101))
        assert s.sin2_half == pytest.approx(expected, rel=1e-14)
        assert s.sin2_half == pytest.approx(0.450249, abs=1e-6)

    def test_zeeman_energy(self):
        assert static_mix(ParityDoubletSystem(1.0, 1.0, 0.3), 0.5, 2.0).zeeman_z == pytest.approx(0.6)

    def test_negative_field_flips_mixing_angle_only(self):
        sys_ = ParityDoubletSystem(1.3, 0.7)
        a, b = static_mix(sys_, 0.9), static_mix(sys_, -0.9)
        assert b.xi == -a.xi
        assert (b.delta0, b.delta1, b.sin2_half) == (a.delta0, a.delta1, a.sin2_half)

    def test_weak_field_denominator_without_cancellation(self):
        s = static_mix(ParityDoubletSystem(1.0, 1.0), 1e-9)
        assert s.delta1 == pytest.approx(-0.5e-18, rel=1e-12)

    @given(pos, pos, pos)
    def test_denominator_product(self, B, d0, Ez):
        s = static_mix(ParityDoubletSystem(B, d0), Ez)
        assert s.delta0 * s.delta1 == pytest.approx(-((d0 * Ez) ** 2), rel=1e-12)

    @given(pos, pos, pos)
    def test_weights_over_denominators(self, B, d0, Ez):
        s = static_mix(ParityDoubletSystem(B, d0), Ez)
        lhs = s.cos2_half / s.delta0**2 + s.sin2_half / s.delta1**2
        assert lhs == pytest.approx(1 / (d0 * Ez) ** 2, rel=1e-12)

    @given(pos, pos, st.floats(0.0, 20.0))
    def test_basic_invariants(self, B, d0, Ez):
        s = static_mix(ParityDoubletSystem(B, d0), Ez)
        assert s.delta0 > 0 >= s.delta1
        assert (s.delta1 == 0) == (Ez == 0)
        assert s.sin2_half + s.cos2_half == pytest.approx(1.0, rel=1e-15)
        assert math.tan(s.xi) == pytest.approx(d0 * Ez / B, rel=1e-12)
        assert 0 <= s.xi < math.pi / 2
        assert s.energy_tilde10 == pytest.approx(math.sqrt(B * B + (d0 * Ez) ** 2), rel=1e-15)
        assert s.energy_tilde00 == -s.energy_tilde10

    @given(pos, pos, pos)
    def test_energies_are_eigenvalues(self, B, d0, Ez):
        sys_ = ParityDoubletSystem(B, d0)
        s = static_mix(sys_, Ez)
        w = np.linalg.eigvalsh(hamiltonian_doublet(sys_, [0.0, 0.0, Ez]))
        np.testing.assert_allclose(w, sorted([s.energy_tilde00, B, B, s.energy_tilde10]), rtol=1e-12)


class TestSpinHalfHamiltonian:
    def test_longitudinal(self):
        np.testing.assert_array_equal(hamiltonian_spinhalf(SpinHalfSystem(1.0), [0, 0, 1]), np.diag([-0.5, 0.5]))

    def test_transverse(self):
        h = hamiltonian_spinhalf(SpinHalfSystem(1.0), [1, 0, 0])
        np.testing.assert_array_equal(np.diagonal(h), [0, 0])
        np.testing.assert_array_equal([h[0, 1], h[1, 0]], [-0.5, -0.5])

    def test_tilted_splitting(self):
        w = np.linalg.eigvalsh(hamiltonian_spinhalf(SpinHalfSystem(1.0), [0.1, 0, 1]))
        assert w[1] - w[0] == pytest.approx(math.sqrt(1.01), rel=1e-14)
        assert w[1] - w[0] == pytest.approx(1.00499, abs=5e-6)

    @given(st.floats(-3, 3), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
    def test_hermitian_and_traceless(self, g, x, y, z):
        if g == 0:
            g = 1.0
        h = hamiltonian_spinhalf(SpinHalfSystem(g), [x, y, z])
        np.testing.assert_array_equal(h, h.conj().T)
        assert np.trace(h) == 0

    def test_batched(self):
        f = np.random.default_rng(0).normal(size=(5, 7, 3))
        h = hamiltonian_spinhalf(SpinHalfSystem(2.0), f)
        assert h.shape == (5, 7, 2, 2)
        np.testing.assert_array_equal(h[3, 2], hamiltonian_spinhalf(SpinHalfSystem(2.0), f[3, 2]))


class TestDoubletHamiltonian:
    def test_angular_momentum_algebra(self):
        np.testing.assert_allclose(JX @ JY - JY @ JX, 1j * JZ, atol=1e-15)
        j2 = JX @ JX + JY @ JY + JZ @ JZ
        np.testing.assert_allclose(np.diag(j2).real, [0, 2, 2, 2], atol=1e-15)

    def test_pure_zeeman_ordering(self):
        sys_ = ParityDoubletSystem(1.0, 1.0, 0.2)
        h = hamiltonian_doublet(sys_, [0, 0, 0], [0, 0, 0.5])
        # |1, m> sits at B + mu0 Bz m in this package's sign convention
        np.testing.assert_allclose(np.diag(h).real, [-1.0, 0.9, 1.0, 1.1], rtol=1e-15)
        assert np.count_nonzero(h - np.diag(np.diag(h))) == 0

    def test_transverse_dipole_element(self):
        sys_ = ParityDoubletSystem(1.0, 0.7)
        h = hamiltonian_doublet(sys_, [0.01, 0, 0])
        i_plus = DOUBLET_LABELS.index((1, 1))
        i_minus = DOUBLET_LABELS.index((1, -1))
        assert abs(h[i_plus, 0]) == pytest.approx(0.7 * 0.01 / math.sqrt(2), rel=1e-15)
        assert abs(h[i_minus, 0]) == pytest.approx(0.7 * 0.01 / math.sqrt(2), rel=1e-15)
        assert h[2, 0] == 0

    def test_dipole_is_a_vector_operator(self):
        # rotating the field about z by phi multiplies <1,m|H|0,0> by exp(-i m phi)
        sys_ = ParityDoubletSystem(1.0, 1.0)
        phi = 0.37
        h0 = hamiltonian_doublet(sys_, [0.2, 0.0, 0.1])
        h1 = hamiltonian_doublet(sys_, [0.2 * math.cos(phi), 0.2 * math.sin(phi), 0.1])
        U = np.diag([1.0, np.exp(-1j * phi), 1.0, np.exp(1j * phi)])
        np.testing.assert_allclose(h1, U.conj().T @ h0 @ U, atol=1e-15)
        assert h1[3, 0] == pytest.approx(np.exp(-1j * phi) * h0[3, 0], abs=1e-15)

    def test_magnetic_transverse_coupling_stays_in_j1(self):
        sys_ = ParityDoubletSystem(1.0, 1.0, 0.5)
        h = hamiltonian_doublet(sys_, [0, 0, 0], [0.1, 0.0, 0.0])
        assert np.all(h[0, 1:] == 0)
        assert abs(h[1, 2]) == pytest.approx(0.5 * 0.1 / math.sqrt(2), rel=1e-15)

    @given(st.lists(st.floats(-2, 2), min_size=6, max_size=6), pos, pos)
    def test_exactly_hermitian(self, v, d0, mu0):
        h = hamiltonian_doublet(ParityDoubletSystem(1.0, d0, mu0), v[:3], v[3:])
        np.testing.assert_array_equal(h, h.conj().T)
