import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import DomainError, InvalidDensityMatrixError
from measures import is_x_state
from model import (
    ChannelParams,
    InitialStateParams,
    PhysicalParams,
    acceleration_to_q,
    apply_channel,
    apply_channel_unnormalized,
    effective_coupling,
    final_state_closed_form,
    final_state_params,
    initial_state,
    kraus_completeness,
    kraus_operators,
    physical_channel_params,
    q_to_acceleration,
    unruh_temperature,
)


class TestInitialState:
    def test_maximally_entangled(self):
        rho = initial_state(math.pi / 4)
        assert rho[1, 1] == pytest.approx(0.5)
        assert rho[2, 2] == pytest.approx(0.5)
        assert rho[1, 2] == pytest.approx(0.5)
        assert rho[0, 0] == 0 and rho[3, 3] == 0

    def test_product_state(self):
        rho = initial_state(0.0)
        expected = np.zeros((4, 4))
        expected[2, 2] = 1.0
        np.testing.assert_array_equal(rho, expected)

    def test_pi_over_six(self):
        rho = initial_state(InitialStateParams(math.pi / 6))
        assert rho[1, 1].real == pytest.approx(0.25)
        assert rho[2, 2].real == pytest.approx(0.75)
        assert rho[1, 2].real == pytest.approx(math.sqrt(3) / 4)

    @pytest.mark.parametrize("theta", [-0.1, 2.0])
    def test_out_of_range(self, theta):
        with pytest.raises(DomainError):
            initial_state(theta)

    def test_rounding_slack_is_clamped(self):
        assert InitialStateParams(math.pi / 2 + 1e-13).theta == math.pi / 2


class TestParameterMaps:
    def test_acceleration_examples(self):
        assert acceleration_to_q(1.0, 0.0) == 0.0
        assert acceleration_to_q(1.0, 2 * math.pi) == pytest.approx(math.exp(-1))
        assert acceleration_to_q(1.0, 1e12) == pytest.approx(1.0, abs=1e-10)

    def test_acceleration_monotone(self, rng):
        a = np.sort(rng.uniform(0.01, 100.0, 50))
        q = [acceleration_to_q(1.0, x) for x in a]
        assert all(lo < hi for lo, hi in zip(q, q[1:]))

    def test_inverse(self):
        assert q_to_acceleration(1.0, acceleration_to_q(1.0, 3.7)) == pytest.approx(3.7, rel=1e-12)
        assert q_to_acceleration(1.0, 0.0) == 0.0
        assert q_to_acceleration(1.0, 1.0) == math.inf

    def test_invalid_gap(self):
        with pytest.raises(DomainError):
            acceleration_to_q(0.0, 1.0)

    def test_unruh_temperature(self):
        assert unruh_temperature(2 * math.pi) == pytest.approx(1.0)

    def test_effective_coupling_zero(self):
        coupling = effective_coupling(PhysicalParams(epsilon=0.0, Omega=1.0, Delta=100.0, kappa=0.5, a=1.0))
        assert coupling.nu2 == 0.0
        assert not coupling.warning

    def test_effective_coupling_without_smearing(self):
        coupling = effective_coupling(PhysicalParams(epsilon=0.01, Omega=2.0, Delta=50.0, kappa=0.0, a=1.0))
        assert coupling.nu2 == pytest.approx(1e-4 * 100.0 / (2 * math.pi))

    def test_effective_coupling_outside_regime(self):
        coupling = effective_coupling(PhysicalParams(epsilon=0.1, Omega=1.0, Delta=100.0, kappa=0.1, a=1.0))
        # 1/(2 pi) * exp(-0.01)
        assert coupling.nu2 == pytest.approx(0.1575713, abs=1e-6)
        assert coupling.warning
        assert any("nu2" in reason for reason in coupling.reasons)

    def test_effective_coupling_short_window_warns(self):
        coupling = effective_coupling(PhysicalParams(epsilon=0.01, Omega=1.0, Delta=5.0, kappa=0.0, a=1.0))
        assert coupling.nu2 < 0.1
        assert coupling.warning

    def test_effective_coupling_too_large(self):
        with pytest.raises(DomainError):
            effective_coupling(PhysicalParams(epsilon=1.0, Omega=1.0, Delta=100.0, kappa=0.0, a=1.0))

    def test_physical_channel_params(self):
        cp, coupling = physical_channel_params(
            PhysicalParams(epsilon=0.01, Omega=1.0, Delta=100.0, kappa=0.0, a=2 * math.pi))
        assert cp.q == pytest.approx(math.exp(-1))
        assert cp.nu2 == coupling.nu2


class TestChannelParams:
    @pytest.mark.parametrize("q, nu2", [(1.0, 0.0), (-0.1, 0.01), (1.1, 0.01), (0.5, 1.0), (0.5, -0.01)])
    def test_invalid(self, q, nu2):
        with pytest.raises(DomainError):
            ChannelParams(q=q, nu2=nu2)

    def test_nu(self):
        assert ChannelParams(q=0.5, nu2=0.04).nu == pytest.approx(0.2)


class TestFinalState:
    def test_no_acceleration_no_coupling(self):
        fp = final_state_params(math.pi / 4, ChannelParams(q=0.0, nu2=0.0))
        assert (fp.alpha, fp.beta, fp.gamma) == (0.5, 0.0, 0.0)

    def test_reference_point(self):
        fp = final_state_params(math.pi / 4, ChannelParams(q=0.5, nu2=0.04))
        assert fp.D == pytest.approx(0.53)
        assert fp.alpha == pytest.approx(0.4716981, abs=1e-7)
        assert fp.beta == pytest.approx(0.0188679, abs=1e-7)
        assert fp.gamma == pytest.approx(0.0377358, abs=1e-7)

    def test_infinite_acceleration(self):
        fp = final_state_params(math.pi / 4, ChannelParams(q=1.0, nu2=0.04))
        assert fp.alpha == 0.0
        assert fp.beta == pytest.approx(0.5)
        assert fp.gamma == pytest.approx(0.5)

    @settings(max_examples=200, deadline=None)
    @given(theta=st.floats(0.0, math.pi / 2), q=st.floats(0.0, 0.999), nu2=st.floats(0.0, 0.5))
    def test_unit_trace(self, theta, q, nu2):
        fp = final_state_params(theta, ChannelParams(q=q, nu2=nu2))
        assert 2 * fp.alpha + fp.beta + fp.gamma == pytest.approx(1.0, abs=1e-12)
        assert fp.alpha >= 0 and fp.beta >= 0 and fp.gamma >= 0

    def test_closed_form_shape(self):
        rho = final_state_closed_form(math.pi / 4, ChannelParams(q=0.5, nu2=0.04))
        assert is_x_state(rho)
        assert rho[1, 2] == rho[2, 1]
        assert rho[0, 3] == 0 and rho[3, 0] == 0
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)

    def test_incoherent_input_stays_diagonal(self):
        rho = final_state_closed_form(0.0, ChannelParams(q=0.5, nu2=0.04))
        np.testing.assert_array_equal(rho, np.diag(np.diag(rho)))


class TestKraus:
    def test_identity_channel(self):
        M1, M2, M3 = kraus_operators(ChannelParams(q=0.0, nu2=0.0))
        np.testing.assert_array_equal(M1, np.eye(2))
        assert not M2.any() and not M3.any()

    def test_entries(self):
        M1, M2, M3 = kraus_operators(ChannelParams(q=0.5, nu2=0.04))
        assert M1[0, 0] == pytest.approx(math.sqrt(0.5))
        assert M2[1, 0] == pytest.approx(0.2 * math.sqrt(0.5))
        assert M3[0, 1] == pytest.approx(0.2)

    def test_completeness_is_not_identity(self):
        np.testing.assert_allclose(kraus_completeness(ChannelParams(q=0.5, nu2=0.04)),
                                   np.diag([0.52, 0.54]), atol=1e-15)


class TestApplyChannel:
    def test_matches_closed_form_on_grid(self):
        worst = 0.0
        for theta in np.linspace(0.0, math.pi / 2, 10):
            for q in np.linspace(0.0, 0.99, 10):
                for nu2 in np.linspace(0.0, 0.1, 10):
                    cp = ChannelParams(q=q, nu2=nu2)
                    diff = apply_channel(initial_state(theta), cp) - final_state_closed_form(theta, cp)
                    worst = max(worst, float(np.max(np.abs(diff))))
        assert worst < 1e-12

    def test_unnormalized_trace_is_D(self, family_params):
        for theta, q, nu2 in family_params(50):
            cp = ChannelParams(q=q, nu2=nu2)
            out = apply_channel_unnormalized(initial_state(theta), cp)
            assert np.trace(out).real == pytest.approx(final_state_params(theta, cp).D, abs=1e-14)

    def test_identity_parameters_leave_state_unchanged(self, rng, random_density_matrix):
        rho = random_density_matrix(rng)
        np.testing.assert_allclose(apply_channel(rho, ChannelParams(q=0.0, nu2=0.0)), rho, atol=1e-12)

    def test_diagonal_inputs_stay_diagonal(self, rng):
        for _ in range(50):
            rho = np.diag(rng.dirichlet(np.ones(4)))
            cp = ChannelParams(q=rng.uniform(0, 0.99), nu2=rng.uniform(0, 0.1))
            out = apply_channel(rho, cp)
            assert np.max(np.abs(out - np.diag(np.diag(out)))) <= 1e-14

    def test_preserves_x_structure(self, rng, random_x_state):
        for _ in range(50):
            cp = ChannelParams(q=rng.uniform(0, 0.99), nu2=rng.uniform(0, 0.1))
            assert is_x_state(apply_channel(random_x_state(rng), cp))

    def test_coherence_falls_with_q(self):
        values = [abs(apply_channel(initial_state(math.pi / 4), ChannelParams(q=q, nu2=0.04))[1, 2])
                  for q in np.linspace(0.0, 0.99, 40)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_rejects_invalid_state(self):
        with pytest.raises(InvalidDensityMatrixError):
            apply_channel(np.eye(4), ChannelParams(q=0.5, nu2=0.04))
