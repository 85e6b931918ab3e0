import numpy as np
import pytest

from openchain.chain import ChainParams
from openchain.dynamics import transfer_time
from openchain.exceptions import GridTooCoarseError, SingularMatrixError
from openchain.negf import (
    TransmissionModel,
    conductance,
    conductance_scan,
    current_from_conductance,
    greens_function,
    spectral_function,
    static_broadening,
    transmission,
)

ACCEPTANCE_GRID = np.geomspace(0.2, 20, 100)


class TestGreensFunction:
    def test_single_site_resonance(self):
        model = TransmissionModel(n_sites=1, lead_coupling=0.7)
        g = greens_function(model, 0.0)
        assert g[0, 0] == pytest.approx(1 / (0.7j), rel=1e-14)
        assert transmission(model, 0.0) == pytest.approx(1.0, rel=1e-12)

    def test_two_site_off_diagonal_closed_form(self):
        for gamma in (0.4, 1.3, 2.0):
            model = TransmissionModel(n_sites=2, lead_coupling=gamma)
            g = greens_function(model, 0.0)
            assert g[0, 1] == pytest.approx(1.0 / (-(gamma**2) / 4 - 1.0), rel=1e-13)

    def test_closed_chain_poles(self):
        # gamma = 0, small eta: spectral peaks at the chain eigenvalues
        model = TransmissionModel(n_sites=5, broadening=1e-4)
        for q in (1, 3):
            omega_q = 2 * np.cos(np.pi * q / 6)
            window = np.linspace(omega_q - 0.05, omega_q + 0.05, 501)
            a = spectral_function(model, 1, window)
            assert window[np.argmax(a)] == pytest.approx(omega_q, abs=5e-4)

    def test_singular_at_eigenvalue_reported(self):
        model = TransmissionModel(n_sites=2, lead_coupling=0.0, broadening=0.0)
        with pytest.raises(SingularMatrixError):
            greens_function(model, 1.0)  # omega on the eigenvalue 2t cos(pi/3) = 1

    def test_advanced_is_conjugate(self):
        model = TransmissionModel(n_sites=4, lead_coupling=1.1, broadening=0.02)
        g = greens_function(model, 0.37)
        adv = np.linalg.inv(
            (0.37 - 0.02j) * np.eye(4)
            - np.array(
                [[0, 1, 0, 0], [1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0]], dtype=complex
            )
            - np.diag([0.55j, 0, 0, 0.55j])
        )
        assert np.allclose(g.conj().T, adv, atol=1e-12)


class TestTransmission:
    def test_two_site_closed_form_and_maximum(self):
        for gamma in (0.5, 2.0, 6.0):
            model = TransmissionModel(n_sites=2, lead_coupling=gamma)
            expected = gamma**2 / (gamma**2 / 4 + 1.0) ** 2
            assert transmission(model, 0.0) == pytest.approx(expected, rel=1e-12)
        assert conductance(TransmissionModel(n_sites=2, lead_coupling=2.0)) == pytest.approx(1.0)

    def test_unitarity_bound(self):
        for gamma in (0.5, 2.0, 8.0):
            model = TransmissionModel(n_sites=7, lead_coupling=gamma)
            ts = [transmission(model, w) for w in np.linspace(-2.5, 2.5, 101)]
            assert max(ts) <= 1.0 + 1e-12 and min(ts) >= 0.0

    def test_reciprocity(self):
        model = TransmissionModel(n_sites=6, lead_coupling=1.7, broadening=0.01)
        g = greens_function(model, 0.43)
        assert abs(g[0, -1] - g[-1, 0]) < 1e-12


class TestConductanceScan:
    def test_peak_near_2t(self):
        model = TransmissionModel(n_sites=10, broadening=0.03)
        scan = conductance_scan(model, ACCEPTANCE_GRID)
        assert scan.peak_gamma == pytest.approx(2.0, rel=0.05)

    def test_suppressed_at_both_extremes(self):
        model = TransmissionModel(n_sites=10, broadening=0.03)
        scan = conductance_scan(model, ACCEPTANCE_GRID)
        peak = scan.conductances[scan.peak_index]
        assert scan.conductances[0] < 0.5 * peak
        assert scan.conductances[-1] < 0.5 * peak

    def test_boundary_raises_with_scan(self):
        model = TransmissionModel(n_sites=10, broadening=0.03)
        with pytest.raises(GridTooCoarseError) as excinfo:
            conductance_scan(model, np.geomspace(3.0, 20.0, 30))
        assert excinfo.value.scan is not None
        assert excinfo.value.scan.peak_index == 0

    def test_broadening_suppresses_conductance(self):
        gs = [
            conductance(TransmissionModel(n_sites=10, lead_coupling=2.0, broadening=eta))
            for eta in (0.01, 0.03, 0.1, 0.3)
        ]
        assert np.all(np.diff(gs) < 0)

    def test_peak_coincides_with_lindblad_current_peak(self):
        # the conductance maximum and the transfer-current maximum land on
        # the same (or adjacent) grid point
        scan = conductance_scan(TransmissionModel(n_sites=10, broadening=0.03), ACCEPTANCE_GRID)
        currents = [
            1.0 / (2.0 * transfer_time(ChainParams(n_sites=10, gamma_out=g))[0])
            for g in ACCEPTANCE_GRID
        ]
        assert abs(int(np.argmax(currents)) - scan.peak_index) <= 1


class TestSpectralFunction:
    def test_nonnegative_and_normalized(self):
        model = TransmissionModel(n_sites=10, broadening=0.03)
        omegas = np.linspace(-3, 3, 1201)
        for site in (1, 5, 10):
            a = spectral_function(model, site, omegas)
            assert np.all(a >= 0)
            assert np.trapezoid(a, omegas) == pytest.approx(1.0, abs=0.02)

    def test_sum_rule_with_leads_on_wide_window(self):
        model = TransmissionModel(n_sites=10, lead_coupling=2.0, broadening=0.03)
        omegas = np.linspace(-40, 40, 8001)
        assert np.trapezoid(spectral_function(model, 10, omegas), omegas) == pytest.approx(
            1.0, abs=0.02
        )

    def test_edge_site_flattens_inner_site_sharpens(self):
        # superradiant broadening: strong lead coupling flattens the edge
        # spectrum while interior resonances survive
        omegas = np.linspace(-3, 3, 1201)
        weak = TransmissionModel(n_sites=10, lead_coupling=0.5, broadening=0.03)
        strong = TransmissionModel(n_sites=10, lead_coupling=10.0, broadening=0.03)
        assert spectral_function(strong, 10, omegas).max() < spectral_function(
            weak, 10, omegas
        ).max()
        assert spectral_function(strong, 5, omegas).max() > spectral_function(
            weak, 5, omegas
        ).max()

    def test_site_out_of_range(self):
        with pytest.raises(ValueError):
            spectral_function(TransmissionModel(n_sites=3), 4, [0.0])


class TestSelfEnergyPlugin:
    def test_static_broadening_suppresses_conductance(self):
        base = TransmissionModel(n_sites=10, lead_coupling=2.0, broadening=0.03)
        dressed = TransmissionModel(
            n_sites=10,
            lead_coupling=2.0,
            broadening=0.03,
            correlation_self_energy=static_broadening(0.2),
        )
        assert conductance(dressed) < conductance(base)

    def test_causality_violation_rejected(self):
        model = TransmissionModel(
            n_sites=2, lead_coupling=1.0, correlation_self_energy=lambda site, w: +0.1j
        )
        with pytest.raises(ValueError, match="causality"):
            greens_function(model, 0.0)

    def test_real_shift_moves_resonance(self):
        # a static real self-energy shifts the N=1 resonance by its value
        model = TransmissionModel(
            n_sites=1, lead_coupling=0.8, correlation_self_energy=lambda site, w: 0.3 + 0.0j
        )
        assert transmission(model, 0.3) == pytest.approx(1.0, rel=1e-12)
        assert transmission(model, 0.0) < 1.0


class TestCurrentBridge:
    def test_arithmetic(self):
        est = current_from_conductance(1.0, 10, 1.0)
        assert est.value == pytest.approx(0.1)
        assert current_from_conductance(0.0, 10, 1.0).value == 0.0
        assert any("order-of-magnitude" in c for c in est.conditions)

    def test_rejects_negative_conductance(self):
        with pytest.raises(ValueError):
            current_from_conductance(-0.1, 10, 1.0)
