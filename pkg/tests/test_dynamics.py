import numpy as np
import pytest

from helpers import transfer_time_quadrature
from openchain.analytics import gamma_out_opt, transfer_time_closed
from openchain.chain import ChainParams, build_hamiltonian, build_jump_operators
from openchain.dynamics import (
    evolve,
    initial_excitation,
    reduced_liouvillian,
    transfer_time,
    transfer_time_spectral,
)
from openchain.exceptions import IllConditionedEigenbasisError, SingularReducedLiouvillianError
from openchain.lindblad import build_liouvillian


class TestReducedLiouvillian:
    def test_matches_full_liouvillian_block(self):
        # with gamma_in = 0 the vacuum-deleted block evolves autonomously and
        # equals the corresponding sub-block of the full superoperator
        params = ChainParams(
            n_sites=4, gamma_out=1.3, gamma_phi=0.4, gamma_loss=0.2, onsite=(0.1, -0.2, 0.0, 0.3)
        )
        full = build_liouvillian(build_hamiltonian(params), build_jump_operators(params))
        n, d = params.n_sites, params.dim
        block = [i + d * j for j in range(1, d) for i in range(1, d)]
        rest = [k for k in range(d * d) if k not in block]
        assert np.allclose(full[np.ix_(block, block)], reduced_liouvillian(params), atol=1e-13)
        # nothing flows back from the vacuum sector into the block
        assert np.max(np.abs(full[np.ix_(block, rest)])) == 0.0

    def test_strictly_decaying_spectrum(self):
        for gp in (0.0, 0.5, 5.0):
            params = ChainParams(n_sites=6, gamma_out=2.0, gamma_phi=gp)
            evals = np.linalg.eigvals(reduced_liouvillian(params))
            assert evals.real.max() < 0

    def test_single_site_is_scalar_decay(self):
        params = ChainParams(n_sites=1, gamma_out=3.0)
        assert np.allclose(reduced_liouvillian(params), [[-3.0]])


class TestEvolve:
    def test_zero_generator_is_identity(self):
        rho0 = initial_excitation(2)
        traj = evolve(np.zeros((4, 4)), rho0, [0.0, 1.0, 5.0])
        assert np.allclose(traj.states, rho0[None], atol=1e-14)

    def test_single_site_exponential_decay(self):
        gamma = 1.7
        params = ChainParams(n_sites=1, gamma_out=gamma)
        times = np.linspace(0, 4, 9)
        traj = evolve(reduced_liouvillian(params), initial_excitation(1), times, gamma_out=gamma)
        assert np.allclose(traj.states[:, 0, 0].real, np.exp(-gamma * times), atol=1e-10)
        assert np.allclose(traj.exit_current, gamma * np.exp(-gamma * times), atol=1e-10)

    def test_methods_agree(self):
        params = ChainParams(n_sites=4, gamma_out=1.3, gamma_phi=0.3, gamma_loss=0.1)
        liouv = reduced_liouvillian(params)
        times = np.linspace(0, 10, 7)
        rho0 = initial_excitation(4)
        spectral = evolve(liouv, rho0, times, method="spectral")
        expm = evolve(liouv, rho0, times, method="expm")
        assert spectral.method == "spectral" and expm.method == "expm"
        assert np.max(np.abs(spectral.states - expm.states)) < 1e-6

    def test_spectral_refuses_defective_generator(self):
        # N=2, gamma_out = 4t sits on the eigenvalue coalescence
        liouv = reduced_liouvillian(ChainParams(n_sites=2, gamma_out=4.0))
        with pytest.raises(IllConditionedEigenbasisError):
            evolve(liouv, initial_excitation(2), [1.0], method="spectral")
        traj = evolve(liouv, initial_excitation(2), [1.0], method="auto")
        assert traj.method == "expm"  # fallback recorded

    def test_reduced_trace_non_increasing(self):
        params = ChainParams(n_sites=5, gamma_out=0.8, gamma_phi=1.0)
        times = np.linspace(0, 30, 40)
        traj = evolve(reduced_liouvillian(params), initial_excitation(5), times)
        traces = np.einsum("tii->t", traj.states).real
        assert np.all(np.diff(traces) <= 1e-12)

    def test_unit_efficiency_by_quadrature(self):
        # N=10, gamma_out=2: the excitation always exits, integral of I is 1
        tau, eta = transfer_time_quadrature(ChainParams(n_sites=10, gamma_out=2.0))
        assert eta == pytest.approx(1.0, abs=1e-4)


class TestTransferTime:
    def test_single_site_exact(self):
        tau, eta = transfer_time(ChainParams(n_sites=1, gamma_out=2.0))
        assert tau == pytest.approx(0.5, abs=1e-10)
        assert eta == pytest.approx(1.0, abs=1e-12)

    def test_clean_chain_matches_closed_form(self):
        # the closed form is numerically exact on the clean lossless chain
        tau, eta = transfer_time(ChainParams(n_sites=10, gamma_out=2.0))
        assert tau == pytest.approx(9.5, rel=1e-6)
        assert eta == pytest.approx(1.0, abs=1e-10)
        tau, _ = transfer_time(ChainParams(n_sites=10, gamma_out=2.0, gamma_phi=0.4))
        assert tau == pytest.approx(18.5, rel=1e-6)

    def test_closed_form_within_ten_percent_on_grid(self):
        for n in (2, 6, 10):
            for gout in (0.5, 2.0, 8.0):
                for gphi in (0.0, 1.0, 10.0):
                    tau, _ = transfer_time(ChainParams(n_sites=n, gamma_out=gout, gamma_phi=gphi))
                    closed = transfer_time_closed(n, 1.0, gout, gphi)
                    assert tau == pytest.approx(closed, rel=0.10)

    def test_loss_reduces_efficiency(self):
        tau, eta = transfer_time(ChainParams(n_sites=10, gamma_out=2.0, gamma_loss=0.5))
        assert 0 < eta < 1 and np.isfinite(tau) and tau > 0
        tau_q, eta_q = transfer_time_quadrature(
            ChainParams(n_sites=10, gamma_out=2.0, gamma_loss=0.5)
        )
        assert eta == pytest.approx(eta_q, abs=1e-4)
        assert tau == pytest.approx(tau_q, rel=1e-4)

    def test_sink_off_rejected(self):
        with pytest.raises(SingularReducedLiouvillianError):
            transfer_time(ChainParams(n_sites=3))

    def test_custom_initial_state_full_basis_accepted(self):
        params = ChainParams(n_sites=3, gamma_out=1.0)
        rho_full = np.zeros((4, 4), dtype=complex)
        rho_full[2, 2] = 1.0  # excitation on site 2, in the vacuum+sites basis
        rho_red = np.zeros((3, 3), dtype=complex)
        rho_red[1, 1] = 1.0
        assert transfer_time(params, rho_full) == transfer_time(params, rho_red)


class TestSpectralRoute:
    @pytest.mark.parametrize(
        "params",
        [
            ChainParams(n_sites=1, gamma_out=2.0),
            ChainParams(n_sites=10, gamma_out=2.0),
            ChainParams(n_sites=10, gamma_out=2.0, gamma_phi=0.4),
            ChainParams(n_sites=10, gamma_out=2.0, gamma_loss=0.5),
            ChainParams(n_sites=2, gamma_out=0.05),  # near-degenerate spectrum
        ],
    )
    def test_agrees_with_linear_solve(self, params):
        tau_lin, eta_lin = transfer_time(params)
        tau_spec, eta_spec = transfer_time_spectral(params)
        assert tau_spec == pytest.approx(tau_lin, rel=1e-6)
        assert eta_spec == pytest.approx(eta_lin, rel=1e-6)

    def test_single_site_scalar_formula(self):
        tau, eta = transfer_time_spectral(ChainParams(n_sites=1, gamma_out=4.0))
        assert tau == pytest.approx(0.25, abs=1e-12) and eta == pytest.approx(1.0, abs=1e-12)

    def test_defective_generator_raises(self):
        with pytest.raises(IllConditionedEigenbasisError):
            transfer_time_spectral(ChainParams(n_sites=2, gamma_out=4.0))

    def test_three_way_agreement_with_quadrature(self):
        params = ChainParams(n_sites=6, gamma_out=1.5, gamma_phi=0.7)
        tau_lin, _ = transfer_time(params)
        tau_spec, _ = transfer_time_spectral(params)
        tau_quad, _ = transfer_time_quadrature(params)
        assert tau_spec == pytest.approx(tau_lin, rel=1e-6)
        assert tau_quad == pytest.approx(tau_lin, rel=1e-4)


class TestTransferTimeShape:
    def test_unit_efficiency_without_loss_grid(self):
        for n in (1, 4, 10):
            for gout in (0.1, 1.0, 10.0):
                for gphi in (0.0, 10.0):
                    _, eta = transfer_time(ChainParams(n_sites=n, gamma_out=gout, gamma_phi=gphi))
                    assert eta == pytest.approx(1.0, abs=1e-10)

    def test_single_interior_minimum_near_optimum(self):
        grid = np.geomspace(0.5, 8.0, 40)
        taus = np.array(
            [transfer_time(ChainParams(n_sites=10, gamma_out=g))[0] for g in grid]
        )
        diffs = np.sign(np.diff(taus))
        assert np.sum(np.diff(diffs) != 0) == 1  # one descent-to-ascent turn
        k = int(np.argmin(taus))
        assert 0 < k < len(grid) - 1
        step = grid[1] / grid[0]
        assert abs(np.log(grid[k] / gamma_out_opt(10, 1.0))) <= np.log(step)

    def test_tau_monotone_in_dephasing(self):
        for gout in (0.5, 2.0, 8.0):
            taus = [
                transfer_time(ChainParams(n_sites=10, gamma_out=gout, gamma_phi=gp))[0]
                for gp in (0.0, 0.1, 0.5, 1.0, 5.0, 10.0)
            ]
            assert np.all(np.diff(taus) >= -1e-12)
