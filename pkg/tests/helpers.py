"""Shared oracles for the test suite.

These implement the defining equations directly (matrix products, time
quadrature) so the vectorized/resolvent production code is checked against
an independent route.
"""

import numpy as np
from scipy.integrate import simpson

from openchain.chain import ChainParams, build_hamiltonian, build_jump_operators
from openchain.dynamics import evolve, initial_excitation, reduced_liouvillian


def lindblad_rhs(hamiltonian, jumps, rho):
    """Direct elementwise master-equation right-hand side (rates absorbed)."""
    drho = -1j * (hamiltonian @ rho - rho @ hamiltonian)
    for op in jumps:
        mat = getattr(op, "matrix", op)
        md = mat.conj().T
        mdm = md @ mat
        drho += mat @ rho @ md - 0.5 * (mdm @ rho + rho @ mdm)
    return drho


def random_density_matrix(rng, dim):
    """Random full-rank density matrix (Wishart construction)."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_valid_params(rng, n_sites=None):
    """Random ChainParams with every channel active."""
    n = int(n_sites if n_sites is not None else rng.integers(1, 6))
    return ChainParams(
        n_sites=n,
        hopping=float(rng.uniform(0.5, 2.0)),
        onsite=tuple(rng.normal(0.0, 0.4, n)),
        gamma_in=float(rng.uniform(0, 2)),
        gamma_out=float(rng.uniform(0.1, 3)),
        gamma_phi=float(rng.uniform(0, 2)),
        gamma_loss=float(rng.uniform(0, 0.5)),
    )


def transfer_time_quadrature(params, n_points=20001):
    """tau and eta from Simpson quadrature of the exit current in time.

    The horizon is set from the slowest Liouvillian mode so the remaining
    norm is below 1e-8 of the initial one.
    """
    liouv = reduced_liouvillian(params)
    rate = -np.linalg.eigvals(liouv).real.max()
    assert rate > 0, "reduced Liouvillian must be strictly decaying"
    horizon = 23.0 / rate  # exp(-23) ~ 1e-10
    times = np.linspace(0.0, horizon, n_points)
    traj = evolve(liouv, initial_excitation(params.n_sites), times, gamma_out=params.gamma_out)
    current = traj.exit_current
    eta = simpson(current, x=times)
    tau = simpson(times * current, x=times) / eta
    return float(tau), float(eta)
