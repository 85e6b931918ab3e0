"""Transient evolution, average transfer time and transfer efficiency.

The transient problem sets gamma_in = 0 and follows one excitation until it
leaves through the sink. With the vacuum deleted, the N^2-dim block of the
Liouvillian evolves autonomously and every eigenvalue has a strictly
negative real part once gamma_out > 0, so

    eta = integral I(t) dt          = -gamma_out [L^-1 vec(rho0)]_(N,N)
    tau = (1/eta) integral t I(t) dt = (gamma_out/eta) [L^-2 vec(rho0)]_(N,N)

follow from int_0^inf e^{Lt} dt = -L^-1 and int_0^inf t e^{Lt} dt = L^-2.
Both the resolvent (linear-solve) route and the equivalent eigendecomposition
route are provided; they must agree and serve as mutual checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .chain import ChainParams, site_block_hamiltonian
from .exceptions import IllConditionedEigenbasisError, SingularReducedLiouvillianError
from .lindblad import unvec, vec

#: Condition-number bound on the eigenvector matrix above which the spectral
#: route is refused (evolve falls back to expm instead).
COND_LIMIT = 1e7

__all__ = [
    "Trajectory",
    "reduced_liouvillian",
    "initial_excitation",
    "evolve",
    "transfer_time",
    "transfer_time_spectral",
]


@dataclass(frozen=True)
class Trajectory:
    """Time-evolved states rho(t) and the exit current gamma_out rho_NN(t)."""

    times: np.ndarray
    states: np.ndarray  # shape (n_times, d, d)
    exit_current: np.ndarray
    method: str  # "spectral" or "expm" (records an eigenbasis fallback)


def reduced_liouvillian(params: ChainParams) -> np.ndarray:
    """Liouvillian on the vacuum-deleted single-excitation block (gamma_in = 0).

    Built from the non-Hermitian Hamiltonian
    H_eff = H_chain - i(gamma_out/2)|N><N| - i(gamma_loss/2) I plus the
    dephasing dissipator; identical to the corresponding sub-block of the
    full Liouvillian at gamma_in = 0.
    """
    n = params.n_sites
    h_eff = site_block_hamiltonian(n, params.hopping, params.onsite)
    h_eff[n - 1, n - 1] -= 0.5j * params.gamma_out
    h_eff -= 0.5j * params.gamma_loss * np.eye(n)
    eye = np.eye(n, dtype=complex)
    liouv = -1j * np.kron(eye, h_eff) + 1j * np.kron(h_eff.conj(), eye)
    if params.gamma_phi > 0:
        for j in range(n):
            p = np.zeros((n, n), dtype=complex)
            p[j, j] = 1.0
            liouv += params.gamma_phi * (np.kron(p, p) - 0.5 * (np.kron(eye, p) + np.kron(p, eye)))
    return liouv


def initial_excitation(n_sites: int, site: int = 1) -> np.ndarray:
    """Reduced-block density matrix |site><site| (site indexed 1..N)."""
    if not 1 <= site <= n_sites:
        raise ValueError(f"site must be in 1..{n_sites}, got {site}")
    rho = np.zeros((n_sites, n_sites), dtype=complex)
    rho[site - 1, site - 1] = 1.0
    return rho


def _coerce_reduced(rho0: np.ndarray, n: int) -> np.ndarray:
    """Accept either the N x N block or the full (N+1) basis (vacuum sliced off)."""
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape == (n, n):
        return rho0
    if rho0.shape == (n + 1, n + 1):
        return rho0[1:, 1:]
    raise ValueError(f"rho0 shape {rho0.shape} matches neither ({n},{n}) nor ({n + 1},{n + 1})")


def evolve(
    liouvillian: np.ndarray,
    rho0: np.ndarray,
    times,
    gamma_out: float = 0.0,
    method: str = "auto",
    cond_limit: float = COND_LIMIT,
) -> Trajectory:
    """Propagate rho(t) = unvec(exp(L t) vec(rho0)) over the given times.

    ``method="auto"`` diagonalizes L and uses the spectral propagator when
    the eigenvector condition number stays below ``cond_limit``; otherwise it
    falls back to scaling-and-squaring ``expm`` per time step and records the
    fallback in ``Trajectory.method``. The exit current is
    gamma_out * rho[-1, -1], the population of the last basis index (site N
    in both the full and the reduced convention).
    """
    liouv = np.asarray(liouvillian, dtype=complex)
    times = np.asarray(times, dtype=float)
    if np.any(times < 0):
        raise ValueError("times must be >= 0")
    d = int(np.sqrt(liouv.shape[0]))
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (d, d):
        raise ValueError(f"rho0 shape {rho0.shape} does not match Liouvillian block size {d}")
    v0 = vec(rho0)

    chosen = method
    if method == "auto" or method == "spectral":
        evals, vmat = la.eig(liouv)
        cond = np.linalg.cond(vmat)
        if cond <= cond_limit:
            y0 = la.solve(vmat, v0)
            phases = np.exp(np.outer(times, evals))  # (n_times, n_modes)
            vecs = phases * y0[None, :] @ vmat.T  # row i = vec(rho(t_i))
            chosen = "spectral"
        elif method == "spectral":
            raise IllConditionedEigenbasisError(
                f"eigenvector condition number {cond:.3e} exceeds {cond_limit:g}"
            )
        else:
            chosen = "expm"
    if chosen in ("expm", "auto"):
        vecs = np.empty((len(times), d * d), dtype=complex)
        for i, t in enumerate(times):
            vecs[i] = la.expm(liouv * t) @ v0
        chosen = "expm"

    states = np.array([unvec(v, d) for v in vecs])
    exit_current = gamma_out * states[:, -1, -1].real
    return Trajectory(times=times, states=states, exit_current=exit_current, method=chosen)


def _tau_eta_indices(params: ChainParams):
    if params.gamma_out <= 0:
        raise SingularReducedLiouvillianError(
            "gamma_out = 0: the excitation never exits and tau is undefined"
        )
    liouv = reduced_liouvillian(params)
    # vec index of the (N,N) population on the reduced block
    return liouv, params.n_sites * params.n_sites - 1


def transfer_time(params: ChainParams, rho0: np.ndarray | None = None) -> tuple[float, float]:
    """Average transfer time tau and efficiency eta via two linear solves.

    gamma_in is ignored (the transient setting); rho0 defaults to the
    excitation on site 1. Returns (tau, eta) with eta in (0, 1] and eta = 1
    (to machine precision) when gamma_loss = 0.
    """
    liouv, idx = _tau_eta_indices(params)
    n = params.n_sites
    rho0 = initial_excitation(n) if rho0 is None else _coerce_reduced(rho0, n)
    lu = la.lu_factor(liouv)
    x1 = la.lu_solve(lu, vec(rho0))
    eta = -params.gamma_out * x1[idx].real
    x2 = la.lu_solve(lu, x1)
    if not (np.all(np.isfinite(x1)) and np.all(np.isfinite(x2))):
        raise SingularReducedLiouvillianError("reduced Liouvillian solve produced non-finite values")
    if not 0.0 < eta <= 1.0 + 1e-8:
        raise SingularReducedLiouvillianError(f"efficiency {eta!r} outside (0, 1]")
    tau = params.gamma_out / eta * x2[idx].real
    return float(tau), float(min(eta, 1.0))


def transfer_time_spectral(
    params: ChainParams, rho0: np.ndarray | None = None, cond_limit: float = COND_LIMIT
) -> tuple[float, float]:
    """Same contract as :func:`transfer_time`, via the Liouvillian spectrum.

    tau = (gamma_out / eta) <N,N| V diag(1/E_n^2) V^-1 |vec(rho0)> with all
    Re E_n < 0. Kept as an independent route; raises
    IllConditionedEigenbasisError instead of falling back.
    """
    liouv, idx = _tau_eta_indices(params)
    n = params.n_sites
    rho0 = initial_excitation(n) if rho0 is None else _coerce_reduced(rho0, n)
    evals, vmat = la.eig(liouv)
    if evals.real.max() >= 0:
        raise SingularReducedLiouvillianError(
            f"reduced Liouvillian has a non-decaying mode (max Re E = {evals.real.max():.3e})"
        )
    cond = np.linalg.cond(vmat)
    if cond > cond_limit:
        raise IllConditionedEigenbasisError(
            f"eigenvector condition number {cond:.3e} exceeds {cond_limit:g}"
        )
    y = la.solve(vmat, vec(rho0))
    row = vmat[idx, :]
    eta = -params.gamma_out * (row @ (y / evals)).real
    tau = params.gamma_out / eta * (row @ (y / evals**2)).real
    return float(tau), float(min(eta, 1.0))
