"""Lindblad superoperator construction and the non-equilibrium steady state.

Vectorization is column-stacking throughout: vec(rho) stacks the columns of
rho, so vec(A rho B) = (B^T kron A) vec(rho). With jump operators L_a (rates
absorbed) the Liouvillian is

    L = -i (I kron H - H^T kron I)
        + sum_a [ conj(L_a) kron L_a
                  - 1/2 (I kron L_a^dag L_a + (L_a^dag L_a)^T kron I) ].

The stationary state is obtained by a trace-constrained linear solve on the
dense superoperator; the residual ||L vec(rho_ss)|| is always checked (and
logged) against RESIDUAL_RTOL * ||L||.
"""

from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np
import scipy.linalg as la

from .chain import JumpOperator
from .exceptions import NonUniqueSteadyStateError, SingularSystemError

logger = logging.getLogger(__name__)

#: Relative residual bound for an accepted steady state.
RESIDUAL_RTOL = 1e-10
#: Relative singular-value threshold of the null-space rank check.
RANK_RTOL = 1e-8
#: Largest superoperator dimension at which the SVD uniqueness check runs
#: automatically (full SVD is cubic; above this the residual bound is the guard).
RANK_CHECK_MAX_DIM = 1024

#: Density-matrix tolerances: Hermiticity, unit trace, eigenvalue floor.
HERM_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_TOL = 1e-10

__all__ = [
    "vec",
    "unvec",
    "build_liouvillian",
    "trace_vector",
    "steady_state",
    "ness_current",
    "validate_density_matrix",
]


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, d: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec`."""
    v = np.asarray(v)
    if d is None:
        d = math.isqrt(v.size)
        if d * d != v.size:
            raise ValueError(f"vector of length {v.size} is not a stacked square matrix")
    return v.reshape((d, d), order="F")


def trace_vector(d: int) -> np.ndarray:
    """vec(identity_d): the trace functional as a row vector."""
    t = np.zeros(d * d, dtype=complex)
    t[:: d + 1] = 1.0
    return t


def _as_matrices(jumps: Sequence[JumpOperator | np.ndarray]) -> list[np.ndarray]:
    return [j.matrix if isinstance(j, JumpOperator) else np.asarray(j, dtype=complex) for j in jumps]


def build_liouvillian(
    hamiltonian: np.ndarray, jumps: Sequence[JumpOperator | np.ndarray]
) -> np.ndarray:
    """Dense d^2 x d^2 Liouvillian for a Hamiltonian and jump operators.

    Raises ValueError on any dimension mismatch.
    """
    h = np.asarray(hamiltonian, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"hamiltonian must be square, got shape {h.shape}")
    d = h.shape[0]
    eye = np.eye(d, dtype=complex)
    liouv = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for op in _as_matrices(jumps):
        if op.shape != (d, d):
            raise ValueError(f"jump operator shape {op.shape} does not match dimension {d}")
        ldl = op.conj().T @ op
        liouv += np.kron(op.conj(), op)
        liouv -= 0.5 * (np.kron(eye, ldl) + np.kron(ldl.T, eye))
    return liouv


def validate_density_matrix(
    rho: np.ndarray,
    herm_tol: float = HERM_TOL,
    trace_tol: float = TRACE_TOL,
    eig_tol: float = EIG_TOL,
) -> None:
    """Assert Hermiticity, unit trace and positive semidefiniteness.

    Raises ValueError naming the violated invariant.
    """
    herm_err = np.max(np.abs(rho - rho.conj().T))
    if herm_err > herm_tol:
        raise ValueError(f"density matrix not Hermitian: max deviation {herm_err:.3e}")
    trace_err = abs(np.trace(rho) - 1.0)
    if trace_err > trace_tol:
        raise ValueError(f"density matrix trace off unity by {trace_err:.3e}")
    evals = la.eigvalsh(0.5 * (rho + rho.conj().T))
    if evals.min() < -eig_tol:
        raise ValueError(f"density matrix not positive semidefinite: min eigenvalue {evals.min():.3e}")


def steady_state(
    liouvillian: np.ndarray,
    residual_rtol: float = RESIDUAL_RTOL,
    rank_rtol: float = RANK_RTOL,
    check_unique: bool | None = None,
    return_info: bool = False,
):
    """Unique stationary density matrix of a Liouvillian.

    Solves the singular system L vec(rho) = 0 with the first row replaced by
    the trace-one constraint; if that solve misses the residual bound, falls
    back to a minimum-norm least-squares solve of the stacked system.

    Parameters
    ----------
    liouvillian : ndarray, (d^2, d^2)
    check_unique : bool, optional
        Run the SVD null-space rank check. Default: automatic, on for
        dimensions up to RANK_CHECK_MAX_DIM.
    return_info : bool
        Also return a dict with the relative residual, the solve method and
        whether the rank check ran.

    Raises
    ------
    NonUniqueSteadyStateError
        Null space dimension > 1 at the rank threshold.
    SingularSystemError
        No solution met the residual bound, or the solution violates the
        density-matrix invariants.
    """
    liouv = np.asarray(liouvillian, dtype=complex)
    n = liouv.shape[0]
    d = math.isqrt(n)
    if liouv.ndim != 2 or liouv.shape != (n, n) or d * d != n:
        raise ValueError(f"liouvillian must be d^2 x d^2, got shape {liouv.shape}")
    scale = np.linalg.norm(liouv)
    if scale == 0.0:
        raise NonUniqueSteadyStateError("zero Liouvillian: every state is stationary")

    if check_unique is None:
        check_unique = n <= RANK_CHECK_MAX_DIM
    if check_unique:
        svals = la.svdvals(liouv)
        null_dim = int(np.sum(svals <= rank_rtol * scale))
        if null_dim > 1:
            raise NonUniqueSteadyStateError(
                f"numerical null space has dimension {null_dim} at threshold {rank_rtol:g}*||L||"
            )

    t_row = trace_vector(d)
    constrained = liouv.copy()
    constrained[0, :] = t_row
    rhs = np.zeros(n, dtype=complex)
    rhs[0] = 1.0
    method = "row-replacement"
    try:
        x = la.solve(constrained, rhs)
        residual = np.linalg.norm(liouv @ x) / scale
    except la.LinAlgError:
        x = None
        residual = np.inf
    if x is None or not np.isfinite(residual) or residual > residual_rtol:
        # minimum-norm solve of the overdetermined [L; trace] system
        stacked = np.vstack([liouv, t_row])
        b = np.zeros(n + 1, dtype=complex)
        b[-1] = 1.0
        x, *_ = la.lstsq(stacked, b)
        residual = np.linalg.norm(liouv @ x) / scale
        method = "lstsq"
        if not np.isfinite(residual) or residual > residual_rtol:
            raise SingularSystemError(
                f"no steady state met the residual bound: |L rho|/|L| = {residual:.3e} "
                f"> {residual_rtol:g}"
            )
    logger.debug("steady_state: method=%s relative residual %.3e", method, residual)

    rho = unvec(x, d)
    try:
        validate_density_matrix(rho)
    except ValueError as err:
        raise SingularSystemError(f"steady-state solution is unphysical: {err}") from err
    if return_info:
        return rho, {"residual": residual, "method": method, "rank_checked": check_unique}
    return rho


def ness_current(rho_ss: np.ndarray, gamma_out: float) -> float:
    """Steady-state current through the sink, I = gamma_out <N|rho_ss|N>.

    Site N is the last basis index of the vacuum + single-excitation basis.
    """
    return float(gamma_out * rho_ss[-1, -1].real)
