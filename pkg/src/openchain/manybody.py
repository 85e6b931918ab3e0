"""Full 2^N-excitation qubit-chain model.

Replaces each site by a qubit so any number of excitations can occupy the
chain, which bounds the validity of the single-excitation treatment: the two
models carry the same current for gamma_in <= 1/tau, and the qubit chain
transmits more once the pump outruns the transfer time.

The dephasing jump operator is sqrt(gamma_phi) sigma^- sigma^+ per site (the
projector onto the empty qubit). It differs from the occupied-state
projector by a constant shift, which changes nothing in the dissipator's
action on coherences; the empty-projector form is kept as is, not
renormalized.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .chain import ChainParams, JumpOperator, build_hamiltonian, build_jump_operators
from .exceptions import DimensionCapError
from .lindblad import build_liouvillian, ness_current, steady_state

#: Default cap on the qubit-chain length; the dense Liouvillian is 4^N x 4^N.
N_CAP = 7

__all__ = [
    "N_CAP",
    "site_operator",
    "lowering_operators",
    "build_qubit_hamiltonian",
    "build_qubit_jumps",
    "excitation_number",
    "ness_current_me",
    "SeMeRow",
    "compare_se_me",
    "sector_populations",
]

_SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |empty><occupied|


def site_operator(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Embed a single-qubit operator on ``site`` (1..N) into the 2^N space."""
    out = np.eye(1, dtype=complex)
    for j in range(1, n_sites + 1):
        out = np.kron(out, op if j == site else np.eye(2, dtype=complex))
    return out


def lowering_operators(n_sites: int) -> list[np.ndarray]:
    """sigma^-_j for j = 1..N."""
    return [site_operator(_SIGMA_MINUS, j, n_sites) for j in range(1, n_sites + 1)]


def build_qubit_hamiltonian(params: ChainParams) -> np.ndarray:
    """H = t sum_j (sigma^+_j sigma^-_{j+1} + h.c.) on the 2^N space."""
    sm = lowering_operators(params.n_sites)
    dim = 2**params.n_sites
    h = np.zeros((dim, dim), dtype=complex)
    for j in range(params.n_sites - 1):
        hop = sm[j].conj().T @ sm[j + 1]
        h += params.hopping * (hop + hop.conj().T)
    return h


def build_qubit_jumps(params: ChainParams) -> list[JumpOperator]:
    """Pump sigma^+_1, sink sigma^-_N, per-site dephasing sigma^-_j sigma^+_j
    and per-site loss sigma^-_j, rates absorbed; zero-rate channels omitted."""
    sm = lowering_operators(params.n_sites)
    ops: list[JumpOperator] = []
    if params.gamma_in > 0:
        ops.append(JumpOperator(math.sqrt(params.gamma_in) * sm[0].conj().T, "in"))
    if params.gamma_out > 0:
        ops.append(JumpOperator(math.sqrt(params.gamma_out) * sm[-1], "out"))
    if params.gamma_phi > 0:
        for j, s in enumerate(sm, start=1):
            ops.append(JumpOperator(math.sqrt(params.gamma_phi) * (s @ s.conj().T), f"dephase({j})"))
    if params.gamma_loss > 0:
        for j, s in enumerate(sm, start=1):
            ops.append(JumpOperator(math.sqrt(params.gamma_loss) * s, f"loss({j})"))
    return ops


def excitation_number(n_sites: int) -> np.ndarray:
    """Total excitation number sum_j sigma^+_j sigma^-_j (commutes with H)."""
    sm = lowering_operators(n_sites)
    return sum(s.conj().T @ s for s in sm)


def _check_cap(n_sites: int, cap: int) -> None:
    if n_sites > cap:
        raise DimensionCapError(
            f"N={n_sites} exceeds the qubit-chain cap {cap}; the dense Liouvillian "
            f"would be {4**n_sites} x {4**n_sites}"
        )
    if n_sites >= 8:
        warnings.warn(
            f"N={n_sites}: the dense Liouvillian holds {(4**n_sites) ** 2:.2e} complex "
            "entries; expect tens of GB of memory",
            ResourceWarning,
            stacklevel=3,
        )


def ness_current_me(params: ChainParams, cap: int = N_CAP) -> float:
    """Steady-state current gamma_out <sigma^+_N sigma^-_N> of the qubit chain."""
    _check_cap(params.n_sites, cap)
    liouv = build_liouvillian(build_qubit_hamiltonian(params), build_qubit_jumps(params))
    rho = steady_state(liouv)
    sm_n = lowering_operators(params.n_sites)[-1]
    n_last = sm_n.conj().T @ sm_n
    return float(params.gamma_out * np.trace(n_last @ rho).real)


@dataclass(frozen=True)
class SeMeRow:
    """One pumping point of the single-excitation vs full-manifold comparison."""

    gamma_in: float
    i_se: float
    i_me: float
    rel_gap: float


def compare_se_me(params: ChainParams, gamma_in_grid, cap: int = N_CAP) -> list[SeMeRow]:
    """Currents of both models over a pumping grid.

    i_se is the single-excitation NESS current, i_me the qubit-chain current;
    rel_gap = (i_me - i_se)/i_se (0 when both vanish).
    """
    _check_cap(params.n_sites, cap)
    rows = []
    for gamma_in in np.asarray(gamma_in_grid, dtype=float):
        p = ChainParams(
            n_sites=params.n_sites,
            hopping=params.hopping,
            onsite=params.onsite,
            gamma_in=float(gamma_in),
            gamma_out=params.gamma_out,
            gamma_phi=params.gamma_phi,
            gamma_loss=params.gamma_loss,
        )
        if gamma_in == 0.0:
            i_se = i_me = 0.0  # no pump: both steady states are the dark/empty state
        else:
            liouv = build_liouvillian(build_hamiltonian(p), build_jump_operators(p))
            i_se = ness_current(steady_state(liouv), p.gamma_out)
            i_me = ness_current_me(p, cap=cap)
        gap = 0.0 if i_se == i_me == 0.0 else (i_me - i_se) / i_se
        rows.append(SeMeRow(gamma_in=float(gamma_in), i_se=i_se, i_me=i_me, rel_gap=gap))
    return rows


def sector_populations(rho: np.ndarray, n_sites: int) -> np.ndarray:
    """Total population in each excitation-number sector k = 0..N."""
    occupancy = np.zeros(2**n_sites, dtype=int)
    for state in range(2**n_sites):
        occupancy[state] = bin(state).count("1")
    pops = np.zeros(n_sites + 1)
    diag = np.diag(rho).real
    for state, k in enumerate(occupancy):
        pops[k] += diag[state]
    return pops
