"""Spectral analysis of the chain with an absorbing sink.

The sink is folded into a non-Hermitian Hamiltonian on the N-site block,
H_NH = H_chain - i(gamma_out/2)|N><N|. Its eigenvalues E_q carry decay
widths Gamma_q = -2 Im(E_q) obeying the exact sum rule
sum_q Gamma_q = gamma_out. Beyond a critical coupling one eigenstate turns
superradiant (its width keeps growing with gamma_out, localizing on site N)
while the other N-1 turn subradiant (their widths shrink); the transition
is located where the mean subradiant width is maximal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .chain import ChainParams, site_block_hamiltonian
from .exceptions import GridTooCoarseError

__all__ = [
    "WidthSpectrum",
    "non_hermitian_hamiltonian",
    "width_spectrum",
    "WidthScan",
    "width_scan",
    "detect_superradiant_transition",
    "closed_chain_spectrum",
    "perturbative_widths",
    "PerturbativeEstimate",
    "gamma_st_perturbative_estimate",
]


@dataclass(frozen=True)
class WidthSpectrum:
    """Eigenenergies (real parts) and decay widths, sorted by descending
    width with ties broken by ascending energy."""

    energies: np.ndarray
    widths: np.ndarray

    @property
    def superradiant_width(self) -> float:
        return float(self.widths[0])

    @property
    def subradiant_mean(self) -> float:
        """Mean width with the largest one excluded."""
        if len(self.widths) < 2:
            raise ValueError("subradiant mean needs at least two levels")
        return float(self.widths[1:].mean())


def non_hermitian_hamiltonian(params: ChainParams, gamma_out: float | None = None) -> np.ndarray:
    """N x N chain Hamiltonian with -i(gamma_out/2) on the last site."""
    g = params.gamma_out if gamma_out is None else gamma_out
    if g < 0:
        raise ValueError("gamma_out must be >= 0")
    h = site_block_hamiltonian(params.n_sites, params.hopping, params.onsite)
    h[-1, -1] -= 0.5j * g
    return h


def width_spectrum(params: ChainParams, gamma_out: float | None = None) -> WidthSpectrum:
    """Energies and widths Gamma_q = -2 Im(E_q) of the sink-dressed chain."""
    evals = la.eigvals(non_hermitian_hamiltonian(params, gamma_out))
    energies = evals.real
    widths = -2.0 * evals.imag
    order = np.lexsort((energies, -widths))
    return WidthSpectrum(energies=energies[order], widths=widths[order])


@dataclass(frozen=True)
class WidthScan:
    """Width statistics over a gamma_out grid."""

    gammas: np.ndarray
    max_widths: np.ndarray
    subradiant_means: np.ndarray
    peak_index: int

    @property
    def gamma_st(self) -> float:
        return float(self.gammas[self.peak_index])


def width_scan(params: ChainParams, gamma_grid) -> WidthScan:
    """Largest width and subradiant mean at every grid point."""
    if params.n_sites < 2:
        raise ValueError("the subradiant mean needs N >= 2")
    gammas = np.asarray(gamma_grid, dtype=float)
    max_w = np.empty_like(gammas)
    sub_mean = np.empty_like(gammas)
    for i, g in enumerate(gammas):
        spec = width_spectrum(params, g)
        max_w[i] = spec.superradiant_width
        sub_mean[i] = spec.subradiant_mean
    return WidthScan(
        gammas=gammas,
        max_widths=max_w,
        subradiant_means=sub_mean,
        peak_index=int(np.argmax(sub_mean)),
    )


def detect_superradiant_transition(params: ChainParams, gamma_grid) -> float:
    """gamma_out at which the mean subradiant width peaks (the transition).

    The grid must span at least [0.5, 8] t with >= 50 points so the peak is
    bracketed; a peak on the grid boundary raises GridTooCoarseError with
    the scan attached.
    """
    gammas = np.asarray(gamma_grid, dtype=float)
    t = params.hopping
    if len(gammas) < 50 or gammas.min() > 0.5 * t or gammas.max() < 8.0 * t:
        raise ValueError("gamma grid must span at least [0.5, 8]*t with >= 50 points")
    scan = width_scan(params, gammas)
    if scan.peak_index in (0, len(gammas) - 1):
        raise GridTooCoarseError(
            "subradiant-width maximum sits on the grid boundary", scan=scan
        )
    return scan.gamma_st


def closed_chain_spectrum(n_sites: int, hopping: float) -> tuple[np.ndarray, np.ndarray]:
    """Analytic spectrum of the closed chain (gamma_out = 0).

    Returns (energies, vectors) with energies[q-1] = 2 t cos(pi q/(N+1)) and
    vectors[:, q-1] the orthonormal eigenvector
    sqrt(2/(N+1)) sin(j q pi/(N+1)), for q = 1..N in ascending q (descending
    energy).
    """
    q = np.arange(1, n_sites + 1)
    energies = 2.0 * hopping * np.cos(np.pi * q / (n_sites + 1))
    j = np.arange(1, n_sites + 1)
    vectors = math.sqrt(2.0 / (n_sites + 1)) * np.sin(np.pi * np.outer(j, q) / (n_sites + 1))
    return energies, vectors


def perturbative_widths(n_sites: int, hopping: float, gamma_out: float) -> np.ndarray:
    """First-order widths Gamma_q = (2 gamma_out/(N+1)) sin^2(N q pi/(N+1)).

    Valid for gamma_out well below the level spacing ~ 4 t / N; ordered by
    ascending q to match :func:`closed_chain_spectrum`.
    """
    q = np.arange(1, n_sites + 1)
    return 2.0 * gamma_out / (n_sites + 1) * np.sin(np.pi * n_sites * q / (n_sites + 1)) ** 2


@dataclass(frozen=True)
class PerturbativeEstimate:
    """Transition estimate from mean width = mean level spacing.

    Overshoots the numerical transition (2 t) by a documented factor of two:
    the criterion is qualitative and is evaluated where perturbation theory
    is already breaking down.
    """

    gamma_st: float
    level_spacing: float


def gamma_st_perturbative_estimate(n_sites: int, hopping: float) -> PerturbativeEstimate:
    """Perturbative transition estimate 4 t, with level spacing D ~ 4 t / N."""
    return PerturbativeEstimate(gamma_st=4.0 * hopping, level_spacing=4.0 * hopping / n_sites)
