"""Open-chain model: parameters, basis, Hamiltonian and jump operators.

Basis convention used throughout the package: the single-excitation chain of
N sites lives in a (N+1)-dimensional space where index 0 is the vacuum (no
excitation anywhere) and index j = 1..N is the state with the excitation on
site j. The vacuum row and column of the Hamiltonian are identically zero;
pump and loss are genuine jump operators connecting the chain to the vacuum.

Units are natural: hbar = 1, and energies/rates are quoted in units of the
hopping t (times in hbar/t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .rng import uniform_doubles

VACUUM = 0

__all__ = [
    "VACUUM",
    "ChainParams",
    "JumpOperator",
    "build_hamiltonian",
    "site_block_hamiltonian",
    "build_jump_operators",
    "sample_onsite_disorder",
]


@dataclass(frozen=True)
class ChainParams:
    """All physical parameters of the open chain.

    Attributes
    ----------
    n_sites : int
        Chain length N >= 1.
    hopping : float
        Nearest-neighbour hopping t > 0 (the reference energy scale).
    onsite : tuple of float, optional
        N on-site energies eps_j; defaults to all zeros.
    gamma_in, gamma_out, gamma_phi, gamma_loss : float
        Pump (site 1), sink (site N), per-site dephasing and per-site loss
        rates, all >= 0.
    disorder_width : float
        Width W of the uniform on-site disorder, support [-W/2, W/2].
    """

    n_sites: int
    hopping: float = 1.0
    onsite: tuple[float, ...] | None = None
    gamma_in: float = 0.0
    gamma_out: float = 0.0
    gamma_phi: float = 0.0
    gamma_loss: float = 0.0
    disorder_width: float = 0.0

    def __post_init__(self):
        if not isinstance(self.n_sites, (int, np.integer)) or self.n_sites < 1:
            raise ValueError(f"n_sites must be a positive integer, got {self.n_sites!r}")
        if not (math.isfinite(self.hopping) and self.hopping > 0):
            raise ValueError(f"hopping must be finite and > 0, got {self.hopping!r}")
        for name in ("gamma_in", "gamma_out", "gamma_phi", "gamma_loss", "disorder_width"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
        if self.onsite is None:
            object.__setattr__(self, "onsite", (0.0,) * self.n_sites)
        else:
            onsite = tuple(float(e) for e in self.onsite)
            if len(onsite) != self.n_sites:
                raise ValueError(
                    f"onsite must have exactly n_sites={self.n_sites} entries, got {len(onsite)}"
                )
            if not all(math.isfinite(e) for e in onsite):
                raise ValueError("onsite energies must be finite")
            object.__setattr__(self, "onsite", onsite)

    @property
    def dim(self) -> int:
        """Dimension of the vacuum + single-excitation basis, N + 1."""
        return self.n_sites + 1

    def with_onsite(self, onsite) -> "ChainParams":
        """Copy with replaced on-site energies (validation re-runs)."""
        return replace(self, onsite=tuple(float(e) for e in onsite))


@dataclass(frozen=True)
class JumpOperator:
    """A Lindblad jump operator with its rate already absorbed (sqrt(gamma) L).

    ``label`` is one of ``"in"``, ``"out"``, ``"dephase(j)"``, ``"loss(j)"``.
    """

    matrix: np.ndarray = field(repr=False)
    label: str = ""


def build_hamiltonian(params: ChainParams) -> np.ndarray:
    """Tight-binding chain Hamiltonian on the (N+1)-dim basis.

    H[j,j] = eps_j for j = 1..N and H[j,j+1] = H[j+1,j] = t; the vacuum row
    and column stay zero. The construction assigns both triangle entries
    from the same float, so the result is exactly Hermitian.
    """
    d = params.dim
    h = np.zeros((d, d), dtype=complex)
    for j in range(1, params.n_sites + 1):
        h[j, j] = params.onsite[j - 1]
    for j in range(1, params.n_sites):
        h[j, j + 1] = params.hopping
        h[j + 1, j] = params.hopping
    return h


def site_block_hamiltonian(n_sites: int, hopping: float, onsite=None) -> np.ndarray:
    """N x N site-block Hamiltonian (no vacuum), shared by the spectral and
    transmission machinery."""
    h = np.zeros((n_sites, n_sites), dtype=complex)
    if onsite is not None:
        h[np.diag_indices(n_sites)] = np.asarray(onsite, dtype=float)
    for j in range(n_sites - 1):
        h[j, j + 1] = hopping
        h[j + 1, j] = hopping
    return h


def build_jump_operators(params: ChainParams) -> list[JumpOperator]:
    """Jump operators of the pump, sink, dephasing and loss channels.

    Returns sqrt(gamma_in)|1><0|, sqrt(gamma_out)|0><N|,
    sqrt(gamma_phi)|j><j| and sqrt(gamma_loss)|0><j| for j = 1..N.
    Channels with zero rate are omitted.
    """
    d = params.dim
    n = params.n_sites
    ops: list[JumpOperator] = []

    def ketbra(i: int, j: int, amp: float) -> np.ndarray:
        m = np.zeros((d, d), dtype=complex)
        m[i, j] = amp
        return m

    if params.gamma_in > 0:
        ops.append(JumpOperator(ketbra(1, VACUUM, math.sqrt(params.gamma_in)), "in"))
    if params.gamma_out > 0:
        ops.append(JumpOperator(ketbra(VACUUM, n, math.sqrt(params.gamma_out)), "out"))
    if params.gamma_phi > 0:
        amp = math.sqrt(params.gamma_phi)
        for j in range(1, n + 1):
            ops.append(JumpOperator(ketbra(j, j, amp), f"dephase({j})"))
    if params.gamma_loss > 0:
        amp = math.sqrt(params.gamma_loss)
        for j in range(1, n + 1):
            ops.append(JumpOperator(ketbra(VACUUM, j, amp), f"loss({j})"))
    return ops


def sample_onsite_disorder(params: ChainParams, seed: int) -> np.ndarray:
    """On-site energies eps_j + delta_j with delta_j ~ U[-W/2, W/2).

    A pure function of (params, seed): the N draws are the first N doubles
    of the SplitMix64 stream for ``seed``.
    """
    w = params.disorder_width
    base = np.asarray(params.onsite, dtype=float)
    if w == 0.0:
        return base.copy()
    u = np.asarray(uniform_doubles(seed, params.n_sites))
    return base + w * (u - 0.5)
