"""Closed-form transport theory for the clean, lossless chain.

Pure functions in natural units (hbar = 1). These expressions hold in the
single-excitation regime (gamma_in <= 1/tau) with small disorder and losses;
inside that envelope they serve as oracles for the numerical solvers, and
they answer the optimal-design questions (best sink coupling, maximum
tolerable dephasing, current ceiling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "foerster_rate",
    "leegwater_rate",
    "transfer_time_closed",
    "ness_current_closed",
    "i_se",
    "gamma_out_opt",
    "gamma_phi_crit",
    "gamma_phi_crit_at_opt",
    "i_se_max",
    "Table1Summary",
    "table1_summary",
]


def foerster_rate(hopping: float, gamma_phi: float) -> float:
    """Incoherent-hopping rate 2 t^2 / gamma_phi (strong-dephasing limit).

    Diverges at gamma_phi = 0; raises ZeroDivisionError so callers fall back
    to the combined transfer-time form, which stays finite.
    """
    if gamma_phi == 0:
        raise ZeroDivisionError("Foerster rate diverges at zero dephasing")
    return 2.0 * hopping**2 / gamma_phi


def leegwater_rate(hopping: float, gamma_phi: float, gamma_out: float) -> float:
    """Sink-corrected hopping rate 2 t^2 / (gamma_phi + gamma_out / 2)."""
    denom = gamma_phi + 0.5 * gamma_out
    if denom == 0:
        raise ZeroDivisionError("Leegwater rate diverges at gamma_phi = gamma_out = 0")
    return 2.0 * hopping**2 / denom


def transfer_time_closed(n_sites: int, hopping: float, gamma_out: float, gamma_phi: float) -> float:
    """tau = N/gamma_out + (N-1)/(4 t^2) * (N gamma_phi + gamma_out).

    Finite at gamma_phi = 0 (ballistic limit); exact at N = 1 where it
    collapses to the sink time 1/gamma_out.
    """
    if gamma_out <= 0:
        raise ValueError("gamma_out must be > 0")
    return n_sites / gamma_out + (n_sites - 1) / (4.0 * hopping**2) * (
        n_sites * gamma_phi + gamma_out
    )


def ness_current_closed(gamma_in: float, tau: float) -> float:
    """Steady-state current I = gamma_in / (1 + gamma_in tau).

    Monotone in gamma_in, linear for gamma_in << 1/tau, saturating at 1/tau.
    """
    return gamma_in / (1.0 + gamma_in * tau)


def i_se(tau: float) -> float:
    """Maximum single-excitation current, 1/(2 tau) (pump matched to 1/tau)."""
    return 1.0 / (2.0 * tau)


def gamma_out_opt(n_sites: int, hopping: float) -> float:
    """Sink coupling minimizing tau: 2 t sqrt(N/(N-1)), near the
    superradiant transition. Undefined at N = 1."""
    if n_sites < 2:
        raise ValueError("gamma_out_opt requires N >= 2")
    return 2.0 * hopping * math.sqrt(n_sites / (n_sites - 1.0))


def gamma_phi_crit(gamma_out: float, n_sites: int, hopping: float) -> float:
    """Dephasing above which coherence stops helping:
    (gamma_out^2 + 4 t^2) / (N gamma_out)."""
    if gamma_out <= 0:
        raise ValueError("gamma_out must be > 0")
    return (gamma_out**2 + 4.0 * hopping**2) / (n_sites * gamma_out)


def gamma_phi_crit_at_opt(n_sites: int, hopping: float) -> float:
    """Critical dephasing at the optimal sink coupling:
    2 t (2N - 1) / (N sqrt(N(N-1))), approx 4 t / N for long chains."""
    if n_sites < 2:
        raise ValueError("gamma_phi_crit_at_opt requires N >= 2")
    return 2.0 * hopping * (2.0 * n_sites - 1.0) / (n_sites * math.sqrt(n_sites * (n_sites - 1.0)))


def i_se_max(n_sites: int, hopping: float, gamma_phi: float) -> float:
    """Current ceiling at the optimal sink coupling:
    [ sqrt(N(N-1))/t + N(N-1) gamma_phi / (4 t^2) ]^-1.

    Scales as t/N at gamma_phi ~ gamma_phi_crit (coherent), not t/N^2
    (diffusive).
    """
    if n_sites < 2:
        raise ValueError("i_se_max requires N >= 2")
    nn1 = n_sites * (n_sites - 1.0)
    return 1.0 / (math.sqrt(nn1) / hopping + nn1 * gamma_phi / (4.0 * hopping**2))


@dataclass(frozen=True)
class Table1Summary:
    """Design bounds for a chain of length N: the noise levels below which
    the current stays optimized at the superradiant transition."""

    n_sites: int
    hopping: float
    gamma_in_max: float  # 1/tau at the optimum, clean chain
    gamma_out_opt: float
    gamma_phi_max: float
    disorder_max: float  # ~ t
    gamma_loss_max: float  # ~ 1/tau
    i_se_floor: float  # optimal current exceeds t/(N) scale


def table1_summary(n_sites: int, hopping: float) -> Table1Summary:
    """All design bounds evaluated at the optimal sink coupling."""
    g_opt = gamma_out_opt(n_sites, hopping)
    tau_opt = transfer_time_closed(n_sites, hopping, g_opt, 0.0)
    return Table1Summary(
        n_sites=n_sites,
        hopping=hopping,
        gamma_in_max=1.0 / tau_opt,
        gamma_out_opt=g_opt,
        gamma_phi_max=gamma_phi_crit_at_opt(n_sites, hopping),
        disorder_max=hopping,
        gamma_loss_max=1.0 / tau_opt,
        i_se_floor=hopping / math.sqrt(n_sites * (n_sites - 1.0)),
    )
