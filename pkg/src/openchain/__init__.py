"""Coherent transport through finite open quantum chains.

Steady-state currents, transfer times, superradiant-transition detection and
Landauer conductance for an N-site chain coupled to a pump and a sink, with
closed-form theory alongside every numerical route. Natural units
throughout: hbar = 1 and the hopping t is the energy scale.
"""

__version__ = "0.1.0"

from .analytics import (
    Table1Summary,
    foerster_rate,
    gamma_out_opt,
    gamma_phi_crit,
    gamma_phi_crit_at_opt,
    i_se,
    i_se_max,
    leegwater_rate,
    ness_current_closed,
    table1_summary,
    transfer_time_closed,
)
from .chain import (
    ChainParams,
    JumpOperator,
    build_hamiltonian,
    build_jump_operators,
    sample_onsite_disorder,
)
from .dynamics import (
    Trajectory,
    evolve,
    initial_excitation,
    reduced_liouvillian,
    transfer_time,
    transfer_time_spectral,
)
from .ensemble import EnsembleResult, averaged_max_current, loss_scan, regime_classify
from .exceptions import (
    DimensionCapError,
    GridTooCoarseError,
    IllConditionedEigenbasisError,
    NonUniqueSteadyStateError,
    OpenChainError,
    SingularMatrixError,
    SingularReducedLiouvillianError,
    SingularSystemError,
)
from .lindblad import build_liouvillian, ness_current, steady_state, validate_density_matrix
from .manybody import compare_se_me, ness_current_me
from .negf import (
    TransmissionModel,
    conductance,
    conductance_scan,
    current_from_conductance,
    greens_function,
    spectral_function,
    static_broadening,
    transmission,
)
from .superradiance import (
    WidthSpectrum,
    closed_chain_spectrum,
    detect_superradiant_transition,
    gamma_st_perturbative_estimate,
    perturbative_widths,
    width_spectrum,
)

__all__ = [
    "__version__",
    # chain model
    "ChainParams",
    "JumpOperator",
    "build_hamiltonian",
    "build_jump_operators",
    "sample_onsite_disorder",
    # lindblad
    "build_liouvillian",
    "steady_state",
    "ness_current",
    "validate_density_matrix",
    # dynamics
    "Trajectory",
    "evolve",
    "initial_excitation",
    "reduced_liouvillian",
    "transfer_time",
    "transfer_time_spectral",
    # analytics
    "foerster_rate",
    "leegwater_rate",
    "transfer_time_closed",
    "ness_current_closed",
    "i_se",
    "i_se_max",
    "gamma_out_opt",
    "gamma_phi_crit",
    "gamma_phi_crit_at_opt",
    "Table1Summary",
    "table1_summary",
    # superradiance
    "WidthSpectrum",
    "width_spectrum",
    "detect_superradiant_transition",
    "closed_chain_spectrum",
    "perturbative_widths",
    "gamma_st_perturbative_estimate",
    # many body
    "ness_current_me",
    "compare_se_me",
    # transport
    "TransmissionModel",
    "greens_function",
    "transmission",
    "conductance",
    "conductance_scan",
    "spectral_function",
    "static_broadening",
    "current_from_conductance",
    # ensembles
    "EnsembleResult",
    "averaged_max_current",
    "loss_scan",
    "regime_classify",
    # errors
    "OpenChainError",
    "NonUniqueSteadyStateError",
    "SingularSystemError",
    "SingularReducedLiouvillianError",
    "IllConditionedEigenbasisError",
    "DimensionCapError",
    "SingularMatrixError",
    "GridTooCoarseError",
]
