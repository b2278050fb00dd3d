"""Resonance poles, Gamow states and resonance expansions of finite-range potentials."""

from ._gamowkit import (
    GamowkitError,
    GamowState,
    PoleRecord,
    PotentialModel,
    bound_states,
    canonical_config,
    dispersion,
    faddeeva,
    find_poles,
    first_resonances,
    free_radial_propagator,
    gamow_state,
    green_outgoing,
    jost_function,
    m_function,
    propagator,
    residue_ratio,
    run_config,
    smatrix,
    spectral_quadrature,
    transmission,
    transmitted_wave,
    transmitted_wave_quadrature,
)

__all__ = [
    "GamowkitError",
    "GamowState",
    "PoleRecord",
    "PotentialModel",
    "bound_states",
    "canonical_config",
    "dispersion",
    "faddeeva",
    "find_poles",
    "first_resonances",
    "free_radial_propagator",
    "gamow_state",
    "green_outgoing",
    "jost_function",
    "m_function",
    "propagator",
    "residue_ratio",
    "run_config",
    "smatrix",
    "spectral_quadrature",
    "transmission",
    "transmitted_wave",
    "transmitted_wave_quadrature",
]
