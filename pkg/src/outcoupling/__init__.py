"""Exactly soluble output coupling of trapped atoms into a 1-D free continuum.

A trap (infinite box or harmonic oscillator) is coupled at a single point to
free atoms.  The model is diagonalised exactly: one bound mode plus a
continuum of scattering modes.  The modules build on each other:

    specfun      Gamma-family functions and the two odd/oscillator level sums
    quad         quadrature, principal values, Fresnel-pole integrals, roots
    traps        unit systems, coupled levels, the level sum F and its pieces
    fano         bound state and continuum coefficient functions
    dynamics     trap populations, residual (infinite-time) populations
    observables  spectra, field amplitudes, g1/g2 correlations
    cli          command-line front end and figure presets
"""

__version__ = "0.1.0"

from .errors import BracketError, ConvergenceError, DomainError, PoleError
from .traps import BOX, HARMONIC, TrapModel, coupled_levels
from .fano import BoundState, ContinuumCoeffs, solve_bound_state
from .dynamics import Occupations, occupations_bose, occupations_fermi
from .observables import CorrelationResult, SpectrumResult

__all__ = [
    "BOX",
    "HARMONIC",
    "BoundState",
    "BracketError",
    "ContinuumCoeffs",
    "ConvergenceError",
    "CorrelationResult",
    "DomainError",
    "Occupations",
    "PoleError",
    "SpectrumResult",
    "TrapModel",
    "coupled_levels",
    "occupations_bose",
    "occupations_fermi",
    "solve_bound_state",
]
