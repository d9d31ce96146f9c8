"""Photon-added and photon-subtracted qudit states and their higher-order nonclassicality."""
from .errors import ConvergenceError, DomainError, ZeroStateError
from .fock import (NGBSParams, QuditState, add_photons, binomial_state, fock, make_qudit, ngbs,
                   prepare, subtract_photons)
from .moments import MomentTable, factorial_moment, moment, number_moment
from .phase_space import (PhaseSpaceGrid, QuadratureReport, nonclassical_volume, radon_check,
                          tomogram, wigner, wigner_grid)
from .witnesses import WitnessKind, WitnessResult, hoa, hos_hillery, hosps_definition, hosps_literal

__version__ = "0.1.0"
