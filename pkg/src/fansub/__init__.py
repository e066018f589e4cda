"""Admissible fan subsolutions for 2-D barotropic Euler contact-discontinuity data."""

from .explorer import GridSpec, scan_feasibility
from .infeasibility import n_region_scan, three_region_certificate
from .pressure import PotentialContext, Polytropic, Tabulated
from .reduction import FanSubsolution, SymmetricParameters, reduce
from .selector import SelectorOptions, construct
from .states import FanState, SymmetricContactDatum, TracelessSym2, boundary_states
from .verifier import Tolerances, eigen_crosscheck, verify

__version__ = "0.1.0"

__all__ = [
    "FanState",
    "FanSubsolution",
    "GridSpec",
    "Polytropic",
    "PotentialContext",
    "SelectorOptions",
    "SymmetricContactDatum",
    "SymmetricParameters",
    "Tabulated",
    "Tolerances",
    "TracelessSym2",
    "boundary_states",
    "construct",
    "eigen_crosscheck",
    "n_region_scan",
    "reduce",
    "scan_feasibility",
    "three_region_certificate",
    "verify",
]
