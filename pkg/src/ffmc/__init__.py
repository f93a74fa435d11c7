"""ffmc: exact L-functions, class-number towers, and Picard 1-motives
over the rational function field F_q(t).

The analytic side (`lfun`) expands truncated/modified Euler products of
ray-class and Kummer characters into exact polynomials over cyclotomic
integers; the algebraic side (`geom`, `motives`) counts points on
superelliptic covers and computes motive torsion; `mc_verify` pits the
two against each other layer by layer along constant-field towers.
"""

__version__ = "0.1.0"

from .base import (
    FqPolynomial,
    Place,
    enumerate_places,
    field_of_order,
    finite_field,
    format_polynomial,
    parse_polynomial,
)
from .cyclotomic import Cyc, CycMod
from .errors import (
    ConductorMismatchError,
    ConfigError,
    FfmcError,
    InternalCountError,
    ResourceLimitError,
)
from .geom import SuperellipticCurve, base_change_numerator, zeta_numerator
from .lfun import LPolynomial, TruncationSpec, functional_equation_check, l_function
from .mc_verify import Scenario, VerdictReport, load_scenario, run_scenario
from .motives import motive_torsion, relative_picard
from .reps import CharacterRep, character_group, kummer_character

__all__ = [
    "CharacterRep",
    "ConductorMismatchError",
    "ConfigError",
    "Cyc",
    "CycMod",
    "FfmcError",
    "FqPolynomial",
    "InternalCountError",
    "LPolynomial",
    "Place",
    "ResourceLimitError",
    "Scenario",
    "SuperellipticCurve",
    "TruncationSpec",
    "VerdictReport",
    "__version__",
    "base_change_numerator",
    "character_group",
    "enumerate_places",
    "field_of_order",
    "finite_field",
    "format_polynomial",
    "functional_equation_check",
    "kummer_character",
    "l_function",
    "load_scenario",
    "motive_torsion",
    "parse_polynomial",
    "relative_picard",
    "run_scenario",
    "zeta_numerator",
]
