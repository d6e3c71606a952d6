"""Mould calculus on word and tree Hopf algebras, with exact formal linearization.

Submodules:
    core            linear combinations, convolution, characters
    alphabet        decorations, admissible sets, spectra
    words           shuffle and quasishuffle Hopf algebras
    trees           decorated forests, Connes-Kreimer and Grossman-Larson
    arborification  forests to words
    series          truncated power series
    operators       differential operators, components, comoulds
    linearizer      moulds, normalizing maps, oracle, growth diagnostics
    io, cli         JSON forms and the command line
"""
from .core import (Character, HopfOps, InvariantViolation, LinComb, Resonance, ZeroMultiplier,
                   character_check, convolve, exp_star, log_star)
from .alphabet import Spectrum, H_elements, in_H, in_H_i, omega, pair_diffeo, pair_field
from .words import QUASISHUFFLE, SHUFFLE
from .trees import CONNES_KREIMER, B_plus, Forest, Tree, leaf
from .arborification import arborify
from .series import TruncSeries
from .operators import (Coarborification, DiffOperator, DiffeoSpec, FieldSpec, compose_diffeos,
                        diffeo_components, eval_automorphism, exp_field, field_component,
                        field_components, invert_diffeo, log_diffeo, rho, rho_arbo)
from .linearizer import (GrowthReport, LinearizationResult, growth_report, linearize, linearize_diffeo,
                         linearize_field, majorant_fit, oracle_linearize, solve_character_diffeo,
                         solve_character_field)

__version__ = "0.1.0"
