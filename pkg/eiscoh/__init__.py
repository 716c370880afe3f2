"""
eiscoh - Rationality checks for Eisenstein cohomology of GL_n over CM fields

Modules:
- weyl: permutations, inversion sets, the coset representatives w_k of W_n / W_P
- kostant: infinity types, Kostant weights, the unique bottom-degree match
- lchar: formal L-value ratios, constant-term coefficients, the sigma action on Harder blocks
- intertwine: closed-form and numerical archimedean intertwining values
- cmfield: exact CM towers, embeddings, Galois elements, discriminant relation
- rationality: both squares of the rationality diagram for one scenario
- cli: the `eiscoh` command
"""

__version__ = "0.1.0"

from .cmfield import FieldTower, GaloisElement, verify_discriminant_relation, verify_sign_identity
from .intertwine import intertwine_closed_form, intertwine_numeric, normalized_value
from .kostant import InfinityType, find_wk, verify_unique_match
from .lchar import HeckeCharSymbol, constant_term_coefficients, gk_product, lambda_k, sigma_on_ratio
from .presets import PRESETS, load_tower
from .rationality import ScenarioConfig, check_constant_term_diagram, check_intertwine_equivariance, run_scenario
from .weyl import Permutation, coset_reps_P

__all__ = [
    'Permutation',
    'coset_reps_P',
    'InfinityType',
    'find_wk',
    'verify_unique_match',
    'HeckeCharSymbol',
    'lambda_k',
    'gk_product',
    'constant_term_coefficients',
    'sigma_on_ratio',
    'intertwine_closed_form',
    'intertwine_numeric',
    'normalized_value',
    'FieldTower',
    'GaloisElement',
    'verify_discriminant_relation',
    'verify_sign_identity',
    'PRESETS',
    'load_tower',
    'ScenarioConfig',
    'check_intertwine_equivariance',
    'check_constant_term_diagram',
    'run_scenario',
]
