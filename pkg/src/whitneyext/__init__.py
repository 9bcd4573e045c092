"""Whitney-type jet extension over finite point sets, with numerical
verification of the decomposition, partition of unity, extension operator,
cube-chain decay and Sobolev-Slobodeckij seminorm estimates."""

from .params import SpaceParams
from .geometry import Box, DyadicCube, cubes_touch
from .jets import Jet, jet_eval, jet_derivative
from .decomposition import WhitneyDecomposition, build, brute_force_scan
from .partition import phi, theta, theta_all
from .extension import ExtensionField, JetField, jets_from_function
from .paths import CubePath, PathDecayConstants, build_path, fit_decay, \
    sample_A_P, lemma12_check
from .seminorm import Region, SeminormEstimate, gagliardo, \
    lemma7_touching, lemma7_far, holder_constant
from .harness import Scenario, run_bound_experiment, run_term_split, \
    verify_all

__version__ = "0.1.0"

__all__ = [
    "SpaceParams", "Box", "DyadicCube", "cubes_touch",
    "Jet", "jet_eval", "jet_derivative",
    "WhitneyDecomposition", "build", "brute_force_scan",
    "phi", "theta", "theta_all",
    "ExtensionField", "JetField", "jets_from_function",
    "CubePath", "PathDecayConstants", "build_path", "fit_decay",
    "sample_A_P", "lemma12_check",
    "Region", "SeminormEstimate", "gagliardo",
    "lemma7_touching", "lemma7_far", "holder_constant",
    "Scenario", "run_bound_experiment", "run_term_split", "verify_all",
    "__version__",
]
