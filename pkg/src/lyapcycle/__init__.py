"""Top Lyapunov exponents of Markov-driven products of positive matrices.

The expansion pipeline (:func:`lyapunov_estimate`) turns transfer-operator
traces over closed symbol words into determinant coefficients and
super-exponentially convergent estimates; :func:`mc_lyapunov` is the
independent Monte Carlo oracle, and the projective helpers provide the
contraction diagnostics that justify both.
"""

from .errors import (
    BadInitialVectorError,
    BudgetExceededError,
    DegenerateDenominatorError,
    EnsembleShapeError,
    EnsembleValidationError,
    IndexOutOfRangeError,
    LyapcycleError,
    NoConvergenceError,
    NonDominantRootError,
    NonPositiveEntryError,
    NonPositiveTransitionError,
    NonStochasticRowError,
    NoSignChangeError,
    ParseError,
    SingularMatrixError,
)
from .expansion import (
    CycleTerm,
    ExpansionState,
    cycle_term,
    cycle_trace,
    det_coefficients,
    det_coefficients_by_partitions,
    lyapunov_estimate,
    smallest_positive_root,
    state_from_traces,
    truncated_determinant,
)
from .linalg import (
    SpectralData,
    char_poly,
    cycle_product,
    det_factor_charpoly,
    gauss_determinant,
    perron,
    scaled_cycle_product,
    spectral_data,
    validate_positive,
)
from .model import (
    MatrixEnsemble,
    NecklaceClass,
    cyclic_probability,
    ensemble,
    enumerate_words,
    necklace_classes,
    necklace_count,
    stationary_distribution,
    validate_ensemble,
)
from .montecarlo import McEstimate, contraction_check, mc_lyapunov, simulate_chain
from .projective import (
    ContractionReport,
    angle_distance,
    birkhoff_coefficient,
    chart_jacobian,
    chart_point,
    det_factor_jacobian,
    fixed_point,
    hilbert_distance,
    projective_action,
    projective_diameter,
)
from .cli import load_ensemble, save_ensemble

__version__ = "0.1.0"

__all__ = [
    "BadInitialVectorError",
    "BudgetExceededError",
    "ContractionReport",
    "CycleTerm",
    "DegenerateDenominatorError",
    "EnsembleShapeError",
    "EnsembleValidationError",
    "ExpansionState",
    "IndexOutOfRangeError",
    "LyapcycleError",
    "MatrixEnsemble",
    "McEstimate",
    "NecklaceClass",
    "NoConvergenceError",
    "NonDominantRootError",
    "NonPositiveEntryError",
    "NonPositiveTransitionError",
    "NonStochasticRowError",
    "NoSignChangeError",
    "ParseError",
    "SingularMatrixError",
    "SpectralData",
    "angle_distance",
    "birkhoff_coefficient",
    "char_poly",
    "chart_jacobian",
    "chart_point",
    "contraction_check",
    "cycle_product",
    "cycle_term",
    "cycle_trace",
    "cyclic_probability",
    "det_coefficients",
    "det_coefficients_by_partitions",
    "det_factor_charpoly",
    "det_factor_jacobian",
    "ensemble",
    "enumerate_words",
    "fixed_point",
    "gauss_determinant",
    "hilbert_distance",
    "load_ensemble",
    "lyapunov_estimate",
    "mc_lyapunov",
    "necklace_classes",
    "necklace_count",
    "perron",
    "projective_action",
    "projective_diameter",
    "save_ensemble",
    "scaled_cycle_product",
    "simulate_chain",
    "smallest_positive_root",
    "spectral_data",
    "state_from_traces",
    "stationary_distribution",
    "truncated_determinant",
    "validate_ensemble",
    "validate_positive",
]
