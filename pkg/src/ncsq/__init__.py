"""Deformed two-mode coherent and squeezed states on a noncommuting plane pair.

The package has four layers: parameter handling (:mod:`ncsq.params`),
closed-form state quantities (:mod:`ncsq.analytic`), a truncated
number-basis matrix engine (:mod:`ncsq.fock`) and the crosschecking
machinery that plays the two against each other (:mod:`ncsq.verifier`).
A command-line front end lives in :mod:`ncsq.cli`.
"""

from .analytic import (
    BogoliubovCoeffs,
    BoundCheck,
    ModeAmplitudes,
    ModeTransform,
    OscillatorCheck,
    OscillatorParams,
    ProductMinima,
    SqueezeParam,
    TwoModeReport,
    VarianceReport,
    bogoliubov_coefficients,
    coherent_eigenvalues,
    coherent_overlap,
    heisenberg_report,
    oscillator_consistency,
    single_mode_report,
    squeezed_overlap,
    two_mode_report,
    variance_products,
)
from .fock import (
    CutoffOutOfRange,
    FockSpace,
    NonHermitianOperator,
    OperatorMatrix,
    OperatorSet,
    PopulationOverflow,
    SaturatedOrSuperCritical,
    SpaceMismatch,
    SqueezeTooLargeForCutoff,
    StateVector,
    basis_state,
    build_operator_set,
    commutator,
    deformed_ops,
    deformed_vacuum,
    displacement_op,
    expectation,
    expectation_and_variance,
    make_space,
    make_state,
    matrix_exp,
    ordinary_mode_ops,
    phase_space_ops,
    safe_norm_fraction,
    squeeze_op,
)
from .params import (
    ConstraintClass,
    NcParams,
    NonFinite,
    NonPositiveParameter,
    classify_constraint,
    make_params,
)
from .verifier import (
    McReport,
    ResidualReport,
    SamplesTooFew,
    SupercriticalWitness,
    ThetaAtOrAboveOne,
    adjoint_mode_transform,
    algebra_residuals,
    convergence_probe,
    crosscheck_suite,
    fit_mode_transform,
    identity_suite,
    overcompleteness_mc,
    supercritical_witness,
)

__version__ = "0.1.0"

__all__ = [
    "BogoliubovCoeffs",
    "BoundCheck",
    "ConstraintClass",
    "CutoffOutOfRange",
    "FockSpace",
    "McReport",
    "ModeAmplitudes",
    "ModeTransform",
    "NcParams",
    "NonFinite",
    "NonHermitianOperator",
    "NonPositiveParameter",
    "OperatorMatrix",
    "OperatorSet",
    "OscillatorCheck",
    "OscillatorParams",
    "PopulationOverflow",
    "ProductMinima",
    "ResidualReport",
    "SamplesTooFew",
    "SaturatedOrSuperCritical",
    "SpaceMismatch",
    "SqueezeParam",
    "SqueezeTooLargeForCutoff",
    "StateVector",
    "SupercriticalWitness",
    "ThetaAtOrAboveOne",
    "TwoModeReport",
    "VarianceReport",
    "adjoint_mode_transform",
    "algebra_residuals",
    "basis_state",
    "bogoliubov_coefficients",
    "build_operator_set",
    "classify_constraint",
    "coherent_eigenvalues",
    "coherent_overlap",
    "commutator",
    "convergence_probe",
    "crosscheck_suite",
    "deformed_ops",
    "deformed_vacuum",
    "displacement_op",
    "expectation",
    "expectation_and_variance",
    "fit_mode_transform",
    "heisenberg_report",
    "identity_suite",
    "make_params",
    "make_space",
    "make_state",
    "matrix_exp",
    "ordinary_mode_ops",
    "oscillator_consistency",
    "overcompleteness_mc",
    "phase_space_ops",
    "safe_norm_fraction",
    "single_mode_report",
    "squeeze_op",
    "squeezed_overlap",
    "supercritical_witness",
    "two_mode_report",
    "variance_products",
]
