"""Finite-truncation certification toolkit for the unitary representation
families of the disc-automorphism cover group and the homogeneous weighted
shift operators attached to them."""

from .errors import (
    ClassificationError,
    EmptyInteriorError,
    GridSizeError,
    NumericsError,
    OverflowGuardError,
    ParameterError,
    ParameterRangeError,
    PoleError,
    RecoveryError,
    SingularMatrixError,
    WindowMismatchError,
)
from .homogeneity import (
    DefectReport,
    homogeneity_defect,
    infinitesimal_reports,
    infinitesimal_targets,
    kappa_commutator,
    kappa_flow_derivative,
    mobius_of_operator,
    reducible_lambda_check,
)
from .inductive import (
    AminusOneFit,
    IsotypicComponent,
    classify_a_minus1,
    decompose,
    isotypic_component,
    ladder_cancellation,
    normalizer_defect,
    sharp_isotypic_flip,
    te_tf_coefficients,
)
from .mobius import GroupPath, MobiusElement, flow, path_to_mobius, star_path
from .numkernel import (
    BILATERAL,
    MONOMIAL,
    ORTHONORMAL,
    UNILATERAL,
    OperatorMatrix,
    TruncationWindow,
    circle_fft,
    circle_synthesis,
    interior_max,
    interior_norm,
    mat_exp,
    solve,
)
from .repn import (
    ANTIHOLO,
    COMPLEMENTARY,
    HOLO,
    PRINCIPAL,
    REDUCIBLE,
    CoefficientVector,
    Realization,
    RepnParams,
    SeriesTag,
    circle_rep_matrix,
    circle_rep_oracle,
    classify_series,
    default_grid_size,
    generator_matrix,
    gram,
    reducible_generator_matrix,
    rep_matrix,
    rep_matrix_sharp,
    unitarity_defect,
)
from .shifts import (
    ReducibleShiftSpec,
    WeightedShiftSpec,
    canonical_shift,
    gram_adjoint,
    reducible_shift,
    shift_matrix,
    to_orthonormal,
    weight_sequence,
)
from .specialfn import NormSequence, complex_gamma, norm_ratio, norm_sq_sequence

__version__ = "0.1.0"
