"""Realigned-moment separability criteria for bipartite density matrices."""

from .config import DEFAULT_TOLERANCES, Tolerances
from .criteria import (
    CRITERIA,
    CriterionResult,
    ccnr_check,
    d3,
    evaluate,
    hankel_check,
    p3_oppt,
    p3_ppt,
    ppt_check,
    r_moment_general,
    r_moment_two_qubit,
    zhang_l4,
)
from .errors import InputError, NumericalInconsistencyError, StateFileError, ValidationError
from .maps import RearrangedMatrix, partial_transpose, realign
from .moments import (
    MomentSet,
    NewtonCoefficients,
    lambda_max_lower,
    lambda_max_upper,
    newton_coefficients,
    pt_moments,
    realigned_moments,
    zhang_moments,
)
from .states import (
    BipartiteDims,
    DensityMatrix,
    bell_diagonal,
    filtered_family,
    garg_family,
    isotropic,
    load_state,
    random_density,
    random_separable,
    rudolph_family,
    save_state,
    toth_family,
    validate,
)
from .sweep import FamilySpec, SweepReport, emit_report, find_boundary, run_check, run_survey, run_sweep

__version__ = "0.1.0"
