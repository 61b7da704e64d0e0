"""Greedy subset selection for linear regression and dictionary selection,
with the spectral and submodularity-ratio diagnostics that explain when the
greedy algorithms are near-optimal.
"""

from .dictionary import (
    DictionaryProblem,
    DictionaryResult,
    eval_F,
    eval_F_hat,
    eval_F_omp,
    exhaustive_dict_opt,
    sds_ma,
    sds_omp,
)
from .errors import (
    BudgetError,
    DimensionError,
    GreedySelectError,
    InvalidMatrixError,
    ModelValidationError,
    ParseError,
    TargetExplainedError,
    ZeroVarianceError,
)
from .model import (
    CovarianceModel,
    SampleTable,
    SyntheticSpec,
    from_matrices,
    from_samples,
    read_csv,
    read_model_json,
    synth_generate,
    write_model_json,
)
from .numerics import EigDecomposition, eig_sym, solve_spd, submatrix, subvector
from .regression import (
    FitResult,
    ResidualModel,
    augmented_matrix,
    fit,
    r_squared,
    residual_model,
    residual_target_cov,
    residual_variance,
)
from .selection import (
    SelectionResult,
    exhaustive_opt,
    forward_regression,
    oblivious,
    omp,
)
from .spectral import (
    BetaEstimate,
    SparseEigReport,
    coherence,
    lower_bound_via_beta,
    sparse_eig_min,
    sparse_eig_report,
    sparse_lam_min,
)
from .submodularity import RatioReport, ratio_exact, ratio_pruned, ratio_sampled

__version__ = "0.1.0"
