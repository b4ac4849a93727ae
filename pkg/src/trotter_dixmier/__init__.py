"""Symmetric operator-ideal norms, Dixmier-trace estimation and Trotter-Kato
product-formula convergence in operator and Dixmier norms, at matrix scale."""
from .dixmier_trace import (
    TraceEstimate,
    TraceSequence,
    dilation,
    dilation_d2,
    estimate_dixmier_trace,
    horn_ky_fan_check,
    make_model_spectrum,
    trace_sequence,
    variational_sigma,
)
from .ideal_norms import (
    NormKind,
    PiWeights,
    check_symmetric_norm_axioms,
    decreasing_rearrangement,
    dixmier_norm,
    ky_fan_dominates,
    macaev_norm,
    operator_ideal_norm,
    pi_norm,
    schatten_norm,
    weak_norm,
)
from .kato_functions import KatoFunction, beta_seminorm, builtin, product_closure, validate_kato
from .spectral_core import (
    EigenSystem,
    apply_spectral_function,
    eig_hermitian,
    operator_norm,
    singular_values,
)
from .trotter_kato import (
    SCHEMES,
    ErrorCurve,
    RateFit,
    SplittingProblem,
    approximant,
    error_curve,
    exact_semigroup,
    fit_rate,
    lifting_bound_check,
    trace_error_check,
)

__version__ = "0.1.0"
