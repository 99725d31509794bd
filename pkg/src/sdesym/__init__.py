"""sdesym: determining equations for Lie-point symmetries of SDEs.

A small computer-algebra toolkit that constructs, renders and checks the
determining equations for deterministic and random Lie-point symmetries of
stochastic differential equations in Ito and Stratonovich form, with
Ito/Stratonovich conversion, Lie-algebra closure analysis and the
Fokker-Planck consistency conditions.
"""

from .expr import (
    DomainError,
    EvalError,
    Expr,
    ParseError,
    Symbol,
    SymbolKind,
    ZeroStatus,
    ZeroTestPolicy,
    ZeroVerdict,
    diff,
    eval_at,
    param,
    parse,
    render,
    simplify,
    substitute,
    T,
    unknown,
    w_sym,
    x_sym,
    zero_test,
)
from .sde import (
    JetField,
    SdeModel,
    VectorFieldCandidate,
    convert,
    drift_correction,
    ito_differential,
    ito_laplacian,
    misawa_fields,
    validate_model,
)
from .determining import (
    CheckReport,
    DeterminingSystem,
    Variant,
    build_system,
    check,
    specialization_residual,
    validate_w_action,
)
from .brackets import (
    bracket_residuals,
    closure_check,
    lie_bracket,
    w_term,
    z_field,
)
from .fokker_planck import (
    FokkerPlanckCoeffs,
    FpCandidate,
    delta_term,
    fp_coefficients,
    fp_residuals,
    gamma_lambda,
    proposition_identity_residual,
)
from .modelfiles import (
    FormatError,
    load_candidate,
    load_candidates,
    load_fp_candidate,
    load_model,
    parse_candidate_text,
    parse_model_text,
    render_model_text,
)
from .corpus import list_cases, run_case

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
