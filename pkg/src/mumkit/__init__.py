"""mumkit: exact arithmetic for MUM differential operators in D = z*d/dz.

Series solutions, canonical coordinates, Cartier/Frobenius transfer data
and p-adic integrality certificates, all over arbitrary-precision
rationals and always relative to an explicit truncation order.
"""

__version__ = "0.1.0"

from .opalg import (
    ApparentSingularityAtZero,
    DeltaOperator,
    DeltaPolynomial,
    NotMUM,
    OperatorSyntaxError,
    RawOperator,
    UnknownOperator,
    ZeroLeadingCoefficient,
    builtin,
    builtin_names,
    format_operator,
    hypergeometric,
    is_mum,
    monicize,
    operator_p_integrality,
    parse_operator,
)
from .qcoord import (
    BadNormalization,
    IntegralityReport,
    canonical_coordinate,
    dieudonne_check,
    exp_integrality_check,
    n_integrality_report,
    omega_congruence_check,
)
from .series import (
    INF,
    BadConstantTerm,
    SeriesMatrix,
    SingularConstantTerm,
    TruncSeries,
    ValuationProfile,
    ZeroConstantTerm,
    vp,
)
from .solve import (
    SolutionBasis,
    solution_basis,
    solve_f,
    solve_first_row,
    uniform_part,
    verify_solution,
)
from .frobtransfer import (
    BadConstantShape,
    FrobeniusCandidate,
    FrobeniusFit,
    FrobeniusVerification,
    InsufficientTruncation,
    NotPIntegralOperator,
    RadiusDiagnostic,
    TransferAudit,
    TransferData,
    certified_trunc,
    fit_frobenius_constant,
    frobenius_from_constant,
    frobenius_quotient_F,
    h0,
    h_matrix,
    iterate_transfer,
    radius_diagnostic,
    reduction_congruence_check,
    reduction_congruence_parts,
    transfer_audit,
    transfer_operator_L1,
    twisted_rows,
    verify_frobenius,
    working_trunc_for,
)
