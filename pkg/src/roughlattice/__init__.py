"""Exact rough convergence of sequences in concrete Riesz spaces."""

from .convergence import (
    ConvergenceStructure,
    Verdict,
    conv_decide,
    conv_verify,
    fullification_verify,
    monotone_conv,
    order_conv,
    pwlin_norm_conv,
    pwlin_norm_conv_check,
)
from .errors import (
    CapabilityError,
    PreconditionError,
    RieszError,
    SpaceMismatchError,
    UnboundedError,
    UndecidableError,
    UnsupportedCombinationError,
    UnsupportedSpaceError,
)
from .exact import (
    FalseAt,
    Polynomial,
    RationalFunction,
    eventual_sign,
    forall_n_nonneg,
    parse_rf,
    rf_limit,
)
from .lattice import (
    LEX,
    PWLIN,
    Box,
    LexVec,
    PwLin,
    QVec,
    Space,
    parse_element,
    pwlin_norm,
)
from .nets import (
    EventuallyPeriodic,
    FiniteList,
    Interleaved,
    PeriodicPlusRational,
    ProductNet,
    RationalTerm,
    constant,
    infimum,
    is_decreasing,
    limsup_abs_dev,
    periodic,
    rational,
)
from .rough import (
    RcCertificate,
    canonical_certificate,
    certificate,
    decide_rc,
    limit_set,
    verify_rc,
)

__all__ = [
    "Box", "CapabilityError", "ConvergenceStructure", "EventuallyPeriodic", "FalseAt",
    "FiniteList", "Interleaved", "LEX", "LexVec", "PWLIN", "PeriodicPlusRational",
    "Polynomial", "PreconditionError", "ProductNet", "PwLin", "QVec", "RationalFunction",
    "RationalTerm", "RcCertificate", "RieszError", "Space", "SpaceMismatchError",
    "UnboundedError", "UndecidableError", "UnsupportedCombinationError",
    "UnsupportedSpaceError", "Verdict", "conv_decide", "conv_verify", "constant",
    "decide_rc", "eventual_sign", "forall_n_nonneg", "fullification_verify", "infimum",
    "is_decreasing", "limit_set", "limsup_abs_dev", "monotone_conv", "order_conv",
    "parse_element", "parse_rf", "periodic", "pwlin_norm", "pwlin_norm_conv",
    "pwlin_norm_conv_check", "rational", "rf_limit", "verify_rc", "canonical_certificate",
    "certificate",
]
