"""Discrete q-ultraspherical polynomials, their duals, and the neighbouring
big/little q-Jacobi families, with numerical verification of their
orthogonality relations and transformation identities."""
from .errors import DenominatorPole, DomainError, NonConvergent, QOrthoError
from .families import (
    EvalResult,
    Family,
    FamilyParams,
    Method,
    big_q_jacobi,
    disc_ultra_C,
    disc_ultra_C_tilde,
    dual_big_D,
    dual_disc_D,
    dual_disc_D_tilde,
    dual_little_d,
    evaluate,
    jacobi_ratio,
    little_q_jacobi,
    q_mp_tilde,
    u_poly,
)
from .identities import IdentityCheck, run_identity
from .ortho import GramReport, OrthoRelation, gram, make_relation, rhs_norm, verify
from .qcore import (
    LatticeValue,
    PochResult,
    QContext,
    QMonomial,
    mu,
    phi_terminating,
    qpoch,
    qpoch_inf,
    qpoch_paired,
)

__version__ = "0.1.0"

__all__ = [
    "DenominatorPole",
    "DomainError",
    "EvalResult",
    "Family",
    "FamilyParams",
    "GramReport",
    "IdentityCheck",
    "LatticeValue",
    "Method",
    "NonConvergent",
    "OrthoRelation",
    "PochResult",
    "QContext",
    "QMonomial",
    "QOrthoError",
    "big_q_jacobi",
    "disc_ultra_C",
    "disc_ultra_C_tilde",
    "dual_big_D",
    "dual_disc_D",
    "dual_disc_D_tilde",
    "dual_little_d",
    "evaluate",
    "gram",
    "jacobi_ratio",
    "little_q_jacobi",
    "make_relation",
    "mu",
    "phi_terminating",
    "q_mp_tilde",
    "qpoch",
    "qpoch_inf",
    "qpoch_paired",
    "rhs_norm",
    "run_identity",
    "u_poly",
    "verify",
]
