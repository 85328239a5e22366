"""Evaluators for the ten polynomial families.

Every family has a series path (its defining terminating basic
hypergeometric series). Where a three-term recurrence is available there is
an independent recurrence path, and the two are expected to agree.

The discrete q-ultraspherical families and their duals are indexed by
``alpha`` (the square of the parameter appearing in the big q-Jacobi
specialisation a = b = -c), so all recurrence coefficients and norms are
polynomial or rational in ``alpha`` and square roots never appear: the
denominator pair (sqrt(alpha) q, -sqrt(alpha) q) enters the series only
through its product -alpha q^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernels
from .errors import DenominatorPole, DomainError
from .qcore import QContext, QMonomial, SeriesValue, as_monomial, mu, phi_eval, qpoch, qpower

EPS = 2.0**-53


class Family(str, Enum):
    BIG_Q_JACOBI = "big-qjacobi"
    LITTLE_Q_JACOBI = "little-qjacobi"
    DISC_ULTRA_C = "c"
    DISC_ULTRA_C_TILDE = "ctilde"
    DUAL_BIG_D = "dual-big"
    DUAL_LITTLE_D = "dual-little"
    DUAL_DISC_D = "d"
    DUAL_DISC_D_TILDE = "dtilde"
    U_FAMILY = "u"
    Q_MEIXNER_POLLACZEK = "qmp"


class Method(str, Enum):
    SERIES = "series"
    RECURRENCE = "recurrence"
    # series summed in exact rational arithmetic, rounded once
    EXACT = "series-exact"


PARAM_NAMES = {
    Family.BIG_Q_JACOBI: ("a", "b", "c"),
    Family.LITTLE_Q_JACOBI: ("a", "b"),
    Family.DISC_ULTRA_C: ("alpha",),
    Family.DISC_ULTRA_C_TILDE: ("alpha",),
    Family.DUAL_BIG_D: ("a", "b", "c"),
    Family.DUAL_LITTLE_D: ("a", "b"),
    Family.DUAL_DISC_D: ("alpha",),
    Family.DUAL_DISC_D_TILDE: ("alpha",),
    Family.U_FAMILY: ("t1", "t2"),
    Family.Q_MEIXNER_POLLACZEK: ("a",),
}

# families with an independent recurrence path
RECURRENCE_FAMILIES = (
    Family.DISC_ULTRA_C,
    Family.DISC_ULTRA_C_TILDE,
    Family.DUAL_DISC_D,
    Family.DUAL_DISC_D_TILDE,
    Family.Q_MEIXNER_POLLACZEK,
)


@dataclass(frozen=True)
class FamilyParams:
    """Validated parameter set for one family.

    ``check(q)`` enforces what evaluation needs; ``check(q, orthogonality=True)``
    additionally enforces the domain in which the family's orthogonality
    relations hold.
    """

    family: Family
    values: tuple[tuple[str, float], ...] = field(default=())

    @classmethod
    def make(cls, family, **values) -> "FamilyParams":
        family = Family(family)
        names = PARAM_NAMES[family]
        missing = [k for k in names if k not in values]
        if missing:
            raise DomainError(f"{family.value}: missing parameter(s) {', '.join(missing)}")
        extra = sorted(set(values) - set(names))
        if extra:
            raise DomainError(f"{family.value}: unknown parameter(s) {', '.join(extra)}")
        return cls(family, tuple((k, float(values[k])) for k in names))

    def __getitem__(self, key: str) -> float:
        return dict(self.values)[key]

    def as_dict(self) -> dict:
        return dict(self.values)

    def check(self, q: float, orthogonality: bool = False) -> "FamilyParams":
        f, v = self.family, self.as_dict()
        bad = None
        if f in (Family.DISC_ULTRA_C, Family.DISC_ULTRA_C_TILDE, Family.DUAL_DISC_D, Family.DUAL_DISC_D_TILDE):
            if not v["alpha"] > 0:
                bad = f"alpha > 0 (got alpha={v['alpha']!r})"
            elif orthogonality and f in (Family.DISC_ULTRA_C, Family.DUAL_DISC_D) and not v["alpha"] < q**-2:
                bad = f"alpha < q^-2 = {q**-2!r} (got alpha={v['alpha']!r})"
        elif f is Family.U_FAMILY:
            if not v["t1"] * v["t2"] > 0:
                bad = f"t1*t2 > 0 (got t1={v['t1']!r}, t2={v['t2']!r})"
        elif f is Family.Q_MEIXNER_POLLACZEK:
            if v["a"] == 0:
                bad = "a != 0"
        elif f is Family.BIG_Q_JACOBI or f is Family.DUAL_BIG_D:
            if v["c"] == 0:
                bad = "c != 0"
            elif orthogonality and not (0 < v["a"] < 1 / q and 0 < v["b"] < 1 / q and v["c"] < 0):
                bad = f"0 < a, b < q^-1 and c < 0 (got a={v['a']!r}, b={v['b']!r}, c={v['c']!r})"
        elif f in (Family.LITTLE_Q_JACOBI, Family.DUAL_LITTLE_D):
            if v["a"] == 0:
                bad = "a != 0"
            elif orthogonality and not (0 < v["a"] < 1 / q and v["b"] < 1 / q):
                bad = f"0 < a < q^-1 and b < q^-1 (got a={v['a']!r}, b={v['b']!r})"
        if bad:
            raise DomainError(f"{f.value}: parameters must satisfy {bad}")
        return self


@dataclass(frozen=True)
class EvalResult:
    value: float
    method: Method
    est_error: float


def _check_n(n: int):
    if n < 0:
        raise DomainError(f"degree n must be >= 0 (got {n})")


# ---------------------------------------------------------------- recurrences


def recurrence_coeffs(family: Family, params: dict, q: float, n_max: int):
    """Arrays (a_n, b_n, c_n), n < n_max, for x p_n = a_n p_{n+1} + b_n p_n + c_n p_{n-1}.

    For the dual families x is the lattice value mu; for the q-Meixner-Pollaczek
    family x = sin(theta) and the published form 2x P_n = ... is halved.
    """
    n = np.arange(n_max, dtype=np.float64)
    qn = q**n
    if family is Family.DISC_ULTRA_C or family is Family.DISC_ULTRA_C_TILDE:
        al = params["alpha"] if family is Family.DISC_ULTRA_C else -params["alpha"]
        den = 1.0 - al * q ** (2 * n + 1)
        # A_0 = 1 identically, so alpha q = 1 is removable
        den[:1] = 1.0
        if np.any(np.abs(den) <= 64 * EPS):
            raise DenominatorPole(f"recurrence coefficient pole: alpha q^(2n+1) = 1 for some 0 < n < {n_max}")
        a = (1.0 - al * q * qn) / den
        a[:1] = 1.0
        # 1 - A_n rewritten without cancellation
        c = al * q * qn * (1.0 - qn) / den
        if family is Family.DISC_ULTRA_C_TILDE:
            c = -c
        return a, np.zeros_like(a), c
    if family is Family.DUAL_DISC_D or family is Family.DUAL_DISC_D_TILDE:
        al = params["alpha"] if family is Family.DUAL_DISC_D else -params["alpha"]
        inv = q ** (-2 * n - 1)
        a = -inv * (1.0 - al * q ** (2 * n + 2))
        b = inv * (1.0 + q)
        c = -(q ** (-2 * n)) * (1.0 - q ** (2 * n))
        return a, b, c
    if family is Family.Q_MEIXNER_POLLACZEK:
        aa = params["a"]
        return 0.5 * (1.0 - q * qn), np.zeros(n_max), 0.5 * (1.0 + aa * aa * qn / q)
    raise DomainError(f"family {family.value} has no recurrence path")


def recurrence_table(family: Family, params: dict, x, q: float, n_max: int) -> np.ndarray:
    """Values of degrees 0..n_max at every point of ``x`` via the recurrence."""
    a, b, c = recurrence_coeffs(family, params, q, n_max)
    return kernels.recurrence_table(np.atleast_1d(np.asarray(x, dtype=np.float64)), a, b, c)


def _recurrence_value(family, params, x, ctx, n) -> EvalResult:
    row = recurrence_table(family, params, [x], ctx.q, n)[0]
    scale = float(np.max(np.abs(row)))
    return EvalResult(float(row[n]), Method.RECURRENCE, 4 * (n + 1) * EPS * scale)


# ---------------------------------------------------------------- series helpers
#
# Series parameters are built as QMonomial values in powers of ctx.root so the
# exact fallback sees them unrounded. ``exact=None`` sums in binary64 and
# switches to exact summation when cancellation has eaten the digits.


def _series(res: SeriesValue, scale: float = 1.0) -> EvalResult:
    return EvalResult(scale * res.value, Method.EXACT if res.exact else Method.SERIES, abs(scale) * res.est_error)


def _exact_flag(method) -> bool | None:
    return True if Method(method) is Method.EXACT else None


def _is_int(x) -> bool:
    return not isinstance(x, QMonomial) and float(x).is_integer()


def _lattice_params(m, prod: QMonomial, ctx: QContext):
    """The parameter pair (q^-m, prod q^(m+1)) as separate parameters when m is
    an integer, else as the pair with sum mu(m; prod) and product prod q."""
    s = ctx.step
    if _is_int(m):
        m = int(m)
        return [qpower(-m * s), prod.shift(s * (m + 1))], []
    M = ctx.root ** (-m * s) + prod.value(ctx.root) * ctx.root ** (s * (m + 1))
    return [], [(M, prod.shift(s))]


# ---------------------------------------------------------------- big / little q-Jacobi and duals


def big_q_jacobi(n: int, x, a, b, c, ctx: QContext, exact: bool | None = None) -> EvalResult:
    """P_n(x; a, b, c; q) = 3phi2(q^-n, a b q^(n+1), x; a q, c q; q, q).

    Any of x, a, b, c may be a QMonomial; near the ends of the support the
    binary64 sum can lose most of its digits, which ``exact`` guards against.
    """
    _check_n(n)
    s = ctx.step
    A, B, C = as_monomial(a), as_monomial(b), as_monomial(c)
    return _series(
        phi_eval([qpower(-n * s), (A * B).shift(s * (n + 1)), x], [A.shift(s), C.shift(s)], ctx, qpower(s), n,
                 exact=exact)
    )


def little_q_jacobi(n: int, x, a, b, ctx: QContext, exact: bool | None = None) -> EvalResult:
    """p_n(x; a, b | q) = 2phi1(q^-n, a b q^(n+1); a q; q, q x)."""
    _check_n(n)
    s = ctx.step
    A, B = as_monomial(a), as_monomial(b)
    return _series(
        phi_eval([qpower(-n * s), (A * B).shift(s * (n + 1))], [A.shift(s)], ctx, as_monomial(x).shift(s), n,
                 exact=exact)
    )


def dual_big_D(n: int, m: float, a, b, c, ctx: QContext, exact: bool | None = None) -> EvalResult:
    """D_n(mu(m; ab); a, b, c | q) = 3phi2(q^-m, ab q^(m+1), q^-n; a q, ab q/c; q, a q^(n+1)/c).

    For non-integer m the pair (q^-m, ab q^(m+1)) enters only through mu(m; ab).
    """
    _check_n(n)
    s = ctx.step
    A, B, C = as_monomial(a), as_monomial(b), as_monomial(c)
    num, pairs = _lattice_params(m, A * B, ctx)
    return _series(
        phi_eval(num + [qpower(-n * s)], [A.shift(s), (A * B * C.inverse()).shift(s)], ctx,
                 (A * C.inverse()).shift(s * (n + 1)), n, num_pairs=pairs, exact=exact)
    )


def dual_little_d(n: int, m: float, a, b, ctx: QContext, exact: bool | None = None) -> EvalResult:
    """d_n(mu(m; ab); a, b | q) = 3phi1(q^-m, ab q^(m+1), q^-n; b q; q, q^n / a)."""
    _check_n(n)
    s = ctx.step
    A, B = as_monomial(a), as_monomial(b)
    num, pairs = _lattice_params(m, A * B, ctx)
    return _series(
        phi_eval(num + [qpower(-n * s)], [B.shift(s)], ctx, A.inverse().shift(s * n), n,
                 num_pairs=pairs, exact=exact)
    )


# ---------------------------------------------------------------- discrete q-ultraspherical


def _alpha_positive(alpha: float, name: str):
    if not alpha > 0:
        raise DomainError(f"{name}: parameter must satisfy alpha > 0 (got alpha={alpha!r})")


def disc_ultra_C(n: int, x: float, alpha: float, ctx: QContext, method=Method.RECURRENCE) -> EvalResult:
    """C_n^(alpha)(x; q) = 3phi2(q^-n, alpha q^(n+1), x; sqrt(alpha) q, -sqrt(alpha) q; q, q)."""
    _check_n(n)
    _alpha_positive(alpha, "c")
    if Method(method) is Method.RECURRENCE:
        return _recurrence_value(Family.DISC_ULTRA_C, {"alpha": alpha}, x, ctx, n)
    s = ctx.step
    return _series(
        phi_eval([qpower(-n * s), QMonomial((alpha,), s * (n + 1)), x], [], ctx, qpower(s), n,
                 den_pairs=[(0.0, QMonomial((-alpha,), 2 * s))], exact=_exact_flag(method))
    )


def disc_ultra_C_tilde(n: int, x: float, alpha: float, ctx: QContext, method=Method.RECURRENCE) -> EvalResult:
    """C~_n^(alpha)(x; q) = (-i)^n C_n^(-alpha)(i x; q), real for real x.

    The series path uses the real little q-Jacobi forms in x^2 / (alpha q^2)
    with parameters (q^-1, -alpha | q^2) for even n and (q, -alpha | q^2) for odd n.
    """
    _check_n(n)
    _alpha_positive(alpha, "ctilde")
    if Method(method) is Method.RECURRENCE:
        return _recurrence_value(Family.DISC_ULTRA_C_TILDE, {"alpha": alpha}, x, ctx, n)
    q, s = ctx.q, ctx.step
    k, odd = divmod(n, 2)
    lead = qpoch(q**3 if odd else q, q * q, k) * alpha**k / qpoch(-alpha * q * q, q * q, k)
    lead *= (-1) ** k * q ** (k * (k + 1))
    y = QMonomial((x, x), -2 * s, (alpha,))
    p = little_q_jacobi(k, y, qpower(s if odd else -s), -alpha, ctx.squared(), exact=_exact_flag(method))
    factor = lead * (x if odd else 1.0)
    return EvalResult(factor * p.value, p.method, abs(factor) * p.est_error)


def _dual_series(n, x, M, alpha, sign, ctx, method):
    # numerator (q^-x, sign*alpha q^(x+1)) with sum mu(x; sign*alpha), product
    # sign*alpha*q; denominator pair product -sign*alpha*q^2
    s = ctx.step
    prod = QMonomial((sign * alpha,))
    if x is not None and _is_int(x):
        num, pairs = _lattice_params(x, prod, ctx)
    else:
        num, pairs = [], [(M, prod.shift(s))]
    return _series(
        phi_eval(num + [qpower(-n * s)], [], ctx, QMonomial((-1.0,), s * (n + 1)), n, num_pairs=pairs,
                 den_pairs=[(0.0, QMonomial((-sign * alpha,), 2 * s))], exact=_exact_flag(method))
    )


def dual_disc_D(n: int, x: float, alpha: float, ctx: QContext, method=Method.RECURRENCE) -> EvalResult:
    """D_n^(alpha)(mu(x; alpha) | q), a polynomial of degree n in mu(x; alpha)."""
    _check_n(n)
    _alpha_positive(alpha, "d")
    M = mu(x, alpha, ctx).mu
    if Method(method) is Method.RECURRENCE:
        return _recurrence_value(Family.DUAL_DISC_D, {"alpha": alpha}, M, ctx, n)
    return _dual_series(n, x, M, alpha, 1.0, ctx, method)


def dual_disc_D_at(n: int, M: float, alpha: float, ctx: QContext, method=Method.RECURRENCE) -> EvalResult:
    """D_n^(alpha) at an arbitrary lattice value M."""
    _check_n(n)
    _alpha_positive(alpha, "d")
    if Method(method) is Method.RECURRENCE:
        return _recurrence_value(Family.DUAL_DISC_D, {"alpha": alpha}, M, ctx, n)
    return _dual_series(n, None, M, alpha, 1.0, ctx, method)


def dual_disc_D_tilde(n: int, x: float, alpha: float, ctx: QContext, method=Method.RECURRENCE) -> EvalResult:
    """D~_n^(alpha)(mu(x; -alpha) | q); the series denominator pair (i a q, -i a q) is real-paired."""
    _check_n(n)
    _alpha_positive(alpha, "dtilde")
    M = mu(x, -alpha, ctx).mu
    if Method(method) is Method.RECURRENCE:
        return _recurrence_value(Family.DUAL_DISC_D_TILDE, {"alpha": alpha}, M, ctx, n)
    return _dual_series(n, x, M, alpha, -1.0, ctx, method)


def dual_disc_D_tilde_at(n: int, M: float, alpha: float, ctx: QContext, method=Method.RECURRENCE) -> EvalResult:
    _check_n(n)
    _alpha_positive(alpha, "dtilde")
    if Method(method) is Method.RECURRENCE:
        return _recurrence_value(Family.DUAL_DISC_D_TILDE, {"alpha": alpha}, M, ctx, n)
    return _dual_series(n, None, M, alpha, -1.0, ctx, method)


# ---------------------------------------------------------------- u family and q-Meixner-Pollaczek


def u_poly(n: int, s: float, t1: float, t2: float, ctx: QContext, exact: bool | None = None) -> EvalResult:
    """u_n(sinh xi; t1, t2 | q) = 3phi1(q e^xi/t1, -q e^-xi/t1, q^-n; -q^2/(t1 t2); q, q^n t1/t2).

    The numerator pair has sum 2 q sinh(xi)/t1 and product -q^2/t1^2, so the
    series is evaluated directly from s = sinh(xi) without forming e^xi.
    """
    _check_n(n)
    if t1 == 0 or t2 == 0:
        raise DomainError("u: t1 and t2 must be non-zero")
    k = ctx.step
    pair = (QMonomial((2.0, s), k, (t1,)), QMonomial((-1.0,), 2 * k, (t1, t1)))
    return _series(
        phi_eval([qpower(-n * k)], [QMonomial((-1.0,), 2 * k, (t1, t2))], ctx, QMonomial((t1,), n * k, (t2,)), n,
                 num_pairs=[pair], exact=exact)
    )


def q_mp_tilde(n: int, theta: float, a: float, ctx: QContext, method=Method.RECURRENCE) -> EvalResult:
    """Real q-Meixner-Pollaczek polynomial P~_n(sin theta; a | q).

    Series: (-a^2; q)_n / (a^n (q; q)_n) 3phi2(q^-n, i a e^-i theta, -i a e^i theta; -a^2, 0; q, q),
    with the numerator pair contributing 1 - 2 a q^j sin(theta) + a^2 q^2j.
    """
    _check_n(n)
    if a == 0:
        raise DomainError("qmp: parameter must satisfy a != 0")
    q = ctx.q
    if Method(method) is Method.RECURRENCE:
        return _recurrence_value(Family.Q_MEIXNER_POLLACZEK, {"a": a}, math.sin(theta), ctx, n)
    s = ctx.step
    lead = qpoch(-a * a, q, n) / (a**n * qpoch(q, q, n))
    pair = (QMonomial((2.0, a, math.sin(theta))), QMonomial((a, a)))
    return _series(
        phi_eval([qpower(-n * s)], [QMonomial((-a, a)), 0.0], ctx, qpower(s), n, num_pairs=[pair],
                 exact=_exact_flag(method)),
        lead,
    )


def jacobi_ratio(n: int, x: float, alpha: float, beta: float) -> float:
    """Classical P_n^(alpha,beta)(x) / P_n^(alpha,beta)(1) by the standard recurrence."""
    _check_n(n)
    if not (alpha > -1 and beta > -1):
        raise DomainError(f"jacobi: need alpha, beta > -1 (got {alpha!r}, {beta!r})")
    p_prev, p = 1.0, (alpha + 1) + (alpha + beta + 2) * (x - 1) / 2
    at_one_prev, at_one = 1.0, alpha + 1
    if n == 0:
        return 1.0
    ab = alpha + beta
    for k in range(2, n + 1):
        c0 = 2 * k * (k + ab) * (2 * k + ab - 2)
        c1 = (2 * k + ab - 1) * ((2 * k + ab) * (2 * k + ab - 2) * x + alpha * alpha - beta * beta)
        c2 = 2 * (k + alpha - 1) * (k + beta - 1) * (2 * k + ab)
        p_prev, p = p, (c1 * p - c2 * p_prev) / c0
        at_one_prev, at_one = at_one, at_one * (alpha + k) / k
    return p / at_one


# ---------------------------------------------------------------- generic dispatch


def evaluate(fp: FamilyParams, n: int, x: float, ctx: QContext, method=None) -> EvalResult:
    """Evaluate family member n at x (lattice coordinate for dual families, theta for qmp)."""
    v = fp.as_dict()
    f = fp.family
    fp.check(ctx.q)
    kw = {} if method is None else {"method": Method(method)}
    exact = None
    if method is not None and f not in RECURRENCE_FAMILIES:
        if Method(method) is Method.RECURRENCE:
            raise DomainError(f"{f.value}: no recurrence path")
        exact = _exact_flag(method)
    if f is Family.BIG_Q_JACOBI:
        return big_q_jacobi(n, x, v["a"], v["b"], v["c"], ctx, exact)
    if f is Family.LITTLE_Q_JACOBI:
        return little_q_jacobi(n, x, v["a"], v["b"], ctx, exact)
    if f is Family.DUAL_BIG_D:
        return dual_big_D(n, x, v["a"], v["b"], v["c"], ctx, exact)
    if f is Family.DUAL_LITTLE_D:
        return dual_little_d(n, x, v["a"], v["b"], ctx, exact)
    if f is Family.DISC_ULTRA_C:
        return disc_ultra_C(n, x, v["alpha"], ctx, **kw)
    if f is Family.DISC_ULTRA_C_TILDE:
        return disc_ultra_C_tilde(n, x, v["alpha"], ctx, **kw)
    if f is Family.DUAL_DISC_D:
        return dual_disc_D(n, x, v["alpha"], ctx, **kw)
    if f is Family.DUAL_DISC_D_TILDE:
        return dual_disc_D_tilde(n, x, v["alpha"], ctx, **kw)
    if f is Family.U_FAMILY:
        return u_poly(n, x, v["t1"], v["t2"], ctx, exact)
    return q_mp_tilde(n, x, v["a"], ctx, **kw)
