"""q-calculus kernel: q-shifted factorials, terminating basic hypergeometric
series, the bilateral weight, and the q-quadratic lattice.

Series follow the Gasper-Rahman normalisation

    r phi s (a_1..a_r; b_1..b_s; q, z)
        = sum_m (a_1..a_r; q)_m / (q, b_1..b_s; q)_m
                * [(-1)^m q^(m(m-1)/2)]^(1+s-r) z^m .

Parameters that are only real as a pair, such as (i b, -i b), are passed as
``(S, P)`` tuples (sum and product of the pair) meaning the real quadratic
factor 1 - S q^j + P q^(2j). A pair counts as two parameters in the balance
exponent.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from typing import Sequence

from . import kernels
from .errors import DenominatorPole, DomainError, NonConvergent

DEFAULT_EPS = 1e-12
DEFAULT_MAX_TERMS = 4096


@dataclass(frozen=True)
class QContext:
    """Base q in (0, 1) and the numerical policy shared by every routine."""

    q: float
    eps_term: float = DEFAULT_EPS
    max_terms: int = DEFAULT_MAX_TERMS
    # q == root**step; exact-mode series work in powers of root so that a
    # squared base stays exact
    root: float | None = field(default=None, repr=False)
    step: int = field(default=1, repr=False)

    def __post_init__(self):
        if self.root is None:
            object.__setattr__(self, "root", self.q)
        if not 0.0 < self.q < 1.0:
            raise DomainError(f"q must satisfy 0 < q < 1 (got q={self.q!r})")
        if not 0.0 < self.eps_term < 1e-3:
            raise DomainError(f"eps_term must satisfy 0 < eps_term < 1e-3 (got {self.eps_term!r})")
        if self.max_terms < 64:
            raise DomainError(f"max_terms must be >= 64 (got {self.max_terms!r})")

    @classmethod
    def from_env(cls, q: float, eps_term: float | None = None, max_terms: int | None = None) -> "QContext":
        """Explicit arguments win over QORTHO_EPS / QORTHO_MAXTERMS, which win over defaults."""
        if eps_term is None:
            eps_term = float(os.environ.get("QORTHO_EPS", DEFAULT_EPS))
        if max_terms is None:
            max_terms = int(os.environ.get("QORTHO_MAXTERMS", DEFAULT_MAX_TERMS))
        return cls(q, eps_term, max_terms)

    def squared(self) -> "QContext":
        """Same policy in base q^2."""
        return replace(self, q=self.q * self.q, root=self.root, step=2 * self.step)


@dataclass(frozen=True)
class PochResult:
    """A (possibly huge or tiny) real number kept as sign * exp(log_abs).

    ``tail_bound`` is a relative bound: the exact value lies in
    value * (1 +/- tail_bound). It is 0 for finite products.
    """

    log_abs: float
    sign: int
    tail_bound: float = 0.0
    terms: int = 0

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_abs)

    def __mul__(self, other: "PochResult") -> "PochResult":
        return PochResult(
            self.log_abs + other.log_abs,
            self.sign * other.sign,
            (1 + self.tail_bound) * (1 + other.tail_bound) - 1,
            self.terms + other.terms,
        )

    def __truediv__(self, other: "PochResult") -> "PochResult":
        if other.sign == 0:
            raise ZeroDivisionError("division by a vanishing product")
        # 1/(1-b) - 1 <= b/(1-b) bounds the reciprocal's relative error
        inv = other.tail_bound / (1 - other.tail_bound) if other.tail_bound < 1 else math.inf
        return PochResult(
            self.log_abs - other.log_abs,
            self.sign * other.sign,
            (1 + self.tail_bound) * (1 + inv) - 1,
            self.terms + other.terms,
        )

    @classmethod
    def from_float(cls, x: float) -> "PochResult":
        if x == 0:
            return cls(-math.inf, 0)
        return cls(math.log(abs(x)), 1 if x > 0 else -1)


@dataclass(frozen=True)
class LatticeValue:
    x: float
    alpha: float
    mu: float


def _base(q) -> float:
    return q.q if isinstance(q, QContext) else float(q)


def qpoch(a: float, q, n: int) -> float:
    """Finite q-shifted factorial (a; q)_n."""
    if n < 0:
        raise DomainError(f"n must be >= 0 (got {n})")
    q = _base(q)
    p = 1.0
    qj = 1.0
    for _ in range(n):
        p *= 1.0 - a * qj
        qj *= q
    return p


def qpoch_log(a: float, q, n: int) -> PochResult:
    """(a; q)_n as sign * exp(log_abs), for products that over/underflow."""
    if n < 0:
        raise DomainError(f"n must be >= 0 (got {n})")
    q = _base(q)
    logs = []
    sign = 1
    qj = 1.0
    for _ in range(n):
        f = 1.0 - a * qj
        if f == 0.0:
            return PochResult(-math.inf, 0)
        if f < 0:
            sign = -sign
        logs.append(math.log1p(-a * qj) if abs(a * qj) < 0.5 else math.log(abs(f)))
        qj *= q
    return PochResult(math.fsum(logs), sign)


def qpoch_paired(b: float, q, n: int) -> float:
    """(i b; q)_n (-i b; q)_n computed in real arithmetic; equals (-b^2; q^2)_n."""
    if n < 0:
        raise DomainError(f"n must be >= 0 (got {n})")
    q = _base(q)
    b2 = b * b
    p = 1.0
    q2j = 1.0
    for _ in range(n):
        p *= 1.0 + b2 * q2j
        q2j *= q * q
    return p


def qpoch_inf(a: float, ctx: QContext, eps: float | None = None) -> PochResult:
    """(a; q)_inf in log-space with a certified relative truncation bound.

    A vanishing factor (a = q^-j) is reported as sign 0, not raised.
    """
    eps = ctx.eps_term * 1e-3 if eps is None else eps
    log_abs, sign, tail, used, ok = kernels.log_qpoch_inf(float(a), ctx.q, eps, ctx.max_terms)
    if not ok:
        raise NonConvergent(f"(a;q)_inf with a={a!r}, q={ctx.q!r} needs more than {ctx.max_terms} factors")
    return PochResult(log_abs, sign, tail, used)


def qpoch_inf_value(a: float, ctx: QContext) -> float:
    return qpoch_inf(a, ctx).value


@dataclass(frozen=True)
class QMonomial:
    """The exact real number prod(coef) / prod(den) * root**power.

    Entries of ``coef`` and ``den`` are binary64 values taken at face value,
    so products such as a*b*q^(k+1) or x^2/(a q^2) carry no rounding.
    ``power`` counts powers of the root base (see ``QContext.root``).
    """

    coef: tuple[float, ...] = (1.0,)
    power: int = 0
    den: tuple[float, ...] = ()

    def value(self, root: float) -> float:
        return math.prod(self.coef) / math.prod(self.den) * root**self.power

    def __mul__(self, other) -> "QMonomial":
        other = as_monomial(other)
        return QMonomial(self.coef + other.coef, self.power + other.power, self.den + other.den)

    __rmul__ = __mul__

    def shift(self, j: int) -> "QMonomial":
        return QMonomial(self.coef, self.power + j, self.den)

    def inverse(self) -> "QMonomial":
        return QMonomial(self.den or (1.0,), -self.power, self.coef)


def as_monomial(x) -> QMonomial:
    return x if isinstance(x, QMonomial) else QMonomial((float(x),))


def qpower(j: int) -> QMonomial:
    """root**j as a monomial."""
    return QMonomial((1.0,), j)


@dataclass(frozen=True)
class SeriesValue:
    value: float
    est_error: float
    exact: bool


# switch to exact summation when the binary64 rounding estimate exceeds this
ADAPTIVE_RTOL = 1e-13


def _root_step(q) -> tuple[float, int]:
    if isinstance(q, QContext):
        return q.root, q.step
    return float(q), 1


def _fval(x, root: float) -> float:
    return x.value(root) if isinstance(x, QMonomial) else float(x)


def phi_eval(
    num,
    den,
    q,
    z,
    n: int,
    *,
    num_pairs=(),
    den_pairs=(),
    exact: bool | None = False,
) -> SeriesValue:
    """Terminating r phi s summed for m = 0..n.

    ``n`` is the termination index: the caller is responsible for one
    numerator parameter being q^-n (or a pair containing it). Parameters
    may be floats or QMonomial values. ``exact=False`` sums in binary64 with
    compensated accumulation, ``exact=True`` sums exactly in rational
    arithmetic and rounds once, and ``exact=None`` does the binary64 sum
    first and falls back to the exact one when its own rounding estimate
    is above ADAPTIVE_RTOL relative to max(1, |value|).
    """
    if n < 0:
        raise DomainError(f"termination index must be >= 0 (got {n})")
    root, step = _root_step(q)
    if exact is not True:
        value, err = _phi_float(num, den, q, z, n, num_pairs, den_pairs)
        if exact is False or err <= ADAPTIVE_RTOL * max(1.0, abs(value)):
            return SeriesValue(value, err, False)
    value = _phi_exact(num, den, root, step, z, n, num_pairs, den_pairs)
    return SeriesValue(value, 2.0**-53 * abs(value), True)


def phi_terminating(
    num: Sequence,
    den: Sequence,
    q,
    z,
    n: int,
    *,
    num_pairs: Sequence[tuple] = (),
    den_pairs: Sequence[tuple] = (),
    with_error: bool = False,
    exact: bool | None = False,
):
    """``phi_eval`` returning the value, or (value, est_error) with ``with_error``."""
    res = phi_eval(num, den, q, z, n, num_pairs=num_pairs, den_pairs=den_pairs, exact=exact)
    return (res.value, res.est_error) if with_error else res.value


def _phi_float(num, den, q, z, n, num_pairs, den_pairs):
    root, _ = _root_step(q)
    r = len(num) + 2 * len(num_pairs)
    s = len(den) + 2 * len(den_pairs)
    try:
        value, abs_sum = kernels.phi_sum(
            [_fval(a, root) for a in num],
            [_fval(b, root) for b in den],
            [(_fval(u, root), _fval(v, root)) for u, v in num_pairs],
            [(_fval(u, root), _fval(v, root)) for u, v in den_pairs],
            _fval(z, root),
            int(n),
            _base(q),
            1 + s - r,
        )
    except ZeroDivisionError as exc:
        raise DenominatorPole(str(exc)) from None
    return value, 4 * (n + 1) * 2.0**-53 * abs_sum


def _ratio(x: float) -> tuple[int, int]:
    return float(x).as_integer_ratio()


class _Exact:
    """Monomials as unreduced integer ratios over a fixed root base."""

    def __init__(self, root: float):
        self.q = _ratio(root)
        self._pow = {0: (1, 1)}

    def pow(self, j: int):
        if j < 0:
            n, d = self.pow(-j)
            return d, n
        if j not in self._pow:
            n, d = self.pow(j - 1)
            self._pow[j] = (n * self.q[0], d * self.q[1])
        return self._pow[j]

    @staticmethod
    def coef(m: QMonomial):
        n = d = 1
        for c in m.coef:
            a, b = _ratio(c)
            n, d = n * a, d * b
        for c in m.den:
            a, b = _ratio(c)
            if a == 0:
                raise DomainError(f"zero in the denominator of {m!r}")
            n, d = n * b, d * a
        return (-n, -d) if d < 0 else (n, d)

    def term(self, coef, power: int):
        pn, pd = self.pow(power)
        return coef[0] * pn, coef[1] * pd


def _one_minus(x):
    return x[1] - x[0], x[1]


def _one_minus_plus(s, p):
    # 1 - s + p
    return s[1] * p[1] - s[0] * p[1] + p[0] * s[1], s[1] * p[1]


def _phi_exact(num, den, root, step, z, n, num_pairs, den_pairs):
    eb = _Exact(root)
    num = [as_monomial(a) for a in num]
    den = [as_monomial(b) for b in den]
    num_pairs = [(as_monomial(u), as_monomial(v)) for u, v in num_pairs]
    den_pairs = [(as_monomial(u), as_monomial(v)) for u, v in den_pairs]
    balance = 1 + len(den) + 2 * len(den_pairs) - len(num) - 2 * len(num_pairs)
    cnum = [(eb.coef(a), a.power) for a in num]
    cden = [(eb.coef(b), b.power) for b in den]
    pnum = [(eb.coef(u), u.power, eb.coef(v), v.power) for u, v in num_pairs]
    pden = [(eb.coef(u), u.power, eb.coef(v), v.power) for u, v in den_pairs]
    zt = eb.term(eb.coef(as_monomial(z)), as_monomial(z).power)
    ratios = []
    for m in range(n):
        k = step * m
        N, D = zt
        for c, p in cnum:
            fn, fd = _one_minus(eb.term(c, p + k))
            N, D = N * fn, D * fd
        for sc, sp, pc, pp in pnum:
            fn, fd = _one_minus_plus(eb.term(sc, sp + k), eb.term(pc, pp + 2 * k))
            N, D = N * fn, D * fd
        fn, fd = _one_minus(eb.pow(k + step))
        N, D = N * fd, D * fn
        for c, p in cden:
            fn, fd = _one_minus(eb.term(c, p + k))
            if fn == 0:
                raise DenominatorPole(f"denominator parameter has a zero at m={m}")
            N, D = N * fd, D * fn
        for sc, sp, pc, pp in pden:
            fn, fd = _one_minus_plus(eb.term(sc, sp + k), eb.term(pc, pp + 2 * k))
            if fn == 0:
                raise DenominatorPole(f"denominator pair has a zero at m={m}")
            N, D = N * fd, D * fn
        if balance:
            qn, qd = eb.pow(k)
            sgn = -1 if balance % 2 else 1
            if balance > 0:
                N, D = sgn * N * qn**balance, D * qd**balance
            else:
                N, D = sgn * N * qd**-balance, D * qn**-balance
        ratios.append((N, D))
    P, Q = 1, 1
    for rn, rd in reversed(ratios):
        P, Q = Q * rd + rn * P, Q * rd
    return P / Q


def phi_terminating_exact(num, den, q, z, n: int, *, num_pairs=(), den_pairs=()) -> float:
    """Exact-mode ``phi_terminating``: exact rational sum, rounded once."""
    return phi_eval(num, den, q, z, n, num_pairs=num_pairs, den_pairs=den_pairs, exact=True).value


def mu(x: float, alpha: float, ctx) -> LatticeValue:
    """The q-quadratic lattice q^-x + alpha q^(x+1)."""
    q = _base(ctx)
    return LatticeValue(x, alpha, q ** (-x) + alpha * q ** (x + 1))


def bilateral_weight(n: int, d: float, t1: float, t2: float, ctx: QContext) -> PochResult:
    """Weight at integer n of the d-parametrised bilateral measure for u_n.

        (-t1 q^-n/d, t1 q^n d, -t2 q^-n/d, t2 q^n d; q)_inf
        * d^(4n) q^(n(2n-1)) (1 + d^2 q^(2n))
        / [(-t1 t2/q; q)_inf (-d^2; q)_inf (-q/d^2; q)_inf (q; q)_inf]

    The result is signed: for t1, t2 > 0 the finite-index factors of
    (t q^n d; q)_inf can be negative when n < 0.
    """
    if not t1 * t2 > 0:
        raise DomainError(f"bilateral weight needs t1*t2 > 0 (got t1={t1!r}, t2={t2!r})")
    if not ctx.q <= d < 1:
        raise DomainError(f"bilateral weight needs q <= d < 1 (got d={d!r}, q={ctx.q!r})")
    q = ctx.q
    qn = q**n
    top = (
        qpoch_inf(-t1 / (qn * d), ctx)
        * qpoch_inf(t1 * qn * d, ctx)
        * qpoch_inf(-t2 / (qn * d), ctx)
        * qpoch_inf(t2 * qn * d, ctx)
    )
    scalar = PochResult(4 * n * math.log(d) + n * (2 * n - 1) * math.log(q) + math.log1p(d * d * qn * qn), 1)
    return (top * scalar) / _bilateral_norm(d, t1, t2, ctx)


def _bilateral_norm(d: float, t1: float, t2: float, ctx: QContext) -> PochResult:
    q = ctx.q
    return (
        qpoch_inf(-t1 * t2 / q, ctx)
        * qpoch_inf(-d * d, ctx)
        * qpoch_inf(-q / (d * d), ctx)
        * qpoch_inf(q, ctx)
    )


def qbinomial_series(A: float, Q: float, z: float, ctx: QContext) -> tuple[float, float]:
    """Direct summation of sum_s (A; Q)_s z^s / (Q; Q)_s for 0 < z < 1.

    Returns (value, tail_bound_abs). The term ratio tends to z, so once it is
    below rho < 1 the tail is at most t_S rho / (1 - rho).
    """
    terms = [1.0]
    t = 1.0
    Qs = 1.0
    for s in range(ctx.max_terms):
        ratio = (1.0 - A * Qs) * z / (1.0 - Q * Qs)
        t *= ratio
        terms.append(t)
        Qs *= Q
        # bound on every later ratio: |1 - A Q^j| / (1 - Q^(j+1)) is monotone once A Q^j is small
        rho = (1.0 + abs(A) * Qs) * z / (1.0 - Q * Qs)
        if abs(A) * Qs < 0.5 and rho < 1:
            tail = abs(t) * rho / (1 - rho)
            if tail <= ctx.eps_term * 1e-3 * abs(math.fsum(terms)):
                return math.fsum(terms), tail
    raise NonConvergent("q-binomial series did not converge within max_terms")
