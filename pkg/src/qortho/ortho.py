"""Orthogonality relations as (support, weight, normalisation) triples and a
Gram-matrix engine with truncation control.

Discrete and bilateral sums are accumulated over a window of support
indices that is grown until a geometric tail estimate, built from the
per-index envelope log(w) + 2 log max|p|, is below ``eps_term`` times the
smallest diagonal entry. The final sum runs once over the whole window in
ascending index order, so results do not depend on how the window grew.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from . import kernels
from .errors import DomainError, NonConvergent
from .families import Family, FamilyParams, big_q_jacobi, dual_little_d, little_q_jacobi, recurrence_table, u_poly
from .qcore import QContext, QMonomial, bilateral_weight, mu, qpoch, qpoch_inf, qpoch_log

RELATION_IDS = (
    "big-qjacobi",
    "little-qjacobi",
    "dual-little",
    "c-even",
    "c-odd",
    "c-full",
    "ct-even",
    "ct-odd",
    "ct-full",
    "d-even",
    "d-odd",
    "dt-even",
    "dt-odd",
    "u-family",
    "dt-family",
    "qmp-continuous",
)

BILATERAL_IDS = ("u-family", "dt-family")

_CHUNK = 8
_MIN_INDICES = 4


class MomentProblem(str, Enum):
    DETERMINATE = "determinate"
    INDETERMINATE_EXTREMAL = "indeterminate-extremal"
    INDETERMINATE_UNKNOWN = "indeterminate-unknown"
    UNSTATED = "unstated"


@dataclass(frozen=True, eq=False)
class OrthoRelation:
    """One orthogonality relation.

    ``atoms(s)`` returns the support atoms with index s as a list of
    (variable, log|w|, sign(w), branch) tuples, where the variable is what
    ``table`` evaluates at (x, a lattice value mu, sinh(xi), or theta) and
    branch is +1/-1 on signed supports and 0 otherwise. ``weight_factor``
    multiplies every weight; it is 1 unless the relation needed a
    normalisation correction, in which case ``rhs_printed`` holds the
    uncorrected right-hand side.
    """

    id: str
    family: FamilyParams
    ctx: QContext
    kind: str
    parity: int | None
    moment_problem: MomentProblem
    atoms: Callable[[int], list] = field(repr=False)
    table: Callable[[np.ndarray, int], np.ndarray] = field(repr=False)
    rhs_fn: Callable[[int], float] = field(repr=False)
    rhs_printed_fn: Callable[[int], float] | None = field(default=None, repr=False)
    weight_factor: float = 1.0
    d: float | None = None
    params: tuple = ()

    @property
    def label(self) -> str:
        return self.id if self.d is None else f"{self.id}:{self.d!r}"

    def degrees(self, n_max: int) -> list[int]:
        if n_max < 0:
            raise DomainError(f"n_max must be >= 0 (got {n_max})")
        if self.parity is None:
            return list(range(n_max + 1))
        return list(range(self.parity, max(n_max, self.parity) + 1, 2))

    def rhs(self, n: int) -> float:
        return self.rhs_fn(n)

    def rhs_printed(self, n: int) -> float:
        return (self.rhs_printed_fn or self.rhs_fn)(n)


@dataclass
class GramReport:
    relation: str
    params: dict
    q: float
    degrees: list
    entries: list
    rhs_diag: list
    max_offdiag_rel: float
    max_diag_rel_err: float
    truncation_bound: float
    support_points_used: int
    moment_problem: str
    weight_factor: float = 1.0
    rhs_printed: list | None = None
    printed_ratio: list | None = None
    tol: float | None = None
    passed: bool | None = None

    def as_dict(self) -> dict:
        return {
            "kind": "gram",
            "relation": self.relation,
            "params": self.params,
            "q": self.q,
            "degrees": self.degrees,
            "entries": self.entries,
            "rhs_diag": self.rhs_diag,
            "max_offdiag_rel": self.max_offdiag_rel,
            "max_diag_rel_err": self.max_diag_rel_err,
            "truncation_bound": self.truncation_bound,
            "support_points_used": self.support_points_used,
            "moment_problem": self.moment_problem,
            "weight_factor": self.weight_factor,
            "rhs_printed": self.rhs_printed,
            "printed_ratio": self.printed_ratio,
            "tol": self.tol,
            "pass": self.passed,
        }


# ---------------------------------------------------------------- helpers


def _log(x: float) -> tuple[float, int]:
    if x == 0:
        return -math.inf, 0
    return math.log(abs(x)), (1 if x > 0 else -1)


def _pinf(a, ctx):
    return qpoch_inf(a, ctx).value


def _need(params: dict, *names):
    missing = [k for k in names if k not in params]
    if missing:
        raise DomainError(f"missing parameter(s): {', '.join(missing)}")
    return [float(params[k]) for k in names]


def _series_table(fn):
    def table(xs, deg_max):
        out = np.empty((len(xs), deg_max + 1))
        for i, x in enumerate(xs):
            for n in range(deg_max + 1):
                out[i, n] = fn(n, x).value
        return out

    return table


def _recurrence(family, params, ctx):
    def table(xs, deg_max):
        return recurrence_table(family, params, np.asarray(xs, dtype=np.float64), ctx.q, deg_max)

    return table


def parse_relation_id(rid: str) -> tuple[str, float | None]:
    """'u-family:0.7' -> ('u-family', 0.7)."""
    base, _, tail = rid.partition(":")
    if base not in RELATION_IDS:
        raise DomainError(f"unknown relation id {rid!r}; expected one of {', '.join(RELATION_IDS)}")
    if tail:
        if base not in BILATERAL_IDS:
            raise DomainError(f"relation {base!r} takes no ':<d>' suffix")
        try:
            return base, float(tail)
        except ValueError:
            raise DomainError(f"cannot parse d from {rid!r}") from None
    return base, None


# ---------------------------------------------------------------- relation builders


def _big_qjacobi(params, ctx):
    a, b, c = _need(params, "a", "b", "c")
    q = ctx.q
    fp = FamilyParams.make(Family.BIG_Q_JACOBI, a=a, b=b, c=c).check(q, orthogonality=True)
    r1 = qpoch_inf(b * q, ctx) * qpoch_inf(c * q, ctx) / (qpoch_inf(a * b * q * q, ctx) * qpoch_inf(c / a, ctx))
    r2 = qpoch_inf(a * q, ctx) * qpoch_inf(a * b * q / c, ctx) / (qpoch_inf(a * b * q * q, ctx) * qpoch_inf(a / c, ctx))

    def atoms(n):
        l1 = (qpoch_log(a * q, q, n) * qpoch_log(a * b * q / c, q, n)) / (qpoch_log(a * q / c, q, n) * qpoch_log(q, q, n))
        l2 = (qpoch_log(b * q, q, n) * qpoch_log(c * q, q, n)) / (qpoch_log(c * q / a, q, n) * qpoch_log(q, q, n))
        w1, w2 = r1 * l1, r2 * l2
        return [
            (QMonomial((a,), n + 1), w1.log_abs + n * math.log(q), w1.sign, 0),
            (QMonomial((c,), n + 1), w2.log_abs + n * math.log(q), w2.sign, 0),
        ]

    def rhs(m):
        return (
            (1 - a * b * q) * qpoch(b * q, q, m) * qpoch(a * b * q / c, q, m) * qpoch(q, q, m)
            / ((1 - a * b * q ** (2 * m + 1)) * qpoch(a * q, q, m) * qpoch(a * b * q, q, m) * qpoch(c * q, q, m))
            * (-a * c) ** m * q ** (m * (m + 3) / 2)
        )

    table = _series_table(lambda n, x: big_q_jacobi(n, x, a, b, c, ctx, exact=True))
    return dict(family=fp, kind="discrete", parity=None, moment_problem=MomentProblem.DETERMINATE,
                atoms=atoms, table=table, rhs_fn=rhs)


def _little_qjacobi(params, ctx):
    a, b = _need(params, "a", "b")
    q = ctx.q
    fp = FamilyParams.make(Family.LITTLE_Q_JACOBI, a=a, b=b).check(q, orthogonality=True)

    def atoms(n):
        w = qpoch_log(b * q, q, n) / qpoch_log(q, q, n)
        return [(QMonomial((1.0,), n), w.log_abs + n * math.log(a * q), w.sign, 0)]

    K = _pinf(a * b * q * q, ctx) / _pinf(a * q, ctx)

    def rhs(m):
        return (
            K * (1 - a * b * q) * (a * q) ** m * qpoch(b * q, q, m) * qpoch(q, q, m)
            / ((1 - a * b * q ** (2 * m + 1)) * qpoch(a * b * q, q, m) * qpoch(a * q, q, m))
        )

    table = _series_table(lambda n, x: little_q_jacobi(n, x, a, b, ctx, exact=True))
    return dict(family=fp, kind="discrete", parity=None, moment_problem=MomentProblem.DETERMINATE,
                atoms=atoms, table=table, rhs_fn=rhs)


def _dual_little(params, ctx):
    a, b = _need(params, "a", "b")
    q = ctx.q
    fp = FamilyParams.make(Family.DUAL_LITTLE_D, a=a, b=b).check(q, orthogonality=True)
    ab = a * b

    def atoms(m):
        la, sa = _log((1 - ab * q ** (2 * m + 1)) / (1 - ab * q))
        w = (qpoch_log(ab * q, q, m) * qpoch_log(b * q, q, m)) / (qpoch_log(a * q, q, m) * qpoch_log(q, q, m))
        return [(float(m), la + w.log_abs + m * math.log(a) + m * m * math.log(q), sa * w.sign, 0)]

    K = _pinf(ab * q * q, ctx) / _pinf(a * q, ctx)

    def rhs(n):
        return K * qpoch(q, q, n) * (a * q) ** (-n) / qpoch(b * q, q, n)

    table = _series_table(lambda n, m: dual_little_d(n, m, a, b, ctx))
    return dict(family=fp, kind="discrete", parity=None, moment_problem=MomentProblem.INDETERMINATE_EXTREMAL,
                atoms=atoms, table=table, rhs_fn=rhs)


def _c_family(params, ctx, tilde: bool, parity: int | None):
    (alpha,) = _need(params, "alpha")
    q = ctx.q
    fam = Family.DISC_ULTRA_C_TILDE if tilde else Family.DISC_ULTRA_C
    fp = FamilyParams.make(fam, alpha=alpha).check(q, orthogonality=True)
    sg = -1.0 if tilde else 1.0
    root = math.sqrt(alpha)
    signed = parity is None
    K = qpoch_inf(sg * alpha * q**3, ctx.squared()).value / qpoch_inf(q, ctx.squared()).value

    def atoms(s):
        w = qpoch_log(sg * alpha * q * q, q * q, s) / qpoch_log(q * q, q * q, s)
        lw = w.log_abs + s * math.log(q)
        x = root * q ** (s + 1)
        if signed:
            return [(x, lw, w.sign, 1), (-x, lw, w.sign, -1)]
        return [(x, lw, w.sign, 0)]

    def rhs(n):
        return (
            K * (1 - sg * alpha * q) * alpha**n / (1 - sg * alpha * q ** (2 * n + 1))
            * qpoch(q, q, n) * q ** (n * (n + 3) / 2) / qpoch(sg * alpha * q, q, n)
        )

    return dict(family=fp, kind="discrete", parity=parity, moment_problem=MomentProblem.DETERMINATE,
                atoms=atoms, table=_recurrence(fam, {"alpha": alpha}, ctx), rhs_fn=rhs,
                weight_factor=0.5 if signed else 1.0, rhs_printed_fn=rhs if signed else None)


def _d_family(params, ctx, tilde: bool, odd: bool):
    (alpha,) = _need(params, "alpha")
    q = ctx.q
    fam = Family.DUAL_DISC_D_TILDE if tilde else Family.DUAL_DISC_D
    fp = FamilyParams.make(fam, alpha=alpha).check(q, orthogonality=True)
    sg = -1.0 if tilde else 1.0
    sa = sg * alpha
    K = qpoch_inf(sa * q**3, ctx.squared()).value / qpoch_inf(q, ctx.squared()).value

    def atoms(k):
        j = 2 * k + 1 if odd else 2 * k
        # (sa q; q)_j / (1 - sa q) = (sa q^2; q)_(j-1) for j >= 1, avoiding 0/0 at sa q = 1
        if j == 0:
            w = qpoch_log(0.0, q, 0)
        else:
            w = qpoch_log(sa * q * q, q, j - 1) * qpoch_log(sa * q ** (2 * j + 1), q, 1)
        w = w / qpoch_log(q, q, j)
        lw = w.log_abs + (k * (2 * k + 1) if odd else k * (2 * k - 1)) * math.log(q)
        return [(mu(j, sa, q).mu, lw, w.sign, 0)]

    def rhs(n):
        return K * qpoch(q * q, q * q, n) * q ** (-n) / qpoch(sa * q * q, q * q, n)

    return dict(family=fp, kind="discrete", parity=None, moment_problem=MomentProblem.INDETERMINATE_EXTREMAL,
                atoms=atoms, table=_recurrence(fam, {"alpha": alpha}, ctx), rhs_fn=rhs)


def _u_ts(params, q):
    if "t1" in params or "t2" in params:
        return _need(params, "t1", "t2")
    (a,) = _need(params, "a")
    if not a > 0:
        raise DomainError(f"u-family: parameter must satisfy a > 0 (got a={a!r})")
    return math.sqrt(q**3 / a), math.sqrt(q / a)


def _u_family(params, ctx, d):
    q = ctx.q
    t1, t2 = _u_ts(params, q)
    fp = FamilyParams.make(Family.U_FAMILY, t1=t1, t2=t2).check(q, orthogonality=True)
    if not q <= d < 1:
        raise DomainError(f"u-family: d must satisfy q <= d < 1 (got d={d!r}, q={q!r})")

    def atoms(n):
        w = bilateral_weight(n, d, t1, t2, ctx)
        return [((q**-n / d - d * q**n) / 2, w.log_abs, w.sign, 0)]

    def rhs(r):
        return qpoch(q, q, r) * (t1 / t2) ** r / (qpoch(-q * q / (t1 * t2), q, r) * q**r)

    table = _series_table(lambda n, s: u_poly(n, s, t1, t2, ctx))
    return dict(family=fp, kind="bilateral", parity=None, moment_problem=MomentProblem.INDETERMINATE_UNKNOWN,
                atoms=atoms, table=table, rhs_fn=rhs, d=d)


def _dt_family(params, ctx, d):
    q = ctx.q
    a = float(params["a"]) if "a" in params else _need(params, "alpha")[0]
    fp = FamilyParams.make(Family.DUAL_DISC_D_TILDE, alpha=a).check(q, orthogonality=True)
    Q = ctx.squared()
    if not q * q <= d < 1:
        raise DomainError(f"dt-family: d must satisfy q^2 <= d < 1 (got d={d!r}, q^2={q * q!r})")
    t1, t2 = math.sqrt(q**3 / a), math.sqrt(q / a)
    root = math.sqrt(a * q)

    def atoms(n):
        w = bilateral_weight(n, d, t1, t2, Q)
        return [(root * (q ** (-2 * n) / d - d * q ** (2 * n)), w.log_abs, w.sign, 0)]

    def rhs(r):
        return qpoch(q * q, q * q, r) * q ** (-r) / qpoch(-a * q * q, q * q, r)

    def rhs_printed(r):
        return qpoch(q * q, q * q, r) / qpoch(-a * q * q, q * q, r) ** 2

    return dict(family=fp, kind="bilateral", parity=None, moment_problem=MomentProblem.INDETERMINATE_UNKNOWN,
                atoms=atoms, table=_recurrence(Family.DUAL_DISC_D_TILDE, {"alpha": a}, ctx), rhs_fn=rhs,
                rhs_printed_fn=rhs_printed, d=d)


def _qmp(params, ctx):
    (a,) = _need(params, "a")
    q = ctx.q
    fp = FamilyParams.make(Family.Q_MEIXNER_POLLACZEK, a=a).check(q, orthogonality=True)
    if not 0 < abs(a) < 1:
        raise DomainError(f"qmp-continuous: parameter must satisfy 0 < |a| < 1 (got a={a!r})")
    tab = _recurrence(Family.Q_MEIXNER_POLLACZEK, {"a": a}, ctx)
    K = _pinf(q, ctx)

    def rhs(n):
        return 1.0 / (qpoch(q, q, n) * K * _pinf(-a * a * q**n, ctx))

    return dict(family=fp, kind="continuous", parity=None, moment_problem=MomentProblem.UNSTATED,
                atoms=None, table=lambda th, m: tab(np.sin(th), m), rhs_fn=rhs, rhs_printed_fn=rhs,
                weight_factor=0.5)


def make_relation(rid: str, params: dict, ctx: QContext) -> OrthoRelation:
    """Build a relation from its catalog id (``u-family:0.7`` style ids carry d)."""
    base, d = parse_relation_id(rid)
    params = dict(params)
    if base in BILATERAL_IDS:
        if d is None:
            if "d" not in params:
                raise DomainError(f"{base}: parameter d is required")
            d = float(params["d"])
        params.pop("d", None)
    if base == "big-qjacobi":
        spec = _big_qjacobi(params, ctx)
    elif base == "little-qjacobi":
        spec = _little_qjacobi(params, ctx)
    elif base == "dual-little":
        spec = _dual_little(params, ctx)
    elif base.startswith("c-") or base.startswith("ct-"):
        tilde = base.startswith("ct-")
        parity = {"even": 0, "odd": 1, "full": None}[base.split("-")[1]]
        spec = _c_family(params, ctx, tilde, parity)
    elif base in ("d-even", "d-odd", "dt-even", "dt-odd"):
        spec = _d_family(params, ctx, base.startswith("dt"), base.endswith("odd"))
    elif base == "u-family":
        spec = _u_family(params, ctx, d)
    elif base == "dt-family":
        spec = _dt_family(params, ctx, d)
    else:
        spec = _qmp(params, ctx)
    shown = dict(spec["family"].as_dict())
    if spec.get("d") is not None:
        shown["d"] = spec["d"]
    return OrthoRelation(id=base, ctx=ctx, params=tuple(shown.items()), **spec)


def rhs_norm(relation: OrthoRelation, n: int) -> float:
    if n < 0:
        raise DomainError(f"n must be >= 0 (got {n})")
    return relation.rhs(n)


# ---------------------------------------------------------------- Gram engine


@dataclass
class _Window:
    var: list
    log_w: list
    sign_w: list
    branch: list
    index: list


def _envelope(log_w, values):
    with np.errstate(divide="ignore"):
        return float(np.max(np.asarray(log_w) + 2 * np.log(np.max(np.abs(values), axis=1))))


def _tail(env: list[float]) -> float:
    """Geometric tail estimate from the last three per-index envelopes (log scale)."""
    if len(env) < _MIN_INDICES:
        return math.inf
    e0, e1, e2 = env[-3:]
    if e2 == -math.inf and e1 == -math.inf:
        return 0.0
    if not (e2 < e1 < e0):
        return math.inf
    r = max(math.exp(e2 - e1), math.exp(e1 - e0))
    if r >= 1:
        return math.inf
    # safety factor 2 on the geometric tail
    return 2.0 * math.exp(e2) * r / (1 - r)


def _collect(rel: OrthoRelation, deg_max: int, degrees: list[int]):
    """Grow the support window until the tail estimate meets the policy."""
    ctx = rel.ctx
    dirs = (1, -1) if rel.kind == "bilateral" else (1,)
    win = {s: _Window([], [], [], [], []) for s in dirs}
    env = {s: [] for s in dirs}
    nxt = {1: 0, -1: -1}
    diag = np.zeros(len(degrees))
    tails = {s: math.inf for s in dirs}
    while True:
        for s in dirs:
            if tails[s] <= ctx.eps_term * max(np.min(np.abs(diag)), 1e-300):
                continue
            for _ in range(_CHUNK):
                idx = nxt[s]
                nxt[s] += s
                at = rel.atoms(idx)
                xs = [a[0] for a in at]
                lw = np.array([a[1] for a in at])
                sw = np.array([a[2] for a in at], dtype=np.float64)
                vals = rel.table(xs, deg_max)[:, degrees]
                env[s].append(_envelope(lw, vals))
                with np.errstate(invalid="ignore"):
                    contrib = sw[:, None] * np.exp(lw)[:, None] * vals * vals
                diag += np.nansum(contrib, axis=0)
                w = win[s]
                w.var.extend(xs)
                w.log_w.extend(lw)
                w.sign_w.extend(sw)
                w.branch.extend(a[3] for a in at)
                w.index.extend([idx] * len(at))
            tails[s] = _tail(env[s])
        floor = ctx.eps_term * float(np.min(np.abs(diag)))
        if all(t <= floor for t in tails.values()):
            break
        if sum(abs(nxt[s] - (0 if s == 1 else -1)) for s in dirs) > ctx.max_terms:
            raise NonConvergent(
                f"{rel.label}: truncation tail not below eps_term after {ctx.max_terms} support indices"
            )
    # ascending index order over the final window; stable sort keeps atom order within an index
    cat = [
        np.concatenate([np.asarray(getattr(win[s], f), dtype=np.float64) for s in dirs])
        for f in ("log_w", "sign_w", "branch", "index")
    ]
    order = np.argsort(cat[3], kind="stable")
    var = [v for s in dirs for v in win[s].var]
    cat = [[var[i] for i in order]] + [c[order] for c in cat]
    bound = sum(tails.values()) / float(np.min(np.abs(diag)))
    return cat, bound


def _qmp_log_weight(theta: np.ndarray, a: float, ctx: QContext):
    """log w(theta) and sign for w = |(-e^(2i theta); q)_inf / (-a^2 e^(2i theta); q^2)_inf|^2.

    Each conjugate pair of factors is the real quadratic 1 + 2 t cos(2 theta) + t^2.
    """
    q = ctx.q
    c2 = np.cos(2 * theta)
    logs = np.zeros_like(theta)
    sign = np.ones_like(theta)
    tol = ctx.eps_term * 1e-3
    for t0, ratio, s in ((1.0, q, 1.0), (a * a, q * q, -1.0)):
        t = t0
        for _ in range(ctx.max_terms):
            if t < 0.5 and 2 * t / ((1 - t) ** 2 * (1 - ratio)) <= tol:
                break
            f = 1 + 2 * t * c2 + t * t
            zero = f <= 1e-300
            sign = np.where(zero, 0.0, sign)
            with np.errstate(divide="ignore"):
                logs = logs + s * np.log(np.where(zero, 1.0, f))
            t *= ratio
        else:
            raise NonConvergent("q-Meixner-Pollaczek weight product did not converge")
    return np.where(sign == 0, -math.inf, logs), sign


def _gram_continuous(rel: OrthoRelation, deg_max: int, degrees: list[int]):
    a = rel.family["a"]
    ctx = rel.ctx
    prev = None
    N = 32
    while N <= max(ctx.max_terms, 64):
        theta = -math.pi + 2 * math.pi * np.arange(N) / N
        lw, sw = _qmp_log_weight(theta, a, ctx)
        vals = rel.table(theta, deg_max)[:, degrees]
        G, _ = kernels.gram_accumulate(lw, sw, vals)
        G = G / N
        if prev is not None:
            scale = np.sqrt(np.outer(np.abs(np.diag(G)), np.abs(np.diag(G))))
            change = float(np.max(np.abs(G - prev) / scale))
            if change < ctx.eps_term:
                return G, change, N
        prev = G
        N *= 2
    raise NonConvergent(f"{rel.label}: trapezoidal rule did not settle within {ctx.max_terms} nodes")


def _measure(rel: OrthoRelation, degrees: list[int], branch: int | None = None):
    deg_max = max(degrees)
    if rel.kind == "continuous":
        G, bound, used = _gram_continuous(rel, deg_max, degrees)
        return G, bound, used
    (var, log_w, sign_w, br, _), bound = _collect(rel, deg_max, degrees)
    if branch is not None:
        keep = br == branch
        var = [v for v, k in zip(var, keep) if k]
        log_w, sign_w = log_w[keep], sign_w[keep]
    vals = rel.table(var, deg_max)[:, degrees]
    G, _ = kernels.gram_accumulate(log_w, sign_w, vals)
    return G, bound, len(var)


def gram(relation: OrthoRelation, n_max: int, ctx: QContext | None = None) -> GramReport:
    """Weighted inner products of the relation's polynomials up to degree n_max."""
    degrees = relation.degrees(n_max)
    G, bound, used = _measure(relation, degrees)
    G = relation.weight_factor * G
    rhs = [relation.rhs(n) for n in degrees]
    k = len(degrees)
    diag_err = max(abs(G[i, i] / rhs[i] - 1) for i in range(k))
    off = 0.0
    for i in range(k):
        for j in range(k):
            if i != j:
                off = max(off, abs(G[i, j]) / math.sqrt(abs(rhs[i] * rhs[j])))
    printed = None
    ratio = None
    if relation.rhs_printed_fn is not None:
        printed = [relation.rhs_printed(n) for n in degrees]
        ratio = [float(G[i, i] / relation.weight_factor / printed[i]) for i in range(k)]
    return GramReport(
        relation=relation.label,
        params=dict(relation.params),
        q=relation.ctx.q,
        degrees=degrees,
        entries=[[float(v) for v in row] for row in G],
        rhs_diag=rhs,
        max_offdiag_rel=off,
        max_diag_rel_err=diag_err,
        truncation_bound=bound,
        support_points_used=used,
        moment_problem=relation.moment_problem.value,
        weight_factor=relation.weight_factor,
        rhs_printed=printed,
        printed_ratio=ratio,
    )


def verify(relation: OrthoRelation, n_max: int, tol: float, ctx: QContext | None = None) -> GramReport:
    """Gram report annotated pass iff both deviations are within tol."""
    if not tol > relation.ctx.eps_term:
        raise DomainError(f"tol must exceed eps_term={relation.ctx.eps_term!r} (got {tol!r})")
    rep = gram(relation, n_max)
    rep.tol = tol
    rep.passed = bool(rep.max_offdiag_rel <= tol and rep.max_diag_rel_err <= tol)
    return rep


def branch_sums(relation: OrthoRelation, n_max: int) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """Per-branch Gram matrices (eps = +1 and eps = -1) of a signed-support relation."""
    if relation.id not in ("c-full", "ct-full"):
        raise DomainError(f"{relation.id} has no signed support")
    degrees = relation.degrees(n_max)
    plus, _, _ = _measure(relation, degrees, branch=1)
    minus, _, _ = _measure(relation, degrees, branch=-1)
    return plus, minus, degrees


# ---------------------------------------------------------------- default grids


def default_grid(rid: str, q: float) -> list[dict]:
    """Three in-domain parameter sets per relation (bilateral ones vary d)."""
    base, d = parse_relation_id(rid)
    lim = q**-2
    cgrid = [al for al in (0.5, 1.5, 3.0, 0.9 * lim, 0.5 * lim, 0.25 * lim) if al < lim][:3]
    grids = {
        "big-qjacobi": [dict(a=0.5, b=0.5, c=-0.5), dict(a=0.9 / q, b=0.7, c=-1.0), dict(a=0.3, b=0.75 / q, c=-2.0)],
        "little-qjacobi": [dict(a=0.5, b=0.5), dict(a=0.75 / q, b=-0.5), dict(a=0.8, b=0.9 / q)],
        "dual-little": [dict(a=0.7, b=0.4), dict(a=0.75 / q, b=-0.5), dict(a=0.5, b=0.6 / q)],
        "c": [dict(alpha=al) for al in cgrid],
        "ct": [dict(alpha=al) for al in (0.5, 2.0, 10.0)],
        "qmp-continuous": [dict(a=0.3), dict(a=0.5), dict(a=0.7)],
    }
    if base in BILATERAL_IDS:
        ds = [d] if d is not None else [q, math.sqrt(q), 0.95]
        return [dict(a=1.0, d=dd) for dd in ds]
    if base in ("c-even", "c-odd", "c-full", "d-even", "d-odd"):
        return grids["c"]
    if base in ("ct-even", "ct-odd", "ct-full", "dt-even", "dt-odd"):
        return grids["ct"]
    return grids[base]


def default_nmax(rid: str) -> int:
    base, _ = parse_relation_id(rid)
    return 5 if base in ("u-family", "dt-family", "qmp-continuous") else 8


def default_tol(rid: str) -> float:
    base, _ = parse_relation_id(rid)
    if base in BILATERAL_IDS:
        return 1e-7
    if base == "qmp-continuous":
        return 1e-6
    return 1e-8
