"""Pointwise checks of transformation identities and structural claims.

Every check runs on a fixed, enumerated grid and reports the largest
relative residual |lhs - rhs| / max(1, |lhs|) over it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .families import (
    Family,
    Method,
    big_q_jacobi,
    disc_ultra_C,
    disc_ultra_C_tilde,
    dual_disc_D,
    dual_disc_D_tilde,
    dual_disc_D_tilde_at,
    dual_little_d,
    jacobi_ratio,
    little_q_jacobi,
    q_mp_tilde,
    recurrence_coeffs,
    u_poly,
)
from .qcore import QContext, QMonomial, mu, phi_terminating, qbinomial_series, qpoch, qpoch_inf, qpower

ALGEBRAIC_TOL = 1e-9
PARITY_TOL = 1e-12
CROSS_TOL = 1e-10
# below this the q -> 1 error is treated as exact (rounding level)
LIMIT_FLOOR = 1e-12

X_PROBE = (-0.9, -0.45, -0.2, 0.0, 0.15, 0.3, 0.7, 1.1)
C_SHIFTS = (0.5, 1.0, 1.3, 2.0)

IDENTITY_IDS = (
    "prop1",
    "prop2",
    "singh15",
    "eq16",
    "eq19",
    "eq36",
    "lattice39",
    "favard:c",
    "favard:ctilde",
    "favard:qmp",
    "favard:c-outside",
    "limit-q1",
    "parity",
    "cross-method",
    "qbinomial",
    "mixed-parity",
    "mixed-parity:ct",
    "normalization-witness",
    "normalization-witness:ct",
)


@dataclass
class IdentityCheck:
    id: str
    residual: float
    tol: float
    grid: dict
    passed: bool = field(init=False)
    details: dict = field(default_factory=dict)
    cases: int = 0

    def __post_init__(self):
        self.passed = bool(self.residual <= self.tol)

    def as_dict(self) -> dict:
        return {
            "kind": "identity",
            "id": self.id,
            "residual": self.residual,
            "tol": self.tol,
            "pass": self.passed,
            "cases": self.cases,
            "grid": self.grid,
            "details": self.details,
        }


class _Residual:
    def __init__(self):
        self.worst = 0.0
        self.cases = 0
        self.where = None

    def add(self, lhs: float, rhs: float, where=None):
        r = abs(lhs - rhs) / max(1.0, abs(lhs))
        self.cases += 1
        if not r <= self.worst:
            self.worst = r
            self.where = where


def _ctx(q) -> QContext:
    return q if isinstance(q, QContext) else QContext.from_env(float(q))


def _phi(*args, **kw) -> float:
    # parameters are QMonomials in powers of q, so ill-conditioned sums can
    # fall back to exact summation
    return phi_terminating(*args, exact=None, **kw)


# ---------------------------------------------------------------- propositions


def check_prop1(alpha: float, q, ks=range(7), xs=X_PROBE) -> IdentityCheck:
    """C_2k and C_2k+1 against their little q-Jacobi forms in base q^2."""
    ctx = _ctx(q)
    q = ctx.q
    if not alpha > 0:
        raise DomainError(f"prop1: alpha must be > 0 (got {alpha!r})")
    q2 = ctx.squared()
    res = _Residual()
    for k in ks:
        tail = alpha**k / qpoch(alpha * q * q, q * q, k) * (-1) ** k * q ** (k * (k + 1))
        even = qpoch(q, q * q, k) * tail
        odd = qpoch(q**3, q * q, k) * tail
        for x in xs:
            y = QMonomial((x, x), -2, (alpha,))
            p_even = little_q_jacobi(k, y, qpower(-1), alpha, q2).value
            p_odd = little_q_jacobi(k, y, qpower(1), alpha, q2).value
            for method in (Method.SERIES, Method.RECURRENCE):
                res.add(disc_ultra_C(2 * k, x, alpha, ctx, method).value, even * p_even, (2 * k, x, method.value))
                res.add(disc_ultra_C(2 * k + 1, x, alpha, ctx, method).value, odd * x * p_odd,
                        (2 * k + 1, x, method.value))
    grid = {"alpha": alpha, "q": q, "k": list(ks), "x": list(xs)}
    return IdentityCheck("prop1", res.worst, ALGEBRAIC_TOL, grid, {"worst_at": res.where}, res.cases)


def check_prop2(alpha: float, q, ns=range(7), ks=range(7)) -> IdentityCheck:
    """D_n and D~_n on even/odd lattice points against the 3phi1 and dual little forms."""
    ctx = _ctx(q)
    q = ctx.q
    if not alpha > 0:
        raise DomainError(f"prop2: alpha must be > 0 (got {alpha!r})")
    q2 = ctx.squared()
    res = _Residual()
    for sg, fn in ((1.0, dual_disc_D), (-1.0, dual_disc_D_tilde)):
        sa = sg * alpha
        for n in ns:
            for k in ks:
                top = min(n, k)
                head = [qpower(-2 * k), qpower(-2 * n)]
                even = _phi(head + [QMonomial((sa,), 2 * k + 1)], [QMonomial((sa,), 2)], q2, qpower(2 * n + 1), top)
                odd = q**n * _phi(head + [QMonomial((sa,), 2 * k + 3)], [QMonomial((sa,), 2)], q2,
                                  qpower(2 * n - 1), top)
                dl_even = dual_little_d(n, k, qpower(-1), sa, q2).value
                dl_odd = q**n * dual_little_d(n, k, qpower(1), sa, q2).value
                for method in (Method.SERIES, Method.RECURRENCE):
                    lhs_e = fn(n, 2 * k, alpha, ctx, method).value
                    lhs_o = fn(n, 2 * k + 1, alpha, ctx, method).value
                    tag = "D" if sg > 0 else "Dtilde"
                    res.add(lhs_e, even, (tag, "even", n, k, method.value))
                    res.add(lhs_e, dl_even, (tag, "even-dual-little", n, k, method.value))
                    res.add(lhs_o, odd, (tag, "odd", n, k, method.value))
                    res.add(lhs_o, dl_odd, (tag, "odd-dual-little", n, k, method.value))
    grid = {"alpha": alpha, "q": q, "n": list(ns), "k": list(ks)}
    return IdentityCheck("prop2", res.worst, ALGEBRAIC_TOL, grid, {"worst_at": res.where}, res.cases)


# ---------------------------------------------------------------- transformations

SINGH_GRID = ((0.25, 0.5), (0.3, 1.7), (-0.4, 0.6), (0.25, 0.0))


def check_singh(q, pairs=SINGH_GRID, ns=range(7)) -> IdentityCheck:
    """Terminating quadratic transformation with c = q^-n, both sides terminating."""
    ctx = _ctx(q)
    q = ctx.q
    res = _Residual()
    q2 = ctx.squared()
    for a2, b2 in pairs:
        for n in ns:
            # denominators a b q^(1/2), -a b q^(1/2) enter as the pair product -a^2 b^2 q
            lhs = _phi([a2, b2, qpower(-n)], [], ctx, qpower(1), n, den_pairs=[(0.0, QMonomial((-a2, b2), 1))])
            rhs = _phi([a2, b2, qpower(-2 * n)], [QMonomial((a2, b2), 1), 0.0], q2, qpower(2), n)
            res.add(lhs, rhs, (a2, b2, n))
    grid = {"q": q, "a2_b2": [list(p) for p in pairs], "n": list(ns)}
    return IdentityCheck("singh15", res.worst, ALGEBRAIC_TOL, grid, {"worst_at": res.where}, res.cases)


EQ16_GRID = ((0.3, 0.7, 0.5), (-0.4, 0.2, 1.3), (0.6, -0.5, -0.8), (0.3, 0.7, 0.0))


def check_eq16(q, triples=EQ16_GRID, ns=range(7)) -> IdentityCheck:
    """2phi1(q^-n, b; c; q, z) against its 3phi2 transform."""
    ctx = _ctx(q)
    q = ctx.q
    res = _Residual()
    for b, c, z in triples:
        for n in ns:
            lhs = _phi([qpower(-n), b], [c], ctx, z, n)
            pre = qpoch(c / b, q, n) / qpoch(c, q, n)
            rhs = pre * _phi([qpower(-n), b, QMonomial((b, z), -n, (c,))], [QMonomial((b,), 1 - n, (c,)), 0.0],
                             ctx, qpower(1), n)
            res.add(lhs, rhs, (b, c, z, n))
    grid = {"q": q, "b_c_z": [list(t) for t in triples], "n": list(ns)}
    return IdentityCheck("eq16", res.worst, ALGEBRAIC_TOL, grid, {"worst_at": res.where}, res.cases)


def check_eq19(alpha: float, q, ks=range(7), xs=X_PROBE) -> IdentityCheck:
    """Odd-degree quadratic transformation; also checks oddness of the left side."""
    ctx = _ctx(q)
    q = ctx.q
    q2 = ctx.squared()
    res = _Residual()
    odd = 0.0
    for k in ks:
        for x in xs:
            def lhs_at(t):
                return _phi(
                    [qpower(-2 * k - 1), QMonomial((alpha,), 2 * k + 2), t], [], ctx, qpower(1), 2 * k + 1,
                    den_pairs=[(0.0, QMonomial((-alpha,), 2))],
                )

            lhs = lhs_at(x)
            rhs = x * _phi([qpower(-2 * k), QMonomial((alpha,), 2 * k + 3), QMonomial((x, x))],
                           [QMonomial((alpha,), 2), 0.0], q2, qpower(2), k)
            res.add(lhs, rhs, (k, x))
            odd = max(odd, abs(lhs_at(-x) + lhs) / max(1.0, abs(lhs)))
    grid = {"alpha": alpha, "q": q, "k": list(ks), "x": list(xs)}
    worst = max(res.worst, odd)
    return IdentityCheck("eq19", worst, ALGEBRAIC_TOL, grid,
                         {"worst_at": res.where, "oddness_residual": odd}, res.cases)


def check_eq36(a: float, q, c_shifts=C_SHIFTS, ks=range(7), ns=range(7)) -> IdentityCheck:
    """3phi2 with (i a q, -i a q) denominators against the base-q^2 3phi1, with shifted numerators.

    The shifted numerator parameters c^-1 q^-2k and -c a^2 q^(2k+1) are passed
    separately, so agreement for every c is a genuine check. The factor
    identity behind the shift argument is checked alongside.
    """
    ctx = _ctx(q)
    q = ctx.q
    q2 = ctx.squared()
    res = _Residual()
    factor = 0.0
    by_c = {}
    for cs in c_shifts:
        part = _Residual()
        for k in ks:
            alpha_p = q ** (-2 * k) / cs
            beta_p = -cs * a * a * q ** (2 * k + 1)
            mu_c = alpha_p + beta_p
            for m in range(7):
                direct = qpoch(alpha_p, q, m) * qpoch(beta_p, q, m)
                via_mu = math.prod(1 - a * a * q ** (2 * j + 1) - q**j * mu_c for j in range(m))
                factor = max(factor, abs(direct - via_mu) / max(1.0, abs(direct)))
            for n in ns:
                pa = QMonomial((1.0,), -2 * k, (cs,))
                pb = QMonomial((-cs, a, a), 2 * k + 1)
                lhs = _phi([qpower(-n), pa, pb], [], ctx, QMonomial((-1.0,), n + 1), n,
                           den_pairs=[(0.0, QMonomial((a, a), 2))])
                rhs = _phi([qpower(-2 * n), pa, pb], [QMonomial((-a, a), 2)], q2, qpower(2 * n + 1), n)
                res.add(lhs, rhs, (cs, k, n))
                part.add(lhs, rhs)
        by_c[repr(cs)] = part.worst
    grid = {"a": a, "q": q, "c_shift": list(c_shifts), "k": list(ks), "n": list(ns)}
    worst = max(res.worst, factor)
    return IdentityCheck("eq36", worst, ALGEBRAIC_TOL, grid,
                         {"worst_at": res.where, "factor_identity_residual": factor, "residual_by_c_shift": by_c},
                         res.cases)


def lattice_point(k: int, a: float, d: float, q: float) -> float:
    """x_k^(d) with mu(x_k; -a) = sqrt(a q) (q^-2k / d - d q^2k)."""
    return 2 * k + math.log(d / math.sqrt(a * q)) / math.log(q)


def lattice_point_printed(k: int, a: float, d: float, q: float) -> float:
    return 2 * k + math.log(math.sqrt(a * q) / d) / math.log(q)


def check_lattice39(a: float, q, d: float, ks=range(-3, 7), ns=range(7)) -> IdentityCheck:
    """D~_n at the d-lattice: recurrence, the 3phi2 form, and the u-family in base q^2."""
    ctx = _ctx(q)
    q = ctx.q
    if not (a > 0 and q * q <= d < 1):
        raise DomainError(f"lattice39: need a > 0 and q^2 <= d < 1 (got a={a!r}, d={d!r})")
    q2 = ctx.squared()
    t1, t2 = math.sqrt(q**3 / a), math.sqrt(q / a)
    res = _Residual()
    mu_res = 0.0
    printed_res = 0.0
    for k in ks:
        target = math.sqrt(a * q) * (q ** (-2 * k) / d - d * q ** (2 * k))
        M = mu(lattice_point(k, a, d, q), -a, ctx).mu
        mu_res = max(mu_res, abs(M - target) / max(1.0, abs(target)))
        Mp = mu(lattice_point_printed(k, a, d, q), -a, ctx).mu
        printed_res = max(printed_res, abs(Mp - target) / max(1.0, abs(target)))
        s = (q ** (-2 * k) / d - d * q ** (2 * k)) / 2
        for n in ns:
            rec = dual_disc_D_tilde_at(n, target, a, ctx, Method.RECURRENCE).value
            ser = dual_disc_D_tilde_at(n, target, a, ctx, Method.SERIES).value
            u = u_poly(n, s, t1, t2, q2).value
            res.add(rec, ser, (k, n, "series"))
            res.add(rec, u, (k, n, "u"))
    grid = {"a": a, "q": q, "d": d, "k": list(ks), "n": list(ns)}
    worst = max(res.worst, mu_res)
    return IdentityCheck("lattice39", worst, ALGEBRAIC_TOL, grid,
                         {"worst_at": res.where, "lattice_mu_residual": mu_res,
                          "printed_lattice_mu_residual": printed_res}, res.cases)


# ---------------------------------------------------------------- structure


def check_favard(family: str, param: float, q, n_max: int = 200) -> IdentityCheck:
    """A_n C_(n+1) > 0 for n <= n_max; residual is the number of violations."""
    ctx = _ctx(q)
    q = ctx.q
    fam = {"c": Family.DISC_ULTRA_C, "ctilde": Family.DISC_ULTRA_C_TILDE, "qmp": Family.Q_MEIXNER_POLLACZEK}.get(family)
    if fam is None:
        raise DomainError(f"favard: family must be one of c, ctilde, qmp (got {family!r})")
    key = "a" if fam is Family.Q_MEIXNER_POLLACZEK else "alpha"
    a, _, c = recurrence_coeffs(fam, {key: param}, q, n_max + 2)
    prod = a[: n_max + 1] * c[1 : n_max + 2]
    bad = int(np.sum(~(prod > 0)))
    details = {"min_product": float(np.min(prod)), "first_violation": None}
    if bad:
        details["first_violation"] = int(np.argmax(~(prod > 0)))
    if fam is Family.DISC_ULTRA_C_TILDE:
        details["min_A"] = float(np.min(a[: n_max + 1]))
        bad += int(np.sum(a[: n_max + 1] < 1))
    if fam is Family.DISC_ULTRA_C:
        details["in_domain"] = bool(0 < param < q**-2)
    grid = {key: param, "q": q, "n_max": n_max}
    return IdentityCheck(f"favard:{family}", float(bad), 0.0, grid, details, n_max + 1)


def check_limit_q1(alpha_exp: float, n: int, x: float, q_list=(0.9, 0.99, 0.999)) -> IdentityCheck:
    """Big q-Jacobi with a = b = q^alpha, c = -q^alpha against the Jacobi ratio as q -> 1.

    Passes when the error is non-increasing along q_list (strictly decreasing
    unless already at rounding level) and below 0.01 at the last q.
    """
    target = jacobi_ratio(n, x, alpha_exp, alpha_exp)
    errs = []
    for q in q_list:
        ctx = QContext.from_env(q)
        t = q**alpha_exp
        errs.append(abs(big_q_jacobi(n, x, t, t, -t, ctx).value - target))
    ok = errs[-1] < 0.01
    for e_prev, e in zip(errs, errs[1:]):
        if e <= LIMIT_FLOOR:
            continue
        ok = ok and e < e_prev
    grid = {"alpha_exp": alpha_exp, "n": n, "x": x, "q": list(q_list)}
    return IdentityCheck("limit-q1", 0.0 if ok else 1.0, 0.0, grid, {"errors": errs, "target": target}, len(errs))


def check_parity(alpha: float, q, ns=range(11), xs=X_PROBE) -> IdentityCheck:
    """C_n(-x) = (-1)^n C_n(x) and the same for C~, both evaluation paths."""
    ctx = _ctx(q)
    res = _Residual()
    for fn in (disc_ultra_C, disc_ultra_C_tilde):
        for method in (Method.SERIES, Method.RECURRENCE):
            for n in ns:
                for x in xs:
                    res.add(fn(n, -x, alpha, ctx, method).value, (-1) ** n * fn(n, x, alpha, ctx, method).value,
                            (fn.__name__, method.value, n, x))
    grid = {"alpha": alpha, "q": ctx.q, "n": list(ns), "x": list(xs)}
    return IdentityCheck("parity", res.worst, PARITY_TOL, grid, {"worst_at": res.where}, res.cases)


CROSS_GRID = {
    "c": ((0.5, 1.5, 3.0), X_PROBE),
    "ctilde": ((0.5, 2.0, 10.0), X_PROBE),
    "d": ((0.5, 1.5, 3.0), tuple(range(9))),
    "dtilde": ((0.5, 2.0, 10.0), tuple(range(9))),
    "qmp": ((0.5, 2.0, -3.0), (0.0, math.pi / 3, -math.pi / 3, 1.0)),
}


def check_cross_method(q, n_max: int = 12, grid=CROSS_GRID) -> IdentityCheck:
    """Series against recurrence for every family that has both paths."""
    ctx = _ctx(q)
    fns = {"c": disc_ultra_C, "ctilde": disc_ultra_C_tilde, "d": dual_disc_D, "dtilde": dual_disc_D_tilde, "qmp": q_mp_tilde}
    res = _Residual()
    per = {}
    for name, (params, points) in grid.items():
        part = _Residual()
        for p in params:
            for x in points:
                for n in range(n_max + 1):
                    s = fns[name](n, x, p, ctx, Method.SERIES).value
                    r = fns[name](n, x, p, ctx, Method.RECURRENCE).value
                    res.add(r, s, (name, p, x, n))
                    part.add(r, s)
        per[name] = part.worst
    shown = {k: {"params": list(v[0]), "points": list(v[1])} for k, v in grid.items()}
    return IdentityCheck("cross-method", res.worst, CROSS_TOL, {"q": ctx.q, "n_max": n_max, "families": shown},
                         {"worst_at": res.where, "by_family": per}, res.cases)


def check_qbinomial(alpha: float, q) -> IdentityCheck:
    """k = 0 diagonal of the even C relation: Gram sum, closed-form product, and direct series."""
    from .ortho import gram, make_relation

    ctx = _ctx(q)
    q = ctx.q
    rel = make_relation("c-even", {"alpha": alpha}, ctx)
    g00 = gram(rel, 0).entries[0][0]
    q2 = ctx.squared()
    closed = qpoch_inf(alpha * q**3, q2).value / qpoch_inf(q, q2).value
    series, tail = qbinomial_series(alpha * q * q, q * q, q, ctx)
    r = max(abs(g00 / closed - 1), abs(series / closed - 1))
    return IdentityCheck("qbinomial", r, 1e-10, {"alpha": alpha, "q": q},
                         {"gram_00": g00, "closed_form": closed, "qbinomial_sum": series, "series_tail": tail}, 1)


def check_mixed_parity(alpha: float, q, n_max: int = 8, tilde: bool = False) -> IdentityCheck:
    """Signed support: eps = +1 and eps = -1 even-odd partial sums cancel.

    Also records the single-sign witness |<C_0, C_1>| / sqrt(rhs_0 rhs_1),
    which must exceed 1e-3 (the one-sided lattice alone is not enough).
    """
    from .ortho import branch_sums, gram, make_relation

    ctx = _ctx(q)
    fam = "ct" if tilde else "c"
    rel = make_relation(f"{fam}-full", {"alpha": alpha}, ctx)
    plus, minus, degrees = branch_sums(rel, n_max)
    worst = 0.0
    for i, di in enumerate(degrees):
        for j, dj in enumerate(degrees):
            if (di + dj) % 2:
                worst = max(worst, abs(plus[i, j] + minus[i, j]) / max(abs(plus[i, j]), 1e-300))
    single = make_relation(f"{fam}-even", {"alpha": alpha}, ctx)
    # <C_0, C_1> on the one-sided lattice: the even relation's support with degrees 0 and 1
    from .ortho import _measure

    G, _, _ = _measure(single, [0, 1])
    witness = abs(G[0, 1]) / math.sqrt(rel.rhs(0) * rel.rhs(1))
    ok_witness = witness > 1e-3
    details = {"cancellation_residual": worst, "single_sign_witness": witness, "witness_threshold": 1e-3}
    r = worst if ok_witness else math.inf
    return IdentityCheck(f"mixed-parity{':ct' if tilde else ''}", r, PARITY_TOL,
                         {"alpha": alpha, "q": ctx.q, "n_max": n_max}, details, len(degrees) ** 2)


def check_normalization_witness(alpha: float, q, n_max: int = 8, tilde: bool = False) -> IdentityCheck:
    """Signed-support diagonal against the uncorrected right-hand side: ratio 2 for every n."""
    from .ortho import gram, make_relation

    ctx = _ctx(q)
    rid = "ct-full" if tilde else "c-full"
    rep = gram(make_relation(rid, {"alpha": alpha}, ctx), n_max)
    dev = max(abs(r - 2.0) for r in rep.printed_ratio)
    return IdentityCheck(f"normalization-witness{':ct' if tilde else ''}", dev, 1e-6, {"alpha": alpha, "q": ctx.q, "n_max": n_max},
                         {"printed_ratio": rep.printed_ratio, "corrected_diag_rel_err": rep.max_diag_rel_err}, len(rep.degrees))


def check_favard_outside(q, factor: float = 1.01, n_max: int = 200) -> IdentityCheck:
    """The C family just outside 0 < alpha < q^-2 must violate Favard positivity.

    Passes when at least one violation is found; the underlying favard:c
    result is kept in the details.
    """
    ctx = _ctx(q)
    alpha = factor * ctx.q**-2
    inner = check_favard("c", alpha, ctx, n_max)
    found = inner.residual > 0
    details = {"alpha": alpha, "violations": int(inner.residual), "expected": "violation", **inner.details}
    return IdentityCheck("favard:c-outside", 0.0 if found else 1.0, 0.0, inner.grid, details, inner.cases)


# ---------------------------------------------------------------- dispatch

LIMIT_GRID = {"n": range(5), "alpha_exp": (0.5, 1.0), "x": (0.0, 0.3, -0.3)}


def check_limit_grid(grid=LIMIT_GRID) -> IdentityCheck:
    """check_limit_q1 over the whole grid; residual is the number of failing points."""
    bad = []
    errs = {}
    cases = 0
    for n in grid["n"]:
        for ae in grid["alpha_exp"]:
            for x in grid["x"]:
                r = check_limit_q1(ae, n, x)
                cases += 1
                errs[f"n={n},alpha_exp={ae!r},x={x!r}"] = r.details["errors"]
                if not r.passed:
                    bad.append((n, ae, x))
    shown = {k: list(v) for k, v in grid.items()}
    return IdentityCheck("limit-q1", float(len(bad)), 0.0, shown, {"failing": bad, "errors": errs}, cases)


def run_identity(iid: str, q, *, alpha=None, a=None, d=None, c_shift=None, n=None, x=None, n_max=None) -> IdentityCheck:
    """Run one identity check by catalog id; unset options take the documented defaults."""
    ctx = _ctx(q)
    base, _, fam = iid.partition(":")
    al = 0.5 if alpha is None else alpha
    if base == "prop1":
        return check_prop1(al, ctx)
    if base == "prop2":
        return check_prop2(al, ctx)
    if base == "singh15":
        return check_singh(ctx)
    if base == "eq16":
        return check_eq16(ctx)
    if base == "eq19":
        return check_eq19(al, ctx)
    if base == "eq36":
        shifts = C_SHIFTS if c_shift is None else (c_shift,)
        return check_eq36(0.8 if a is None else a, ctx, shifts)
    if base == "lattice39":
        return check_lattice39(1.0 if a is None else a, ctx, ctx.q if d is None else d)
    if base == "favard":
        if fam == "c-outside":
            return check_favard_outside(ctx, n_max=200 if n_max is None else n_max)
        if fam == "qmp":
            param = 0.5 if a is None else a
        else:
            param = al
        return check_favard(fam, param, ctx, 200 if n_max is None else n_max)
    if base == "limit-q1":
        if n is None and x is None and alpha is None:
            return check_limit_grid()
        return check_limit_q1(1.0 if alpha is None else alpha, 4 if n is None else n, 0.3 if x is None else x)
    if base == "parity":
        return check_parity(al, ctx)
    if base == "cross-method":
        return check_cross_method(ctx, 12 if n_max is None else n_max)
    if base == "qbinomial":
        return check_qbinomial(al, ctx)
    if base == "mixed-parity":
        return check_mixed_parity(al, ctx, 8 if n_max is None else n_max, tilde=fam == "ct")
    if base == "normalization-witness":
        return check_normalization_witness(al, ctx, 8 if n_max is None else n_max, tilde=fam == "ct")
    raise DomainError(f"unknown identity id {iid!r}; expected one of {', '.join(IDENTITY_IDS)}")


def default_suite(q) -> list[tuple[str, dict]]:
    """(identity id, options) pairs making up the full identity suite at base q."""
    from .ortho import default_grid

    ctx = _ctx(q)
    c_alphas = [g["alpha"] for g in default_grid("c-even", ctx.q)]
    ct_alphas = [g["alpha"] for g in default_grid("ct-even", ctx.q)]
    suite = []
    for al in c_alphas:
        suite += [("prop1", {"alpha": al}), ("prop2", {"alpha": al}), ("eq19", {"alpha": al}),
                  ("parity", {"alpha": al}), ("qbinomial", {"alpha": al})]
    suite += [("singh15", {}), ("eq16", {}), ("eq36", {"a": 0.8})]
    for dd in (ctx.q, math.sqrt(ctx.q), 0.95):
        suite.append(("lattice39", {"a": 1.0, "d": dd}))
    suite += [("favard:c", {"alpha": al}) for al in c_alphas]
    suite += [("favard:ctilde", {"alpha": al}) for al in ct_alphas]
    suite += [("favard:qmp", {"a": aa}) for aa in (-3.0, 0.5, 5.0)]
    suite += [("favard:c-outside", {}), ("limit-q1", {}), ("cross-method", {})]
    suite += [("mixed-parity", {"alpha": 0.5}), ("mixed-parity:ct", {"alpha": 0.5}),
              ("normalization-witness", {"alpha": 0.5}), ("normalization-witness:ct", {"alpha": 0.5})]
    return suite
