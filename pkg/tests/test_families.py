import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_jacobi

import oracles as O
from qortho.errors import DomainError
from qortho.families import (
    Family,
    FamilyParams,
    Method,
    big_q_jacobi,
    disc_ultra_C,
    disc_ultra_C_tilde,
    dual_big_D,
    dual_disc_D,
    dual_disc_D_at,
    dual_disc_D_tilde,
    dual_disc_D_tilde_at,
    dual_little_d,
    evaluate,
    jacobi_ratio,
    little_q_jacobi,
    q_mp_tilde,
    recurrence_coeffs,
    u_poly,
)
from qortho.qcore import QContext, phi_terminating


def ctx(q):
    return QContext(q)


# frozen at 100 digits by tests/oracles.py (complex-parameter series, no shared code)
FROZEN = [
    ("C", (3, 0.3, 0.5, 0.5), -0.007125000000000002),
    ("C", (7, -0.8, 1.5, 0.5), -0.12937629820275869),
    ("C", (12, 1.1, 0.5, 0.3), 3.1665473928370536),
    ("C", (10, 0.45, 3.0, 0.8), 0.75068162710405144),
    ("C_tilde", (3, 0.4, 2.0, 0.5), -0.071333333333333332),
    ("C_tilde", (8, -0.9, 10.0, 0.5), -0.024523769955769502),
    ("C_tilde", (11, 0.7, 0.5, 0.3), 0.016952653532938281),
    ("D", (3, 4, 0.5, 0.5), 7.0059775075604839),
    ("D", (6, 2, 1.5, 0.3), -2.6974932180437785),
    ("D_tilde", (3, 4, 2.0, 0.5), 3.469482421875),
    ("D_tilde", (8, 8, 10.0, 0.8), -0.0051962788893159577),
    ("qmp", (4, 0.7, 0.5, 0.5), -2.095757404451436),
    ("qmp", (9, -1.0, -3.0, 0.5), -62.920375088266527),
    ("qmp", (12, 0.3, 2.0, 0.3), -7.6616179841375854),
    ("u", (3, 0.25, 0.3535533905932738, 0.7071067811865476, 0.5), 0.21086392235835746),
    ("u", (5, -1.7, 0.4, 0.9, 0.36), 5.4658001837295927),
    ("big_q_jacobi", (4, 0.3, 0.5, 0.5, -0.5, 0.5), 0.0025399421296296288),
    ("big_q_jacobi", (6, 0.2, 1.8, 0.7, -1.0, 0.5), -0.00019693158696026873),
    ("little_q_jacobi", (5, 0.4, 0.5, 0.5, 0.5), -1.584274755859375),
    ("little_q_jacobi", (3, 2.0, 1.5, -0.5, 0.5), -220.08389423076923),
    ("dual_little_d", (4, 3, 0.7, 0.4, 0.5), -57.952389234630959),
]


def _package(name, args, method):
    *head, q = args
    c = ctx(q)
    if name == "C":
        return disc_ultra_C(*head, c, method=method)
    if name == "C_tilde":
        return disc_ultra_C_tilde(*head, c, method=method)
    if name == "D":
        return dual_disc_D(*head, c, method=method)
    if name == "D_tilde":
        return dual_disc_D_tilde(*head, c, method=method)
    if name == "qmp":
        return q_mp_tilde(*head, c, method=method)
    exact = True if method is Method.EXACT else None
    fn = {"u": u_poly, "big_q_jacobi": big_q_jacobi, "little_q_jacobi": little_q_jacobi,
          "dual_little_d": dual_little_d}[name]
    return fn(*head, c, exact=exact)


@pytest.mark.parametrize("name,args,want", FROZEN)
@pytest.mark.parametrize("method", [Method.SERIES, Method.EXACT, Method.RECURRENCE])
def test_frozen_values(name, args, want, method, backend):
    if method is Method.RECURRENCE and name not in ("C", "C_tilde", "D", "D_tilde", "qmp"):
        pytest.skip("series-only family")
    r = _package(name, args, method)
    tol = 1e-10 if method is Method.RECURRENCE else 1e-13
    assert r.value == pytest.approx(want, rel=tol, abs=1e-300)
    assert math.isfinite(r.est_error)


def test_frozen_values_match_live_oracle():
    fns = {"C": O.C, "C_tilde": O.C_tilde, "D": O.D, "D_tilde": O.D_tilde, "qmp": O.qmp, "u": O.u,
           "big_q_jacobi": O.big_q_jacobi, "little_q_jacobi": O.little_q_jacobi, "dual_little_d": O.dual_little_d}
    for name, args, want in FROZEN:
        n, *rest = args
        got = mp.re(fns[name](n, *[mp.mpf(a) for a in rest]))
        assert float(got) == pytest.approx(want, rel=1e-15)


# ---------------------------------------------------------------- trivial and closed-form values


@pytest.mark.parametrize("q", [0.3, 0.5, 0.8])
def test_degree_zero_is_one(q):
    c = ctx(q)
    assert big_q_jacobi(0, 0.3, 0.5, 0.5, -0.5, c).value == 1
    assert little_q_jacobi(0, 0.3, 0.5, 0.5, c).value == 1
    assert dual_big_D(0, 2, 0.5, 0.5, -0.5, c).value == 1
    assert dual_little_d(0, 2, 0.5, 0.5, c).value == 1
    assert u_poly(0, 0.4, 0.3, 0.7, c).value == 1
    for m in (Method.SERIES, Method.RECURRENCE):
        assert disc_ultra_C(0, 0.3, 0.5, c, m).value == 1
        assert disc_ultra_C_tilde(0, 0.3, 0.5, c, m).value == 1
        assert dual_disc_D(0, 2, 0.5, c, m).value == 1
        assert dual_disc_D_tilde(0, 2, 0.5, c, m).value == 1
        assert q_mp_tilde(0, 0.4, 0.5, c, m).value == 1


@given(x=st.floats(-2, 2), alpha=st.floats(0.05, 20), q=st.sampled_from([0.3, 0.5, 0.8]))
def test_degree_one_is_x(x, alpha, q):
    for m in (Method.SERIES, Method.RECURRENCE):
        assert disc_ultra_C(1, x, alpha, ctx(q), m).value == pytest.approx(x, rel=1e-13, abs=1e-15)
        assert disc_ultra_C_tilde(1, x, alpha, ctx(q), m).value == pytest.approx(x, rel=1e-13, abs=1e-15)


@given(theta=st.floats(-math.pi, math.pi), a=st.floats(-5, 5).filter(lambda v: abs(v) > 0.05))
def test_qmp_degree_one(theta, a):
    q = 0.5
    want = 2 * math.sin(theta) / (1 - q)
    for m in (Method.SERIES, Method.RECURRENCE):
        assert q_mp_tilde(1, theta, a, ctx(q), m).value == pytest.approx(want, rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("x", [-0.9, 0.0, 0.3, 1.4])
@pytest.mark.parametrize("alpha,q", [(0.5, 0.5), (1.5, 0.3), (3.0, 0.8)])
def test_C3_closed_form(x, alpha, q):
    want = x * phi_terminating([q**-2, alpha * q**5, x * x], [alpha * q * q, 0.0], q * q, q * q, 1)
    got = disc_ultra_C(3, x, alpha, ctx(q)).value
    assert got == pytest.approx(want, rel=1e-12, abs=1e-15)


def test_little_q_jacobi_small_cases():
    c = ctx(0.25)
    assert little_q_jacobi(4, 0.0, 0.5, 0.5, c).value == 1
    q, a, b, x = 0.25, 0.5, 0.5, 0.6
    two_term = 1 + (1 - 1 / q) * (1 - a * b * q * q) * q * x / ((1 - q) * (1 - a * q))
    assert little_q_jacobi(1, x, a, b, c).value == pytest.approx(two_term, rel=1e-14)


def test_u_degree_one_two_terms():
    q, s, t1, t2 = 0.5, 0.35, 0.4, 0.9
    e = s + math.sqrt(s * s + 1)
    # 3phi1: the m = 1 term carries the balance factor -1
    term = (1 - q * e / t1) * (1 + q / (e * t1)) * (1 - 1 / q) / ((1 + q * q / (t1 * t2)) * (1 - q))
    assert u_poly(1, s, t1, t2, ctx(q)).value == pytest.approx(1 - term * q * t1 / t2, rel=1e-13)


def test_big_q_jacobi_degree_two_explicit():
    q, a, b, c, x = 0.5, 0.6, 0.4, -0.7, 0.35
    total = 0.0
    for m in range(3):
        t = 1.0
        for j in range(m):
            t *= (1 - q ** (-2 + j)) * (1 - a * b * q ** (3 + j)) * (1 - x * q**j)
            t /= (1 - a * q ** (1 + j)) * (1 - c * q ** (1 + j)) * (1 - q ** (1 + j))
        total += t * q**m
    assert big_q_jacobi(2, x, a, b, c, ctx(q)).value == pytest.approx(total, rel=1e-14)


def test_dual_big_D_at_m0_and_specialization():
    q, a = 0.5, 0.7
    c = ctx(q)
    # q^0 annihilates every m >= 1 term
    assert dual_big_D(4, 0, 0.6, 0.4, -0.7, c).value == 1
    for n in range(6):
        for k in range(5):
            want = dual_disc_D(n, k, a * a, c, Method.SERIES).value
            assert dual_big_D(n, k, a, a, -a, c).value == pytest.approx(want, rel=1e-12, abs=1e-14)


@given(n=st.integers(0, 6), m=st.floats(-1.5, 3.5), a=st.floats(0.2, 1.5), b=st.floats(-1, 1.5))
@settings(max_examples=40)
def test_dual_little_d_off_lattice_oracle(n, m, a, b):
    q = 0.5
    got = dual_little_d(n, m, a, b, ctx(q), exact=True).value
    Q, M = mp.mpf(q), mp.mpf(m)
    want = O.phi([Q**-M, a * b * Q ** (M + 1), Q**-n], [b * Q], Q, Q**n / a, n)
    assert got == pytest.approx(float(want), rel=1e-12, abs=1e-12)


@given(n=st.integers(0, 9), x=st.floats(-1.5, 1.5), alpha=st.floats(0.1, 3.9), q=st.sampled_from([0.3, 0.5]))
@settings(max_examples=60)
def test_C_live_oracle(n, x, alpha, q):
    want = float(O.C(n, mp.mpf(x), mp.mpf(alpha), q))
    for m in (Method.SERIES, Method.RECURRENCE):
        got = disc_ultra_C(n, x, alpha, ctx(q), m).value
        assert got == pytest.approx(want, rel=1e-10, abs=1e-12)


@given(n=st.integers(0, 9), x=st.floats(-1.5, 1.5), alpha=st.floats(0.1, 20), q=st.sampled_from([0.3, 0.5, 0.8]))
@settings(max_examples=60)
def test_C_tilde_complex_oracle(n, x, alpha, q):
    # the oracle works with the complex definition; the package never leaves the reals
    want = float(O.C_tilde(n, mp.mpf(x), mp.mpf(alpha), q))
    for m in (Method.SERIES, Method.RECURRENCE):
        got = disc_ultra_C_tilde(n, x, alpha, ctx(q), m).value
        assert got == pytest.approx(want, rel=1e-10, abs=1e-12)


@given(n=st.integers(0, 9), theta=st.floats(-math.pi, math.pi), a=st.sampled_from([-3.0, -0.7, 0.5, 2.0]))
@settings(max_examples=60)
def test_qmp_complex_oracle(n, theta, a):
    want = float(O.qmp(n, theta, a, 0.5))
    for m in (Method.SERIES, Method.RECURRENCE):
        assert q_mp_tilde(n, theta, a, ctx(0.5), m).value == pytest.approx(want, rel=1e-10, abs=1e-10)


@given(n=st.integers(0, 8), s=st.floats(-3, 3), t1=st.floats(0.2, 2), t2=st.floats(0.2, 2))
@settings(max_examples=60)
def test_u_oracle_with_explicit_exponential(n, s, t1, t2):
    want = float(O.u(n, s, t1, t2, 0.5))
    assert u_poly(n, s, t1, t2, ctx(0.5)).value == pytest.approx(want, rel=1e-11, abs=1e-11)


# ---------------------------------------------------------------- parity and cross-method


@pytest.mark.parametrize("alpha", [0.5, 1.5, 3.0])
@pytest.mark.parametrize("q", [0.3, 0.5])
def test_parity(alpha, q):
    for n in range(11):
        for x in (0.15, 0.45, 0.9, 1.3):
            for fn in (disc_ultra_C, disc_ultra_C_tilde):
                for m in (Method.SERIES, Method.RECURRENCE):
                    plus = fn(n, x, alpha, ctx(q), m).value
                    minus = fn(n, -x, alpha, ctx(q), m).value
                    assert abs(minus - (-1) ** n * plus) <= 1e-12 * max(1.0, abs(plus))


CROSS = [
    (disc_ultra_C, [0.5, 1.5, 3.0], [-1.2, -0.4, 0.1, 0.7, 1.05]),
    (disc_ultra_C_tilde, [0.5, 2.0, 10.0], [-1.2, -0.4, 0.1, 0.7, 1.05]),
    (dual_disc_D, [0.5, 1.5, 3.0], [0, 1, 2, 5, 8, 1.5, -0.7]),
    (dual_disc_D_tilde, [0.5, 2.0, 10.0], [0, 1, 2, 5, 8, 1.5, -0.7]),
    (q_mp_tilde, [-3.0, 0.5, 5.0], [-math.pi / 3, 0.0, 0.4, math.pi / 3, 2.5]),
]


@pytest.mark.parametrize("fn,params,xs", CROSS)
@pytest.mark.parametrize("q", [0.3, 0.5, 0.8])
def test_series_recurrence_agree(fn, params, xs, q, backend):
    if fn is disc_ultra_C:
        params = [p for p in params if p < q**-2]
    for p in params:
        for x in xs:
            for n in range(13):
                s = fn(n, x, p, ctx(q), Method.SERIES)
                r = fn(n, x, p, ctx(q), Method.RECURRENCE)
                assert abs(s.value - r.value) <= 1e-10 * max(1.0, abs(r.value)), (p, x, n)


def test_adaptive_marks_exact_results():
    assert disc_ultra_C(12, 1.1, 0.5, ctx(0.3), Method.SERIES).method is Method.EXACT
    assert disc_ultra_C(2, 0.3, 0.5, ctx(0.5), Method.SERIES).method is Method.SERIES


def test_d_at_matches_lattice_coordinate():
    q, al = 0.5, 1.5
    c = ctx(q)
    for x in (0, 3, 1.25):
        M = q**-x + al * q ** (x + 1)
        for m in (Method.SERIES, Method.RECURRENCE):
            assert dual_disc_D_at(4, M, al, c, m).value == pytest.approx(dual_disc_D(4, x, al, c, m).value, rel=1e-12)
            Mt = q**-x - al * q ** (x + 1)
            assert dual_disc_D_tilde_at(4, Mt, al, c, m).value == pytest.approx(
                dual_disc_D_tilde(4, x, al, c, m).value, rel=1e-12)


# ---------------------------------------------------------------- degree via finite differences


def _diffs(vals):
    d = np.asarray(vals, dtype=float)
    out = []
    while len(d) > 1:
        d = np.diff(d)
        out.append(d)
    return out


def _m_from_mu(M, prod, q):
    # solve q^-m + prod q^(m+1) = M for the larger root y = q^-m
    y = (M + math.sqrt(M * M - 4 * prod * q)) / 2
    return -math.log(y) / math.log(q)


# (evaluator, centre, half-width at degree n); the dual families have leading
# coefficients of size q^(n^2) in the lattice variable, so their grids widen with n
FD_CASES = {
    "big-qjacobi": (lambda n, t: big_q_jacobi(n, t, 0.5, 0.5, -0.5, ctx(0.5)).value, 0, lambda n: 1),
    "little-qjacobi": (lambda n, t: little_q_jacobi(n, t, 0.5, 0.5, ctx(0.5)).value, 0, lambda n: 1),
    "c": (lambda n, t: disc_ultra_C(n, t, 0.5, ctx(0.5), Method.SERIES).value, 0, lambda n: 1),
    "ctilde": (lambda n, t: disc_ultra_C_tilde(n, t, 2.0, ctx(0.5), Method.SERIES).value, 0, lambda n: 1),
    "dual-big": (lambda n, t: dual_big_D(n, _m_from_mu(t, 0.25, 0.5), 0.5, 0.5, -0.5, ctx(0.5)).value,
                 "lattice", lambda n: 2.0**n),
    "dual-little": (lambda n, t: dual_little_d(n, _m_from_mu(t, 0.35, 0.5), 0.7, 0.5, ctx(0.5)).value,
                    "lattice", lambda n: 2.0**n),
    "d": (lambda n, t: dual_disc_D_at(n, t, 0.5, ctx(0.5), Method.SERIES).value, 4, lambda n: 2.0**n),
    "dtilde": (lambda n, t: dual_disc_D_tilde_at(n, t, 2.0, ctx(0.5), Method.SERIES).value, 0, lambda n: 2.0**n),
    "u": (lambda n, t: u_poly(n, t, 0.35, 0.7, ctx(0.5)).value, 0, lambda n: 2.0 ** (n / 2)),
    "qmp": (lambda n, t: q_mp_tilde(n, math.asin(t), 0.5, ctx(0.5), Method.SERIES).value, 0, lambda n: 1),
}


@pytest.mark.parametrize("family", sorted(FD_CASES))
def test_degree_by_finite_differences(family):
    f, centre, width = FD_CASES[family]
    for n in range(9):
        w = width(n)
        # real m needs mu >= 2 sqrt(prod q), below 1 here
        c0 = 1 + w if centre == "lattice" else centre
        grid = [c0 + w * (-1 + 2 * i / (n + 1)) for i in range(n + 2)]
        vals = [f(n, t) for t in grid]
        diffs = _diffs(vals)
        scale = max(abs(v) for v in vals)
        assert abs(diffs[n][0]) <= 1e-8 * scale, (family, n)
        if n > 0:
            assert abs(diffs[n - 1][0]) > 1e-8 * scale, (family, n)


# ---------------------------------------------------------------- recurrence structure


@pytest.mark.parametrize("alpha", [0.5, 2.0, 10.0])
def test_ctilde_A_at_least_one(alpha):
    a, _, c = recurrence_coeffs(Family.DISC_ULTRA_C_TILDE, {"alpha": alpha}, 0.5, 50)
    assert np.all(a >= 1)
    # C~_n = A~_n - 1, computed without the cancellation
    assert np.allclose(c, a - 1, rtol=0, atol=1e-15)
    assert np.all(c[1:] > 0) and c[0] == 0


def test_C_recurrence_coefficients():
    q, al = 0.5, 1.5
    a, b, c = recurrence_coeffs(Family.DISC_ULTRA_C, {"alpha": al}, q, 10)
    n = np.arange(10)
    A = (1 - al * q ** (n + 1)) / (1 - al * q ** (2 * n + 1))
    assert np.allclose(a, A, rtol=1e-15) and np.allclose(c, 1 - A, rtol=1e-12) and not b.any()


# ---------------------------------------------------------------- classical Jacobi reference


def test_jacobi_ratio_examples():
    assert jacobi_ratio(0, 0.3, 1.0, 2.0) == 1.0
    assert jacobi_ratio(1, 0.37, 1.5, 1.5) == pytest.approx(0.37, rel=1e-15)
    # P_2^(1,1)(x) = (15 x^2 - 3) / 4 and P_2^(1,1)(1) = 3
    assert jacobi_ratio(2, 0.5, 1.0, 1.0) == pytest.approx(0.0625, rel=1e-15)


@given(n=st.integers(0, 20), x=st.floats(-1, 1), a=st.floats(-0.9, 5), b=st.floats(-0.9, 5))
def test_jacobi_ratio_scipy(n, x, a, b):
    want = eval_jacobi(n, a, b, x) / eval_jacobi(n, a, b, 1.0)
    assert jacobi_ratio(n, x, a, b) == pytest.approx(want, rel=1e-9, abs=1e-11)


def test_big_q_jacobi_limit_example():
    q = 0.999
    got = big_q_jacobi(4, 0.3, q, q, -q, ctx(q)).value
    assert abs(got - jacobi_ratio(4, 0.3, 1, 1)) < 10 * (1 - q)


# ---------------------------------------------------------------- parameters and dispatch


@pytest.mark.parametrize("family,values", [
    ("c", dict(alpha=-0.1)),
    ("ctilde", dict(alpha=0.0)),
    ("u", dict(t1=0.5, t2=-0.5)),
    ("qmp", dict(a=0.0)),
    ("big-qjacobi", dict(a=0.5, b=0.5, c=0.0)),
])
def test_params_rejected(family, values):
    with pytest.raises(DomainError):
        FamilyParams.make(family, **values).check(0.5)


def test_params_orthogonality_domain():
    FamilyParams.make("c", alpha=3.9).check(0.5, orthogonality=True)
    with pytest.raises(DomainError, match="q\\^-2"):
        FamilyParams.make("c", alpha=4.2).check(0.5, orthogonality=True)
    FamilyParams.make("c", alpha=4.2).check(0.5)
    with pytest.raises(DomainError):
        FamilyParams.make("big-qjacobi", a=0.5, b=0.5, c=0.5).check(0.5, orthogonality=True)
    with pytest.raises(DomainError, match="missing"):
        FamilyParams.make("dual-little", a=0.5)
    with pytest.raises(DomainError, match="unknown"):
        FamilyParams.make("c", alpha=0.5, beta=1.0)


def test_evaluate_dispatch():
    c = ctx(0.5)
    fp = FamilyParams.make("c", alpha=0.5)
    assert evaluate(fp, 3, 0.3, c).value == pytest.approx(-0.007125, rel=1e-13)
    assert evaluate(fp, 3, 0.3, c, "series").method is Method.SERIES
    assert evaluate(fp, 3, 0.3, c, "series-exact").method is Method.EXACT
    with pytest.raises(DomainError, match="no recurrence"):
        evaluate(FamilyParams.make("u", t1=0.5, t2=0.5), 2, 0.1, c, "recurrence")
    with pytest.raises(DomainError):
        evaluate(fp, -1, 0.3, c)
