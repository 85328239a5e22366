"""Pure-Python reference kernels.

Same call signatures as the compiled ``_ckernels`` module. Sums use
``math.fsum`` (correctly rounded); the compiled version uses Neumaier
compensation, so the two agree to a few ulps rather than bitwise. The
recurrence kernel performs identical IEEE operations in both and is
bit-identical.
"""
import math

import numpy as np

# |factor| at or below this (relative to the factor's magnitude) counts as a pole
POLE_RTOL = 64 * 2.0**-52


def phi_sum(num, den, num_pairs, den_pairs, z, n, q, balance):
    """Sum a terminating basic hypergeometric series by term ratios.

    ``num``/``den`` are real parameters, ``*_pairs`` are (S, P) tuples
    standing for the factor 1 - S q^j + P q^2j (a pair of conjugate or
    opposite parameters). ``balance`` is the exponent 1 + s - r of the
    (-1)^m q^(m(m-1)/2) convention factor. Returns (sum, sum of |terms|).
    """
    terms = [1.0]
    t = 1.0
    qm = 1.0
    for m in range(n):
        r = z
        for a in num:
            r *= 1.0 - a * qm
        for s, p in num_pairs:
            r *= 1.0 - s * qm + p * qm * qm
        d = 1.0 - q * qm
        for b in den:
            f = 1.0 - b * qm
            if abs(f) <= POLE_RTOL * max(1.0, abs(b * qm)):
                raise ZeroDivisionError(f"denominator parameter {b!r} has a zero at m={m}")
            d *= f
        for s, p in den_pairs:
            f = 1.0 - s * qm + p * qm * qm
            if abs(f) <= POLE_RTOL * max(1.0, abs(s * qm), abs(p * qm * qm)):
                raise ZeroDivisionError(f"denominator pair {(s, p)!r} has a zero at m={m}")
            d *= f
        for _ in range(balance):
            r *= -qm
        for _ in range(-balance):
            r /= -qm
        t = t * r / d
        terms.append(t)
        qm *= q
    return math.fsum(terms), math.fsum(abs(x) for x in terms)


def recurrence_table(x, a, b, c):
    """Values p_0..p_N at every point for x p_n = a_n p_{n+1} + b_n p_n + c_n p_{n-1}.

    p_{-1} = 0 and p_0 = 1. Returns an array of shape (len(x), N + 1).
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    N = len(a)
    out = np.empty((x.shape[0], N + 1))
    out[:, 0] = 1.0
    prev = np.zeros_like(x)
    for n in range(N):
        out[:, n + 1] = ((x - b[n]) * out[:, n] - c[n] * prev) / a[n]
        prev = out[:, n]
    return out


def log_qpoch_inf(a, q, eps, max_terms):
    """log|(a;q)_inf| with sign and a relative truncation bound.

    Returns (log_abs, sign, tail_bound, terms_used, converged). The tail
    after J factors satisfies |log prod_{j>=J}| <= t / ((1-q)(1-t)) with
    t = |a| q^J < 1.
    """
    logs = []
    sign = 1
    f = a
    for j in range(max_terms + 1):
        t = abs(f)
        if t < 0.5:
            bound = t / ((1.0 - q) * (1.0 - t))
            if bound <= eps:
                return math.fsum(logs), sign, math.expm1(bound), j, True
        g = 1.0 - f
        if abs(g) <= POLE_RTOL:
            return -math.inf, 0, 0.0, j, True
        if g < 0.0:
            sign = -sign
        logs.append(math.log1p(-f) if t < 0.5 else math.log(abs(g)))
        f *= q
    return math.fsum(logs), sign, math.inf, max_terms, False


def gram_accumulate(log_w, sign_w, values):
    """Weighted Gram matrix sum_s sign_s exp(log_w_s) v_si v_sj.

    Each row is pre-scaled by exp(log_w/2) so that huge weights against tiny
    values (or the reverse) do not overflow. Summation runs over s in the
    given order. Returns (G, A) with A the same sum of absolute values.
    """
    values = np.asarray(values, dtype=np.float64)
    npts, k = values.shape
    scale = np.exp(0.5 * np.asarray(log_w, dtype=np.float64))
    u = values * scale[:, None]
    sgn = np.asarray(sign_w, dtype=np.float64)
    G = np.zeros((k, k))
    A = np.zeros((k, k))
    for i in range(k):
        for j in range(i, k):
            prods = sgn * u[:, i] * u[:, j]
            G[i, j] = G[j, i] = math.fsum(prods)
            A[i, j] = A[j, i] = math.fsum(np.abs(prods))
    return G, A
