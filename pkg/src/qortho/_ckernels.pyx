# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pykernels`` for the reference semantics."""
from libc.math cimport fabs, log, log1p, expm1, exp, INFINITY
import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double POLE_RTOL = 64 * 2.0**-52


cdef inline void _neumaier(double x, double* s, double* c) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def phi_sum(num, den, num_pairs, den_pairs, double z, int n, double q, int balance):
    cdef cnp.ndarray[double] na = np.asarray(num, dtype=np.float64).reshape(-1)
    cdef cnp.ndarray[double] da = np.asarray(den, dtype=np.float64).reshape(-1)
    cdef cnp.ndarray[double, ndim=2] npr = np.asarray(num_pairs, dtype=np.float64).reshape(-1, 2)
    cdef cnp.ndarray[double, ndim=2] dpr = np.asarray(den_pairs, dtype=np.float64).reshape(-1, 2)
    cdef Py_ssize_t i, nn = na.shape[0], nd = da.shape[0], nnp = npr.shape[0], ndp = dpr.shape[0]
    cdef double t = 1.0, qm = 1.0, r, d, f, s, p, bq
    cdef double sm = 1.0, cm = 0.0, sa = 1.0, ca = 0.0
    cdef int m, k
    for m in range(n):
        r = z
        for i in range(nn):
            r *= 1.0 - na[i] * qm
        for i in range(nnp):
            r *= 1.0 - npr[i, 0] * qm + npr[i, 1] * qm * qm
        d = 1.0 - q * qm
        for i in range(nd):
            bq = da[i] * qm
            f = 1.0 - bq
            if fabs(f) <= POLE_RTOL * max(1.0, fabs(bq)):
                raise ZeroDivisionError(f"denominator parameter {da[i]!r} has a zero at m={m}")
            d *= f
        for i in range(ndp):
            s = dpr[i, 0] * qm
            p = dpr[i, 1] * qm * qm
            f = 1.0 - s + p
            if fabs(f) <= POLE_RTOL * max(1.0, max(fabs(s), fabs(p))):
                raise ZeroDivisionError(f"denominator pair {(dpr[i, 0], dpr[i, 1])!r} has a zero at m={m}")
            d *= f
        if balance > 0:
            for k in range(balance):
                r *= -qm
        elif balance < 0:
            for k in range(-balance):
                r /= -qm
        t = t * r / d
        _neumaier(t, &sm, &cm)
        _neumaier(fabs(t), &sa, &ca)
        qm *= q
    return sm + cm, sa + ca


def recurrence_table(x, a, b, c):
    cdef cnp.ndarray[double] xa = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[double] aa = np.ascontiguousarray(a, dtype=np.float64)
    cdef cnp.ndarray[double] ba = np.ascontiguousarray(b, dtype=np.float64)
    cdef cnp.ndarray[double] ca = np.ascontiguousarray(c, dtype=np.float64)
    cdef Py_ssize_t npts = xa.shape[0], N = aa.shape[0], i, n
    cdef cnp.ndarray[double, ndim=2] out = np.empty((npts, N + 1))
    cdef double prev, cur, nxt
    for i in range(npts):
        out[i, 0] = 1.0
        prev = 0.0
        cur = 1.0
        for n in range(N):
            nxt = ((xa[i] - ba[n]) * cur - ca[n] * prev) / aa[n]
            out[i, n + 1] = nxt
            prev = cur
            cur = nxt
    return out


def log_qpoch_inf(double a, double q, double eps, int max_terms):
    cdef double f = a, t, g, bound
    cdef double s = 0.0, c = 0.0
    cdef int sign = 1, j
    for j in range(max_terms + 1):
        t = fabs(f)
        if t < 0.5:
            bound = t / ((1.0 - q) * (1.0 - t))
            if bound <= eps:
                return s + c, sign, expm1(bound), j, True
        g = 1.0 - f
        if fabs(g) <= POLE_RTOL:
            return -INFINITY, 0, 0.0, j, True
        if g < 0.0:
            sign = -sign
        if t < 0.5:
            _neumaier(log1p(-f), &s, &c)
        else:
            _neumaier(log(fabs(g)), &s, &c)
        f *= q
    return s + c, sign, INFINITY, max_terms, False


def gram_accumulate(log_w, sign_w, values):
    cdef cnp.ndarray[double, ndim=2] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef cnp.ndarray[double] lw = np.ascontiguousarray(log_w, dtype=np.float64)
    cdef cnp.ndarray[double] sw = np.ascontiguousarray(sign_w, dtype=np.float64)
    cdef Py_ssize_t npts = v.shape[0], k = v.shape[1], s, i, j
    cdef cnp.ndarray[double, ndim=2] u = np.empty((npts, k))
    cdef cnp.ndarray[double, ndim=2] G = np.zeros((k, k))
    cdef cnp.ndarray[double, ndim=2] A = np.zeros((k, k))
    cdef double sc, gs, gc, as_, ac, pr
    for s in range(npts):
        sc = exp(0.5 * lw[s])
        for i in range(k):
            u[s, i] = v[s, i] * sc
    for i in range(k):
        for j in range(i, k):
            gs = 0.0
            gc = 0.0
            as_ = 0.0
            ac = 0.0
            for s in range(npts):
                pr = sw[s] * u[s, i] * u[s, j]
                _neumaier(pr, &gs, &gc)
                _neumaier(fabs(pr), &as_, &ac)
            G[i, j] = gs + gc
            G[j, i] = gs + gc
            A[i, j] = as_ + ac
            A[j, i] = as_ + ac
    return G, A
