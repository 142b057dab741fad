# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels for the Poincare ball; semantics match _kernels_py."""

import numpy as np

cimport numpy as cnp
from libc.math cimport atanh, sqrt, tanh

cnp.import_array()

cdef double _BOUNDARY = 1.0 - 1e-15


cdef inline double _dot(double[::1] a, double[::1] b) nogil:
    cdef Py_ssize_t i
    cdef double s = 0.0
    for i in range(a.shape[0]):
        s += a[i] * b[i]
    return s


cdef inline void _mobius_add(double[::1] x, double[::1] y, double[::1] out) nogil:
    cdef double x2 = _dot(x, x)
    cdef double y2 = _dot(y, y)
    cdef double xy = _dot(x, y)
    cdef double denom = 1.0 + 2.0 * xy + x2 * y2
    cdef double cx = (1.0 + 2.0 * xy + y2) / denom
    cdef double cy = (1.0 - x2) / denom
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        out[i] = cx * x[i] + cy * y[i]


cdef inline void _clip_inplace(double[::1] x) nogil:
    cdef double n = sqrt(_dot(x, x))
    cdef Py_ssize_t i
    if n >= _BOUNDARY:
        for i in range(x.shape[0]):
            x[i] *= _BOUNDARY / n


cdef inline double _lam(double[::1] x) nogil:
    return 2.0 / (1.0 - _dot(x, x))


cdef void _exp_into(double[::1] x, double[::1] v, double[::1] out, double[::1] scratch) nogil:
    cdef double nv = sqrt(_dot(v, v))
    cdef Py_ssize_t i
    if nv == 0.0:
        for i in range(x.shape[0]):
            out[i] = x[i]
        return
    cdef double t = tanh(0.5 * _lam(x) * nv) / nv
    for i in range(x.shape[0]):
        scratch[i] = t * v[i]
    _mobius_add(x, scratch, out)
    _clip_inplace(out)


cdef void _log_into(double[::1] x, double[::1] y, double[::1] out, double[::1] scratch) nogil:
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        scratch[i] = -x[i]
    _mobius_add(scratch, y, out)
    cdef double nw = sqrt(_dot(out, out))
    if nw == 0.0:
        for i in range(x.shape[0]):
            out[i] = 0.0
        return
    if nw > _BOUNDARY:
        nw = _BOUNDARY
    cdef double c = (2.0 / _lam(x)) * atanh(nw) / sqrt(_dot(out, out))
    for i in range(x.shape[0]):
        out[i] *= c


def lam(double[::1] x):
    return _lam(x)


def mobius_add(double[::1] x, double[::1] y):
    out = np.empty(x.shape[0], dtype=np.float64)
    cdef double[::1] o = out
    _mobius_add(x, y, o)
    return out


def exp(double[::1] x, double[::1] v):
    out = np.empty(x.shape[0], dtype=np.float64)
    scratch = np.empty(x.shape[0], dtype=np.float64)
    cdef double[::1] o = out
    cdef double[::1] s = scratch
    _exp_into(x, v, o, s)
    return out


def log(double[::1] x, double[::1] y):
    out = np.empty(x.shape[0], dtype=np.float64)
    scratch = np.empty(x.shape[0], dtype=np.float64)
    cdef double[::1] o = out
    cdef double[::1] s = scratch
    _log_into(x, y, o, s)
    return out


def dist(double[::1] x, double[::1] y):
    cdef Py_ssize_t n = x.shape[0]
    buf = np.empty(2 * n, dtype=np.float64)
    cdef double[::1] w = buf[:n]
    cdef double[::1] s = buf[n:]
    cdef Py_ssize_t i
    for i in range(n):
        s[i] = -x[i]
    _mobius_add(s, y, w)
    cdef double nw = sqrt(_dot(w, w))
    if nw > _BOUNDARY:
        nw = _BOUNDARY
    return 2.0 * atanh(nw)


def inner(double[::1] x, double[::1] u, double[::1] v):
    cdef double s = _lam(x)
    return s * s * _dot(u, v)


def gyration(double[::1] a, double[::1] b, double[::1] v):
    cdef Py_ssize_t n = a.shape[0]
    buf = np.empty(4 * n, dtype=np.float64)
    cdef double[::1] t1 = buf[:n]
    cdef double[::1] t2 = buf[n:2 * n]
    cdef double[::1] t3 = buf[2 * n:3 * n]
    cdef double[::1] t4 = buf[3 * n:]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    _mobius_add(a, b, t1)           # a + b
    for i in range(n):
        t1[i] = -t1[i]              # -(a + b)
    _mobius_add(b, v, t2)           # b + v
    _mobius_add(a, t2, t3)          # a + (b + v)
    _mobius_add(t1, t3, o)
    return out


def transport(double[::1] x, double[::1] y, double[::1] v):
    cdef Py_ssize_t n = x.shape[0]
    neg_x = np.empty(n, dtype=np.float64)
    cdef double[::1] nx = neg_x
    cdef Py_ssize_t i
    for i in range(n):
        nx[i] = -x[i]
    out = gyration(y, neg_x, v)
    cdef double c = _lam(x) / _lam(y)
    cdef double[::1] o = out
    for i in range(n):
        o[i] *= c
    return out


def frechet(double[:, ::1] points, double[::1] weights, double[::1] init,
            double tol, int max_iter):
    cdef Py_ssize_t n = init.shape[0]
    cdef Py_ssize_t m = points.shape[0]
    x_arr = np.array(init, dtype=np.float64)
    cdef double[::1] x = x_arr
    buf = np.empty(4 * n, dtype=np.float64)
    cdef double[::1] g = buf[:n]
    cdef double[::1] lg = buf[n:2 * n]
    cdef double[::1] scratch = buf[2 * n:3 * n]
    cdef double[::1] nxt = buf[3 * n:]
    cdef double residual = 0.0
    cdef Py_ssize_t it, i, k
    for it in range(max_iter):
        for i in range(n):
            g[i] = 0.0
        for k in range(m):
            if weights[k] != 0.0:
                _log_into(x, points[k], lg, scratch)
                for i in range(n):
                    g[i] += weights[k] * lg[i]
        residual = _lam(x) * sqrt(_dot(g, g))
        if residual <= tol:
            return x_arr, residual, it
        _exp_into(x, g, nxt, scratch)
        for i in range(n):
            x[i] = nxt[i]
    return x_arr, residual, max_iter
