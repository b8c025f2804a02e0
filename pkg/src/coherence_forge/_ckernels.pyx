# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled qubit hot loops. Same contracts as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, cos, sin, hypot

cnp.import_array()


cdef inline void _sqrt2(double complex a, double complex b, double complex c,
                        double complex d, double complex* out) noexcept nogil:
    cdef double det = (a * d - b * c).real
    cdef double s = sqrt(det) if det > 0 else 0.0
    cdef double tr = (a + d).real + 2 * s
    cdef double t = sqrt(tr) if tr > 0 else 0.0
    if t > 0:
        out[0] = (a + s) / t
        out[1] = b / t
        out[2] = c / t
        out[3] = (d + s) / t
    else:
        out[0] = 0
        out[1] = 0
        out[2] = 0
        out[3] = 0


cdef inline void _luders_one(const double complex[:, :, :] eff, double complex r00,
                             double complex r01, double complex r10, double complex r11,
                             double complex* acc) noexcept nogil:
    cdef Py_ssize_t i, n = eff.shape[0]
    cdef double complex k[4]
    cdef double complex t00, t01, t10, t11
    acc[0] = 0
    acc[1] = 0
    acc[2] = 0
    acc[3] = 0
    for i in range(n):
        _sqrt2(eff[i, 0, 0], eff[i, 0, 1], eff[i, 1, 0], eff[i, 1, 1], k)
        # t = K rho
        t00 = k[0] * r00 + k[1] * r10
        t01 = k[0] * r01 + k[1] * r11
        t10 = k[2] * r00 + k[3] * r10
        t11 = k[2] * r01 + k[3] * r11
        # acc += t K
        acc[0] += t00 * k[0] + t01 * k[2]
        acc[1] += t00 * k[1] + t01 * k[3]
        acc[2] += t10 * k[0] + t11 * k[2]
        acc[3] += t10 * k[1] + t11 * k[3]


def qubit_sqrt_batch(effects):
    e = np.ascontiguousarray(effects, dtype=np.complex128)
    shape = e.shape
    cdef double complex[:, :, :] ev = e.reshape(-1, 2, 2)
    out = np.empty_like(ev)
    cdef double complex[:, :, :] ov = out
    cdef double complex k[4]
    cdef Py_ssize_t i
    for i in range(ev.shape[0]):
        _sqrt2(ev[i, 0, 0], ev[i, 0, 1], ev[i, 1, 0], ev[i, 1, 1], k)
        ov[i, 0, 0] = k[0]
        ov[i, 0, 1] = k[1]
        ov[i, 1, 0] = k[2]
        ov[i, 1, 1] = k[3]
    return np.asarray(out).reshape(shape)


def luders_batch(effects, rho):
    cdef const double complex[:, :, :, :] ev = np.ascontiguousarray(effects, dtype=np.complex128)
    r = np.asarray(rho, dtype=np.complex128)
    cdef double complex r00 = r[0, 0], r01 = r[0, 1], r10 = r[1, 0], r11 = r[1, 1]
    cdef Py_ssize_t N = ev.shape[0], s
    out = np.empty((N, 2, 2), dtype=np.complex128)
    cdef double complex[:, :, :] ov = out
    cdef double complex acc[4]
    with nogil:
        for s in range(N):
            _luders_one(ev[s], r00, r01, r10, r11, acc)
            ov[s, 0, 0] = acc[0]
            ov[s, 0, 1] = acc[1]
            ov[s, 1, 0] = acc[2]
            ov[s, 1, 1] = acc[3]
    return out


def luders_l1_batch(effects, rho):
    cdef const double complex[:, :, :, :] ev = np.ascontiguousarray(effects, dtype=np.complex128)
    r = np.asarray(rho, dtype=np.complex128)
    cdef double complex r00 = r[0, 0], r01 = r[0, 1], r10 = r[1, 0], r11 = r[1, 1]
    cdef Py_ssize_t N = ev.shape[0], s
    out = np.empty(N, dtype=np.float64)
    cdef double[:] ov = out
    cdef double complex acc[4]
    with nogil:
        for s in range(N):
            _luders_one(ev[s], r00, r01, r10, r11, acc)
            ov[s] = 2 * hypot(acc[1].real, acc[1].imag)
    return out


def one_param_grid_max(rho, mags, phases, sharpness):
    r = np.asarray(rho, dtype=np.complex128)
    cdef double complex r01 = r[0, 1]
    cdef double r00 = r[0, 0].real, r11 = r[1, 1].real
    cdef const double[:] mv = np.ascontiguousarray(mags, dtype=np.float64)
    cdef const double[:] pv = np.ascontiguousarray(phases, dtype=np.float64)
    lam = np.ascontiguousarray(sharpness, dtype=np.float64)
    order_arr = np.argsort(-lam, kind="stable").astype(np.intp)
    cdef const Py_ssize_t[:] order = order_arr
    s_arr = np.sqrt(np.clip(1 - lam[order_arr] ** 2, 0.0, None))
    cdef const double[:] sv = s_arr
    cdef Py_ssize_t nm = mv.shape[0], npz = pv.shape[0], nl = sv.shape[0]
    cdef Py_ssize_t i, j, kk, bi = 0, bj = 0, bk = 0
    cdef double m, q, p_plus, best = -1.0, val
    cdef double complex alpha, b, o
    # b depends on (i, j) only; keep the sharpness loop outermost for tie order
    bvals = np.empty((nm, npz), dtype=np.complex128)
    cdef double complex[:, :] bv = bvals
    with nogil:
        for i in range(nm):
            m = mv[i]
            q = 1 - m * m
            q = sqrt(q) if q > 0 else 0.0
            for j in range(npz):
                alpha = m * (cos(pv[j]) + 1j * sin(pv[j]))
                p_plus = m * m * r00 + q * q * r11 + 2 * (alpha.conjugate() * q * r01).real
                bv[i, j] = (2 * p_plus - 1) * alpha * q
        for kk in range(nl):
            for i in range(nm):
                for j in range(npz):
                    o = sv[kk] * r01 + (1 - sv[kk]) * bv[i, j]
                    val = 2 * hypot(o.real, o.imag)
                    if val > best:
                        best = val
                        bi = i
                        bj = j
                        bk = kk
    return float(best), int(bi), int(bj), int(order[bk])
