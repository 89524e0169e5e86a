# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernels; same contract as ``_kernels_py``.

The inner loops work on real and imaginary parts directly: one reciprocal of
``|1 - conj(a) z|^2`` per factor replaces a generic complex division.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def blaschke_grid(zeros, constant, points, derivative=False):
    cdef double complex[::1] zs = np.ascontiguousarray(zeros, dtype=np.complex128).ravel()
    pts_arr = np.asarray(points, dtype=np.complex128)
    shape = pts_arr.shape
    cdef double complex[::1] pts = np.ascontiguousarray(pts_arr).ravel()
    cdef Py_ssize_t m = pts.shape[0], n = zs.shape[0], i, k
    val_arr = np.empty(m, dtype=np.complex128)
    der_arr = np.zeros(m, dtype=np.complex128)
    cdef double complex[::1] val = val_arr
    cdef double complex[::1] der = der_arr
    cdef double complex c = complex(constant)
    cdef double zr, zi, ar, ai, dr, di, inv, fr, fi, vr, vi, gr, gi, wr, wi, s, t, q
    cdef bint want_der = bool(derivative)
    with nogil:
        for i in range(m):
            zr = pts[i].real
            zi = pts[i].imag
            vr = c.real
            vi = c.imag
            gr = 0.0
            gi = 0.0
            for k in range(n):
                ar = zs[k].real
                ai = zs[k].imag
                # den = 1 - conj(a) z
                dr = 1.0 - (ar * zr + ai * zi)
                di = -(ar * zi - ai * zr)
                inv = 1.0 / (dr * dr + di * di)
                # f = (z - a) / den
                s = zr - ar
                t = zi - ai
                fr = (s * dr + t * di) * inv
                fi = (t * dr - s * di) * inv
                if want_der:
                    # (1 - |a|^2) / den^2 = (1 - |a|^2) conj(den)^2 inv^2
                    q = (1.0 - ar * ar - ai * ai) * inv * inv
                    wr = q * (dr * dr - di * di)
                    wi = -q * 2.0 * dr * di
                    s = gr * fr - gi * fi + vr * wr - vi * wi
                    gi = gr * fi + gi * fr + vr * wi + vi * wr
                    gr = s
                s = vr * fr - vi * fi
                vi = vr * fi + vi * fr
                vr = s
            val[i].real = vr
            val[i].imag = vi
            if want_der:
                der[i].real = gr
                der[i].imag = gi
    if want_der:
        return val_arr.reshape(shape), der_arr.reshape(shape)
    return val_arr.reshape(shape)


def tm_table(zeros, points):
    cdef double complex[::1] zs = np.ascontiguousarray(zeros, dtype=np.complex128).ravel()
    cdef double complex[::1] pts = np.ascontiguousarray(points, dtype=np.complex128).ravel()
    cdef Py_ssize_t m = pts.shape[0], n = zs.shape[0], i, k
    out_arr = np.empty((n, m), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef double zr, zi, ar, ai, dr, di, inv, s, t, pr, pi, nr, ni, r
    with nogil:
        for i in range(m):
            zr = pts[i].real
            zi = pts[i].imag
            pr = 1.0
            pi = 0.0
            for k in range(n):
                ar = zs[k].real
                ai = zs[k].imag
                dr = 1.0 - (ar * zr + ai * zi)
                di = -(ar * zi - ai * zr)
                inv = 1.0 / (dr * dr + di * di)
                # sqrt(1 - |a|^2) * prod / den
                r = sqrt(1.0 - ar * ar - ai * ai) * inv
                out[k, i].real = r * (pr * dr + pi * di)
                out[k, i].imag = r * (pi * dr - pr * di)
                # prod *= (z - a) / den
                s = zr - ar
                t = zi - ai
                nr = (s * dr + t * di) * inv
                ni = (t * dr - s * di) * inv
                s = pr * nr - pi * ni
                pi = pr * ni + pi * nr
                pr = s
    return out_arr
