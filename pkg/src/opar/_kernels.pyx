# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled link-lifetime kernels (see ``_kernels_py`` for the reference twin)."""
from libc.math cimport sqrt

import numpy as np


cdef inline double _gap(double t,
                        double pix, double piy, double piz,
                        double uix, double uiy, double uiz, double vi, double ai,
                        double pjx, double pjy, double pjz,
                        double ujx, double ujy, double ujz, double vj, double aj) noexcept nogil:
    cdef double si = vi * t + 0.5 * ai * t * t
    cdef double sj = vj * t + 0.5 * aj * t * t
    cdef double dx = (pix - pjx) + (si * uix - sj * ujx)
    cdef double dy = (piy - pjy) + (si * uiy - sj * ujy)
    cdef double dz = (piz - pjz) + (si * uiz - sj * ujz)
    return sqrt(dx * dx + dy * dy + dz * dz)


cdef double _pair(double pix, double piy, double piz,
                  double uix, double uiy, double uiz, double vi, double ai,
                  double pjx, double pjy, double pjz,
                  double ujx, double ujy, double ujz, double vj, double aj,
                  double radius, double tau_max, double step, double tol) noexcept nogil:
    cdef double lo, hi, mid, t
    cdef long k
    if _gap(0.0, pix, piy, piz, uix, uiy, uiz, vi, ai,
            pjx, pjy, pjz, ujx, ujy, ujz, vj, aj) > radius:
        return 0.0
    if (vi * uix == vj * ujx and vi * uiy == vj * ujy and vi * uiz == vj * ujz
            and ai * uix == aj * ujx and ai * uiy == aj * ujy and ai * uiz == aj * ujz):
        return tau_max

    lo = 0.0
    k = 1
    while True:
        t = k * step
        if t >= tau_max:
            t = tau_max
        if _gap(t, pix, piy, piz, uix, uiy, uiz, vi, ai,
                pjx, pjy, pjz, ujx, ujy, ujz, vj, aj) > radius:
            hi = t
            break
        if t == tau_max:
            return tau_max
        lo = t
        k += 1

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _gap(mid, pix, piy, piz, uix, uiy, uiz, vi, ai,
                pjx, pjy, pjz, ujx, ujy, ujz, vj, aj) > radius:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def pair_lifetime(pi, ui, double vi, double ai, pj, uj, double vj, double aj,
                  double radius, double tau_max, double step, double tol):
    return _pair(pi[0], pi[1], pi[2], ui[0], ui[1], ui[2], vi, ai,
                 pj[0], pj[1], pj[2], uj[0], uj[1], uj[2], vj, aj,
                 radius, tau_max, step, tol)


def lifetime_matrix(pos, heading, speed, accel,
                    double radius, double tau_max, double step, double tol):
    cdef const double[:, ::1] p = np.ascontiguousarray(pos, dtype=np.float64)
    cdef const double[:, ::1] u = np.ascontiguousarray(heading, dtype=np.float64)
    cdef const double[::1] v = np.ascontiguousarray(speed, dtype=np.float64)
    cdef const double[::1] a = np.ascontiguousarray(accel, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0]
    out = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(n):
            for j in range(n):
                if i != j:
                    o[i, j] = _pair(p[i, 0], p[i, 1], p[i, 2],
                                    u[i, 0], u[i, 1], u[i, 2], v[i], a[i],
                                    p[j, 0], p[j, 1], p[j, 2],
                                    u[j, 0], u[j, 1], u[j, 2], v[j], a[j],
                                    radius, tau_max, step, tol)
    return out
