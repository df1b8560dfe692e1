"""Pure-Python link-lifetime kernels.

Reference twin of ``_kernels.pyx``. Both modules expose the same two
functions and perform floating-point operations in the same order, so on
IEEE hardware they agree bit for bit.
"""
import math

import numpy as np


def _gap(t, pix, piy, piz, uix, uiy, uiz, vi, ai,
         pjx, pjy, pjz, ujx, ujy, ujz, vj, aj):
    si = vi * t + 0.5 * ai * t * t
    sj = vj * t + 0.5 * aj * t * t
    # (p_i - p_j) + (s_i u_i - s_j u_j) keeps d(i, j) == d(j, i) exactly
    dx = (pix - pjx) + (si * uix - sj * ujx)
    dy = (piy - pjy) + (si * uiy - sj * ujy)
    dz = (piz - pjz) + (si * uiz - sj * ujz)
    return math.sqrt(dx * dx + dy * dy + dz * dz)


def pair_lifetime(pi, ui, vi, ai, pj, uj, vj, aj,
                  radius, tau_max, step, tol):
    """Time until the predicted distance of a node pair first exceeds ``radius``.

    ``pi``/``pj`` are positions, ``ui``/``uj`` unit headings, ``vi``/``vj``
    speeds and ``ai``/``aj`` scalar accelerations along the heading.
    Returns 0 when the pair starts out of range and ``tau_max`` when no
    exit is found within the horizon.
    """
    args = (pi[0], pi[1], pi[2], ui[0], ui[1], ui[2], vi, ai,
            pj[0], pj[1], pj[2], uj[0], uj[1], uj[2], vj, aj)
    if _gap(0.0, *args) > radius:
        return 0.0
    if (vi * ui[0] == vj * uj[0] and vi * ui[1] == vj * uj[1]
            and vi * ui[2] == vj * uj[2] and ai * ui[0] == aj * uj[0]
            and ai * ui[1] == aj * uj[1] and ai * ui[2] == aj * uj[2]):
        return tau_max

    lo = 0.0
    k = 1
    while True:
        t = k * step
        if t >= tau_max:
            t = tau_max
        if _gap(t, *args) > radius:
            hi = t
            break
        if t == tau_max:
            return tau_max
        lo = t
        k += 1

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _gap(mid, *args) > radius:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def lifetime_matrix(pos, heading, speed, accel, radius, tau_max, step, tol):
    """Fill the n x n lifetime matrix over all ordered pairs, zero diagonal."""
    pos = np.ascontiguousarray(pos, dtype=np.float64)
    heading = np.ascontiguousarray(heading, dtype=np.float64)
    speed = np.ascontiguousarray(speed, dtype=np.float64)
    accel = np.ascontiguousarray(accel, dtype=np.float64)
    n = pos.shape[0]
    out = np.zeros((n, n), dtype=np.float64)
    p = pos.tolist()
    u = heading.tolist()
    v = speed.tolist()
    a = accel.tolist()
    for i in range(n):
        for j in range(n):
            if i != j:
                out[i, j] = pair_lifetime(p[i], u[i], v[i], a[i],
                                          p[j], u[j], v[j], a[j],
                                          radius, tau_max, step, tol)
    return out
