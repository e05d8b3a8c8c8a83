# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: oval ring sums and the DOPRI5 return map.

Same algorithms, signatures and return conventions as ``_kernels_py``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, sqrt, fabs, pow, M_PI

cnp.import_array()

IMPLEMENTATION = "cython"


def ring_sums(double xm, double r, double s, double h, double c, int n,
              double offset, int pmax, int orient):
    cdef int m = pmax + 3
    cdef cnp.ndarray[cnp.float64_t, ndim=2] dx = np.zeros((m, m))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] dy = np.zeros((m, m))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] ax = np.zeros((m, m))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] ay = np.zeros((m, m))
    cdef double[:, ::1] dxv = dx, dyv = dy, axv = ax, ayv = ay
    cdef double[::1] xp = np.empty(m), yq = np.empty(m)
    cdef int k, p, q
    cdef double t, st, ct, x, y, xd, yd, wx, wy, ix, iy
    with nogil:
        for k in range(n):
            t = 2.0 * M_PI * (k + offset) / n
            st = sin(t)
            ct = cos(t)
            x = xm - r * ct
            y = 0.5 * (h * x - c) - orient * s * st
            xd = r * st
            yd = 0.5 * h * r * st - orient * s * ct
            ix = 1.0 / x
            iy = 1.0 / y
            xp[0] = ix * ix
            yq[0] = iy * iy
            for p in range(1, m):
                xp[p] = xp[p - 1] * x
                yq[p] = yq[p - 1] * y
            for p in range(m):
                wx = xp[p] * xd
                wy = xp[p] * yd
                for q in range(m):
                    dxv[p, q] += wx * yq[q]
                    dyv[p, q] += wy * yq[q]
                    axv[p, q] += fabs(wx * yq[q])
                    ayv[p, q] += fabs(wy * yq[q])
    return dx, dy, ax, ay


cdef double C_A[7][6]
cdef double C_B[7]
cdef double C_E[7]

# one tableau for both implementations
from ._kernels_py import _A, _B, _E

for _i in range(7):
    for _j in range(6):
        C_A[_i][_j] = _A[_i][_j] if _j < len(_A[_i]) else 0.0
    C_B[_i] = _B[_i]
    C_E[_i] = _E[_i]


cdef struct Sys:
    double b
    double c
    double eps
    int deg
    const double* fa
    const double* fb


cdef inline void field(const Sys* sy, double x, double y, double* out) noexcept nogil:
    cdef double fx = x * (1.0 + sy.b * x + x * x - y * y)
    cdef double fy = y * (-1.0 - sy.c * y + x * x - y * y)
    cdef double f = 0.0, g = 0.0, xi = 1.0, yj
    cdef int i, j, k
    if sy.eps != 0.0:
        for i in range(sy.deg + 1):
            yj = 1.0
            for j in range(sy.deg + 1 - i):
                k = i * (sy.deg + 1) + j
                f += sy.fa[k] * xi * yj
                g += sy.fb[k] * xi * yj
                yj *= y
            xi *= x
        fx += sy.eps * f
        fy += sy.eps * g
    out[0] = fx
    out[1] = fy


cdef inline void step(const Sys* sy, double x, double y, double dt,
                      double* k1, double* res, double* k7) noexcept nogil:
    """res = (xn, yn, ex, ey); k7 receives the FSAL stage."""
    cdef double ks[7][2]
    cdef double xs, ys
    cdef int st, m
    ks[0][0] = k1[0]
    ks[0][1] = k1[1]
    for st in range(1, 7):
        xs = x
        ys = y
        for m in range(st):
            if C_A[st][m] != 0.0:
                xs += dt * C_A[st][m] * ks[m][0]
                ys += dt * C_A[st][m] * ks[m][1]
        field(sy, xs, ys, ks[st])
    res[0] = x
    res[1] = y
    res[2] = 0.0
    res[3] = 0.0
    for m in range(7):
        res[0] += dt * C_B[m] * ks[m][0]
        res[1] += dt * C_B[m] * ks[m][1]
        res[2] += dt * C_E[m] * ks[m][0]
        res[3] += dt * C_E[m] * ks[m][1]
    k7[0] = ks[6][0]
    k7[1] = ks[6][1]


def return_map(double x0, double y0, double cx, double cy, double b, double c,
               double eps, fa, fb, int deg, double rtol, double atol,
               double dt0, long max_steps, double h_lo, double h_hi):
    cdef double[::1] fav = np.ascontiguousarray(fa, dtype=np.float64)
    cdef double[::1] fbv = np.ascontiguousarray(fb, dtype=np.float64)
    cdef Sys sy
    sy.b = b
    sy.c = c
    sy.eps = eps
    sy.deg = deg
    sy.fa = &fav[0]
    sy.fb = &fbv[0]
    cdef double ux = x0 - cx, uy = y0 - cy, norm, nx, ny
    cdef double k1[2]
    cdef double k7[2]
    cdef double kk[2]
    cdef double res[4]
    cdef double x = x0, y = y0, t = 0.0, dt = dt0
    cdef double sigma, sigma_prev = 0.0, along, sx, sy_, err, hv, fac
    cdef double lo, hi, mid, sm, xs = 0.0, ys = 0.0
    cdef bint left_start = False
    cdef long nsteps = 0
    cdef int status = 1, it
    with nogil:
        norm = sqrt(ux * ux + uy * uy)
        ux /= norm
        uy /= norm
        field(&sy, x0, y0, k1)
        nx = -uy
        ny = ux
        if k1[0] * nx + k1[1] * ny < 0.0:
            nx = -nx
            ny = -ny
        while nsteps < max_steps:
            if dt < 1e-14:
                status = 2
                break
            step(&sy, x, y, dt, k1, res, k7)
            sx = atol + rtol * max(fabs(x), fabs(res[0]))
            sy_ = atol + rtol * max(fabs(y), fabs(res[1]))
            err = sqrt(0.5 * ((res[2] / sx) ** 2 + (res[3] / sy_) ** 2))
            if err > 1.0:
                dt *= max(0.2, 0.9 * pow(err, -0.2))
                continue
            nsteps += 1
            sigma = (res[0] - cx) * nx + (res[1] - cy) * ny
            along = (res[0] - cx) * ux + (res[1] - cy) * uy
            if not left_start and sigma > 0.0:
                left_start = True
            if left_start and sigma_prev < 0.0 and sigma >= 0.0 and along > 0.0:
                lo = 0.0
                hi = dt
                xs = res[0]
                ys = res[1]
                for it in range(200):
                    mid = 0.5 * (lo + hi)
                    step(&sy, x, y, mid, k1, res, kk)
                    sm = (res[0] - cx) * nx + (res[1] - cy) * ny
                    if sm < 0.0:
                        lo = mid
                    else:
                        hi = mid
                        xs = res[0]
                        ys = res[1]
                    if hi - lo <= 1e-15 * max(1.0, t):
                        break
                x = xs
                y = ys
                t = t + hi
                status = 0
                break
            hv = (1.0 + b * res[0] + c * res[1] + res[0] * res[0] + res[1] * res[1]) / (res[0] * res[1])
            if not (h_lo < hv < h_hi):
                x = res[0]
                y = res[1]
                t = t + dt
                status = 3
                break
            sigma_prev = sigma
            x = res[0]
            y = res[1]
            t = t + dt
            k1[0] = k7[0]
            k1[1] = k7[1]
            if err == 0.0:
                fac = 5.0
            else:
                fac = min(5.0, max(0.2, 0.9 * pow(err, -0.2)))
            dt *= fac
    return status, x, y, t, nsteps
