"""Pure-Python implementations of the hot kernels.

Same algorithms and signatures as the compiled ``_kernels`` extension; used
when the extension is not built or ``LVMELNIKOV_PURE=1`` is set.
"""

import math

import numpy as np

IMPLEMENTATION = "python"


def ring_sums(xm, r, s, h, c, n, offset, pmax, orient):
    """Node sums of x^p y^q dx/dt and x^p y^q dy/dt on the oval.

    Nodes are t_k = 2 pi (k + offset) / n.  Exponents run over -2..pmax for
    both p and q.  Returns (dx, dy, dx_abs, dy_abs), each of shape
    (pmax + 3, pmax + 3) indexed [p + 2, q + 2]; the *_abs arrays hold sums
    of absolute values (the cancellation scale of each entry).
    """
    t = (2.0 * np.pi / n) * (np.arange(n) + offset)
    st, ct = np.sin(t), np.cos(t)
    x = xm - r * ct
    y = 0.5 * (h * x - c) - orient * s * st
    xd = r * st
    yd = 0.5 * h * r * st - orient * s * ct
    expo = np.arange(-2, pmax + 1)[:, None]
    xp = x ** expo
    yq = y ** expo
    dx = (xp * xd) @ yq.T
    dy = (xp * yd) @ yq.T
    axp = np.abs(xp)
    ayq = np.abs(yq)
    dx_abs = (axp * np.abs(xd)) @ ayq.T
    dy_abs = (axp * np.abs(yd)) @ ayq.T
    return dx, dy, dx_abs, dy_abs


# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


def _field(x, y, b, c, eps, fa, fb, deg):
    fx = x * (1.0 + b * x + x * x - y * y)
    fy = y * (-1.0 - c * y + x * x - y * y)
    if eps != 0.0:
        f = 0.0
        g = 0.0
        xi = 1.0
        for i in range(deg + 1):
            yj = 1.0
            for j in range(deg + 1 - i):
                k = i * (deg + 1) + j
                f += fa[k] * xi * yj
                g += fb[k] * xi * yj
                yj *= y
            xi *= x
        fx += eps * f
        fy += eps * g
    return fx, fy


def _step(x, y, dt, b, c, eps, fa, fb, deg, k1):
    ks = [k1]
    for stage in range(1, 7):
        row = _A[stage]
        xs = x
        ys = y
        for m, a in enumerate(row):
            if a != 0.0:
                xs += dt * a * ks[m][0]
                ys += dt * a * ks[m][1]
        ks.append(_field(xs, ys, b, c, eps, fa, fb, deg))
    # stage 7 is evaluated at the 5th-order solution (FSAL)
    xn = x
    yn = y
    ex = 0.0
    ey = 0.0
    for m in range(7):
        xn += dt * _B[m] * ks[m][0]
        yn += dt * _B[m] * ks[m][1]
        ex += dt * _E[m] * ks[m][0]
        ey += dt * _E[m] * ks[m][1]
    return xn, yn, ex, ey, ks[6]


def return_map(x0, y0, cx, cy, b, c, eps, fa, fb, deg, rtol, atol,
               dt0, max_steps, h_lo, h_hi):
    """Integrate from (x0, y0) until the ray from (cx, cy) through the start
    point is crossed again in the same rotational direction.

    The section function is the signed distance to the line through the
    center and the start point; crossings are counted only on the start ray.
    Returns (status, x, y, t, nsteps) with status 0 on success, 1 for step
    budget exhaustion, 2 for step-size underflow, 3 when H leaves
    (h_lo, h_hi).
    """
    fa = [float(v) for v in fa]
    fb = [float(v) for v in fb]
    ux, uy = x0 - cx, y0 - cy
    norm = math.hypot(ux, uy)
    ux /= norm
    uy /= norm
    # normal pointing along the initial rotation
    k1 = _field(x0, y0, b, c, eps, fa, fb, deg)
    nx, ny = -uy, ux
    if k1[0] * nx + k1[1] * ny < 0.0:
        nx, ny = -nx, -ny
    x, y, t = x0, y0, 0.0
    dt = dt0
    sigma_prev = 0.0
    left_start = False
    nsteps = 0
    while nsteps < max_steps:
        if dt < 1e-14:
            return 2, x, y, t, nsteps
        xn, yn, ex, ey, k7 = _step(x, y, dt, b, c, eps, fa, fb, deg, k1)
        sx = atol + rtol * max(abs(x), abs(xn))
        sy = atol + rtol * max(abs(y), abs(yn))
        err = math.sqrt(0.5 * ((ex / sx) ** 2 + (ey / sy) ** 2))
        if err > 1.0:
            dt *= max(0.2, 0.9 * err ** -0.2)
            continue
        nsteps += 1
        sigma = (xn - cx) * nx + (yn - cy) * ny
        along = (xn - cx) * ux + (yn - cy) * uy
        if not left_start and sigma > 0.0:
            left_start = True
        if left_start and sigma_prev < 0.0 <= sigma and along > 0.0:
            # bracket the crossing inside this step and refine by bisection
            lo, hi = 0.0, dt
            xs, ys = xn, yn
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                xm_, ym_, _, _, _ = _step(x, y, mid, b, c, eps, fa, fb, deg, k1)
                sm = (xm_ - cx) * nx + (ym_ - cy) * ny
                if sm < 0.0:
                    lo = mid
                else:
                    hi = mid
                    xs, ys = xm_, ym_
                if hi - lo <= 1e-15 * max(1.0, t):
                    break
            return 0, xs, ys, t + hi, nsteps
        hv = (1.0 + b * xn + c * yn + xn * xn + yn * yn) / (xn * yn)
        if not (h_lo < hv < h_hi):
            return 3, xn, yn, t + dt, nsteps
        sigma_prev = sigma
        x, y, t = xn, yn, t + dt
        k1 = k7
        fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        dt *= fac
    return 1, x, y, t, nsteps
