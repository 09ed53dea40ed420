# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled integration kernel; mirrors sltrans._kernel_py exactly.

Node-to-node Dormand-Prince 5(4) with FSAL plus a fixed-step classical RK4,
for y'' = (q(x) - lam) y.  Selected at import by sltrans.backend when the
extension built; the pure-Python module is the fallback.
"""

import numpy as np

from libc.math cimport ceil, cos, fabs, isfinite, pow, sqrt

COMPILED = True

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1
STATUS_NONFINITE = 2

cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0, A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0
cdef double A63 = 46732.0 / 5247.0, A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0
cdef double C2 = 1.0 / 5.0, C3 = 3.0 / 10.0, C4 = 4.0 / 5.0, C5 = 8.0 / 9.0
cdef double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0
cdef double B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0

cdef long MAX_SUBSTEPS = 1000000
cdef double STEP_FLOOR = 1e-14


cdef inline double eval_q(int qkind, double[:] qknots, double[:] qcoefs,
                          double x) nogil:
    cdef int n, lo, hi, mid, base, i
    cdef double acc, t
    if qkind == 0:
        return 0.0
    if qkind == 1:
        return qcoefs[0]
    if qkind == 2:
        return qcoefs[0] * cos(qcoefs[1] * x)
    if qkind == 3:
        acc = 0.0
        for i in range(qcoefs.shape[0] - 1, -1, -1):
            acc = acc * x + qcoefs[i]
        return acc
    n = qknots.shape[0]
    lo = 0
    hi = n - 2
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if qknots[mid] <= x:
            lo = mid
        else:
            hi = mid - 1
    t = x - qknots[lo]
    base = 4 * lo
    return qcoefs[base] + t * (qcoefs[base + 1]
                               + t * (qcoefs[base + 2] + t * qcoefs[base + 3]))


def integrate_nodes(int qkind, double[:] qknots, double[:] qcoefs, double lam,
                    double[:] nodes, double y0, double dy0,
                    bint adaptive, double rtol, double atol, double fixed_step):
    """Integrate through every node of a monotone mesh; see the Python twin."""
    cdef Py_ssize_t n = nodes.shape[0]
    ys_arr = np.empty(n)
    dys_arr = np.empty(n)
    cdef double[:] ys = ys_arr
    cdef double[:] dys = dys_arr
    ys[0] = y0
    dys[0] = dy0
    cdef int status
    if adaptive:
        status = _run_dopri(qkind, qknots, qcoefs, lam, nodes, ys, dys,
                            rtol, atol)
    else:
        status = _run_rk4(qkind, qknots, qcoefs, lam, nodes, ys, dys,
                          fixed_step)
    return ys_arr, dys_arr, status


cdef int _run_dopri(int qkind, double[:] qknots, double[:] qcoefs, double lam,
                    double[:] nodes, double[:] ys, double[:] dys,
                    double rtol, double atol) nogil:
    cdef Py_ssize_t n = nodes.shape[0]
    cdef Py_ssize_t i
    cdef long steps = 0
    cdef double span = fabs(nodes[n - 1] - nodes[0])
    cdef double direction = 1.0 if nodes[n - 1] >= nodes[0] else -1.0
    cdef double hinit = 0.01 / (1.0 + sqrt(fabs(lam)))
    cdef double h = direction * (span if span < hinit else hinit)
    cdef double y = ys[0]
    cdef double dy = dys[0]
    cdef double x = nodes[0]
    cdef double k1y = dy
    cdef double k1d = (eval_q(qkind, qknots, qcoefs, x) - lam) * y
    cdef double target, remaining
    cdef double xs2, xs3, xs4, xs5, xs6
    cdef double y2, y3, y4, y5, y6, d2, d3, d4, d5, d6
    cdef double k2y, k2d, k3y, k3d, k4y, k4d, k5y, k5d, k6y, k6d, k7y, k7d
    cdef double ynew, dnew, erry, errd, scy, scd, err, factor, tmp

    for i in range(1, n):
        target = nodes[i]
        while direction * (target - x) > 0.0:
            steps += 1
            if steps > MAX_SUBSTEPS:
                return STATUS_STEP_UNDERFLOW
            remaining = target - x
            if fabs(h) > fabs(remaining):
                h = remaining
            tmp = span if span > 1.0 else 1.0
            if fabs(h) < STEP_FLOOR * tmp:
                return STATUS_STEP_UNDERFLOW

            xs2 = x + C2 * h
            y2 = y + h * (A21 * k1y)
            d2 = dy + h * (A21 * k1d)
            k2y = d2
            k2d = (eval_q(qkind, qknots, qcoefs, xs2) - lam) * y2

            xs3 = x + C3 * h
            y3 = y + h * (A31 * k1y + A32 * k2y)
            d3 = dy + h * (A31 * k1d + A32 * k2d)
            k3y = d3
            k3d = (eval_q(qkind, qknots, qcoefs, xs3) - lam) * y3

            xs4 = x + C4 * h
            y4 = y + h * (A41 * k1y + A42 * k2y + A43 * k3y)
            d4 = dy + h * (A41 * k1d + A42 * k2d + A43 * k3d)
            k4y = d4
            k4d = (eval_q(qkind, qknots, qcoefs, xs4) - lam) * y4

            xs5 = x + C5 * h
            y5 = y + h * (A51 * k1y + A52 * k2y + A53 * k3y + A54 * k4y)
            d5 = dy + h * (A51 * k1d + A52 * k2d + A53 * k3d + A54 * k4d)
            k5y = d5
            k5d = (eval_q(qkind, qknots, qcoefs, xs5) - lam) * y5

            xs6 = x + h
            y6 = y + h * (A61 * k1y + A62 * k2y + A63 * k3y + A64 * k4y
                          + A65 * k5y)
            d6 = dy + h * (A61 * k1d + A62 * k2d + A63 * k3d + A64 * k4d
                           + A65 * k5d)
            k6y = d6
            k6d = (eval_q(qkind, qknots, qcoefs, xs6) - lam) * y6

            ynew = y + h * (B1 * k1y + B3 * k3y + B4 * k4y + B5 * k5y
                            + B6 * k6y)
            dnew = dy + h * (B1 * k1d + B3 * k3d + B4 * k4d + B5 * k5d
                             + B6 * k6d)
            if not (isfinite(ynew) and isfinite(dnew)):
                return STATUS_NONFINITE
            k7y = dnew
            k7d = (eval_q(qkind, qknots, qcoefs, xs6) - lam) * ynew

            erry = h * (E1 * k1y + E3 * k3y + E4 * k4y + E5 * k5y
                        + E6 * k6y + E7 * k7y)
            errd = h * (E1 * k1d + E3 * k3d + E4 * k4d + E5 * k5d
                        + E6 * k6d + E7 * k7d)
            scy = atol + rtol * (fabs(y) if fabs(y) > fabs(ynew) else fabs(ynew))
            scd = atol + rtol * (fabs(dy) if fabs(dy) > fabs(dnew) else fabs(dnew))
            err = sqrt(0.5 * ((erry / scy) * (erry / scy)
                              + (errd / scd) * (errd / scd)))

            if err <= 1.0:
                x = xs6
                y = ynew
                dy = dnew
                k1y = k7y
                k1d = k7d
            if err == 0.0:
                factor = 5.0
            else:
                factor = 0.9 * pow(err, -0.2)
                if factor > 5.0:
                    factor = 5.0
                elif factor < 0.2:
                    factor = 0.2
            h *= factor
        x = target
        ys[i] = y
        dys[i] = dy
    return STATUS_OK


cdef int _run_rk4(int qkind, double[:] qknots, double[:] qcoefs, double lam,
                  double[:] nodes, double[:] ys, double[:] dys,
                  double fixed_step) nogil:
    cdef Py_ssize_t n = nodes.shape[0]
    cdef Py_ssize_t i
    cdef long nsub, j
    cdef double y = ys[0]
    cdef double dy = dys[0]
    cdef double x, length, h, xm, xe
    cdef double k1y, k1d, k2y, k2d, k3y, k3d, k4y, k4d, y2, y3, y4, d2, d3, d4

    for i in range(1, n):
        x = nodes[i - 1]
        length = nodes[i] - x
        nsub = <long>ceil(fabs(length) / fixed_step)
        if nsub < 1:
            nsub = 1
        h = length / nsub
        for j in range(nsub):
            k1y = dy
            k1d = (eval_q(qkind, qknots, qcoefs, x) - lam) * y
            xm = x + 0.5 * h
            y2 = y + 0.5 * h * k1y
            d2 = dy + 0.5 * h * k1d
            k2y = d2
            k2d = (eval_q(qkind, qknots, qcoefs, xm) - lam) * y2
            y3 = y + 0.5 * h * k2y
            d3 = dy + 0.5 * h * k2d
            k3y = d3
            k3d = (eval_q(qkind, qknots, qcoefs, xm) - lam) * y3
            xe = x + h
            y4 = y + h * k3y
            d4 = dy + h * k3d
            k4y = d4
            k4d = (eval_q(qkind, qknots, qcoefs, xe) - lam) * y4
            y = y + h * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0
            dy = dy + h * (k1d + 2.0 * k2d + 2.0 * k3d + k4d) / 6.0
            x = xe
        if not (isfinite(y) and isfinite(dy)):
            return STATUS_NONFINITE
        ys[i] = y
        dys[i] = dy
    return STATUS_OK
