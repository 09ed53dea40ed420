"""Pure-Python integration kernel.

Fallback for the compiled extension in ``sltrans._kernel``; both expose the
same ``integrate_nodes`` contract and implement the same arithmetic, so the
backends agree to rounding.  The second-order equation y'' = (q(x) - lam) y
is advanced node to node over a reporting mesh: every mesh node receives a
fully accurate integration state (no dense-output interpolation error).

Adaptive stepping uses the Dormand-Prince 5(4) embedded pair with FSAL and a
proportional controller; the fixed-step alternative is the classical
4th-order Runge-Kutta scheme subdivided to the requested step bound.
"""

import math

import numpy as np

COMPILED = False

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1
STATUS_NONFINITE = 2

# Dormand-Prince 5(4) tableau
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0,
                                46732.0 / 5247.0, 49.0 / 176.0,
                                -5103.0 / 18656.0)
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_B1, _B3, _B4, _B5, _B6 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
# b - bhat, for the embedded 4th-order error estimate
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                                -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)

_MAX_SUBSTEPS = 1_000_000
_STEP_FLOOR = 1e-14


def _eval_q(qkind, qknots, qcoefs, x):
    if qkind == 0:
        return 0.0
    if qkind == 1:
        return qcoefs[0]
    if qkind == 2:
        return qcoefs[0] * math.cos(qcoefs[1] * x)
    if qkind == 3:
        acc = 0.0
        for i in range(len(qcoefs) - 1, -1, -1):
            acc = acc * x + qcoefs[i]
        return acc
    # table: locate the cell, then Horner on the local cubic
    n = len(qknots)
    lo, hi = 0, n - 2
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


def integrate_nodes(qkind, qknots, qcoefs, lam, nodes, y0, dy0,
                    adaptive, rtol, atol, fixed_step):
    """Integrate y'' = (q - lam) y through every node of a monotone mesh.

    Returns (ys, dys, status); on a nonzero status the arrays are valid up
    to the node where integration stopped.
    """
    nodes = np.asarray(nodes, dtype=float)
    n = nodes.shape[0]
    ys = np.empty(n)
    dys = np.empty(n)
    ys[0] = y0
    dys[0] = dy0
    if adaptive:
        status = _run_dopri(qkind, qknots, qcoefs, lam, nodes, ys, dys,
                            rtol, atol)
    else:
        status = _run_rk4(qkind, qknots, qcoefs, lam, nodes, ys, dys,
                          fixed_step)
    return ys, dys, int(status)


def _run_dopri(qkind, qknots, qcoefs, lam, nodes, ys, dys, rtol, atol):
    n = nodes.shape[0]
    span = abs(nodes[n - 1] - nodes[0])
    direction = 1.0 if nodes[n - 1] >= nodes[0] else -1.0
    h = direction * min(span, 0.01 / (1.0 + math.sqrt(abs(lam))))
    y = ys[0]
    dy = dys[0]
    x = nodes[0]
    # FSAL: k1 of the next step is k7 of the accepted one
    k1y = dy
    k1d = (_eval_q(qkind, qknots, qcoefs, x) - lam) * y
    steps = 0
    for i in range(1, n):
        target = nodes[i]
        while direction * (target - x) > 0.0:
            steps += 1
            if steps > _MAX_SUBSTEPS:
                return STATUS_STEP_UNDERFLOW
            remaining = target - x
            if abs(h) > abs(remaining):
                h = remaining
            if abs(h) < _STEP_FLOOR * max(span, 1.0):
                return STATUS_STEP_UNDERFLOW

            xs2 = x + _C2 * h
            y2 = y + h * (_A21 * k1y)
            d2 = dy + h * (_A21 * k1d)
            k2y = d2
            k2d = (_eval_q(qkind, qknots, qcoefs, xs2) - lam) * y2

            xs3 = x + _C3 * h
            y3 = y + h * (_A31 * k1y + _A32 * k2y)
            d3 = dy + h * (_A31 * k1d + _A32 * k2d)
            k3y = d3
            k3d = (_eval_q(qkind, qknots, qcoefs, xs3) - lam) * y3

            xs4 = x + _C4 * h
            y4 = y + h * (_A41 * k1y + _A42 * k2y + _A43 * k3y)
            d4 = dy + h * (_A41 * k1d + _A42 * k2d + _A43 * k3d)
            k4y = d4
            k4d = (_eval_q(qkind, qknots, qcoefs, xs4) - lam) * y4

            xs5 = x + _C5 * h
            y5 = y + h * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y)
            d5 = dy + h * (_A51 * k1d + _A52 * k2d + _A53 * k3d + _A54 * k4d)
            k5y = d5
            k5d = (_eval_q(qkind, qknots, qcoefs, xs5) - lam) * y5

            xs6 = x + h
            y6 = y + h * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y
                          + _A65 * k5y)
            d6 = dy + h * (_A61 * k1d + _A62 * k2d + _A63 * k3d + _A64 * k4d
                           + _A65 * k5d)
            k6y = d6
            k6d = (_eval_q(qkind, qknots, qcoefs, xs6) - lam) * y6

            ynew = y + h * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y
                            + _B6 * k6y)
            dnew = dy + h * (_B1 * k1d + _B3 * k3d + _B4 * k4d + _B5 * k5d
                             + _B6 * k6d)
            if not (math.isfinite(ynew) and math.isfinite(dnew)):
                return STATUS_NONFINITE
            k7y = dnew
            k7d = (_eval_q(qkind, qknots, qcoefs, xs6) - lam) * ynew

            erry = h * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y
                        + _E6 * k6y + _E7 * k7y)
            errd = h * (_E1 * k1d + _E3 * k3d + _E4 * k4d + _E5 * k5d
                        + _E6 * k6d + _E7 * k7d)
            scy = atol + rtol * max(abs(y), abs(ynew))
            scd = atol + rtol * max(abs(dy), abs(dnew))
            err = math.sqrt(0.5 * ((erry / scy) ** 2 + (errd / scd) ** 2))

            if err <= 1.0:
                x = xs6
                y = ynew
                dy = dnew
                k1y = k7y
                k1d = k7d
            if err == 0.0:
                factor = 5.0
            else:
                factor = min(5.0, max(0.2, 0.9 * err ** -0.2))
            h *= factor
        # force exact node coordinates; x landed on target by construction
        x = target
        ys[i] = y
        dys[i] = dy
    return STATUS_OK


def _run_rk4(qkind, qknots, qcoefs, lam, nodes, ys, dys, fixed_step):
    n = nodes.shape[0]
    y = ys[0]
    dy = dys[0]
    for i in range(1, n):
        x = nodes[i - 1]
        length = nodes[i] - x
        nsub = max(1, int(math.ceil(abs(length) / fixed_step)))
        h = length / nsub
        for _ in range(nsub):
            k1y = dy
            k1d = (_eval_q(qkind, qknots, qcoefs, x) - lam) * y
            xm = x + 0.5 * h
            y2 = y + 0.5 * h * k1y
            d2 = dy + 0.5 * h * k1d
            k2y = d2
            k2d = (_eval_q(qkind, qknots, qcoefs, xm) - lam) * y2
            y3 = y + 0.5 * h * k2y
            d3 = dy + 0.5 * h * k2d
            k3y = d3
            k3d = (_eval_q(qkind, qknots, qcoefs, xm) - lam) * y3
            xe = x + h
            y4 = y + h * k3y
            d4 = dy + h * k3d
            k4y = d4
            k4d = (_eval_q(qkind, qknots, qcoefs, xe) - lam) * y4
            y = y + h * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0
            dy = dy + h * (k1d + 2.0 * k2d + 2.0 * k3d + k4d) / 6.0
            x = xe
        if not (math.isfinite(y) and math.isfinite(dy)):
            return STATUS_NONFINITE
        ys[i] = y
        dys[i] = dy
    return STATUS_OK
