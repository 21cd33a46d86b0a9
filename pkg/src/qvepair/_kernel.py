"""Compiled per-mode integration kernel.

Dormand-Prince 5(4) with a proportional-integral step controller, specialized
to the four-component mode state (f, g, w, A).  The field is passed as flat
pulse-parameter arrays so the whole loop stays in nopython mode and releases
the GIL (mode solves parallelize across threads).
"""

from __future__ import annotations

import numpy as np
from numba import njit

# integration outcome codes
OK = 0
STEP_UNDERFLOW = 1
CONSERVATION_VIOLATION = 2

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
# error coefficients: 5th-order weights minus embedded 4th-order weights
_E1 = 35.0 / 384.0 - 5179.0 / 57600.0
_E3 = 500.0 / 1113.0 - 7571.0 / 16695.0
_E4 = 125.0 / 192.0 - 393.0 / 640.0
_E5 = -2187.0 / 6784.0 + 92097.0 / 339200.0
_E6 = 11.0 / 84.0 - 187.0 / 2100.0
_E7 = -1.0 / 40.0


@njit(cache=True, nogil=True, fastmath=False)
def field_at(t, amp, omg, tau, b_neg, b_pos):
    e = 0.0
    for k in range(amp.shape[0]):
        b = b_neg[k] if t <= 0.0 else b_pos[k]
        x = t / tau[k]
        e += amp[k] * np.exp(-0.5 * x * x) * np.cos(b * t * t + omg[k] * t)
    return e


@njit(cache=True, nogil=True, fastmath=False)
def _phase_rate_bound(t_lo, t_hi, amp, omg, b_neg, b_pos):
    tmax = max(abs(t_lo), abs(t_hi))
    m = 0.0
    for k in range(amp.shape[0]):
        bb = max(abs(b_neg[k]), abs(b_pos[k]))
        r = 2.0 * bb * tmax + abs(omg[k])
        if r > m:
            m = r
    return m


@njit(cache=True, nogil=True, fastmath=False)
def _rhs(t, y, p3, eps2, eps_perp, amp, omg, tau, b_neg, b_pos, out):
    e = field_at(t, amp, omg, tau, b_neg, b_pos)
    ppar = p3 - y[3]
    w2 = eps2 + ppar * ppar
    om = np.sqrt(w2)
    q = e * eps_perp / w2
    out[0] = 0.5 * q * y[1]
    out[1] = q * (1.0 - 2.0 * y[0]) - 2.0 * om * y[2]
    out[2] = 2.0 * om * y[1]
    out[3] = -e


@njit(cache=True, nogil=True, fastmath=False)
def integrate_mode(
    p3,
    eps2,
    amp,
    omg,
    tau,
    b_neg,
    b_pos,
    t0,
    t1,
    rtol,
    atol,
    max_step,
    resid_limit,
    record,
    stride,
):
    """Advance (f, g, w, A) from vacuum data at t0 to t1.

    Returns (status, y, max_residual, n_accepted, series) where series is a
    (n, 5) array of (t, f, g, w, A) at every ``stride``-th accepted step
    (empty when ``record`` is false).
    """
    eps_perp = np.sqrt(eps2)
    y = np.zeros(4)
    k1 = np.zeros(4)
    k2 = np.zeros(4)
    k3 = np.zeros(4)
    k4 = np.zeros(4)
    k5 = np.zeros(4)
    k6 = np.zeros(4)
    k7 = np.zeros(4)
    ytmp = np.zeros(4)
    ynew = np.zeros(4)

    cap_factor = 0.1  # max phase advance (both field and mode) per step
    safety = 0.9
    min_factor = 0.2
    max_factor = 5.0
    k_exp = 5.0  # controller exponent base (embedded order + 1)
    alpha = 0.7 / k_exp
    beta = 0.4 / k_exp

    t = t0
    h_floor = 1e-12 * (t1 - t0)
    err_prev = 1.0
    max_resid = 0.0
    n_accepted = 0

    cap = 16
    if record:
        series = np.empty((cap, 5))
        series[0, 0] = t0
        series[0, 1:] = 0.0
        n_series = 1
    else:
        series = np.empty((0, 5))
        n_series = 0

    _rhs(t, y, p3, eps2, eps_perp, amp, omg, tau, b_neg, b_pos, k1)

    # initial step: respect the oscillation cap from the start
    om0 = np.sqrt(eps2 + (p3 - y[3]) ** 2)
    h = min(max_step, cap_factor / max(om0, _phase_rate_bound(t0, t0, amp, omg, b_neg, b_pos), 1.0))

    while t < t1:
        if h > t1 - t:
            h = t1 - t
        # oscillation cap: step must resolve both the mode energy and the
        # fastest instantaneous field frequency over [t, t+h]
        om_mode = np.sqrt(eps2 + (p3 - y[3]) ** 2)
        for _ in range(3):
            bound = max(om_mode, _phase_rate_bound(t, t + h, amp, omg, b_neg, b_pos))
            hcap = cap_factor / bound
            if h <= hcap:
                break
            h = hcap
        if h < h_floor:
            return STEP_UNDERFLOW, y, max_resid, n_accepted, series[:n_series]

        # stages
        for i in range(4):
            ytmp[i] = y[i] + h * _A21 * k1[i]
        _rhs(t + _C2 * h, ytmp, p3, eps2, eps_perp, amp, omg, tau, b_neg, b_pos, k2)
        for i in range(4):
            ytmp[i] = y[i] + h * (_A31 * k1[i] + _A32 * k2[i])
        _rhs(t + _C3 * h, ytmp, p3, eps2, eps_perp, amp, omg, tau, b_neg, b_pos, k3)
        for i in range(4):
            ytmp[i] = y[i] + h * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
        _rhs(t + _C4 * h, ytmp, p3, eps2, eps_perp, amp, omg, tau, b_neg, b_pos, k4)
        for i in range(4):
            ytmp[i] = y[i] + h * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i] + _A54 * k4[i])
        _rhs(t + _C5 * h, ytmp, p3, eps2, eps_perp, amp, omg, tau, b_neg, b_pos, k5)
        for i in range(4):
            ytmp[i] = y[i] + h * (
                _A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i] + _A64 * k4[i] + _A65 * k5[i]
            )
        _rhs(t + h, ytmp, p3, eps2, eps_perp, amp, omg, tau, b_neg, b_pos, k6)
        for i in range(4):
            ynew[i] = y[i] + h * (
                _B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i] + _B5 * k5[i] + _B6 * k6[i]
            )
        _rhs(t + h, ynew, p3, eps2, eps_perp, amp, omg, tau, b_neg, b_pos, k7)

        # embedded error estimate, RMS norm
        err2 = 0.0
        for i in range(4):
            e_i = h * (
                _E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i] + _E6 * k6[i] + _E7 * k7[i]
            )
            sc = atol + rtol * max(abs(y[i]), abs(ynew[i]))
            r = e_i / sc
            err2 += r * r
        err = np.sqrt(err2 / 4.0)

        if err <= 1.0:
            t += h
            for i in range(4):
                y[i] = ynew[i]
                k1[i] = k7[i]  # FSAL
            n_accepted += 1
            one_minus_2f = 1.0 - 2.0 * y[0]
            resid = abs(one_minus_2f * one_minus_2f + y[1] * y[1] + y[2] * y[2] - 1.0)
            if resid > max_resid:
                max_resid = resid
            if resid > resid_limit:
                return CONSERVATION_VIOLATION, y, max_resid, n_accepted, series[:n_series]
            if record and (n_accepted % stride == 0 or t >= t1):
                if n_series == series.shape[0]:
                    bigger = np.empty((2 * series.shape[0], 5))
                    bigger[: series.shape[0]] = series
                    series = bigger
                series[n_series, 0] = t
                series[n_series, 1] = y[0]
                series[n_series, 2] = y[1]
                series[n_series, 3] = y[2]
                series[n_series, 4] = y[3]
                n_series += 1
            if err == 0.0:
                factor = max_factor
            else:
                factor = safety * err ** (-alpha) * err_prev**beta
                if factor > max_factor:
                    factor = max_factor
                elif factor < min_factor:
                    factor = min_factor
            err_prev = err
            h *= factor
        else:
            factor = safety * err ** (-alpha)
            if factor < min_factor:
                factor = min_factor
            h *= factor

    return OK, y, max_resid, n_accepted, series[:n_series]
