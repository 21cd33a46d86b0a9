"""Reference solver for the integro-differential form of the mode equation.

Advances the occupation number directly through

    f'(t) = q(t)/2 * integral_{t0}^{t} q(t') [1 - 2 f(t')] cos(2 Theta(t', t)) dt'

on a uniform grid with trapezoidal quadrature for the history integral, the
accumulated phase Theta(t', t) = Phi(t) - Phi(t'), and the vector potential.
Each step re-uses the stored q(t')[1 - 2 f(t')] samples, so a step costs
O(N) and a full solve O(N^2).  Deliberately simple and second order: its
whole value is being an independent check on the ODE reformulation, so it is
restricted to short pulses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .fields import FieldConfig, field_strength, require_valid, vector_potential_table
from .solver import ModeParams

__all__ = [
    "OracleOptions",
    "StepTooLargeError",
    "max_step_allowed",
    "oracle_solve_mode",
    "perturbative_estimate",
]


class StepTooLargeError(ValueError):
    """The uniform step violates the phase-resolution constraint."""


@dataclass(frozen=True)
class OracleOptions:
    step: float
    t_start: float
    t_end: float

    def __post_init__(self):
        if not (self.step > 0.0):
            raise ValueError("step must be positive")
        if not (self.t_start < self.t_end):
            raise ValueError("t_start must be below t_end")


def max_step_allowed(params: ModeParams, field: FieldConfig, t_start: float, t_end: float) -> float:
    """min(2 pi / (64 * omega_max), tau_min / 1000) where omega_max bounds
    both the mode energy and the instantaneous field frequency over the
    window (the energy bound comes from a preliminary A-only integration)."""
    _, a = vector_potential_table(field, t_start, t_end)
    eps2 = params.transverse_energy_sq
    p3 = params.canonical_momentum
    ppar_max = max(abs(p3 - a.min()), abs(p3 - a.max()))
    om_energy = math.sqrt(eps2 + ppar_max * ppar_max)
    om_max = max(om_energy, field.phase_rate_bound(t_start, t_end))
    tau_min = min(p.width for p in field.pulses)
    return min(2.0 * math.pi / (64.0 * om_max), tau_min / 1000.0)


def oracle_solve_mode(
    params: ModeParams,
    field: FieldConfig,
    opts: OracleOptions,
    allow_chirp_overrun: bool = False,
) -> float:
    """Final occupation number from the direct history-quadrature scheme."""
    require_valid(field, allow_chirp_overrun=allow_chirp_overrun)
    limit = max_step_allowed(params, field, opts.t_start, opts.t_end)
    if opts.step > limit:
        raise StepTooLargeError(f"step {opts.step} exceeds the allowed {limit:.3e}")

    n = int(math.ceil((opts.t_end - opts.t_start) / opts.step))
    t = np.linspace(opts.t_start, opts.t_end, n + 1)
    h = t[1] - t[0]

    e = field_strength(field, t)
    a = np.concatenate([[0.0], cumulative_trapezoid(-e, t)])
    eps2 = params.transverse_energy_sq
    ppar = params.canonical_momentum - a
    om = np.sqrt(eps2 + ppar * ppar)
    q = e * math.sqrt(eps2) / (om * om)
    phi = np.concatenate([[0.0], cumulative_trapezoid(om, t)])

    # stored integrand samples s_j = q_j (1 - 2 f_j), extended as f evolves
    s = np.empty(n + 1)
    s[0] = q[0]  # vacuum: f = 0
    f = 0.0
    rate_prev = 0.0  # f'(t_0) = 0 (empty history integral)

    for i in range(n):
        j = i + 1
        # Heun predictor for the new integrand endpoint
        f_pred = f + h * rate_prev
        s[j] = q[j] * (1.0 - 2.0 * f_pred)
        c = np.cos(2.0 * (phi[j] - phi[: j + 1]))
        hist = h * (np.dot(s[: j + 1], c) - 0.5 * (s[0] * c[0] + s[j]))
        rate_new = 0.5 * q[j] * hist
        f = f + 0.5 * h * (rate_prev + rate_new)
        # correct the stored endpoint and the rate carried to the next step
        s_corr = q[j] * (1.0 - 2.0 * f)
        rate_prev = rate_new + 0.5 * q[j] * h * 0.5 * (s_corr - s[j])
        s[j] = s_corr

    return float(f)


def perturbative_estimate(
    params: ModeParams,
    field: FieldConfig,
    t_start: float,
    t_end: float,
    step: float = 0.002,
) -> float:
    """Low-density limit |1/2 * integral q(t) exp(2 i Theta(t)) dt|^2 from
    plain trapezoidal quadrature; independent of both solvers."""
    n = int(math.ceil((t_end - t_start) / step))
    t = np.linspace(t_start, t_end, n + 1)
    e = field_strength(field, t)
    a = np.concatenate([[0.0], cumulative_trapezoid(-e, t)])
    eps2 = params.transverse_energy_sq
    ppar = params.canonical_momentum - a
    om = np.sqrt(eps2 + ppar * ppar)
    q = e * math.sqrt(eps2) / (om * om)
    phi = np.concatenate([[0.0], cumulative_trapezoid(om, t)])
    amp = 0.5 * np.trapezoid(q * np.exp(2.0j * phi), t)
    return float(abs(amp) ** 2)
