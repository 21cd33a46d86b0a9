"""Per-momentum-mode ODE solver.

Each mode evolves the state (f, g, w) of the pair-creation ODE system

    f' = q g / 2
    g' = q (1 - 2 f) - 2 omega w
    w' = 2 omega g

with q(p, t) = E(t) eps_perp / omega^2(p, t), omega^2 = 1 + p_perp^2 +
(P3 - A)^2, from vacuum initial data.  The vector potential A (gauge
A(t_start) = 0) rides along as a fourth state component with A' = -E, so
modes are fully independent and the integrator's error control covers A.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernel
from .fields import FieldConfig, require_valid
from .observables import Spectrum

__all__ = [
    "ModeParams",
    "SolverOptions",
    "ModeResult",
    "NonConvergenceError",
    "ToleranceViolationError",
    "total_energy",
    "coupling_q",
    "mode_rhs",
    "solve_mode",
    "solve_spectrum",
    "default_window",
    "auto_grid_range",
]


class NonConvergenceError(RuntimeError):
    """Step size underflowed below 1e-12 of the integration window."""


class ToleranceViolationError(RuntimeError):
    """Conservation residual exceeded its bound: integrator misconfiguration."""


@dataclass(frozen=True)
class ModeParams:
    canonical_momentum: float
    transverse_momentum: float = 0.0

    def __post_init__(self):
        if self.transverse_momentum < 0.0:
            raise ValueError("transverse momentum must be >= 0")

    @property
    def transverse_energy_sq(self) -> float:
        return 1.0 + self.transverse_momentum**2


@dataclass(frozen=True)
class SolverOptions:
    rtol: float = 1e-8
    atol: float = 1e-12
    t_start: float | None = None  # None: -8 * max pulse width
    t_end: float | None = None  # None: +8 * max pulse width
    max_step: float = 1.0
    record_series: bool = False
    series_stride: int = 100

    def __post_init__(self):
        if not (self.rtol > 0.0 and self.atol > 0.0):
            raise ValueError("rtol and atol must be positive")
        if self.t_start is not None and self.t_end is not None and not (self.t_start < self.t_end):
            raise ValueError("t_start must be below t_end")
        if not (self.max_step > 0.0):
            raise ValueError("max_step must be positive")
        if self.series_stride < 1:
            raise ValueError("series_stride must be a positive integer")


@dataclass(frozen=True)
class ModeResult:
    final_f: float
    final_A: float
    kinetic_momentum_final: float
    accepted_steps: int
    max_conservation_residual: float
    series: np.ndarray | None = None  # (n, 5) rows of (t, f, g, w, A)


def default_window(field: FieldConfig) -> tuple[float, float]:
    """[-8 tau_max, +8 tau_max]: the Gaussian envelope there is ~1.3e-14 of
    the peak, below solver tolerance."""
    w = 8.0 * field.max_width
    return (-w, w)


def _resolve_window(field: FieldConfig, opts: SolverOptions) -> tuple[float, float]:
    lo, hi = default_window(field)
    t0 = opts.t_start if opts.t_start is not None else lo
    t1 = opts.t_end if opts.t_end is not None else hi
    if not (t0 < t1):
        raise ValueError("t_start must be below t_end")
    return t0, t1


def total_energy(params: ModeParams, A: float) -> float:
    """sqrt(1 + p_perp^2 + (P3 - A)^2); never below the rest energy 1."""
    ppar = params.canonical_momentum - A
    return math.sqrt(params.transverse_energy_sq + ppar * ppar)


def coupling_q(params: ModeParams, E: float, A: float) -> float:
    """q = E * eps_perp / omega^2 with the dimensionless field value playing
    the role of e*E (critical-field units)."""
    ppar = params.canonical_momentum - A
    w2 = params.transverse_energy_sq + ppar * ppar
    return E * math.sqrt(params.transverse_energy_sq) / w2


def mode_rhs(
    state: tuple[float, float, float, float],
    params: ModeParams,
    t: float,
    field: FieldConfig,
) -> tuple[float, float, float, float]:
    """Right-hand side (f', g', w', A') at time t."""
    from .fields import field_strength

    f, g, w, a = state
    e = field_strength(field, t)
    om = total_energy(params, a)
    q = coupling_q(params, e, a)
    return (0.5 * q * g, q * (1.0 - 2.0 * f) - 2.0 * om * w, 2.0 * om * g, -e)


def solve_mode(
    params: ModeParams,
    field: FieldConfig,
    opts: SolverOptions = SolverOptions(),
    allow_chirp_overrun: bool = False,
) -> ModeResult:
    """Integrate one mode from vacuum data over the configured window."""
    require_valid(field, allow_chirp_overrun=allow_chirp_overrun)
    t0, t1 = _resolve_window(field, opts)
    amp, omg, tau, b_neg, b_pos = field.as_arrays()
    resid_limit = 100.0 * opts.rtol
    status, y, max_resid, n_accepted, series = _kernel.integrate_mode(
        float(params.canonical_momentum),
        float(params.transverse_energy_sq),
        amp,
        omg,
        tau,
        b_neg,
        b_pos,
        float(t0),
        float(t1),
        float(opts.rtol),
        float(opts.atol),
        float(opts.max_step),
        resid_limit,
        bool(opts.record_series),
        int(opts.series_stride),
    )
    if status == _kernel.STEP_UNDERFLOW:
        raise NonConvergenceError(
            f"step size underflowed at P3={params.canonical_momentum}, "
            f"p_perp={params.transverse_momentum}"
        )
    if status == _kernel.CONSERVATION_VIOLATION:
        raise ToleranceViolationError(
            f"conservation residual {max_resid:.3e} exceeded {resid_limit:.3e} "
            f"at P3={params.canonical_momentum}"
        )
    return ModeResult(
        final_f=float(y[0]),
        final_A=float(y[3]),
        kinetic_momentum_final=float(params.canonical_momentum - y[3]),
        accepted_steps=int(n_accepted),
        max_conservation_residual=float(max_resid),
        series=series if opts.record_series else None,
    )


def _n_workers(n_threads: int) -> int:
    if n_threads > 0:
        return n_threads
    env = os.environ.get("QVE_THREADS", "")
    if env.isdigit() and int(env) > 0:
        return int(env)
    return os.cpu_count() or 1


def solve_spectrum(
    grid: Sequence[float] | np.ndarray,
    field: FieldConfig,
    opts: SolverOptions = SolverOptions(),
    p_perp: float = 0.0,
    n_threads: int = 0,
    allow_chirp_overrun: bool = False,
    return_results: bool = False,
):
    """Solve every mode on a strictly increasing P3 grid.

    Modes run concurrently (the kernel releases the GIL) but output is
    assembled by grid index, so results are identical for any worker count.
    The first failing mode error is re-raised with its grid index.
    """
    p3 = np.asarray(grid, dtype=np.float64)
    if p3.size == 0:
        raise ValueError("momentum grid must be non-empty")
    if p3.size > 1 and not np.all(np.diff(p3) > 0.0):
        raise ValueError("momentum grid must be strictly increasing")
    require_valid(field, allow_chirp_overrun=allow_chirp_overrun)

    def one(p: float) -> ModeResult:
        return solve_mode(
            ModeParams(float(p), p_perp), field, opts, allow_chirp_overrun=allow_chirp_overrun
        )

    outcomes: list[ModeResult | Exception] = [None] * p3.size  # type: ignore[list-item]
    workers = min(_n_workers(n_threads), p3.size)
    if workers == 1:
        for i, p in enumerate(p3):
            try:
                outcomes[i] = one(p)
            except Exception as exc:  # noqa: BLE001 - re-raised below with index
                outcomes[i] = exc
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(one, p) for p in p3]
            for i, fut in enumerate(futures):
                try:
                    outcomes[i] = fut.result()
                except Exception as exc:  # noqa: BLE001
                    outcomes[i] = exc
    for i, out in enumerate(outcomes):
        if isinstance(out, Exception):
            raise type(out)(f"mode {i} (P3={p3[i]}): {out}") from out
    results: list[ModeResult] = outcomes  # type: ignore[assignment]
    spectrum = Spectrum(
        canonical_momentum=p3,
        kinetic_momentum_final=np.array([r.kinetic_momentum_final for r in results]),
        f=np.array([max(r.final_f, 0.0) for r in results]),
        transverse_momentum=p_perp,
        field_fingerprint=field.fingerprint(),
    )
    if return_results:
        return spectrum, results
    return spectrum


def auto_grid_range(
    field: FieldConfig,
    opts: SolverOptions = SolverOptions(),
    p_perp: float = 0.0,
    margin: float = 4.0,
    symmetric: bool = False,
) -> tuple[float, float]:
    """Momentum range [A_min - margin*eps_perp, A_max + margin*eps_perp]
    from a preliminary field-only vector-potential integration; this brackets
    the kinetic-momentum support of the created pairs."""
    from .fields import vector_potential_table

    t0, t1 = _resolve_window(field, opts)
    _, a = vector_potential_table(field, t0, t1)
    eps_perp = math.sqrt(1.0 + p_perp**2)
    lo = float(a.min()) - margin * eps_perp
    hi = float(a.max()) + margin * eps_perp
    if symmetric:
        r = max(abs(lo), abs(hi))
        return (-r, r)
    return (lo, hi)
