"""Chirped Gaussian laser pulse fields.

The external electric field is a superposition of Gaussian-envelope pulses
with a quadratic-in-time carrier phase,

    E(t) = sum_k  E_k * exp(-t^2 / 2 tau_k^2) * cos(b_k(t) * t^2 + omega_k * t),

where ``b_k(t)`` is either a constant chirp parameter or flips sign at t = 0
(producing a time-symmetric pulse).  All quantities are in electron-mass
units with field strengths in units of the critical field, so the
dimensionless field value is directly the coupling appearing in the mode
equations.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

__all__ = [
    "ChirpProfile",
    "ChirpedPulse",
    "FieldConfig",
    "FieldValidationError",
    "Violation",
    "field_strength",
    "validate",
    "require_valid",
    "instantaneous_frequency",
]


class ChirpProfile(Enum):
    CONSTANT = "constant"
    SIGN_FLIP = "sign_flip"


class FieldValidationError(ValueError):
    """Raised when a field configuration violates its invariants."""

    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


@dataclass(frozen=True)
class Violation:
    pulse: int | None  # None for config-level problems
    kind: str  # "structure" or "chirp_bound"
    message: str

    def __str__(self) -> str:
        where = "config" if self.pulse is None else f"pulse {self.pulse}"
        return f"{where}: {self.message}"


@dataclass(frozen=True)
class ChirpedPulse:
    """One Gaussian pulse: amplitude (units of E_cr), carrier frequency and
    chirp in electron-mass units, width in inverse-mass units."""

    amplitude: float
    carrier_frequency: float
    width: float
    chirp: float = 0.0
    chirp_profile: ChirpProfile = ChirpProfile.CONSTANT
    first_half_sign: int = 1  # only meaningful for SIGN_FLIP

    def chirp_branches(self) -> tuple[float, float]:
        """Effective chirp parameter on the t <= 0 and t > 0 branches."""
        if self.chirp_profile is ChirpProfile.SIGN_FLIP:
            s = float(self.first_half_sign)
            return (self.chirp * s, -self.chirp * s)
        return (self.chirp, self.chirp)

    def to_dict(self) -> dict:
        d = {
            "amplitude": self.amplitude,
            "carrier_frequency": self.carrier_frequency,
            "width": self.width,
            "chirp": self.chirp,
            "chirp_profile": self.chirp_profile.value,
        }
        if self.chirp_profile is ChirpProfile.SIGN_FLIP:
            d["first_half_sign"] = int(self.first_half_sign)
        return d

    @staticmethod
    def from_dict(d: dict) -> "ChirpedPulse":
        profile = ChirpProfile(d.get("chirp_profile", "constant"))
        return ChirpedPulse(
            amplitude=float(d["amplitude"]),
            carrier_frequency=float(d["carrier_frequency"]),
            width=float(d["width"]),
            chirp=float(d.get("chirp", 0.0)),
            chirp_profile=profile,
            first_half_sign=int(d.get("first_half_sign", 1)),
        )


@dataclass(frozen=True)
class FieldConfig:
    """Ordered superposition of pulses (length 1 = one-color, 2 = two-color)."""

    pulses: tuple[ChirpedPulse, ...]

    def __init__(self, pulses: Sequence[ChirpedPulse]):
        object.__setattr__(self, "pulses", tuple(pulses))

    @property
    def max_width(self) -> float:
        return max(p.width for p in self.pulses)

    @property
    def total_amplitude(self) -> float:
        return sum(p.amplitude for p in self.pulses)

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Pulse parameters as flat arrays (amp, omega, tau, b_neg, b_pos)
        for the compiled kernels."""
        amp = np.array([p.amplitude for p in self.pulses], dtype=np.float64)
        omg = np.array([p.carrier_frequency for p in self.pulses], dtype=np.float64)
        tau = np.array([p.width for p in self.pulses], dtype=np.float64)
        branches = [p.chirp_branches() for p in self.pulses]
        b_neg = np.array([b[0] for b in branches], dtype=np.float64)
        b_pos = np.array([b[1] for b in branches], dtype=np.float64)
        return amp, omg, tau, b_neg, b_pos

    def to_dict(self) -> dict:
        return {"pulses": [p.to_dict() for p in self.pulses]}

    @staticmethod
    def from_dict(d: dict) -> "FieldConfig":
        return FieldConfig([ChirpedPulse.from_dict(p) for p in d["pulses"]])

    def fingerprint(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def phase_rate_bound(self, t_lo: float, t_hi: float) -> float:
        """Upper bound on |d/dt(b(t) t^2 + omega t)| over [t_lo, t_hi]."""
        tmax = max(abs(t_lo), abs(t_hi))
        return max(
            2.0 * abs(p.chirp) * tmax + abs(p.carrier_frequency) for p in self.pulses
        )


def validate(config: FieldConfig) -> list[Violation]:
    """Check every invariant; returns the full list of violations (empty = ok).

    The chirp bound |b| < omega/tau is strict: the boundary value is a
    violation, never a silent clamp.
    """
    violations: list[Violation] = []
    if not config.pulses:
        return [Violation(None, "structure", "field must contain at least one pulse")]
    for i, p in enumerate(config.pulses):
        if not (p.amplitude >= 0.0):
            violations.append(
                Violation(i, "structure", f"amplitude must be >= 0, got {p.amplitude}")
            )
        if not (p.width > 0.0):
            violations.append(
                Violation(i, "structure", f"width must be > 0, got {p.width}")
            )
        if not (p.carrier_frequency >= 0.0):
            violations.append(
                Violation(
                    i,
                    "structure",
                    f"carrier_frequency must be >= 0, got {p.carrier_frequency}",
                )
            )
        if p.chirp_profile is ChirpProfile.SIGN_FLIP and p.first_half_sign not in (-1, 1):
            violations.append(
                Violation(
                    i, "structure", f"first_half_sign must be +1 or -1, got {p.first_half_sign}"
                )
            )
        if p.width > 0.0 and not (abs(p.chirp) < p.carrier_frequency / p.width):
            violations.append(
                Violation(
                    i,
                    "chirp_bound",
                    f"|chirp| = {abs(p.chirp)} must be strictly below "
                    f"carrier_frequency/width = {p.carrier_frequency / p.width}",
                )
            )
    return violations


def require_valid(config: FieldConfig, allow_chirp_overrun: bool = False) -> None:
    """Raise FieldValidationError unless the config is valid.

    ``allow_chirp_overrun`` downgrades chirp-bound violations to acceptable:
    several published experiments drive the weak high-frequency pulse past
    |b| < omega/tau, so solvers accept such fields when explicitly asked.
    """
    violations = validate(config)
    if allow_chirp_overrun:
        violations = [v for v in violations if v.kind != "chirp_bound"]
    if violations:
        raise FieldValidationError(violations)


def _branch_chirp(pulse: ChirpedPulse, t):
    b_neg, b_pos = pulse.chirp_branches()
    return np.where(np.asarray(t) <= 0.0, b_neg, b_pos)


def field_strength(config: FieldConfig, t):
    """Evaluate E(t); accepts a scalar or an ndarray of times."""
    t_arr = np.asarray(t, dtype=np.float64)
    total = np.zeros_like(t_arr)
    for p in config.pulses:
        b = _branch_chirp(p, t_arr)
        envelope = np.exp(-0.5 * (t_arr / p.width) ** 2)
        total = total + p.amplitude * envelope * np.cos(b * t_arr**2 + p.carrier_frequency * t_arr)
    if np.isscalar(t) or t_arr.ndim == 0:
        return float(total)
    return total


def instantaneous_frequency(pulse: ChirpedPulse, t):
    """Exact phase derivative d/dt [b(t) t^2 + omega t] = 2 b(t) t + omega,
    evaluated on the branch containing t (omega at t = 0)."""
    t_arr = np.asarray(t, dtype=np.float64)
    b = _branch_chirp(pulse, t_arr)
    out = 2.0 * b * t_arr + pulse.carrier_frequency
    if np.isscalar(t) or t_arr.ndim == 0:
        return float(out)
    return out


def vector_potential_table(
    config: FieldConfig, t_start: float, t_end: float, n: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Vector potential A(t) with gauge A(t_start) = 0, from Adot = -E(t)
    by cumulative trapezoid on a grid fine enough for the fastest phase."""
    from scipy.integrate import cumulative_trapezoid

    if n <= 0:
        rate = max(config.phase_rate_bound(t_start, t_end), 1e-6)
        dt = min((t_end - t_start) / 1000.0, 2.0 * math.pi / (64.0 * rate))
        n = int(math.ceil((t_end - t_start) / dt)) + 1
    t = np.linspace(t_start, t_end, n)
    e = field_strength(config, t)
    a = np.concatenate([[0.0], cumulative_trapezoid(-e, t)])
    return t, a
