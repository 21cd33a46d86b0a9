"""Declarative parameter sweeps over the mode solver.

A sweep is (base field, axis of parameter values, labeled field
transformations); every (variant, axis value) cell is solved to a spectrum
and reduced to a number density.  Rows are emitted in (variant, axis) order
regardless of execution scheduling, and per-row failures are recorded
without aborting the rest of the sweep.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .fields import ChirpProfile, ChirpedPulse, FieldConfig, validate
from .observables import DensityResult, Spectrum, number_density_reduced
from .solver import SolverOptions, auto_grid_range, solve_spectrum

__all__ = [
    "SweepKind",
    "GridPolicy",
    "Variant",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "run_sweep",
    "fig2_variants",
    "fig3_variants",
    "fig5_variants",
    "frequency_ratio_variant",
]


class SweepKind(Enum):
    CARRIER_FREQUENCY = "carrier_frequency"
    CHIRP_MAGNITUDE = "chirp_magnitude"
    SIGN_COMBINATION = "sign_combination"
    FREQUENCY_RATIO = "frequency_ratio"


@dataclass(frozen=True)
class GridPolicy:
    n_par: int = 512
    momentum_range: tuple[float, float] | None = None  # None: auto per field
    p_perp: float = 0.0
    symmetric: bool = False

    def resolve(self, field: FieldConfig, opts: SolverOptions) -> np.ndarray:
        if self.momentum_range is not None:
            lo, hi = self.momentum_range
        else:
            lo, hi = auto_grid_range(field, opts, self.p_perp, symmetric=self.symmetric)
        return np.linspace(lo, hi, self.n_par)


@dataclass(frozen=True)
class Variant:
    """A labeled transformation: (base field, axis value) -> concrete field."""

    label: str
    build: Callable[[FieldConfig, float], FieldConfig]


@dataclass(frozen=True)
class SweepSpec:
    kind: SweepKind
    base_field: FieldConfig
    axis: tuple[float, ...]
    variants: tuple[Variant, ...]
    solver: SolverOptions = SolverOptions()
    grid: GridPolicy = GridPolicy()
    allow_chirp_overrun: bool = False

    def __init__(self, kind, base_field, axis, variants, solver=SolverOptions(),
                 grid=GridPolicy(), allow_chirp_overrun=False):
        axis = tuple(float(a) for a in axis)
        if not axis:
            raise ValueError("sweep axis must be non-empty")
        if len(axis) > 1 and not all(b > a for a, b in zip(axis, axis[1:])):
            raise ValueError("sweep axis must be strictly increasing")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "base_field", base_field)
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "variants", tuple(variants))
        object.__setattr__(self, "solver", solver)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "allow_chirp_overrun", bool(allow_chirp_overrun))


@dataclass(frozen=True)
class SweepRow:
    variant_label: str
    axis_value: float
    density: DensityResult | None
    spectrum: Spectrum | None = None
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]

    @property
    def errors(self) -> list[SweepRow]:
        return [r for r in self.rows if r.error is not None]

    def density(self, label: str, axis_value: float) -> float:
        for r in self.rows:
            if r.variant_label == label and r.axis_value == axis_value and r.density:
                return r.density.value
        raise KeyError(f"no successful row for ({label!r}, {axis_value})")


def run_sweep(spec: SweepSpec, n_threads: int = 0, keep_spectra: bool = False) -> SweepResult:
    rows: list[SweepRow] = []
    for variant in spec.variants:
        for value in spec.axis:
            try:
                cfg = variant.build(spec.base_field, value)
                problems = validate(cfg)
                if spec.allow_chirp_overrun:
                    problems = [p for p in problems if p.kind != "chirp_bound"]
                if problems:
                    raise ValueError("; ".join(str(p) for p in problems))
                grid = spec.grid.resolve(cfg, spec.solver)
                spectrum = solve_spectrum(
                    grid,
                    cfg,
                    spec.solver,
                    p_perp=spec.grid.p_perp,
                    n_threads=n_threads,
                    allow_chirp_overrun=spec.allow_chirp_overrun,
                )
                density = number_density_reduced(spectrum)
                rows.append(
                    SweepRow(
                        variant.label,
                        value,
                        density,
                        spectrum=spectrum if keep_spectra else None,
                    )
                )
            except Exception as exc:  # noqa: BLE001 - recorded, sweep continues
                rows.append(SweepRow(variant.label, value, None, error=str(exc)))
    return SweepResult(tuple(rows))


def _with_pulse(base: FieldConfig, index: int, **changes) -> FieldConfig:
    pulses = list(base.pulses)
    pulses[index] = dataclasses.replace(pulses[index], **changes)
    return FieldConfig(pulses)


def fig2_variants(chirp_magnitude: float = 0.00025) -> list[Variant]:
    """Carrier-frequency sweep variants: chirp-free, constant +|b|, constant
    -|b| on the (single) pulse; the axis value is the carrier frequency."""
    def make(b: float) -> Callable[[FieldConfig, float], FieldConfig]:
        return lambda base, omega: _with_pulse(
            base, 0, carrier_frequency=omega, chirp=b, chirp_profile=ChirpProfile.CONSTANT
        )

    return [
        Variant("b=0", make(0.0)),
        Variant(f"b=+{chirp_magnitude}", make(chirp_magnitude)),
        Variant(f"b=-{chirp_magnitude}", make(-chirp_magnitude)),
    ]


def fig3_variants() -> list[Variant]:
    """The four one-color chirp-profile cases; the axis value is |b|:
    (a) constant +|b|, (b) constant -|b|, (c) sign-flip starting positive,
    (d) sign-flip starting negative."""
    def constant(sign: int) -> Callable[[FieldConfig, float], FieldConfig]:
        return lambda base, b: _with_pulse(
            base, 0, chirp=sign * b, chirp_profile=ChirpProfile.CONSTANT
        )

    def sign_flip(first: int) -> Callable[[FieldConfig, float], FieldConfig]:
        return lambda base, b: _with_pulse(
            base, 0, chirp=b, chirp_profile=ChirpProfile.SIGN_FLIP, first_half_sign=first
        )

    return [
        Variant("a", constant(+1)),
        Variant("b", constant(-1)),
        Variant("c", sign_flip(+1)),
        Variant("d", sign_flip(-1)),
    ]


def fig5_variants() -> list[Variant]:
    """Two-color sign combinations; the axis value is |b|/omega, applied to
    every pulse as chirp_k = sign_k * axis * omega_k (so |b2| = 10 |b1| for
    the standard 10:1 frequency ratio)."""
    def combo(s1: int, s2: int) -> Callable[[FieldConfig, float], FieldConfig]:
        def build(base: FieldConfig, ratio: float) -> FieldConfig:
            signs = (s1, s2)
            pulses = [
                dataclasses.replace(
                    p,
                    chirp=signs[k] * ratio * p.carrier_frequency,
                    chirp_profile=ChirpProfile.CONSTANT,
                )
                for k, p in enumerate(base.pulses)
            ]
            return FieldConfig(pulses)

        return build

    return [
        Variant("b1+b2+", combo(+1, +1)),
        Variant("b1-b2-", combo(-1, -1)),
        Variant("b1+b2-", combo(+1, -1)),
        Variant("b1-b2+", combo(-1, +1)),
    ]


def frequency_ratio_variant(label: str, b1: float, b2: float) -> Variant:
    """Two-color frequency-ratio sweep: the axis value is omega2/omega1; the
    second pulse's carrier becomes axis * omega1 while chirps stay fixed."""
    def build(base: FieldConfig, ratio: float) -> FieldConfig:
        omega1 = base.pulses[0].carrier_frequency
        pulses = list(base.pulses)
        pulses[0] = dataclasses.replace(pulses[0], chirp=b1, chirp_profile=ChirpProfile.CONSTANT)
        pulses[1] = dataclasses.replace(
            pulses[1],
            carrier_frequency=ratio * omega1,
            chirp=b2,
            chirp_profile=ChirpProfile.CONSTANT,
        )
        return FieldConfig(pulses)

    return Variant(label, build)
