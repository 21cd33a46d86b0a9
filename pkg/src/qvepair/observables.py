"""Observables over computed momentum spectra.

Number densities follow n = 2 * integral d^3p / (2 pi)^3 f at asymptotic
time; the reduced variant keeps only the longitudinal axis at fixed
transverse momentum, n_red = 2/(2 pi) * integral f dP3.  Quadrature is
composite trapezoid in every direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

__all__ = [
    "Spectrum",
    "DensityMode",
    "DensityResult",
    "GridTooCoarseError",
    "number_density_reduced",
    "number_density_3d",
    "spectrum_peak",
    "spectrum_shift",
    "DENSITY_CALIBRATION",
]

# Multiplicative factor mapping our reduced 1-D densities onto the absolute
# scale of published chirped-pulse results, whose normalization (length unit
# 2*pi/m vs 1/m, reduced vs full 3-D integral) is not stated.  Calibrated
# against the one-color benchmark at omega = 0.325, tau = 100, E0 = 0.1:
# computed 5.44e-11 (b = 0) and 3.59e-9 (b = +/-0.00025) against the
# published 5.4e-11 / 3.585e-9, so the reduced 1-D integral in plain
# electron-mass units already reproduces the published scale and the factor
# is unity.  Ratio, symmetry, and ordering statements never depend on it.
DENSITY_CALIBRATION = 1.0


class GridTooCoarseError(ValueError):
    """Doubling the grid resolution moved the quadrature by more than 1%."""


class DensityMode(Enum):
    REDUCED_1D = "reduced_1d"
    CYLINDRICAL_3D = "cylindrical_3d"


@dataclass(frozen=True)
class Spectrum:
    """Asymptotic occupation numbers over a longitudinal-momentum grid.

    ``canonical_momentum`` is the conserved P3 per mode;
    ``kinetic_momentum_final`` is P3 - A(t_end).
    """

    canonical_momentum: np.ndarray
    kinetic_momentum_final: np.ndarray
    f: np.ndarray
    transverse_momentum: float = 0.0
    field_fingerprint: str = ""

    def __post_init__(self):
        p3 = np.asarray(self.canonical_momentum, dtype=np.float64)
        if p3.size == 0:
            raise ValueError("spectrum must be non-empty")
        if p3.size > 1 and not np.all(np.diff(p3) > 0.0):
            raise ValueError("canonical momentum grid must be strictly increasing")
        if np.any(np.asarray(self.f) < 0.0):
            raise ValueError("occupation numbers must be non-negative")

    def __len__(self) -> int:
        return int(np.asarray(self.canonical_momentum).size)

    def max_f(self) -> float:
        return float(np.max(self.f))


@dataclass(frozen=True)
class DensityResult:
    value: float
    mode: DensityMode
    n_par: int
    n_perp: int = 1
    momentum_range: tuple[float, float] | None = None

    def to_dict(self) -> dict:
        lo, hi = self.momentum_range if self.momentum_range else (None, None)
        return {
            "value": self.value,
            "mode": self.mode.value,
            "grid": {"n_par": self.n_par, "n_perp": self.n_perp, "range": [lo, hi]},
        }


def number_density_reduced(spec: Spectrum, refined: Spectrum | None = None) -> DensityResult:
    """Reduced 1-D pair number density 2/(2 pi) * integral f dP3.

    When a refined spectrum (same field, doubled resolution) is supplied the
    two quadratures are compared and a > 1% discrepancy raises
    GridTooCoarseError rather than being silently accepted.
    """
    p3 = np.asarray(spec.canonical_momentum, dtype=np.float64)
    f = np.asarray(spec.f, dtype=np.float64)
    value = 2.0 / (2.0 * np.pi) * float(np.trapezoid(f, p3))
    if refined is not None:
        fine = number_density_reduced(refined)
        scale = max(abs(fine.value), 1e-300)
        if abs(fine.value - value) / scale > 0.01:
            raise GridTooCoarseError(
                f"reduced density moved by {abs(fine.value - value) / scale:.3%} "
                f"under grid refinement ({value:g} -> {fine.value:g})"
            )
    return DensityResult(
        value=value,
        mode=DensityMode.REDUCED_1D,
        n_par=len(spec),
        momentum_range=(float(p3[0]), float(p3[-1])),
    )


def number_density_3d(spectra: Sequence[Spectrum]) -> DensityResult:
    """Cylindrically symmetric 3-D density
    2/(2 pi)^2 * integral integral f(P3, p_perp) p_perp dp_perp dP3,
    trapezoid in both directions.  Requires >= 2 transverse sheets with
    strictly increasing p_perp starting at 0.
    """
    if len(spectra) < 2:
        raise ValueError("need at least 2 transverse-momentum sheets")
    p_perp = np.array([s.transverse_momentum for s in spectra], dtype=np.float64)
    if p_perp[0] != 0.0 or not np.all(np.diff(p_perp) > 0.0):
        raise ValueError("transverse momenta must be strictly increasing starting at 0")
    p3 = np.asarray(spectra[0].canonical_momentum, dtype=np.float64)
    for s in spectra[1:]:
        if len(s) != p3.size or not np.allclose(s.canonical_momentum, p3):
            raise ValueError("all sheets must share the longitudinal grid")
    sheet_integrals = np.array([np.trapezoid(np.asarray(s.f), p3) for s in spectra])
    value = 2.0 / (2.0 * np.pi) ** 2 * float(np.trapezoid(sheet_integrals * p_perp, p_perp))
    return DensityResult(
        value=value,
        mode=DensityMode.CYLINDRICAL_3D,
        n_par=p3.size,
        n_perp=p_perp.size,
        momentum_range=(float(p3[0]), float(p3[-1])),
    )


def spectrum_peak(spec: Spectrum, use_kinetic: bool = False) -> tuple[float, float]:
    """Grid point of maximal f; ties broken toward the smallest momentum.

    Momenta default to canonical P3; pass ``use_kinetic`` for the final
    kinetic momentum axis.
    """
    f = np.asarray(spec.f, dtype=np.float64)
    idx = int(np.argmax(f))  # argmax returns the first (leftmost) maximum
    axis = spec.kinetic_momentum_final if use_kinetic else spec.canonical_momentum
    return float(np.asarray(axis)[idx]), float(f[idx])


def spectrum_shift(spec: Spectrum, reference: Spectrum, use_kinetic: bool = False) -> float:
    """Peak-momentum displacement of ``spec`` relative to ``reference``."""
    return spectrum_peak(spec, use_kinetic)[0] - spectrum_peak(reference, use_kinetic)[0]
