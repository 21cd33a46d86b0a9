"""Electron-positron pair production from vacuum in chirped Gaussian laser
pulses, solved mode-by-mode from the quantum Vlasov equation's ODE form."""

from .fields import (
    ChirpProfile,
    ChirpedPulse,
    FieldConfig,
    FieldValidationError,
    field_strength,
    instantaneous_frequency,
    validate,
)
from .observables import (
    DensityMode,
    DensityResult,
    Spectrum,
    number_density_3d,
    number_density_reduced,
    spectrum_peak,
    spectrum_shift,
)
from .oracle import OracleOptions, oracle_solve_mode, perturbative_estimate
from .solver import (
    ModeParams,
    ModeResult,
    SolverOptions,
    coupling_q,
    mode_rhs,
    solve_mode,
    solve_spectrum,
    total_energy,
)
from .sweeps import SweepKind, SweepSpec, Variant, fig3_variants, fig5_variants, run_sweep

__version__ = "0.1.0"
