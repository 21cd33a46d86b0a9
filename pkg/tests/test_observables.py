"""Densities, peaks, and their quadrature/validation contracts."""

import math

import numpy as np
import pytest

from qvepair.observables import (
    DensityMode,
    GridTooCoarseError,
    Spectrum,
    number_density_3d,
    number_density_reduced,
    spectrum_peak,
    spectrum_shift,
)


def make_spectrum(p3, f, p_perp=0.0):
    p3 = np.asarray(p3, dtype=np.float64)
    return Spectrum(
        canonical_momentum=p3,
        kinetic_momentum_final=p3.copy(),
        f=np.asarray(f, dtype=np.float64),
        transverse_momentum=p_perp,
    )


class TestSpectrumValidation:
    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            make_spectrum([], [])

    def test_non_increasing_rejected(self):
        with pytest.raises(ValueError):
            make_spectrum([0.0, 0.0], [1.0, 1.0])

    def test_negative_f_rejected(self):
        with pytest.raises(ValueError):
            make_spectrum([0.0, 1.0], [1.0, -1e-30])


class TestReducedDensity:
    def test_zero(self):
        spec = make_spectrum(np.linspace(-1, 1, 11), np.zeros(11))
        assert number_density_reduced(spec).value == 0.0

    def test_constant(self):
        c, L = 0.3, 2.0
        spec = make_spectrum(np.linspace(-L, L, 401), np.full(401, c))
        expected = 2.0 * c * 2.0 * L / (2.0 * math.pi)
        assert number_density_reduced(spec).value == pytest.approx(expected, rel=1e-12)

    def test_metadata(self):
        spec = make_spectrum(np.linspace(-2, 3, 17), np.ones(17))
        d = number_density_reduced(spec)
        assert d.mode is DensityMode.REDUCED_1D
        assert d.n_par == 17 and d.momentum_range == (-2.0, 3.0)
        assert d.to_dict()["grid"]["range"] == [-2.0, 3.0]

    def test_reflection_invariance(self):
        rng = np.random.default_rng(7)
        p3 = np.linspace(-3.0, 3.0, 101)
        f = rng.random(101)
        forward = number_density_reduced(make_spectrum(p3, f)).value
        mirrored = number_density_reduced(make_spectrum(-p3[::-1], f[::-1])).value
        assert mirrored == pytest.approx(forward, rel=1e-13)

    def test_refinement_agreement_accepted(self):
        p_coarse = np.linspace(-4, 4, 201)
        p_fine = np.linspace(-4, 4, 401)
        coarse = make_spectrum(p_coarse, np.exp(-p_coarse**2))
        fine = make_spectrum(p_fine, np.exp(-p_fine**2))
        d = number_density_reduced(coarse, refined=fine)
        assert d.value > 0.0

    def test_refinement_mismatch_raises(self):
        p_coarse = np.linspace(-4, 4, 9)  # badly under-resolved
        p_fine = np.linspace(-4, 4, 17)
        narrow = np.exp(-((p_coarse / 0.2) ** 2))
        narrow_fine = np.exp(-((p_fine / 0.2) ** 2))
        with pytest.raises(GridTooCoarseError):
            number_density_reduced(
                make_spectrum(p_coarse, narrow),
                refined=make_spectrum(p_fine, narrow_fine),
            )


class TestCylindricalDensity:
    def test_zero(self):
        p3 = np.linspace(-2, 2, 21)
        sheets = [make_spectrum(p3, np.zeros(21), pp) for pp in (0.0, 0.5, 1.0)]
        assert number_density_3d(sheets).value == 0.0

    def test_gaussian_against_closed_form(self):
        # f = exp(-P3^2 - pperp^2):
        #   n = 2/(2 pi)^2 * sqrt(pi) * 1/2 = sqrt(pi) / (4 pi^2)
        p3 = np.linspace(-6.0, 6.0, 201)
        p_perp = np.linspace(0.0, 6.0, 121)
        sheets = [
            make_spectrum(p3, np.exp(-p3**2 - pp**2), pp) for pp in p_perp
        ]
        expected = math.sqrt(math.pi) / (4.0 * math.pi**2)
        assert number_density_3d(sheets).value == pytest.approx(expected, rel=1e-3)

    def test_single_sheet_rejected(self):
        p3 = np.linspace(-2, 2, 5)
        with pytest.raises(ValueError):
            number_density_3d([make_spectrum(p3, np.ones(5), 0.0)])

    def test_perp_grid_must_start_at_zero(self):
        p3 = np.linspace(-2, 2, 5)
        sheets = [make_spectrum(p3, np.ones(5), pp) for pp in (0.1, 0.5)]
        with pytest.raises(ValueError):
            number_density_3d(sheets)

    def test_sheets_must_share_grid(self):
        a = make_spectrum(np.linspace(-2, 2, 5), np.ones(5), 0.0)
        b = make_spectrum(np.linspace(-3, 3, 5), np.ones(5), 0.5)
        with pytest.raises(ValueError):
            number_density_3d([a, b])


class TestPeaks:
    def test_single_point(self):
        spec = make_spectrum([0.7], [0.25])
        assert spectrum_peak(spec) == (0.7, 0.25)

    def test_tie_breaks_leftmost(self):
        spec = make_spectrum([-1.0, 0.0, 1.0], [0.5, 0.1, 0.5])
        assert spectrum_peak(spec)[0] == -1.0

    def test_kinetic_axis(self):
        p3 = np.array([-1.0, 0.0, 1.0])
        spec = Spectrum(p3, p3 + 0.25, np.array([0.0, 1.0, 0.0]))
        assert spectrum_peak(spec, use_kinetic=True)[0] == 0.25

    def test_shift_of_identical_spectra_is_zero(self):
        spec = make_spectrum([-1.0, 0.0, 1.0], [0.1, 0.9, 0.2])
        assert spectrum_shift(spec, spec) == 0.0

    def test_shift_sign(self):
        ref = make_spectrum([-1.0, 0.0, 1.0], [0.1, 0.9, 0.2])
        moved = make_spectrum([-1.0, 0.0, 1.0], [0.9, 0.2, 0.1])
        assert spectrum_shift(moved, ref) == -1.0
