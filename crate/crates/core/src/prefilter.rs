//! Fourier-domain annular bandpass: converts a speed band [c_low, c_high]
//! into a spatial-wavenumber annulus and applies it to a whole field.

use rustfft::FftDirection;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::fft::{bin_wavenumber, fft2_inplace};
use crate::field::ComplexField;

/// Speed-band bandpass with raised-cosine edges. The low speed maps to the
/// high wavenumber cutoff and vice versa: k_l = 2 pi f / c_high,
/// k_h = 2 pi f / c_low.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandpassSpec {
    pub c_low: f64,
    pub c_high: f64,
    /// Fraction of each cutoff over which the mask rolls off; 0 gives a
    /// hard-edged annulus.
    pub taper_frac: f64,
    /// Zero the DC bin explicitly.
    pub zero_dc: bool,
}

impl BandpassSpec {
    pub fn new(c_low: f64, c_high: f64) -> Result<Self> {
        let spec = Self { c_low, c_high, taper_frac: 0.05, zero_dc: true };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_taper(mut self, taper_frac: f64) -> Self {
        self.taper_frac = taper_frac;
        self
    }

    pub fn with_zero_dc(mut self, zero_dc: bool) -> Self {
        self.zero_dc = zero_dc;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c_low > 0.0 && self.c_low < self.c_high && self.c_high.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "need 0 < c_low < c_high, got [{}, {}]",
                self.c_low, self.c_high
            )));
        }
        if !(0.0..0.5).contains(&self.taper_frac) {
            return Err(Error::InvalidSpec(format!(
                "taper_frac must lie in [0, 0.5), got {}",
                self.taper_frac
            )));
        }
        Ok(())
    }

    /// Wavenumber cutoffs (k_l, k_h) in rad/m at temporal frequency `freq`.
    pub fn cutoffs(&self, freq: f64) -> (f64, f64) {
        (TAU * freq / self.c_high, TAU * freq / self.c_low)
    }

    /// Mask value at radial wavenumber `r`, in [0, 1].
    fn mask(&self, r: f64, k_l: f64, k_h: f64) -> f64 {
        let t = self.taper_frac;
        let (lo0, lo1) = (k_l * (1.0 - t), k_l * (1.0 + t));
        let (hi0, hi1) = (k_h * (1.0 - t), k_h * (1.0 + t));
        if r <= lo0 || r >= hi1 {
            0.0
        } else if r < lo1 {
            0.5 * (1.0 - (PI * (r - lo0) / (lo1 - lo0)).cos())
        } else if r <= hi0 {
            1.0
        } else {
            0.5 * (1.0 + (PI * (r - hi0) / (hi1 - hi0)).cos())
        }
    }
}

/// Applies the radially symmetric bandpass in the 2D spatial Fourier domain.
/// Anisotropic grids are handled through the physical wavenumber axes.
pub fn bandpass_2d(f: &ComplexField, spec: &BandpassSpec) -> Result<ComplexField> {
    spec.validate()?;
    let (k_l, k_h) = spec.cutoffs(f.freq);
    if k_l * (1.0 + spec.taper_frac) >= k_h * (1.0 - spec.taper_frac) {
        return Err(Error::EmptyPassband);
    }

    let (nx, nz) = (f.grid.nx, f.grid.nz);
    let mut data = f.values.clone();
    fft2_inplace(&mut data, nx, nz, FftDirection::Forward);
    for iz in 0..nz {
        let kz = bin_wavenumber(iz, nz, f.grid.dz);
        for ix in 0..nx {
            let kx = bin_wavenumber(ix, nx, f.grid.dx);
            data[iz * nx + ix] *= spec.mask(kx.hypot(kz), k_l, k_h);
        }
    }
    if spec.zero_dc {
        data[0] = num_complex::Complex64::ZERO;
    }
    fft2_inplace(&mut data, nx, nz, FftDirection::Inverse);
    ComplexField::new(f.grid, f.freq, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GridSpec;
    use crate::synth::{synth_compression, CompressionSpec};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    /// Plane wave exactly on FFT bin (mx, mz) so the spectrum is a single
    /// line and mask behavior is observable without leakage.
    fn bin_wave(grid: GridSpec, mx: usize, mz: usize, amp: f64) -> ComplexField {
        let values = (0..grid.len())
            .map(|i| {
                let (ix, iz) = (i % grid.nx, i / grid.nx);
                let ph = TAU * (mx as f64 * ix as f64 / grid.nx as f64
                    + mz as f64 * iz as f64 / grid.nz as f64);
                Complex64::from_polar(amp, ph)
            })
            .collect();
        ComplexField::new(grid, 200.0, values).unwrap()
    }

    #[test]
    fn cutoff_arithmetic_matches_speed_band() {
        let spec = BandpassSpec::new(0.54, 3.89).unwrap();
        let (k_l, k_h) = spec.cutoffs(200.0);
        assert_relative_eq!(k_l, 323.06, max_relative = 1e-4);
        assert_relative_eq!(k_h, 2327.1, max_relative = 1e-4);
    }

    #[test]
    fn flat_top_wave_passes_unchanged() {
        let grid = GridSpec::new(128, 128, 0.5e-3, 0.5e-3).unwrap();
        // bin 10 -> 981.7 rad/m, inside the [330, 2387] flat top
        let f = bin_wave(grid, 10, 0, 1.3);
        let spec = BandpassSpec::new(0.5, 4.0).unwrap();
        let out = bandpass_2d(&f, &spec).unwrap();
        for (a, b) in out.values.iter().zip(&f.values) {
            assert!((a - b).norm() <= 1e-6 * b.norm());
        }
    }

    #[test]
    fn long_wavelength_wave_is_removed() {
        // 0.1 m extent per 2 bins: compression wavenumber 62.83 rad/m lands
        // exactly on bin 2 of a 0.2 m grid, below k_l
        let grid = GridSpec::new(200, 200, 1e-3, 1e-3).unwrap();
        let comp = synth_compression(
            grid,
            200.0,
            &CompressionSpec {
                speed: 20.0,
                direction_angle: 0.0,
                amplitude_ratio: 1.0,
                phase: 0.2,
                seed: 0,
            },
            1.0,
        )
        .unwrap();
        let spec = BandpassSpec::new(0.5, 4.0).unwrap();
        let out = bandpass_2d(&comp, &spec).unwrap();
        assert!(out.rms() < 1e-6 * comp.rms(), "residual rms {}", out.rms());
    }

    #[test]
    fn never_amplifies() {
        let grid = GridSpec::new(64, 64, 0.5e-3, 0.5e-3).unwrap();
        let values = (0..grid.len())
            .map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let f = ComplexField::new(grid, 200.0, values).unwrap();
        let out = bandpass_2d(&f, &BandpassSpec::new(0.5, 4.0).unwrap()).unwrap();
        assert!(out.rms() <= f.rms() * (1.0 + 1e-12));
    }

    #[test]
    fn idempotent_on_the_flat_top() {
        let grid = GridSpec::new(128, 128, 0.5e-3, 0.5e-3).unwrap();
        let f = bin_wave(grid, 12, 5, 0.8);
        let spec = BandpassSpec::new(0.5, 4.0).unwrap();
        let once = bandpass_2d(&f, &spec).unwrap();
        let twice = bandpass_2d(&once, &spec).unwrap();
        for (a, b) in twice.values.iter().zip(&once.values) {
            assert!((a - b).norm() <= 1e-12 * b.norm().max(1e-12));
        }
    }

    #[test]
    fn linear_in_the_field() {
        let grid = GridSpec::new(64, 64, 0.5e-3, 0.5e-3).unwrap();
        let f = bin_wave(grid, 9, 3, 1.0);
        let g = bin_wave(grid, 2, 14, 1.0);
        let spec = BandpassSpec::new(0.5, 4.0).unwrap();
        let (a, b) = (2.0, -0.7);
        let combo_values = f
            .values
            .iter()
            .zip(&g.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        let combo = ComplexField::new(grid, 200.0, combo_values).unwrap();
        let lhs = bandpass_2d(&combo, &spec).unwrap();
        let rf = bandpass_2d(&f, &spec).unwrap();
        let rg = bandpass_2d(&g, &spec).unwrap();
        let scale = lhs.rms().max(1e-12);
        for i in 0..lhs.values.len() {
            let rhs = a * rf.values[i] + b * rg.values[i];
            assert!((lhs.values[i] - rhs).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn empty_passband_is_an_error() {
        let grid = GridSpec::new(64, 64, 0.5e-3, 0.5e-3).unwrap();
        let f = bin_wave(grid, 5, 0, 1.0);
        let spec = BandpassSpec::new(1.0, 1.05).unwrap();
        assert!(matches!(bandpass_2d(&f, &spec), Err(Error::EmptyPassband)));
        // hard-edged variant of the same band is fine
        let hard = BandpassSpec::new(1.0, 1.05).unwrap().with_taper(0.0);
        assert!(bandpass_2d(&f, &hard).is_ok());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(BandpassSpec::new(0.0, 1.0).is_err());
        assert!(BandpassSpec::new(2.0, 1.0).is_err());
        assert!(BandpassSpec::new(0.5, 4.0).unwrap().with_taper(0.5).validate().is_err());
    }
}
