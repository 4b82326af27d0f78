//! Sampled complex phasor fields on a regular 2D grid.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Regular 2D sampling grid in the imaging (xz) plane.
///
/// `nx`/`nz` are sample counts, `dx`/`dz` the physical spacing in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub nz: usize,
    pub dx: f64,
    pub dz: f64,
}

impl GridSpec {
    pub fn new(nx: usize, nz: usize, dx: f64, dz: f64) -> Result<Self> {
        if nx < 8 || nz < 8 {
            return Err(Error::InvalidGrid(format!(
                "need at least 8x8 samples, got {nx}x{nz}"
            )));
        }
        if !(dx > 0.0 && dx.is_finite()) || !(dz > 0.0 && dz.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "spacing must be positive and finite, got dx={dx}, dz={dz}"
            )));
        }
        Ok(Self { nx, nz, dx, dz })
    }

    pub fn len(&self) -> usize {
        self.nx * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Physical x coordinate of sample column `ix` (origin at sample 0).
    pub fn x(&self, ix: usize) -> f64 {
        ix as f64 * self.dx
    }

    /// Physical z coordinate of sample row `iz`.
    pub fn z(&self, iz: usize) -> f64 {
        iz as f64 * self.dz
    }

    /// Physical extent (meters) along x and z.
    pub fn extent(&self) -> (f64, f64) {
        (self.nx as f64 * self.dx, self.nz as f64 * self.dz)
    }
}

/// Complex velocity phasors at a single temporal frequency.
///
/// Values are stored x-fastest row-major: sample `(ix, iz)` lives at
/// `values[iz * nx + ix]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub grid: GridSpec,
    pub freq: f64,
    pub values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: GridSpec, freq: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(freq > 0.0 && freq.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "frequency must be positive and finite, got {freq}"
            )));
        }
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "value count {} does not match grid {}x{}",
                values.len(),
                grid.nx,
                grid.nz
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidSpec("field contains non-finite values".into()));
        }
        Ok(Self { grid, freq, values })
    }

    pub fn zeros(grid: GridSpec, freq: f64) -> Result<Self> {
        Self::new(grid, freq, vec![Complex64::ZERO; grid.len()])
    }

    #[inline]
    pub fn at(&self, ix: usize, iz: usize) -> Complex64 {
        self.values[iz * self.grid.nx + ix]
    }

    #[inline]
    pub fn at_mut(&mut self, ix: usize, iz: usize) -> &mut Complex64 {
        &mut self.values[iz * self.grid.nx + ix]
    }

    /// Mean squared magnitude over the whole grid.
    pub fn mean_square(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.values.len() as f64
    }

    /// Root-mean-square magnitude over the whole grid.
    pub fn rms(&self) -> f64 {
        self.mean_square().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_tiny_grids_and_bad_spacing() {
        assert!(GridSpec::new(7, 32, 1e-3, 1e-3).is_err());
        assert!(GridSpec::new(32, 32, 0.0, 1e-3).is_err());
        assert!(GridSpec::new(32, 32, 1e-3, f64::NAN).is_err());
        assert!(GridSpec::new(8, 8, 5e-4, 5e-4).is_ok());
    }

    #[test]
    fn indexing_is_x_fastest() {
        let grid = GridSpec::new(8, 8, 1e-3, 1e-3).unwrap();
        let mut f = ComplexField::zeros(grid, 100.0).unwrap();
        *f.at_mut(3, 2) = Complex64::new(1.0, -2.0);
        assert_eq!(f.values[2 * 8 + 3], Complex64::new(1.0, -2.0));
        assert_eq!(f.at(3, 2), Complex64::new(1.0, -2.0));
    }

    #[test]
    fn rms_of_constant_field() {
        let grid = GridSpec::new(8, 8, 1e-3, 1e-3).unwrap();
        let f = ComplexField::new(grid, 100.0, vec![Complex64::new(3.0, 4.0); 64]).unwrap();
        assert!((f.rms() - 5.0).abs() < 1e-12);
    }
}
