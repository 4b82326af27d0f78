//! Windowed spatial autocorrelation estimation and the radially integrated
//! profiles the fits consume.
//!
//! Two independent routes lead to the integrated difference profile: the
//! direct pairwise subtraction of [`ida_profile_direct`] and the
//! autocorrelation identity of [`ida_profile_identity`]. They agree to FFT
//! rounding on finite windows and are kept separate on purpose.

mod autocorr;
mod profiles;
mod strategy;

pub use autocorr::{autocorr_2d, radial_profile, Autocorr2D};
pub use profiles::{ida_profile_direct, ida_profile_identity};
pub use strategy::{
    find_estimator, AiaRadial, IdaDirect, IdaIdentity, ProfileEstimator, ESTIMATORS,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ComplexField;

/// Read-only square region of a parent field addressed in window-local
/// sample coordinates.
#[derive(Debug, Clone, Copy)]
pub struct WindowView<'a> {
    field: &'a ComplexField,
    origin: (usize, usize),
    size: (usize, usize),
}

impl<'a> WindowView<'a> {
    /// `origin` is the (ix, iz) index of the window's first sample; `size`
    /// its (wx, wz) extent in samples. The window must lie fully inside the
    /// parent grid and span at least 8 samples per axis.
    pub fn new(field: &'a ComplexField, origin: (usize, usize), size: (usize, usize)) -> Result<Self> {
        let (wx, wz) = size;
        if wx < 8 || wz < 8 {
            return Err(Error::InvalidWindow(format!(
                "window must be at least 8x8 samples, got {wx}x{wz}"
            )));
        }
        if origin.0 + wx > field.grid.nx || origin.1 + wz > field.grid.nz {
            return Err(Error::InvalidWindow(format!(
                "window {}x{} at ({}, {}) exceeds the {}x{} grid",
                wx, wz, origin.0, origin.1, field.grid.nx, field.grid.nz
            )));
        }
        Ok(Self { field, origin, size })
    }

    /// Whole-field view.
    pub fn full(field: &'a ComplexField) -> Result<Self> {
        Self::new(field, (0, 0), (field.grid.nx, field.grid.nz))
    }

    #[inline]
    pub fn at(&self, lx: usize, lz: usize) -> Complex64 {
        self.field.at(self.origin.0 + lx, self.origin.1 + lz)
    }

    pub fn size(&self) -> (usize, usize) {
        self.size
    }

    pub fn dx(&self) -> f64 {
        self.field.grid.dx
    }

    pub fn dz(&self) -> f64 {
        self.field.grid.dz
    }

    /// Physical extent (meters) along x and z.
    pub fn extent(&self) -> (f64, f64) {
        (self.size.0 as f64 * self.dx(), self.size.1 as f64 * self.dz())
    }

    /// Mean squared magnitude over the window.
    pub fn mean_square(&self) -> f64 {
        let (wx, wz) = self.size;
        let mut acc = 0.0;
        for lz in 0..wz {
            for lx in 0..wx {
                acc += self.at(lx, lz).norm_sqr();
            }
        }
        acc / (wx * wz) as f64
    }
}

/// Which family a radially integrated profile belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// Angular integral of the plain autocorrelation (msv at zero lag).
    Aia,
    /// Integrated difference autocorrelation (zero at zero lag).
    Ida,
}

/// Radially integrated profile: values versus scalar lag, with the number of
/// aggregated sample pairs per ring.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrProfile {
    pub kind: ProfileKind,
    /// Strictly increasing ring-center lags in meters, starting at 0.
    pub lags: Vec<f64>,
    pub values: Vec<f64>,
    pub counts: Vec<u64>,
}

impl AutocorrProfile {
    pub fn len(&self) -> usize {
        self.lags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lags.is_empty()
    }
}

/// Count-weighted ring accumulator shared by the profile estimators.
/// Ring `j` is centered at `j * width`; empty rings are dropped.
pub(crate) struct RadialBinner {
    width: f64,
    acc: Vec<f64>,
    weight: Vec<u64>,
}

impl RadialBinner {
    pub(crate) fn new(width: f64) -> Self {
        Self { width, acc: Vec::new(), weight: Vec::new() }
    }

    pub(crate) fn add(&mut self, radius: f64, value: f64, count: u64) {
        let j = (radius / self.width).round() as usize;
        if j >= self.acc.len() {
            self.acc.resize(j + 1, 0.0);
            self.weight.resize(j + 1, 0);
        }
        self.acc[j] += value * count as f64;
        self.weight[j] += count;
    }

    pub(crate) fn finish(self, kind: ProfileKind) -> AutocorrProfile {
        let mut lags = Vec::new();
        let mut values = Vec::new();
        let mut counts = Vec::new();
        for (j, (a, w)) in self.acc.iter().zip(&self.weight).enumerate() {
            if *w > 0 {
                lags.push(j as f64 * self.width);
                values.push(a / *w as f64);
                counts.push(*w);
            }
        }
        AutocorrProfile { kind, lags, values, counts }
    }
}
