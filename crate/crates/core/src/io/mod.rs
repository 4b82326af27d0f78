//! File formats, phasor extraction from time series, and text exports.
//!
//! The interchange format for phasor fields is RWF1: little-endian, a fixed
//! 40-byte header (magic "RWF1", version u32, nx u32, nz u32, dx f64, dz f64,
//! freq f64) followed by nx*nz re/im f64 pairs, x-fastest row-major. Frame
//! stacks use the analogous RWT1 container (nx, nz, nt u32; dx, dz,
//! frame_rate f64; nt frames of nx*nz f64 samples).

mod export;
mod format;
mod lockin;

pub use export::{export_map_csv, export_map_pgm, export_profile_csv, parse_profile_csv};
pub use format::{
    read_field, read_field_from, read_frame_stack, read_frame_stack_from, write_field,
    write_field_to, write_frame_stack, write_frame_stack_to,
};
pub use lockin::extract_phasor;

use crate::error::{Error, Result};
use crate::field::GridSpec;

/// Real-valued time series on a grid: `nt` frames sampled at `frame_rate`.
/// Samples are frame-major, x-fastest within each frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameStack {
    pub grid: GridSpec,
    pub nt: usize,
    pub frame_rate: f64,
    pub samples: Vec<f64>,
}

impl FrameStack {
    pub fn new(grid: GridSpec, nt: usize, frame_rate: f64, samples: Vec<f64>) -> Result<Self> {
        if nt < 4 {
            return Err(Error::InvalidSpec(format!("need at least 4 frames, got {nt}")));
        }
        if !(frame_rate > 0.0 && frame_rate.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "frame_rate must be positive, got {frame_rate}"
            )));
        }
        if samples.len() != nt * grid.len() {
            return Err(Error::InvalidSpec(format!(
                "sample count {} does not match {nt} frames of {}x{}",
                samples.len(),
                grid.nx,
                grid.nz
            )));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidSpec("frame stack contains non-finite samples".into()));
        }
        Ok(Self { grid, nt, frame_rate, samples })
    }

    pub fn frame(&self, it: usize) -> &[f64] {
        let n = self.grid.len();
        &self.samples[it * n..(it + 1) * n]
    }
}
