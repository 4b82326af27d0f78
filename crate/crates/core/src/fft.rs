//! Shared 2D FFT plumbing on top of rustfft.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    planner()
        .lock()
        .expect("fft planner poisoned")
        .plan_fft(len, direction)
}

/// In-place 2D FFT of an `nx` x `nz` x-fastest row-major buffer.
///
/// The inverse direction includes the 1/(nx*nz) normalization so that
/// forward followed by inverse is the identity up to rounding.
pub(crate) fn fft2_inplace(data: &mut [Complex64], nx: usize, nz: usize, direction: FftDirection) {
    assert_eq!(data.len(), nx * nz);

    // Rows are contiguous; rustfft transforms each nx-chunk in turn.
    let row_fft = plan(nx, direction);
    row_fft.process(data);

    let col_fft = plan(nz, direction);
    let mut col = vec![Complex64::ZERO; nz];
    for ix in 0..nx {
        for iz in 0..nz {
            col[iz] = data[iz * nx + ix];
        }
        col_fft.process(&mut col);
        for iz in 0..nz {
            data[iz * nx + ix] = col[iz];
        }
    }

    if direction == FftDirection::Inverse {
        let scale = 1.0 / (nx * nz) as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

/// Spatial angular frequency (rad/m) of FFT bin `i` along an axis with
/// `n` samples spaced `d` meters apart.
pub(crate) fn bin_wavenumber(i: usize, n: usize, d: f64) -> f64 {
    let signed = if i < n.div_ceil(2) {
        i as f64
    } else {
        i as f64 - n as f64
    };
    2.0 * std::f64::consts::PI * signed / (n as f64 * d)
}
