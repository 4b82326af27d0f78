//! Unbiased 2D spatial autocorrelation of a window and its angular integral.

use num_complex::Complex64;
use rustfft::FftDirection;

use super::{AutocorrProfile, ProfileKind, RadialBinner, WindowView};
use crate::error::{Error, Result};
use crate::fft::fft2_inplace;

/// Two-dimensional autocorrelation on the full lag grid
/// (m dx, n dz), |m| < wx, |n| < wz, with per-lag valid-pair counts.
///
/// Values follow B(lag) = E{ V(eps) V*(eps + lag) }. Hermitian symmetry
/// B(-lag) = B(lag)* holds exactly and the zero-lag value equals the window
/// mean squared magnitude exactly.
#[derive(Debug, Clone)]
pub struct Autocorr2D {
    wx: usize,
    wz: usize,
    dx: f64,
    dz: f64,
    values: Vec<Complex64>,
    counts: Vec<u64>,
}

impl Autocorr2D {
    fn idx(&self, m: isize, n: isize) -> usize {
        debug_assert!(m.unsigned_abs() < self.wx && n.unsigned_abs() < self.wz);
        let row = (n + self.wz as isize - 1) as usize;
        let col = (m + self.wx as isize - 1) as usize;
        row * (2 * self.wx - 1) + col
    }

    /// Autocorrelation at lag (m dx, n dz).
    pub fn at(&self, m: isize, n: isize) -> Complex64 {
        self.values[self.idx(m, n)]
    }

    /// Number of sample pairs that contributed to lag (m, n).
    pub fn count(&self, m: isize, n: isize) -> u64 {
        self.counts[self.idx(m, n)]
    }

    /// Window size in samples.
    pub fn window_size(&self) -> (usize, usize) {
        (self.wx, self.wz)
    }

    /// Sample spacing in meters.
    pub fn spacing(&self) -> (f64, f64) {
        (self.dx, self.dz)
    }
}

/// Computes the unbiased windowed autocorrelation via zero-padded FFT
/// cross-power (Wiener-Khinchin), normalizing every lag by its valid-pair
/// count.
pub fn autocorr_2d(w: &WindowView<'_>) -> Autocorr2D {
    let (wx, wz) = w.size();
    let (px, pz) = (2 * wx, 2 * wz);

    let mut buf = vec![Complex64::ZERO; px * pz];
    for lz in 0..wz {
        for lx in 0..wx {
            buf[lz * px + lx] = w.at(lx, lz);
        }
    }
    fft2_inplace(&mut buf, px, pz, FftDirection::Forward);
    for v in buf.iter_mut() {
        *v = Complex64::new(v.norm_sqr(), 0.0);
    }
    fft2_inplace(&mut buf, px, pz, FftDirection::Inverse);
    // buf now holds a(lag) = sum_eps V(eps + lag) V*(eps); Eq-style
    // B(lag) = sum_eps V(eps) V*(eps + lag) is its conjugate.

    let mut ac = Autocorr2D {
        wx,
        wz,
        dx: w.dx(),
        dz: w.dz(),
        values: vec![Complex64::ZERO; (2 * wx - 1) * (2 * wz - 1)],
        counts: vec![0; (2 * wx - 1) * (2 * wz - 1)],
    };
    for n in -(wz as isize - 1)..wz as isize {
        let bz = n.rem_euclid(pz as isize) as usize;
        for m in -(wx as isize - 1)..wx as isize {
            let bx = m.rem_euclid(px as isize) as usize;
            let cnt = ((wx - m.unsigned_abs()) * (wz - n.unsigned_abs())) as u64;
            let i = ac.idx(m, n);
            ac.values[i] = buf[bz * px + bx].conj() / cnt as f64;
            ac.counts[i] = cnt;
        }
    }

    // Enforce the structural invariants exactly: Hermitian symmetry by
    // averaging conjugate lag pairs, and the zero lag from a direct sum.
    for n in 0..wz as isize {
        for m in -(wx as isize - 1)..wx as isize {
            if n == 0 && m < 0 {
                continue;
            }
            let i = ac.idx(m, n);
            let j = ac.idx(-m, -n);
            let sym = 0.5 * (ac.values[i] + ac.values[j].conj());
            ac.values[i] = sym;
            ac.values[j] = sym.conj();
        }
    }
    let zero = ac.idx(0, 0);
    ac.values[zero] = Complex64::new(w.mean_square(), 0.0);

    debug_assert!(ac.values[zero].re >= 0.0);
    ac
}

/// Angular integral of the real part of a 2D autocorrelation: ring-bins
/// Re B(lag) by |lag| with rings of width min(dx, dz), count-weighted.
///
/// `max_lag` may not exceed half the window extent. Empty rings are dropped,
/// never interpolated.
pub fn radial_profile(ac: &Autocorr2D, max_lag: f64) -> Result<AutocorrProfile> {
    let (wx, wz) = ac.window_size();
    let (dx, dz) = ac.spacing();
    let limit = (wx as f64 * dx).min(wz as f64 * dz) / 2.0;
    if max_lag > limit {
        return Err(Error::MaxLagTooLarge { max_lag, limit });
    }
    if !(max_lag > 0.0) {
        return Err(Error::InvalidSpec(format!("max_lag must be positive, got {max_lag}")));
    }

    let mut binner = RadialBinner::new(dx.min(dz));
    for n in 0..wz as isize {
        for m in -(wx as isize - 1)..wx as isize {
            if n == 0 && m < 0 {
                continue;
            }
            let r = (m as f64 * dx).hypot(n as f64 * dz);
            if r > max_lag {
                continue;
            }
            binner.add(r, ac.at(m, n).re, ac.count(m, n));
        }
    }
    Ok(binner.finish(ProfileKind::Aia))
}
