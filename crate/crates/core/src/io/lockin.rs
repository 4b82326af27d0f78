//! Lock-in reduction of a real time series to its single-frequency phasor.

use num_complex::Complex64;
use std::f64::consts::TAU;

use super::FrameStack;
use crate::error::{Error, Result};
use crate::field::ComplexField;

/// Per-pixel lock-in sum (2/nt) * sum_n v(t_n) e^{+i 2 pi f t_n}.
///
/// The record must hold a whole number of cycles (no silent nearest-bin
/// snapping) and `freq` must be below the Nyquist rate. Under the crate's
/// e^{-i omega t} time convention this recovers the phasor of a pure tone
/// exactly, and tones at other whole-cycle frequencies cancel.
pub fn extract_phasor(stack: &FrameStack, freq: f64) -> Result<ComplexField> {
    if !(freq > 0.0 && freq.is_finite()) {
        return Err(Error::PhasorExtraction(format!("freq must be positive, got {freq}")));
    }
    let nt = stack.nt;
    let cycles = freq * nt as f64 / stack.frame_rate;
    if (cycles - cycles.round()).abs() > 1e-9 * cycles.max(1.0) || cycles.round() < 1.0 {
        return Err(Error::PhasorExtraction(format!(
            "record holds {cycles} cycles at {freq} Hz; a whole number >= 1 is required"
        )));
    }
    if freq >= stack.frame_rate / 2.0 {
        return Err(Error::PhasorExtraction(format!(
            "{freq} Hz aliases at a frame rate of {} Hz",
            stack.frame_rate
        )));
    }

    let npix = stack.grid.len();
    let mut acc = vec![Complex64::ZERO; npix];
    for it in 0..nt {
        let kernel = Complex64::from_polar(1.0, TAU * freq * it as f64 / stack.frame_rate);
        for (a, s) in acc.iter_mut().zip(stack.frame(it)) {
            *a += kernel * s;
        }
    }
    let scale = 2.0 / nt as f64;
    for a in &mut acc {
        *a *= scale;
    }
    ComplexField::new(stack.grid, freq, acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GridSpec;
    use num_complex::Complex64;

    fn grid() -> GridSpec {
        GridSpec::new(8, 8, 1e-3, 1e-3).unwrap()
    }

    fn tone_stack(amps: &[(f64, f64, f64)], nt: usize, frame_rate: f64) -> FrameStack {
        // amps: (amplitude, freq, phase); same tone at every pixel
        let g = grid();
        let mut samples = Vec::with_capacity(nt * g.len());
        for it in 0..nt {
            let t = it as f64 / frame_rate;
            let v: f64 = amps.iter().map(|(a, f, p)| a * (TAU * f * t + p).cos()).sum();
            samples.extend(std::iter::repeat_n(v, g.len()));
        }
        FrameStack::new(g, nt, frame_rate, samples).unwrap()
    }

    #[test]
    fn pure_tone_recovers_amplitude_and_phase() {
        // 64 frames, 8 whole cycles of 200 Hz at 1600 Hz
        let (a, phi) = (1.5, 0.7);
        let stack = tone_stack(&[(a, 200.0, phi)], 64, 1600.0);
        let field = extract_phasor(&stack, 200.0).unwrap();
        // A cos(wt + phi) = Re{ A e^{-i phi} e^{-i w t} }: the phasor under
        // the e^{-i w t} convention carries the negated phase.
        let expect = Complex64::from_polar(a, -phi);
        for v in &field.values {
            assert!((v - expect).norm() < 1e-12, "{v} vs {expect}");
        }
    }

    #[test]
    fn other_whole_cycle_tone_is_rejected() {
        let stack = tone_stack(&[(1.5, 200.0, 0.7), (3.0, 400.0, -1.2)], 64, 1600.0);
        let field = extract_phasor(&stack, 200.0).unwrap();
        let expect = Complex64::from_polar(1.5, -0.7);
        for v in &field.values {
            assert!((v - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn synthesize_then_extract_round_trip() {
        // reconstruct a time series from a known phasor field, then extract
        let g = grid();
        let phasors: Vec<Complex64> = (0..g.len())
            .map(|i| Complex64::from_polar(0.5 + 0.01 * i as f64, 0.37 * i as f64))
            .collect();
        let (nt, frame_rate, freq) = (64usize, 1600.0, 200.0);
        let mut samples = Vec::with_capacity(nt * g.len());
        for it in 0..nt {
            let rot = Complex64::from_polar(1.0, -TAU * freq * it as f64 / frame_rate);
            samples.extend(phasors.iter().map(|p| (p * rot).re));
        }
        let stack = FrameStack::new(g, nt, frame_rate, samples).unwrap();
        let field = extract_phasor(&stack, freq).unwrap();
        for (got, want) in field.values.iter().zip(&phasors) {
            assert!((got - want).norm() <= 1e-10 * want.norm(), "{got} vs {want}");
        }
    }

    #[test]
    fn rejects_partial_cycles_and_aliasing() {
        let stack = tone_stack(&[(1.0, 200.0, 0.0)], 64, 1600.0);
        assert!(matches!(
            extract_phasor(&stack, 210.0),
            Err(Error::PhasorExtraction(_))
        ));
        // 800 Hz is exactly Nyquist at 1600 Hz
        assert!(matches!(
            extract_phasor(&stack, 800.0),
            Err(Error::PhasorExtraction(_))
        ));
        assert!(extract_phasor(&stack, 400.0).is_ok());
    }

    #[test]
    fn linear_in_the_frames() {
        let a = tone_stack(&[(1.0, 200.0, 0.3)], 64, 1600.0);
        let b = tone_stack(&[(0.5, 200.0, -1.1)], 64, 1600.0);
        let summed = FrameStack::new(
            grid(),
            64,
            1600.0,
            a.samples.iter().zip(&b.samples).map(|(x, y)| x + y).collect(),
        )
        .unwrap();
        let fa = extract_phasor(&a, 200.0).unwrap();
        let fb = extract_phasor(&b, 200.0).unwrap();
        let fs = extract_phasor(&summed, 200.0).unwrap();
        for i in 0..fa.values.len() {
            let lhs = fs.values[i];
            let rhs = fa.values[i] + fb.values[i];
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
