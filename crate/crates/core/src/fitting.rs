//! Wavenumber estimation: least-squares fit of a theoretical curve to a
//! measured profile, with the amplitude eliminated in closed form.
//!
//! The residual is oscillatory and multi-modal in k, so the search is a
//! global coarse scan over a log-spaced grid followed by golden-section
//! refinement around the best candidate.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::estimator::{AutocorrProfile, ProfileKind};
use crate::models::{eval_autocorr_model, eval_difference_model, ModelKind, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    Uniform,
    /// Weight each ring by its aggregated pair count (outer rings average
    /// more samples and are less noisy).
    CountWeighted,
}

/// Search and weighting configuration for [`fit_wavenumber`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    /// Lower speed bound of the search band, m/s.
    pub sws_min: f64,
    /// Upper speed bound of the search band, m/s.
    pub sws_max: f64,
    /// Number of log-spaced wavenumber candidates in the coarse scan.
    pub coarse_points: usize,
    /// Relative tolerance on k for the refinement stage.
    pub refine_rel_tol: f64,
    /// Optional [min, max] lag range (meters) to fit over; default full.
    pub lag_range: Option<(f64, f64)>,
    pub weights: Weighting,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            sws_min: 0.3,
            sws_max: 10.0,
            coarse_points: 200,
            refine_rel_tol: 1e-4,
            lag_range: None,
            weights: Weighting::CountWeighted,
        }
    }
}

impl FitConfig {
    fn validate(&self) -> Result<()> {
        if !(self.sws_min > 0.0 && self.sws_min < self.sws_max && self.sws_max.is_finite()) {
            return Err(Error::FitRejected(format!(
                "need 0 < sws_min < sws_max, got [{}, {}]",
                self.sws_min, self.sws_max
            )));
        }
        if self.coarse_points < 16 {
            return Err(Error::FitRejected(format!(
                "coarse_points must be at least 16, got {}",
                self.coarse_points
            )));
        }
        if !(self.refine_rel_tol > 0.0 && self.refine_rel_tol < 1.0) {
            return Err(Error::FitRejected(format!(
                "refine_rel_tol must be in (0, 1), got {}",
                self.refine_rel_tol
            )));
        }
        Ok(())
    }
}

/// Outcome of a wavenumber fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    /// Estimated wavenumber, rad/m.
    pub k: f64,
    /// 2 pi freq / k, m/s.
    pub sws: f64,
    /// Fitted amplitude scale (the msv of the best-fitting curve).
    pub amplitude: f64,
    /// Weighted residual sum of squares at `k`.
    pub sse: f64,
    /// sqrt(sse / weighted sum of squared measurements).
    pub nrmse: f64,
    /// True when `k` lies within one coarse-grid step of a search bound;
    /// the estimate is unreliable but not an error.
    pub at_bound: bool,
    pub ok: bool,
}

/// Shear wave speed from the dispersion relation k = 2 pi f / c.
pub fn sws_from_k(k: f64, freq: f64) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::FitRejected(format!("wavenumber must be positive, got {k}")));
    }
    Ok(TAU * freq / k)
}

struct FitData {
    lags: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
    /// Weighted sum of squared measurements, the nrmse denominator.
    syy: f64,
}

fn prepare(profile: &AutocorrProfile, kind: ModelKind, cfg: &FitConfig) -> Result<FitData> {
    match (profile.kind, kind.is_difference()) {
        (ProfileKind::Ida, true) | (ProfileKind::Aia, false) => {}
        (ProfileKind::Ida, false) => {
            return Err(Error::FitRejected(format!(
                "difference profile needs a difference-family model, got {}",
                kind.name()
            )))
        }
        (ProfileKind::Aia, true) => {
            return Err(Error::FitRejected(format!(
                "plain profile needs a plain-family model, got {}",
                kind.name()
            )))
        }
    }

    let (lo, hi) = cfg.lag_range.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    let mut data = FitData { lags: Vec::new(), values: Vec::new(), weights: Vec::new(), syy: 0.0 };
    for i in 0..profile.len() {
        let lag = profile.lags[i];
        if lag < lo || lag > hi {
            continue;
        }
        let y = profile.values[i];
        if !lag.is_finite() || !y.is_finite() {
            return Err(Error::FitRejected("profile contains non-finite values".into()));
        }
        let w = match cfg.weights {
            Weighting::Uniform => 1.0,
            Weighting::CountWeighted => profile.counts[i] as f64,
        };
        data.lags.push(lag);
        data.values.push(y);
        data.weights.push(w);
        data.syy += w * y * y;
    }
    if data.lags.len() < 8 {
        return Err(Error::FitRejected(format!(
            "need at least 8 bins inside the lag range, got {}",
            data.lags.len()
        )));
    }
    if data.syy <= 0.0 {
        return Err(Error::FitRejected("profile is identically zero".into()));
    }
    Ok(data)
}

/// Weighted SSE at candidate wavenumber `k` with the amplitude at its
/// closed-form optimum; returns (sse, amplitude).
fn sse_at(data: &FitData, kind: ModelKind, k: f64) -> (f64, f64) {
    let params = ModelParams { k, msv: 1.0 };
    let eval = |lag: f64| -> f64 {
        if kind.is_difference() {
            eval_difference_model(kind, params, lag).expect("family checked in prepare")
        } else {
            eval_autocorr_model(kind, params, lag).expect("family checked in prepare")
        }
    };
    let mut s_mm = 0.0;
    let mut s_my = 0.0;
    let models: Vec<f64> = data.lags.iter().map(|&lag| eval(lag)).collect();
    for i in 0..models.len() {
        s_mm += data.weights[i] * models[i] * models[i];
        s_my += data.weights[i] * models[i] * data.values[i];
    }
    let amp = if s_mm > 0.0 { s_my / s_mm } else { 0.0 };
    let mut sse = 0.0;
    for i in 0..models.len() {
        let r = data.values[i] - amp * models[i];
        sse += data.weights[i] * r * r;
    }
    (sse, amp)
}

fn golden_section(
    mut a: f64,
    mut b: f64,
    rel_tol: f64,
    mut f: impl FnMut(f64) -> f64,
) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (b - a) <= rel_tol * 0.5 * (a + b) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

fn build_result(
    data: &FitData,
    kind: ModelKind,
    freq: f64,
    k: f64,
    k_lo: f64,
    k_hi: f64,
    bound_step: f64,
) -> Result<FitResult> {
    let (sse, amplitude) = sse_at(data, kind, k);
    let sws = sws_from_k(k, freq)?;
    let nrmse = (sse / data.syy).sqrt();
    let at_bound = k <= k_lo * bound_step || k >= k_hi / bound_step;
    let ok = sse.is_finite() && amplitude.is_finite() && nrmse.is_finite();
    Ok(FitResult { k, sws, amplitude, sse, nrmse, at_bound, ok })
}

/// Fits the theoretical curve of `kind` to a measured profile, estimating
/// the wavenumber over the speed band of `cfg`.
///
/// The model family must match the profile kind. `at_bound` flags estimates
/// within one coarse step of a search bound.
pub fn fit_wavenumber(
    profile: &AutocorrProfile,
    kind: ModelKind,
    freq: f64,
    cfg: &FitConfig,
) -> Result<FitResult> {
    cfg.validate()?;
    if !(freq > 0.0 && freq.is_finite()) {
        return Err(Error::FitRejected(format!("freq must be positive, got {freq}")));
    }
    let data = prepare(profile, kind, cfg)?;

    let k_lo = TAU * freq / cfg.sws_max;
    let k_hi = TAU * freq / cfg.sws_min;
    let n = cfg.coarse_points;
    let ratio = (k_hi / k_lo).powf(1.0 / (n - 1) as f64);

    let mut best = (f64::INFINITY, 0usize);
    let mut grid = Vec::with_capacity(n);
    for i in 0..n {
        let k = k_lo * ratio.powi(i as i32);
        let (sse, _) = sse_at(&data, kind, k);
        if sse < best.0 {
            best = (sse, i);
        }
        grid.push(k);
    }
    if !best.0.is_finite() {
        return Err(Error::FitRejected("residual is non-finite across the search band".into()));
    }

    let a = grid[best.1.saturating_sub(1)];
    let b = grid[(best.1 + 1).min(n - 1)];
    let mut k_best = golden_section(a, b, cfg.refine_rel_tol, |k| sse_at(&data, kind, k).0);
    // refinement never loses to the coarse candidate
    if sse_at(&data, kind, k_best).0 > best.0 {
        k_best = grid[best.1];
    }
    build_result(&data, kind, freq, k_best, k_lo, k_hi, ratio)
}

/// Exhaustive SSE scan over a fine linear wavenumber grid. Slow; intended as
/// an independent check of [`fit_wavenumber`].
pub fn brute_force_fit(
    profile: &AutocorrProfile,
    kind: ModelKind,
    freq: f64,
    fine_points: usize,
) -> Result<FitResult> {
    let cfg = FitConfig::default();
    if fine_points < 2 {
        return Err(Error::FitRejected("fine_points must be at least 2".into()));
    }
    if !(freq > 0.0 && freq.is_finite()) {
        return Err(Error::FitRejected(format!("freq must be positive, got {freq}")));
    }
    let data = prepare(profile, kind, &cfg)?;

    let k_lo = TAU * freq / cfg.sws_max;
    let k_hi = TAU * freq / cfg.sws_min;
    let step = (k_hi - k_lo) / (fine_points - 1) as f64;
    let mut best = (f64::INFINITY, k_lo);
    for i in 0..fine_points {
        let k = k_lo + step * i as f64;
        let (sse, _) = sse_at(&data, kind, k);
        if sse < best.0 {
            best = (sse, k);
        }
    }
    if !best.0.is_finite() {
        return Err(Error::FitRejected("residual is non-finite across the search band".into()));
    }
    build_result(&data, kind, freq, best.1, k_lo, k_hi, 1.0 + step / k_lo)
}
