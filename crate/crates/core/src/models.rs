//! Closed-form autocorrelation and difference-autocorrelation curves for an
//! isotropic reverberant shear wave field, measured through a z-directed
//! velocity sensitivity, plus the spherical Bessel primitives they need.
//!
//! Every curve is parameterized by the shear wavenumber `k` and the
//! mean-square z-velocity `msv`, and evaluated at zero temporal lag, so all
//! values are real. The plain family decays from `msv` at zero lag; the
//! difference family starts at 0 and approaches `2*msv`.

use crate::error::{Error, Result};

/// Below this |x| the closed forms for j1(x)/x lose digits to cancellation
/// and the power series is used instead. At the switch point the series
/// truncation error and the closed-form rounding error are both < 2e-14
/// relative.
const J1_OVER_X_SERIES_CUTOFF: f64 = 0.25;

/// Spherical Bessel function of the first kind, order zero: sin(x)/x.
///
/// Total and even; the removable singularity at 0 returns 1.
pub fn sph_j0(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// j1(x)/x where j1 is the order-one spherical Bessel function.
///
/// Even, with j1_over_x(0) = 1/3. The closed form
/// (sin x - x cos x)/x^3 cancels catastrophically near zero, so small
/// arguments use the series 1/3 - x^2/30 + x^4/840 - ...
pub fn j1_over_x(x: f64) -> f64 {
    let ax = x.abs();
    if ax < J1_OVER_X_SERIES_CUTOFF {
        // term_m = (-x^2/2)^m / (m! (2m+3)!!), summed to machine precision
        let q = -0.5 * x * x;
        let mut term = 1.0 / 3.0;
        let mut sum = term;
        let mut m = 1.0;
        loop {
            term *= q / (m * (2.0 * m + 3.0));
            sum += term;
            if term.abs() <= f64::EPSILON * sum.abs() {
                return sum;
            }
            m += 1.0;
        }
    } else {
        (x.sin() - x * x.cos()) / (x * x * x)
    }
}

/// Which imaging plane the angular integration ran in. Imaging-plane (xz)
/// data uses the xz family; plane-orthogonal slices use the xy family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    Xz,
    Xy,
}

/// Which theoretical curve to evaluate.
///
/// The first six are plain autocorrelation models (value `msv` at zero lag);
/// the `Da*`/`Ida*` variants are their difference counterparts (zero at zero
/// lag, asymptote `2*msv`). `General` carries the angle between the lag
/// direction and the z-directed sensitivity; the x and y axis cases evaluate
/// identically, as do the xz- and yz-plane angular integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    AxisX,
    AxisY,
    AxisZ,
    General { theta_s: f64 },
    AiaXz,
    AiaXy,
    DaX,
    DaY,
    DaZ,
    IdaXz,
    IdaXy,
}

impl ModelKind {
    /// True for the difference-autocorrelation family.
    pub fn is_difference(&self) -> bool {
        matches!(
            self,
            ModelKind::DaX | ModelKind::DaY | ModelKind::DaZ | ModelKind::IdaXz | ModelKind::IdaXy
        )
    }

    /// Plain-family curve the difference model is built from, if any.
    pub fn base_kind(&self) -> Option<ModelKind> {
        match self {
            ModelKind::DaX => Some(ModelKind::AxisX),
            ModelKind::DaY => Some(ModelKind::AxisY),
            ModelKind::DaZ => Some(ModelKind::AxisZ),
            ModelKind::IdaXz => Some(ModelKind::AiaXz),
            ModelKind::IdaXy => Some(ModelKind::AiaXy),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            ModelKind::AxisX => "axis-x".into(),
            ModelKind::AxisY => "axis-y".into(),
            ModelKind::AxisZ => "axis-z".into(),
            ModelKind::General { theta_s } => format!("general({theta_s})"),
            ModelKind::AiaXz => "aia-xz".into(),
            ModelKind::AiaXy => "aia-xy".into(),
            ModelKind::DaX => "da-x".into(),
            ModelKind::DaY => "da-y".into(),
            ModelKind::DaZ => "da-z".into(),
            ModelKind::IdaXz => "ida-xz".into(),
            ModelKind::IdaXy => "ida-xy".into(),
        }
    }

    fn validate(&self) -> Result<()> {
        if let ModelKind::General { theta_s } = self {
            if !theta_s.is_finite()
                || *theta_s < 0.0
                || *theta_s > std::f64::consts::FRAC_PI_2
            {
                return Err(Error::InvalidModelParams(format!(
                    "theta_s must lie in [0, pi/2], got {theta_s}"
                )));
            }
        }
        Ok(())
    }
}

/// Physical parameters shared by every curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Shear wavenumber, rad/m.
    pub k: f64,
    /// Mean-square z-directed velocity, (m/s)^2.
    pub msv: f64,
}

impl ModelParams {
    pub fn new(k: f64, msv: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidModelParams(format!(
                "wavenumber must be positive and finite, got {k}"
            )));
        }
        if !(msv >= 0.0 && msv.is_finite()) {
            return Err(Error::InvalidModelParams(format!(
                "mean-square velocity must be nonnegative and finite, got {msv}"
            )));
        }
        Ok(Self { k, msv })
    }
}

/// Unit-msv plain-family curve at dimensionless argument x = k * lag.
fn plain_unit(kind: ModelKind, x: f64) -> f64 {
    match kind {
        ModelKind::AxisX | ModelKind::AxisY => 1.5 * (sph_j0(x) - j1_over_x(x)),
        ModelKind::AxisZ => 3.0 * j1_over_x(x),
        ModelKind::General { theta_s } => {
            let (s, c) = theta_s.sin_cos();
            3.0 * (0.5 * s * s * (sph_j0(x) - j1_over_x(x)) + c * c * j1_over_x(x))
        }
        ModelKind::AiaXz => 0.75 * (sph_j0(x) + j1_over_x(x)),
        ModelKind::AiaXy => 1.5 * (sph_j0(x) - j1_over_x(x)),
        _ => unreachable!("difference kinds rejected before dispatch"),
    }
}

/// Plain autocorrelation curve of `kind` at spatial lag `lag` meters.
///
/// Rejects difference kinds. Every plain kind returns `msv` at zero lag.
pub fn eval_autocorr_model(kind: ModelKind, params: ModelParams, lag: f64) -> Result<f64> {
    kind.validate()?;
    if kind.is_difference() {
        return Err(Error::WrongModelFamily {
            kind: kind.name(),
            family: "plain autocorrelation",
        });
    }
    if !(lag >= 0.0) {
        return Err(Error::InvalidModelParams(format!(
            "lag must be nonnegative, got {lag}"
        )));
    }
    Ok(params.msv * plain_unit(kind, params.k * lag))
}

/// Difference-autocorrelation curve of `kind` at lag `lag` meters.
///
/// `lag` is the half-offset of the subtracted pair, so the underlying plain
/// curve is sampled at twice the lag: value = 2 (msv - plain(2 lag)).
/// Rejects plain kinds; exactly 0 at zero lag.
pub fn eval_difference_model(kind: ModelKind, params: ModelParams, lag: f64) -> Result<f64> {
    if !kind.is_difference() {
        return Err(Error::WrongModelFamily {
            kind: kind.name(),
            family: "difference autocorrelation",
        });
    }
    if !(lag >= 0.0) {
        return Err(Error::InvalidModelParams(format!(
            "lag must be nonnegative, got {lag}"
        )));
    }
    let base = kind.base_kind().expect("difference kinds have a base");
    let x = 2.0 * params.k * lag;
    Ok(2.0 * params.msv * (1.0 - plain_unit(base, x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Series oracle for j0: sum of (-x^2/2)^m / (m! (2m+1)!!).
    fn j0_series(x: f64, terms: usize) -> f64 {
        let q = -0.5 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..=terms {
            term *= q / (m as f64 * (2.0 * m as f64 + 1.0));
            sum += term;
        }
        sum
    }

    /// Series oracle for j1(x)/x: sum of (-x^2/2)^m / (m! (2m+3)!!).
    fn j1_over_x_series(x: f64, terms: usize) -> f64 {
        let q = -0.5 * x * x;
        let mut term = 1.0 / 3.0;
        let mut sum = term;
        for m in 1..=terms {
            term *= q / (m as f64 * (2.0 * m as f64 + 3.0));
            sum += term;
        }
        sum
    }

    fn params(k: f64, msv: f64) -> ModelParams {
        ModelParams::new(k, msv).unwrap()
    }

    #[test]
    fn j0_limits_and_series_oracle() {
        assert_eq!(sph_j0(0.0), 1.0);
        assert!(sph_j0(PI).abs() < 1e-15);
        assert_relative_eq!(sph_j0(1.5), j0_series(1.5, 20), epsilon = 1e-12);
        assert_eq!(sph_j0(2.0), sph_j0(-2.0));
    }

    #[test]
    fn j1_over_x_limits_and_oracle() {
        assert_eq!(j1_over_x(0.0), 1.0 / 3.0);
        assert_relative_eq!(j1_over_x(PI), 1.0 / (PI * PI), max_relative = 1e-14);
        // Straddle the series/closed-form switch against the series oracle,
        // which is exact to well below 1e-14 for these arguments.
        for &x in &[1e-3, 5e-3, 0.05, 0.2, 0.249, 0.251, 0.4] {
            assert_relative_eq!(j1_over_x(x), j1_over_x_series(x, 25), max_relative = 1e-14);
        }
        assert_eq!(j1_over_x(0.7), j1_over_x(-0.7));
    }

    #[test]
    fn autocorr_model_examples() {
        let p = params(1.0, 1.0);
        assert_relative_eq!(
            eval_autocorr_model(ModelKind::AiaXz, p, 0.0).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        // j0(pi) = 0 and j1(pi)/pi = 1/pi^2
        assert_relative_eq!(
            eval_autocorr_model(ModelKind::AiaXz, p, PI).unwrap(),
            0.75 / (PI * PI),
            max_relative = 1e-12
        );
        assert!(
            eval_autocorr_model(ModelKind::AxisZ, p, 200.0)
                .unwrap()
                .abs()
                < 0.02
        );
    }

    #[test]
    fn difference_model_examples() {
        let p = params(1.0, 1.0);
        for k in [0.3, 1.0, 42.0] {
            let v = eval_difference_model(ModelKind::IdaXz, params(k, 1.0), 0.0).unwrap();
            assert_eq!(v, 0.0);
        }
        assert_relative_eq!(
            eval_difference_model(ModelKind::IdaXz, p, PI / 2.0).unwrap(),
            2.0 * (1.0 - 0.75 / (PI * PI)),
            max_relative = 1e-12
        );
        let tail = eval_difference_model(ModelKind::IdaXy, p, 50.0).unwrap();
        assert!((tail - 2.0).abs() / 2.0 < 0.05);
    }

    #[test]
    fn family_checks_are_enforced() {
        let p = params(1.0, 1.0);
        assert!(eval_autocorr_model(ModelKind::IdaXz, p, 0.1).is_err());
        assert!(eval_autocorr_model(ModelKind::DaZ, p, 0.1).is_err());
        assert!(eval_difference_model(ModelKind::AiaXz, p, 0.1).is_err());
        assert!(eval_difference_model(ModelKind::AxisX, p, 0.1).is_err());
    }

    #[test]
    fn zero_lag_normalization_all_plain_kinds() {
        let kinds = [
            ModelKind::AxisX,
            ModelKind::AxisY,
            ModelKind::AxisZ,
            ModelKind::General { theta_s: 0.7 },
            ModelKind::AiaXz,
            ModelKind::AiaXy,
        ];
        for kind in kinds {
            let v = eval_autocorr_model(kind, params(123.4, 2.5), 0.0).unwrap();
            assert_relative_eq!(v, 2.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn difference_identity_against_plain_family() {
        // difference(kind, rho) = 2 (msv - plain(base, 2 rho)), 200 draws
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            // splitmix64, plenty for test point generation
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            (z ^ (z >> 31)) as f64 / u64::MAX as f64
        };
        let pairs = [
            (ModelKind::IdaXz, ModelKind::AiaXz),
            (ModelKind::IdaXy, ModelKind::AiaXy),
            (ModelKind::DaX, ModelKind::AxisX),
            (ModelKind::DaY, ModelKind::AxisY),
            (ModelKind::DaZ, ModelKind::AxisZ),
        ];
        for _ in 0..200 {
            let k = 10f64.powf(-1.0 + 4.0 * next());
            let rho = 10f64.powf(-4.0 + 4.0 * next());
            let msv = 0.1 + 10.0 * next();
            let p = params(k, msv);
            for (diff, plain) in pairs {
                let lhs = eval_difference_model(diff, p, rho).unwrap();
                let rhs = 2.0 * (msv - eval_autocorr_model(plain, p, 2.0 * rho).unwrap());
                assert!(
                    (lhs - rhs).abs() <= 1e-12 * msv,
                    "{diff:?} vs {plain:?}: {lhs} != {rhs} (k={k}, rho={rho})"
                );
            }
        }
    }

    #[test]
    fn general_angle_consistency() {
        let p = params(700.0, 1.3);
        for i in 0..50 {
            let lag = i as f64 * 2e-4;
            let gz = eval_autocorr_model(ModelKind::General { theta_s: 0.0 }, p, lag).unwrap();
            let az = eval_autocorr_model(ModelKind::AxisZ, p, lag).unwrap();
            assert!((gz - az).abs() <= 1e-14 * p.msv.max(1.0));
            let gx =
                eval_autocorr_model(ModelKind::General { theta_s: PI / 2.0 }, p, lag).unwrap();
            let ax = eval_autocorr_model(ModelKind::AxisX, p, lag).unwrap();
            assert!((gx - ax).abs() <= 1e-14 * p.msv.max(1.0));
        }
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(ModelParams::new(0.0, 1.0).is_err());
        assert!(ModelParams::new(-2.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, -0.5).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0).is_err());
        assert!(ModelParams::new(1.0, f64::INFINITY).is_err());
        let p = params(1.0, 1.0);
        assert!(eval_autocorr_model(ModelKind::General { theta_s: 2.0 }, p, 0.1).is_err());
        assert!(eval_autocorr_model(ModelKind::AxisX, p, -0.1).is_err());
    }

    proptest! {
        #[test]
        fn scale_equivariance(
            k in 1e-2f64..1e4,
            lag in 0.0f64..10.0,
            msv in 1e-3f64..1e3,
            c in 1e-3f64..1e3,
        ) {
            let a = eval_difference_model(ModelKind::IdaXz, params(k, msv), lag).unwrap();
            let b = eval_difference_model(ModelKind::IdaXz, params(k, c * msv), lag).unwrap();
            prop_assert!((b - c * a).abs() <= 1e-9 * (c * msv));
            let a = eval_autocorr_model(ModelKind::AiaXy, params(k, msv), lag).unwrap();
            let b = eval_autocorr_model(ModelKind::AiaXy, params(k, c * msv), lag).unwrap();
            prop_assert!((b - c * a).abs() <= 1e-9 * (c * msv));
        }

        #[test]
        fn outputs_finite_over_wide_ranges(
            k in 1e-3f64..1e6,
            lag in 0.0f64..1e6,
        ) {
            let p = params(k, 1.0);
            for kind in [ModelKind::AxisX, ModelKind::AxisZ, ModelKind::AiaXz, ModelKind::AiaXy] {
                prop_assert!(eval_autocorr_model(kind, p, lag).unwrap().is_finite());
            }
            for kind in [ModelKind::DaX, ModelKind::DaZ, ModelKind::IdaXz, ModelKind::IdaXy] {
                prop_assert!(eval_difference_model(kind, p, lag).unwrap().is_finite());
            }
        }
    }
}
