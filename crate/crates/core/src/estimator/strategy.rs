//! Profile estimators behind a common trait, registered by name so configs
//! and the CLI can select them at runtime.

use super::autocorr::{autocorr_2d, radial_profile};
use super::profiles::{ida_profile_direct, ida_profile_identity};
use super::{AutocorrProfile, ProfileKind, WindowView};
use crate::error::{Error, Result};
use crate::models::{ModelKind, Plane};

/// One windowed-profile algorithm: how to turn a window into a radially
/// integrated profile and which theoretical curve fits it.
pub trait ProfileEstimator: Sync {
    /// Registry name, as accepted by configs and the CLI.
    fn name(&self) -> &'static str;

    fn kind(&self) -> ProfileKind;

    /// Largest usable lag for a square window of the given physical extent.
    fn default_max_lag(&self, window_extent: f64) -> f64;

    /// Theoretical curve matching this estimator's profile for data acquired
    /// in the given plane.
    fn model_kind(&self, plane: Plane) -> ModelKind;

    fn profile(&self, w: &WindowView<'_>, max_lag: f64) -> Result<AutocorrProfile>;
}

/// Integrated difference autocorrelation via direct pairwise subtraction.
pub struct IdaDirect;

impl ProfileEstimator for IdaDirect {
    fn name(&self) -> &'static str {
        "ida"
    }

    fn kind(&self) -> ProfileKind {
        ProfileKind::Ida
    }

    fn default_max_lag(&self, window_extent: f64) -> f64 {
        window_extent / 4.0
    }

    fn model_kind(&self, plane: Plane) -> ModelKind {
        match plane {
            Plane::Xz => ModelKind::IdaXz,
            Plane::Xy => ModelKind::IdaXy,
        }
    }

    fn profile(&self, w: &WindowView<'_>, max_lag: f64) -> Result<AutocorrProfile> {
        ida_profile_direct(w, max_lag)
    }
}

/// Integrated difference autocorrelation via the autocorrelation identity.
pub struct IdaIdentity;

impl ProfileEstimator for IdaIdentity {
    fn name(&self) -> &'static str {
        "ida-identity"
    }

    fn kind(&self) -> ProfileKind {
        ProfileKind::Ida
    }

    fn default_max_lag(&self, window_extent: f64) -> f64 {
        window_extent / 4.0
    }

    fn model_kind(&self, plane: Plane) -> ModelKind {
        match plane {
            Plane::Xz => ModelKind::IdaXz,
            Plane::Xy => ModelKind::IdaXy,
        }
    }

    fn profile(&self, w: &WindowView<'_>, max_lag: f64) -> Result<AutocorrProfile> {
        ida_profile_identity(w, max_lag)
    }
}

/// Angular integral of the plain autocorrelation.
pub struct AiaRadial;

impl ProfileEstimator for AiaRadial {
    fn name(&self) -> &'static str {
        "aia"
    }

    fn kind(&self) -> ProfileKind {
        ProfileKind::Aia
    }

    fn default_max_lag(&self, window_extent: f64) -> f64 {
        window_extent / 2.0
    }

    fn model_kind(&self, plane: Plane) -> ModelKind {
        match plane {
            Plane::Xz => ModelKind::AiaXz,
            Plane::Xy => ModelKind::AiaXy,
        }
    }

    fn profile(&self, w: &WindowView<'_>, max_lag: f64) -> Result<AutocorrProfile> {
        radial_profile(&autocorr_2d(w), max_lag)
    }
}

/// Every registered estimator, in deterministic order.
pub static ESTIMATORS: &[&dyn ProfileEstimator] = &[&IdaDirect, &AiaRadial, &IdaIdentity];

/// Looks an estimator up by registry name.
pub fn find_estimator(name: &str) -> Result<&'static dyn ProfileEstimator> {
    ESTIMATORS
        .iter()
        .copied()
        .find(|e| e.name() == name)
        .ok_or_else(|| Error::UnknownEstimator(name.to_string()))
}
