//! Synthetic wave fields: reverberant shear-wave phasors, long-wavelength
//! compression contaminants, bulk motion, noise, and piecewise-constant
//! phantom composites.
//!
//! Everything here is a pure function of its inputs and seed; identical
//! calls produce bit-identical fields.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::field::{ComplexField, GridSpec};

/// Homogeneous reverberant field: a superposition of `num_waves` shear plane
/// waves with random 3D propagation directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReverbSpec {
    /// Shear wave speed, m/s.
    pub sws: f64,
    /// Temporal frequency, Hz.
    pub freq: f64,
    /// Number of plane-wave realizations superposed.
    pub num_waves: usize,
    pub seed: u64,
    /// Field RMS after rescaling, m/s.
    pub target_rms: f64,
}

impl ReverbSpec {
    pub fn new(sws: f64, freq: f64, num_waves: usize, seed: u64) -> Self {
        Self { sws, freq, num_waves, seed, target_rms: 1.0 }
    }

    pub fn with_target_rms(mut self, target_rms: f64) -> Self {
        self.target_rms = target_rms;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.sws > 0.0 && self.sws.is_finite()) {
            return Err(Error::InvalidSpec(format!("sws must be positive, got {}", self.sws)));
        }
        if !(self.freq > 0.0 && self.freq.is_finite()) {
            return Err(Error::InvalidSpec(format!("freq must be positive, got {}", self.freq)));
        }
        if self.num_waves == 0 {
            return Err(Error::InvalidSpec("num_waves must be at least 1".into()));
        }
        if !(self.target_rms > 0.0 && self.target_rms.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "target_rms must be positive, got {}",
                self.target_rms
            )));
        }
        Ok(())
    }
}

/// Single in-plane compression plane wave of the same temporal frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionSpec {
    /// Compression wave speed, m/s (wavelength = speed / freq).
    pub speed: f64,
    /// Propagation direction, radians from the z axis, in the xz plane.
    pub direction_angle: f64,
    /// Contaminant RMS divided by the shear-field RMS.
    pub amplitude_ratio: f64,
    pub phase: f64,
    /// Reserved for randomized multi-wave variants; the single deterministic
    /// wave synthesized here does not consume it.
    pub seed: u64,
}

impl CompressionSpec {
    fn validate(&self) -> Result<()> {
        if !(self.speed > 0.0 && self.speed.is_finite()) {
            return Err(Error::InvalidSpec(format!("speed must be positive, got {}", self.speed)));
        }
        if !(self.amplitude_ratio >= 0.0 && self.amplitude_ratio.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "amplitude_ratio must be nonnegative, got {}",
                self.amplitude_ratio
            )));
        }
        Ok(())
    }
}

/// Region primitive for piecewise-constant phantoms. Coordinates in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionShape {
    Disk { center_x: f64, center_z: f64, radius: f64 },
    Rectangle { x0: f64, z0: f64, x1: f64, z1: f64 },
}

impl RegionShape {
    pub fn contains(&self, x: f64, z: f64) -> bool {
        match *self {
            RegionShape::Disk { center_x, center_z, radius } => {
                let dx = x - center_x;
                let dz = z - center_z;
                dx * dx + dz * dz <= radius * radius
            }
            RegionShape::Rectangle { x0, z0, x1, z1 } => x >= x0 && x <= x1 && z >= z0 && z <= z1,
        }
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        match *self {
            RegionShape::Disk { center_x, center_z, radius } => (
                center_x - radius,
                center_z - radius,
                center_x + radius,
                center_z + radius,
            ),
            RegionShape::Rectangle { x0, z0, x1, z1 } => (x0, z0, x1, z1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhantomRegion {
    pub shape: RegionShape,
    pub sws: f64,
    pub label: u16,
}

/// Piecewise-constant SWS geometry: a background plus labeled regions.
/// Label 0 is reserved for the background.
#[derive(Debug, Clone, PartialEq)]
pub struct PhantomSpec {
    pub background_sws: f64,
    pub regions: Vec<PhantomRegion>,
}

impl PhantomSpec {
    pub fn homogeneous(background_sws: f64) -> Self {
        Self { background_sws, regions: Vec::new() }
    }

    fn validate(&self, grid: &GridSpec) -> Result<()> {
        if !(self.background_sws > 0.0 && self.background_sws.is_finite()) {
            return Err(Error::InvalidSpec("background sws must be positive".into()));
        }
        let mut labels = std::collections::BTreeSet::new();
        let (ex, ez) = (grid.x(grid.nx - 1), grid.z(grid.nz - 1));
        for r in &self.regions {
            if !(r.sws > 0.0 && r.sws.is_finite()) {
                return Err(Error::InvalidSpec(format!("region sws must be positive, got {}", r.sws)));
            }
            if r.label == 0 {
                return Err(Error::InvalidSpec("label 0 is reserved for the background".into()));
            }
            if !labels.insert(r.label) {
                return Err(Error::InvalidSpec(format!("duplicate region label {}", r.label)));
            }
            let (x0, z0, x1, z1) = r.shape.bounds();
            if x0 < 0.0 || z0 < 0.0 || x1 > ex || z1 > ez || x0 > x1 || z0 > z1 {
                return Err(Error::InvalidSpec(format!(
                    "region {} does not lie inside the grid",
                    r.label
                )));
            }
        }
        Ok(())
    }
}

/// SplitMix64 step; used to derive independent per-region seeds.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic seed for phantom region `label` derived from a base seed.
/// Label 0 (the background) keeps the base seed unchanged.
pub fn derive_region_seed(base_seed: u64, label: u16) -> u64 {
    if label == 0 {
        base_seed
    } else {
        splitmix64(base_seed ^ splitmix64(label as u64))
    }
}

/// Draws a uniformly distributed unit vector in R^3.
fn random_unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Orthonormal basis (u, w) of the plane orthogonal to unit vector n.
fn orthonormal_complement(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let pick = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    // u = normalize(pick x n)
    let mut u = [
        pick[1] * n[2] - pick[2] * n[1],
        pick[2] * n[0] - pick[0] * n[2],
        pick[0] * n[1] - pick[1] * n[0],
    ];
    let nu = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    u = [u[0] / nu, u[1] / nu, u[2] / nu];
    let w = [
        n[1] * u[2] - n[2] * u[1],
        n[2] * u[0] - n[0] * u[2],
        n[0] * u[1] - n[1] * u[0],
    ];
    (u, w)
}

/// Synthesizes the z-velocity phasor of a fully reverberant shear wave field
/// on the y = 0 plane.
///
/// Each of the `num_waves` realizations draws a propagation direction
/// uniformly on the unit sphere, a particle-motion direction uniformly on
/// the circle orthogonal to it, and a unit-magnitude complex amplitude with
/// uniform phase. The summed field is rescaled to `target_rms`.
pub fn synth_reverberant(grid: GridSpec, spec: &ReverbSpec) -> Result<ComplexField> {
    spec.validate()?;
    let k = TAU * spec.freq / spec.sws;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut values = vec![Complex64::ZERO; grid.len()];
    let mut phase_x = vec![Complex64::ZERO; grid.nx];
    let mut phase_z = vec![Complex64::ZERO; grid.nz];

    for _ in 0..spec.num_waves {
        let n_q = random_unit_vector(&mut rng);
        let (u, w) = orthonormal_complement(n_q);
        let alpha = rng.random::<f64>() * TAU;
        let (sa, ca) = alpha.sin_cos();
        // z-component of the particle-motion direction
        let motion_z = ca * u[2] + sa * w[2];
        let psi = rng.random::<f64>() * TAU;
        let coeff = Complex64::from_polar(1.0, psi) * motion_z;

        // e^{i k n.eps} factors along x and z of the y = 0 plane
        for (ix, p) in phase_x.iter_mut().enumerate() {
            *p = Complex64::from_polar(1.0, k * n_q[0] * grid.x(ix));
        }
        for (iz, p) in phase_z.iter_mut().enumerate() {
            *p = Complex64::from_polar(1.0, k * n_q[2] * grid.z(iz));
        }
        for iz in 0..grid.nz {
            let cz = coeff * phase_z[iz];
            let row = &mut values[iz * grid.nx..(iz + 1) * grid.nx];
            for (v, px) in row.iter_mut().zip(&phase_x) {
                *v += cz * px;
            }
        }
    }

    let ms = values.iter().map(|v| v.norm_sqr()).sum::<f64>() / values.len() as f64;
    if ms <= 0.0 {
        return Err(Error::InvalidSpec(
            "degenerate realization: field has zero z-velocity everywhere".into(),
        ));
    }
    let scale = spec.target_rms / ms.sqrt();
    for v in &mut values {
        *v *= scale;
    }
    ComplexField::new(grid, spec.freq, values)
}

/// Single compression plane wave; particle motion is parallel to propagation,
/// so the observable z-velocity carries a cos(direction_angle) projection.
///
/// The amplitude is set so the synthesized z-velocity field has RMS equal to
/// `amplitude_ratio * shear_rms`.
pub fn synth_compression(
    grid: GridSpec,
    freq: f64,
    spec: &CompressionSpec,
    shear_rms: f64,
) -> Result<ComplexField> {
    spec.validate()?;
    if !(freq > 0.0 && freq.is_finite()) {
        return Err(Error::InvalidSpec(format!("freq must be positive, got {freq}")));
    }
    if !(shear_rms >= 0.0 && shear_rms.is_finite()) {
        return Err(Error::InvalidSpec(format!("shear_rms must be nonnegative, got {shear_rms}")));
    }
    if spec.amplitude_ratio == 0.0 {
        return ComplexField::zeros(grid, freq);
    }
    let (sin_t, cos_t) = spec.direction_angle.sin_cos();
    if cos_t.abs() < 1e-12 {
        return Err(Error::InvalidSpec(
            "compression wave orthogonal to the z sensitivity is unobservable; \
             cos(direction_angle) must be nonzero"
                .into(),
        ));
    }
    let k_p = TAU * freq / spec.speed;
    // |field| is constant, so the RMS equals |cos * a|.
    let a = spec.amplitude_ratio * shear_rms / cos_t.abs();
    let mut values = Vec::with_capacity(grid.len());
    for iz in 0..grid.nz {
        let pz = k_p * cos_t * grid.z(iz);
        for ix in 0..grid.nx {
            let ph = k_p * sin_t * grid.x(ix) + pz + spec.phase;
            values.push(Complex64::from_polar(cos_t * a, ph));
        }
    }
    ComplexField::new(grid, freq, values)
}

/// Spatially constant phasor modeling bulk tissue motion.
pub fn synth_bulk(grid: GridSpec, freq: f64, amplitude: f64, phase: f64) -> Result<ComplexField> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::InvalidSpec(format!(
            "bulk amplitude must be nonnegative, got {amplitude}"
        )));
    }
    let v = Complex64::from_polar(amplitude, phase);
    ComplexField::new(grid, freq, vec![v; grid.len()])
}

/// Piecewise-constant phantom: an independent homogeneous reverberant field
/// per region label, assembled into a patchwork by region membership.
///
/// Returns the composite field and the per-sample label map (0 = background).
/// Region seeds derive from `base.seed` via [`derive_region_seed`], so a
/// phantom with no regions reproduces `synth_reverberant(grid, base)` exactly.
pub fn compose_phantom(
    grid: GridSpec,
    phantom: &PhantomSpec,
    base: &ReverbSpec,
) -> Result<(ComplexField, Vec<u16>)> {
    phantom.validate(&grid)?;

    let mut labels = vec![0u16; grid.len()];
    for iz in 0..grid.nz {
        for ix in 0..grid.nx {
            let (x, z) = (grid.x(ix), grid.z(iz));
            for r in &phantom.regions {
                if r.shape.contains(x, z) {
                    let cell = &mut labels[iz * grid.nx + ix];
                    if *cell != 0 {
                        return Err(Error::OverlappingRegions(ix, iz));
                    }
                    *cell = r.label;
                }
            }
        }
    }

    let background = ReverbSpec { sws: phantom.background_sws, ..*base };
    let mut composite = synth_reverberant(grid, &background)?;
    for r in &phantom.regions {
        let region_spec = ReverbSpec {
            sws: r.sws,
            seed: derive_region_seed(base.seed, r.label),
            ..*base
        };
        let region_field = synth_reverberant(grid, &region_spec)?;
        for (i, label) in labels.iter().enumerate() {
            if *label == r.label {
                composite.values[i] = region_field.values[i];
            }
        }
    }
    Ok((composite, labels))
}

/// Elementwise sum of two fields on the same grid and frequency.
pub fn mix(a: &ComplexField, b: &ComplexField) -> Result<ComplexField> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    if a.freq != b.freq {
        return Err(Error::FrequencyMismatch(a.freq, b.freq));
    }
    let values = a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect();
    ComplexField::new(a.grid, a.freq, values)
}

/// Adds circular complex white noise at the given SNR (dB) relative to the
/// field mean-square. `f64::INFINITY` means no noise.
pub fn add_noise(f: &ComplexField, snr_db: f64, seed: u64) -> Result<ComplexField> {
    if snr_db == f64::INFINITY {
        return Ok(f.clone());
    }
    if !snr_db.is_finite() {
        return Err(Error::InvalidSpec(format!("snr_db must be finite or +inf, got {snr_db}")));
    }
    let noise_var = f.mean_square() / 10f64.powf(snr_db / 10.0);
    let sigma = (noise_var / 2.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = f
        .values
        .iter()
        .map(|v| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            v + Complex64::new(re * sigma, im * sigma)
        })
        .collect();
    ComplexField::new(f.grid, f.freq, values)
}
