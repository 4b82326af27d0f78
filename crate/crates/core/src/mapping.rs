//! Sliding-window SWS map construction, region statistics, and the
//! three-way estimator comparison report.

use rayon::prelude::*;
use std::fmt;

use crate::error::{Error, Result};
use crate::estimator::{find_estimator, WindowView};
use crate::field::ComplexField;
use crate::fitting::{fit_wavenumber, FitConfig};
use crate::models::Plane;
use crate::prefilter::{bandpass_2d, BandpassSpec};
use crate::synth::RegionShape;

/// Window, stride, estimator and fit settings for [`sws_map`].
#[derive(Debug, Clone, PartialEq)]
pub struct MapConfig {
    /// Square window side, meters.
    pub window_size: f64,
    /// Window center spacing, meters.
    pub stride: f64,
    /// Registry name of the profile estimator ("ida", "aia", ...).
    pub estimator: String,
    /// Optional whole-field bandpass applied before windowing.
    pub prefilter: Option<BandpassSpec>,
    pub fit: FitConfig,
    /// Fit against this frequency instead of the field's.
    pub freq_override: Option<f64>,
    /// Which angular-integral family the data plane calls for.
    pub plane: Plane,
}

impl MapConfig {
    pub fn new(window_size: f64) -> Self {
        Self {
            window_size,
            stride: window_size / 4.0,
            estimator: "ida".to_string(),
            prefilter: None,
            fit: FitConfig::default(),
            freq_override: None,
            plane: Plane::Xz,
        }
    }

    pub fn with_estimator(mut self, name: &str) -> Self {
        self.estimator = name.to_string();
        self
    }

    pub fn with_stride(mut self, stride: f64) -> Self {
        self.stride = stride;
        self
    }

    pub fn with_prefilter(mut self, spec: BandpassSpec) -> Self {
        self.prefilter = Some(spec);
        self
    }
}

/// Grid of per-window SWS estimates at the window centers.
///
/// Cells whose fit failed or pegged a search bound are masked invalid and
/// carry NaN. Values are x-fastest row-major like the parent field.
#[derive(Debug, Clone, PartialEq)]
pub struct SwsMap {
    pub ncx: usize,
    pub ncz: usize,
    /// Window-center coordinates, meters.
    pub centers_x: Vec<f64>,
    pub centers_z: Vec<f64>,
    pub sws: Vec<f64>,
    pub valid: Vec<bool>,
    pub nrmse: Vec<f64>,
    pub window_size: f64,
    pub stride: f64,
    pub estimator: String,
}

impl SwsMap {
    pub fn len(&self) -> usize {
        self.ncx * self.ncz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    /// Mean SWS over all valid cells.
    pub fn mean(&self) -> Option<f64> {
        let n = self.valid_count();
        if n == 0 {
            return None;
        }
        let sum: f64 = self
            .sws
            .iter()
            .zip(&self.valid)
            .filter(|(_, ok)| **ok)
            .map(|(v, _)| v)
            .sum();
        Some(sum / n as f64)
    }
}

/// Mean and spread of valid cells inside a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionStats {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

/// Builds the SWS map: optionally prefilters the whole field, slides a
/// square window across every fully interior position, and per window fits
/// the estimator's model curve to its measured profile.
///
/// Window evaluations are independent and run in parallel; the result does
/// not depend on the worker count.
pub fn sws_map(field: &ComplexField, cfg: &MapConfig) -> Result<SwsMap> {
    let grid = field.grid;
    if cfg.window_size < 8.0 * grid.dx.max(grid.dz) {
        return Err(Error::InvalidSpec(format!(
            "window_size {} m is below 8 samples",
            cfg.window_size
        )));
    }
    if !(cfg.stride > 0.0) {
        return Err(Error::InvalidSpec(format!("stride must be positive, got {}", cfg.stride)));
    }
    let estimator = find_estimator(&cfg.estimator)?;

    let filtered;
    let data = match &cfg.prefilter {
        Some(spec) => {
            filtered = bandpass_2d(field, spec)?;
            &filtered
        }
        None => field,
    };

    let wx = (cfg.window_size / grid.dx).round() as usize;
    let wz = (cfg.window_size / grid.dz).round() as usize;
    if wx > grid.nx || wz > grid.nz {
        return Err(Error::InvalidSpec(format!(
            "window {} m exceeds the field extent",
            cfg.window_size
        )));
    }
    let sx = ((cfg.stride / grid.dx).round() as usize).max(1);
    let sz = ((cfg.stride / grid.dz).round() as usize).max(1);

    let origins_x: Vec<usize> = (0..=grid.nx - wx).step_by(sx).collect();
    let origins_z: Vec<usize> = (0..=grid.nz - wz).step_by(sz).collect();
    let freq = cfg.freq_override.unwrap_or(data.freq);
    let kind = estimator.model_kind(cfg.plane);
    let extent = (wx as f64 * grid.dx).min(wz as f64 * grid.dz);
    let max_lag = estimator.default_max_lag(extent);

    let cells: Vec<(f64, bool, f64)> = origins_z
        .par_iter()
        .flat_map_iter(|&oz| {
            let origins_x = &origins_x;
            origins_x.iter().map(move |&ox| {
                let result = WindowView::new(data, (ox, oz), (wx, wz))
                    .and_then(|w| estimator.profile(&w, max_lag))
                    .and_then(|p| fit_wavenumber(&p, kind, freq, &cfg.fit));
                match result {
                    Ok(fit) if fit.ok && !fit.at_bound => (fit.sws, true, fit.nrmse),
                    Ok(fit) => (f64::NAN, false, fit.nrmse),
                    Err(_) => (f64::NAN, false, f64::NAN),
                }
            })
        })
        .collect();

    let centers_x = origins_x
        .iter()
        .map(|&ox| (ox as f64 + (wx as f64 - 1.0) / 2.0) * grid.dx)
        .collect();
    let centers_z = origins_z
        .iter()
        .map(|&oz| (oz as f64 + (wz as f64 - 1.0) / 2.0) * grid.dz)
        .collect();

    Ok(SwsMap {
        ncx: origins_x.len(),
        ncz: origins_z.len(),
        centers_x,
        centers_z,
        sws: cells.iter().map(|c| c.0).collect(),
        valid: cells.iter().map(|c| c.1).collect(),
        nrmse: cells.iter().map(|c| c.2).collect(),
        window_size: cfg.window_size,
        stride: cfg.stride,
        estimator: cfg.estimator.clone(),
    })
}

/// Mean/std/count over valid cells whose center satisfies the predicate.
/// The spread is the sample standard deviation across cells.
pub fn region_stats(map: &SwsMap, region: impl Fn(f64, f64) -> bool) -> Result<RegionStats> {
    let mut values = Vec::new();
    for jz in 0..map.ncz {
        for jx in 0..map.ncx {
            let i = jz * map.ncx + jx;
            if map.valid[i] && region(map.centers_x[jx], map.centers_z[jz]) {
                values.push(map.sws[i]);
            }
        }
    }
    if values.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(RegionStats { mean, std, n })
}

/// Geometric cell selector for reports.
#[derive(Debug, Clone, PartialEq)]
pub enum RegionMask {
    All,
    Shape(RegionShape),
    /// Everything not covered by the listed shapes.
    Outside(Vec<RegionShape>),
}

impl RegionMask {
    pub fn contains(&self, x: f64, z: f64) -> bool {
        match self {
            RegionMask::All => true,
            RegionMask::Shape(s) => s.contains(x, z),
            RegionMask::Outside(shapes) => !shapes.iter().any(|s| s.contains(x, z)),
        }
    }
}

/// Named report region with optional ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionDef {
    pub name: String,
    pub mask: RegionMask,
    pub truth: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub estimator: String,
    pub region: String,
    pub mean: f64,
    pub std: f64,
    pub n: usize,
    pub truth: Option<f64>,
    /// Signed percent error versus truth, when truth is given.
    pub pct_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub estimator: String,
    pub region_a: String,
    pub region_b: String,
    pub ratio: f64,
}

/// Three-way comparison: IDA unfiltered, AIA unfiltered, AIA after the
/// bandpass, sharing window/stride/fit settings.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub rows: Vec<ReportRow>,
    pub ratios: Vec<RatioRow>,
    pub has_truth: bool,
}

const COMPARE_LABELS: [&str; 3] = ["ida", "aia", "aia+bandpass"];

/// Runs the three estimator configurations over a field and summarizes each
/// region. Row order is fixed: estimators in the order above, regions in the
/// order given. Region-pair mean ratios are reported per estimator.
pub fn compare_report(
    field: &ComplexField,
    base_cfg: &MapConfig,
    bandpass: &BandpassSpec,
    regions: &[RegionDef],
) -> Result<CompareReport> {
    if regions.is_empty() {
        return Err(Error::InvalidSpec("compare_report needs at least one region".into()));
    }
    let configs = [
        MapConfig {
            estimator: "ida".into(),
            prefilter: None,
            ..base_cfg.clone()
        },
        MapConfig {
            estimator: "aia".into(),
            prefilter: None,
            ..base_cfg.clone()
        },
        MapConfig {
            estimator: "aia".into(),
            prefilter: Some(*bandpass),
            ..base_cfg.clone()
        },
    ];

    let has_truth = regions.iter().any(|r| r.truth.is_some());
    let mut rows = Vec::new();
    let mut ratios = Vec::new();
    for (label, cfg) in COMPARE_LABELS.iter().zip(&configs) {
        let map = sws_map(field, cfg)?;
        let mut means = Vec::new();
        for region in regions {
            let stats = region_stats(&map, |x, z| region.mask.contains(x, z))?;
            means.push(stats.mean);
            rows.push(ReportRow {
                estimator: label.to_string(),
                region: region.name.clone(),
                mean: stats.mean,
                std: stats.std,
                n: stats.n,
                truth: region.truth,
                pct_err: region
                    .truth
                    .map(|t| 100.0 * (stats.mean - t) / t),
            });
        }
        for i in 0..regions.len() {
            for j in i + 1..regions.len() {
                ratios.push(RatioRow {
                    estimator: label.to_string(),
                    region_a: regions[i].name.clone(),
                    region_b: regions[j].name.clone(),
                    ratio: means[i] / means[j],
                });
            }
        }
    }
    Ok(CompareReport { rows, ratios, has_truth })
}

impl CompareReport {
    /// CSV rendering: a stats table, then (if any regions pair up) a ratio
    /// table after a blank line. Error columns are omitted entirely when no
    /// region carries ground truth.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.has_truth {
            out.push_str("estimator,region,mean_mps,std_mps,n,truth_mps,pct_err\n");
        } else {
            out.push_str("estimator,region,mean_mps,std_mps,n\n");
        }
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.6},{:.6},{}",
                r.estimator, r.region, r.mean, r.std, r.n
            ));
            if self.has_truth {
                match (r.truth, r.pct_err) {
                    (Some(t), Some(e)) => out.push_str(&format!(",{t:.6},{e:.2}")),
                    _ => out.push_str(",,"),
                }
            }
            out.push('\n');
        }
        if !self.ratios.is_empty() {
            out.push('\n');
            out.push_str("estimator,region_a,region_b,ratio\n");
            for r in &self.ratios {
                out.push_str(&format!(
                    "{},{},{},{:.6}\n",
                    r.estimator, r.region_a, r.region_b, r.ratio
                ));
            }
        }
        out
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<14} {:<12} {:>10} {:>10} {:>6}{}",
            "estimator",
            "region",
            "mean m/s",
            "std m/s",
            "n",
            if self.has_truth { "   err vs truth" } else { "" }
        )?;
        for r in &self.rows {
            write!(
                f,
                "{:<14} {:<12} {:>10.4} {:>10.4} {:>6}",
                r.estimator, r.region, r.mean, r.std, r.n
            )?;
            if self.has_truth {
                match r.pct_err {
                    Some(e) => write!(f, "   {e:>+10.2}%")?,
                    None => write!(f, "   {:>11}", "-")?,
                }
            }
            writeln!(f)?;
        }
        for r in &self.ratios {
            writeln!(
                f,
                "{:<14} {}/{} ratio = {:.4}",
                r.estimator, r.region_a, r.region_b, r.ratio
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{synth_reverberant, ReverbSpec};
    use crate::field::GridSpec;

    fn homogeneous_field(seed: u64) -> ComplexField {
        let grid = GridSpec::new(128, 128, 0.5e-3, 0.5e-3).unwrap();
        synth_reverberant(grid, &ReverbSpec::new(1.0, 200.0, 512, seed)).unwrap()
    }

    #[test]
    fn homogeneous_map_is_near_truth_and_mostly_valid() {
        let field = homogeneous_field(42);
        let cfg = MapConfig::new(15e-3);
        let map = sws_map(&field, &cfg).unwrap();
        assert!(map.len() >= 9);
        let mean = map.mean().unwrap();
        assert!((mean - 1.0).abs() < 0.05, "map mean {mean}");
        assert!(map.valid_count() as f64 / map.len() as f64 >= 0.95);
        // valid values honor the fit band
        for (v, ok) in map.sws.iter().zip(&map.valid) {
            if *ok {
                assert!(*v >= cfg.fit.sws_min && *v <= cfg.fit.sws_max);
            } else {
                assert!(v.is_nan());
            }
        }
    }

    #[test]
    fn estimator_switch_agreement_without_contamination() {
        let field = homogeneous_field(7);
        let ida = sws_map(&field, &MapConfig::new(15e-3)).unwrap();
        let aia = sws_map(&field, &MapConfig::new(15e-3).with_estimator("aia")).unwrap();
        let (mi, ma) = (ida.mean().unwrap(), aia.mean().unwrap());
        assert!(
            (mi - ma).abs() / mi < 0.03,
            "IDA mean {mi} vs AIA mean {ma}"
        );
    }

    #[test]
    fn stride_refinement_consistency() {
        let field = homogeneous_field(3);
        let coarse = sws_map(&field, &MapConfig::new(15e-3)).unwrap();
        let fine = sws_map(
            &field,
            &MapConfig::new(15e-3).with_stride(15e-3 / 8.0),
        )
        .unwrap();
        let (a, b) = (coarse.mean().unwrap(), fine.mean().unwrap());
        assert!((a - b).abs() / a < 0.005, "stride halving moved mean {a} -> {b}");
    }

    #[test]
    fn mask_soundness_refits_reproduce_cells() {
        let field = homogeneous_field(5);
        let cfg = MapConfig::new(15e-3);
        let map = sws_map(&field, &cfg).unwrap();
        let again = sws_map(&field, &cfg).unwrap();
        assert_eq!(map, again);
    }

    #[test]
    fn parallel_determinism_across_worker_counts() {
        let field = homogeneous_field(9);
        let cfg = MapConfig::new(15e-3);
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| sws_map(&field, &cfg))
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| sws_map(&field, &cfg))
            .unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn region_stats_algebra() {
        let map = SwsMap {
            ncx: 4,
            ncz: 1,
            centers_x: vec![0.0, 1.0, 2.0, 3.0],
            centers_z: vec![0.0],
            sws: vec![1.0, 2.0, 3.0, 4.0],
            valid: vec![true; 4],
            nrmse: vec![0.0; 4],
            window_size: 1.0,
            stride: 1.0,
            estimator: "ida".into(),
        };
        let all = region_stats(&map, |_, _| true).unwrap();
        assert_eq!(all.n, 4);
        assert!((all.mean - 2.5).abs() < 1e-15);

        let left = region_stats(&map, |x, _| x < 1.5).unwrap();
        let right = region_stats(&map, |x, _| x >= 1.5).unwrap();
        let recombined = (left.mean * left.n as f64 + right.mean * right.n as f64)
            / (left.n + right.n) as f64;
        assert!((recombined - all.mean).abs() < 1e-12);

        // constant map has zero spread
        let flat = SwsMap { sws: vec![2.0; 4], ..map.clone() };
        let s = region_stats(&flat, |_, _| true).unwrap();
        assert_eq!((s.mean, s.std, s.n), (2.0, 0.0, 4));

        assert!(matches!(region_stats(&map, |_, _| false), Err(Error::EmptyRegion)));
    }

    #[test]
    fn unknown_estimator_is_rejected() {
        let field = homogeneous_field(1);
        let cfg = MapConfig::new(15e-3).with_estimator("bogus");
        assert!(matches!(sws_map(&field, &cfg), Err(Error::UnknownEstimator(_))));
    }

    #[test]
    fn report_formatting_omits_absent_truth() {
        let field = homogeneous_field(2);
        let cfg = MapConfig::new(15e-3);
        let bp = BandpassSpec::new(0.5, 4.0).unwrap();
        let regions = [RegionDef {
            name: "all".into(),
            mask: RegionMask::All,
            truth: None,
        }];
        let report = compare_report(&field, &cfg, &bp, &regions).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert!(report.ratios.is_empty());
        assert!(!report.has_truth);
        let csv = report.to_csv();
        assert!(csv.starts_with("estimator,region,mean_mps,std_mps,n\n"));
        assert!(!csv.contains("truth"));

        let regions = [RegionDef {
            name: "all".into(),
            mask: RegionMask::All,
            truth: Some(1.0),
        }];
        let report = compare_report(&field, &cfg, &bp, &regions).unwrap();
        assert!(report.to_csv().contains("truth_mps"));
        assert!(report.rows[0].pct_err.is_some());
    }
}
