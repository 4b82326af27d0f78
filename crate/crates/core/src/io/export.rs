//! CSV and PGM exports. Floats print with 17 significant digits so a
//! re-parse reproduces them exactly.

use std::io::{BufRead, BufReader, Read, Write};

use crate::error::{Error, Result};
use crate::estimator::{AutocorrProfile, ProfileKind};
use crate::mapping::SwsMap;

const PROFILE_HEADER: &str = "lag_m,value,count";
const MAP_HEADER: &str = "x_m,z_m,sws_mps,valid,nrmse";

/// Writes a profile as `lag_m,value,count` rows.
pub fn export_profile_csv<W: Write>(profile: &AutocorrProfile, mut w: W) -> Result<()> {
    writeln!(w, "{PROFILE_HEADER}")?;
    for i in 0..profile.len() {
        writeln!(
            w,
            "{:.16e},{:.16e},{}",
            profile.lags[i], profile.values[i], profile.counts[i]
        )?;
    }
    Ok(())
}

/// Reads a profile CSV back. The file does not carry the profile family, so
/// the caller states it.
pub fn parse_profile_csv<R: Read>(r: R, kind: ProfileKind) -> Result<AutocorrProfile> {
    let reader = BufReader::new(r);
    let mut lags = Vec::new();
    let mut values = Vec::new();
    let mut counts = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if i == 0 {
            if line != PROFILE_HEADER {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("expected header {PROFILE_HEADER:?}, got {line:?}"),
                });
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let mut next = |name: &str| {
            fields.next().ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("missing {name} column"),
            })
        };
        let lag: f64 = next("lag_m")?.parse().map_err(|e| Error::Parse {
            line: i + 1,
            msg: format!("bad lag_m: {e}"),
        })?;
        let value: f64 = next("value")?.parse().map_err(|e| Error::Parse {
            line: i + 1,
            msg: format!("bad value: {e}"),
        })?;
        let count: u64 = next("count")?.parse().map_err(|e| Error::Parse {
            line: i + 1,
            msg: format!("bad count: {e}"),
        })?;
        if let Some(prev) = lags.last() {
            if lag <= *prev {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("lags must increase strictly ({prev} then {lag})"),
                });
            }
        }
        lags.push(lag);
        values.push(value);
        counts.push(count);
    }
    Ok(AutocorrProfile { kind, lags, values, counts })
}

/// Writes a map as `x_m,z_m,sws_mps,valid,nrmse` rows; invalid cells carry
/// NaN and valid=0.
pub fn export_map_csv<W: Write>(map: &SwsMap, mut w: W) -> Result<()> {
    writeln!(w, "{MAP_HEADER}")?;
    for jz in 0..map.ncz {
        for jx in 0..map.ncx {
            let i = jz * map.ncx + jx;
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{},{:.16e}",
                map.centers_x[jx],
                map.centers_z[jz],
                map.sws[i],
                u8::from(map.valid[i]),
                map.nrmse[i]
            )?;
        }
    }
    Ok(())
}

/// 16-bit binary PGM quick-look. Valid cells scale linearly from the valid
/// min/max (recorded in a header comment) onto 0..65535; invalid cells are 0.
/// A constant map renders its valid cells at full scale.
pub fn export_map_pgm<W: Write>(map: &SwsMap, mut w: W) -> Result<()> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (v, ok) in map.sws.iter().zip(&map.valid) {
        if *ok {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
    }
    if !lo.is_finite() {
        lo = 0.0;
        hi = 0.0;
    }
    write!(
        w,
        "P5\n# sws_min={lo} sws_max={hi}\n{} {}\n65535\n",
        map.ncx, map.ncz
    )?;
    let span = hi - lo;
    for (v, ok) in map.sws.iter().zip(&map.valid) {
        let sample: u16 = if !*ok {
            0
        } else if span > 0.0 {
            ((v - lo) / span * 65535.0).round() as u16
        } else {
            65535
        };
        w.write_all(&sample.to_be_bytes())?;
    }
    Ok(())
}
