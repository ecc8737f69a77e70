//! Parameter scans of sector spectra, emitted as CSV.
//!
//! Output is byte-deterministic: values are printed with 17 significant
//! digits in scientific notation, `.` as decimal separator and `\n` line
//! endings. Missing values print as `nan`.

use std::io::{self, Write};
use std::ops::RangeInclusive;

use crate::dkp::{energy_levels, quantized_level, Parameter, PotentialParams, Sector};
use crate::qes::normalized_determinant;
use crate::scalar::Real;

pub const CSV_HEADER: &str = "n,param,epsilon2,E_plus,E_minus,det_normalized,admissible";

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSpec<T> {
    pub sector: Sector,
    pub params: PotentialParams<T>,
    pub mass: T,
    pub j: u32,
    pub levels: RangeInclusive<usize>,
    pub parameter: Parameter,
    pub range: (T, T),
    pub points: usize,
}

impl<T: Real> ScanSpec<T> {
    /// Uniform grid over `range`, endpoints included.
    pub fn values(&self) -> Vec<T> {
        let (lo, hi) = self.range;
        match self.points {
            0 => Vec::new(),
            1 => vec![lo],
            k => {
                let steps = T::from_usize_lossy(k - 1);
                (0..k)
                    .map(|i| lo + (hi - lo) * T::from_usize_lossy(i) / steps)
                    .collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow<T> {
    pub n: usize,
    pub param: T,
    pub epsilon_squared: Option<T>,
    pub e_plus: Option<T>,
    pub e_minus: Option<T>,
    pub det_normalized: Option<T>,
    pub admissible: bool,
}

/// Rows ordered by `(n, param)`.
pub fn scan<T: Real>(spec: &ScanSpec<T>) -> Vec<ScanRow<T>> {
    let values = spec.values();
    let mut rows = Vec::with_capacity(values.len() * spec.levels.clone().count());
    for n in spec.levels.clone() {
        for &v in &values {
            rows.push(scan_point(spec, n, v));
        }
    }
    rows
}

fn scan_point<T: Real>(spec: &ScanSpec<T>, n: usize, v: T) -> ScanRow<T> {
    let p = spec.params.with(spec.parameter, v);
    let det_normalized = quantized_level(&p, spec.mass, spec.j, spec.sector, n)
        .ok()
        .map(|level| normalized_determinant(&level.algebraization).normalized);
    match energy_levels(&p, spec.mass, spec.j, spec.sector, n) {
        Ok(pt) => ScanRow {
            n,
            param: v,
            epsilon_squared: pt.epsilon_squared,
            e_plus: pt.energy.plus(),
            e_minus: pt.energy.minus(),
            det_normalized,
            admissible: pt.is_admissible(),
        },
        Err(_) => ScanRow {
            n,
            param: v,
            epsilon_squared: None,
            e_plus: None,
            e_minus: None,
            det_normalized,
            admissible: false,
        },
    }
}

fn fmt_value<T: Real>(v: Option<T>) -> String {
    match v.and_then(|x| x.to_f64()) {
        Some(x) if x.is_finite() => format!("{x:.16e}"),
        _ => "nan".to_string(),
    }
}

pub fn write_csv<T: Real, W: Write>(rows: &[ScanRow<T>], mut out: W) -> io::Result<()> {
    out.write_all(CSV_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n,
            fmt_value(Some(r.param)),
            fmt_value(r.epsilon_squared),
            fmt_value(r.e_plus),
            fmt_value(r.e_minus),
            fmt_value(r.det_normalized),
            r.admissible
        )?;
    }
    Ok(())
}
