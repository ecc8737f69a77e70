//! Flat JSON run configuration.

use std::ops::RangeInclusive;

use dkp_qes::heun::{Pole, RationalPotential, TranscendentalTerm};
use dkp_qes::{kratzer_from_physical, KratzerPhysical, Parameter, PotentialParams64, Sector};
use serde::Deserialize;

use crate::Failure;

/// Freed coupling and its search interval.
pub type FreeParam = (Parameter, (f64, f64));

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub sector: Option<OneOrMany>,
    pub x_r: Option<f64>,
    pub y_r: Option<f64>,
    pub z_r: Option<f64>,
    pub x_0: Option<f64>,
    pub y_0: Option<f64>,
    pub z_0: Option<f64>,
    #[serde(rename = "D_e")]
    pub well_depth: Option<f64>,
    pub r_e: Option<f64>,
    #[serde(rename = "M")]
    pub mass: Option<f64>,
    pub j: Option<u32>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub free_param: Option<String>,
    pub interval: Option<[f64; 2]>,
    pub scan_param: Option<String>,
    pub scan_range: Option<[f64; 2]>,
    pub scan_points: Option<usize>,
    /// Radial grid for `wavefunction`: `[r_min, r_max]` and point count.
    pub r_range: Option<[f64; 2]>,
    pub r_points: Option<usize>,
    pub potential: Option<PotentialConfig>,
    pub quantization_offset: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleConfig {
    pub location: f64,
    pub coefficients: [f64; 4],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayingTerm {
    pub amplitude: f64,
    pub rate: f64,
}

/// `constant + linear·r + quadratic·r² + Σ poles`, plus optional
/// exponential (`A e^{−κr}`) and Yukawa (`A e^{−κr}/r`) terms.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub linear: f64,
    #[serde(default)]
    pub quadratic: f64,
    #[serde(default)]
    pub poles: Vec<PoleConfig>,
    #[serde(default)]
    pub exponential: Vec<DecayingTerm>,
    #[serde(default)]
    pub yukawa: Vec<DecayingTerm>,
}

impl PotentialConfig {
    pub fn to_potential(&self) -> Result<RationalPotential<f64>, Failure> {
        let mut v = RationalPotential::default()
            .with_constant(finite("potential.constant", self.constant)?)
            .with_linear(finite("potential.linear", self.linear)?)
            .with_quadratic(finite("potential.quadratic", self.quadratic)?);
        for p in &self.poles {
            finite("pole location", p.location)?;
            for c in p.coefficients {
                finite("pole coefficient", c)?;
            }
            v.poles.push(Pole::new(p.location, p.coefficients));
        }
        for t in &self.exponential {
            v = v.with_term(TranscendentalTerm::Exponential {
                amplitude: finite("exponential amplitude", t.amplitude)?,
                rate: finite("exponential rate", t.rate)?,
            });
        }
        for t in &self.yukawa {
            v = v.with_term(TranscendentalTerm::Yukawa {
                amplitude: finite("yukawa amplitude", t.amplitude)?,
                screening: finite("yukawa rate", t.rate)?,
            });
        }
        Ok(v)
    }
}

fn finite(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Usage(format!("{name} must be finite")))
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub fn parse(text: &str) -> Result<RunConfig, Failure> {
    serde_json::from_str(text).map_err(|e| usage(format!("invalid config: {e}")))
}

impl RunConfig {
    pub fn sectors(&self) -> Result<Vec<Sector>, Failure> {
        let names = match &self.sector {
            None => return Ok(Vec::new()),
            Some(OneOrMany::One(s)) => vec![s.clone()],
            Some(OneOrMany::Many(v)) => v.clone(),
        };
        names
            .iter()
            .map(|s| s.parse::<Sector>().map_err(|e| usage(e.to_string())))
            .collect()
    }

    pub fn single_sector(&self) -> Result<Sector, Failure> {
        match self.sectors()?.as_slice() {
            [s] => Ok(*s),
            [] => Err(usage("`sector` is required")),
            _ => Err(usage("this command takes a single `sector`")),
        }
    }

    pub fn params(&self) -> Result<PotentialParams64, Failure> {
        let space_given = self.x_r.is_some() || self.y_r.is_some() || self.z_r.is_some();
        let physical_given = self.well_depth.is_some() || self.r_e.is_some();
        let (x_r, y_r, z_r) = match (space_given, physical_given) {
            (true, true) => {
                return Err(usage("give either x_r/y_r/z_r or D_e/r_e, not both"));
            }
            (false, true) => {
                let (Some(d), Some(r)) = (self.well_depth, self.r_e) else {
                    return Err(usage("D_e and r_e must be given together"));
                };
                let k = KratzerPhysical::new(d, r).map_err(|e| usage(e.to_string()))?;
                kratzer_from_physical(&k)
            }
            _ => (
                self.x_r.unwrap_or(0.0),
                self.y_r.unwrap_or(0.0),
                self.z_r.unwrap_or(0.0),
            ),
        };
        let p = PotentialParams64 {
            x_r: finite("x_r", x_r)?,
            y_r: finite("y_r", y_r)?,
            z_r: finite("z_r", z_r)?,
            x_0: finite("x_0", self.x_0.unwrap_or(0.0))?,
            y_0: finite("y_0", self.y_0.unwrap_or(0.0))?,
            z_0: finite("z_0", self.z_0.unwrap_or(0.0))?,
        };
        Ok(p)
    }

    pub fn mass(&self) -> Result<f64, Failure> {
        let m = finite("M", self.mass.unwrap_or(1.0))?;
        if m > 0.0 {
            Ok(m)
        } else {
            Err(usage("M must be positive"))
        }
    }

    pub fn j(&self) -> u32 {
        self.j.unwrap_or(0)
    }

    pub fn levels(&self) -> Result<RangeInclusive<usize>, Failure> {
        let lo = self.n_min.unwrap_or(0);
        let hi = self.n_max.unwrap_or(lo);
        if hi < lo {
            return Err(usage(format!(
                "empty level range n_min = {lo} > n_max = {hi}"
            )));
        }
        Ok(lo..=hi)
    }

    pub fn free(&self) -> Result<Option<FreeParam>, Failure> {
        match (&self.free_param, self.interval) {
            (None, None) => Ok(None),
            (Some(name), Some([lo, hi])) => {
                let p = name
                    .parse::<Parameter>()
                    .map_err(|e| usage(e.to_string()))?;
                let (lo, hi) = (finite("interval", lo)?, finite("interval", hi)?);
                if hi <= lo {
                    return Err(usage("interval must satisfy lo < hi"));
                }
                Ok(Some((p, (lo, hi))))
            }
            _ => Err(usage("free_param and interval must be given together")),
        }
    }

    pub fn scan(&self) -> Result<(Parameter, (f64, f64), usize), Failure> {
        let name = self
            .scan_param
            .as_ref()
            .ok_or_else(|| usage("`scan_param` is required"))?;
        let p = name
            .parse::<Parameter>()
            .map_err(|e| usage(e.to_string()))?;
        let [lo, hi] = self
            .scan_range
            .ok_or_else(|| usage("`scan_range` is required"))?;
        let points = self
            .scan_points
            .ok_or_else(|| usage("`scan_points` is required"))?;
        Ok((
            p,
            (finite("scan_range", lo)?, finite("scan_range", hi)?),
            points,
        ))
    }

    pub fn radial_grid(&self) -> Result<([f64; 2], usize), Failure> {
        let [lo, hi] = self.r_range.unwrap_or([0.05, 30.0]);
        let points = self.r_points.unwrap_or(60);
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(usage("r_range must satisfy 0 < r_min < r_max"));
        }
        if points == 0 {
            return Err(usage("r_points must be positive"));
        }
        Ok(([lo, hi], points))
    }
}
