//! Parity sectors of the spin-one DKP radial equations with Kratzer-type
//! non-minimal vector coupling.
//!
//! Both potential components have the form `A(r) = x/r + y/r² + z`. The
//! natural-parity component `F₀` feels the space part `A_r` and the time part
//! `A₀`; the two unnatural-parity components `H₀` and `φ` are only tractable
//! with `A₀ = 0`. Each sector reduces to an inverse-quartic Hamiltonian
//! handled by [`crate::qes`].
//!
//! Units are `ħ = c = 1`; energies and masses are inverse lengths.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::qes::{
    algebraize, evaluate_solution, normalized_determinant, recursion_coefficients,
    solve_quantization, Algebraization, InverseQuarticCoefficients, PolynomialSolution, QesError,
    WaveValue,
};
use crate::scalar::Real;

/// Number of uniform grid points scanned for sign changes of the
/// determinant constraint.
pub const CONSTRAINT_GRID_POINTS: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DkpError {
    #[error(transparent)]
    Qes(#[from] QesError),
    #[error("{sector} requires a vanishing time component (x_0 = y_0 = z_0 = 0)")]
    SectorConstraintViolated { sector: Sector },
    #[error("{sector} is not algebraizable for these parameters: {reason}")]
    NonAlgebraizable {
        sector: Sector,
        reason: &'static str,
    },
    #[error("level n = {n} sits on the pole of the energy formula (n + 1 - eta = 0)")]
    SingularLevel { n: usize },
    #[error("parameter {name} is not finite")]
    NonFinite { name: &'static str },
    #[error("Kratzer well depth and equilibrium radius must be positive")]
    NonPositiveKratzer,
    #[error("energy does not satisfy the quantization condition (defect {defect})")]
    QuantizationViolated { defect: f64 },
    #[error("determinant constraint violated (normalized determinant {normalized})")]
    ConstraintViolated { normalized: f64 },
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("no constraint root in the interval")]
    NoRootInInterval,
    #[error("parameters are inadmissible throughout the interval")]
    InadmissibleThroughoutInterval,
}

/// Which radial equation is being solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    /// Natural parity, component `F₀`.
    F0Normal,
    /// Unnatural parity, component `H₀`.
    H0Abnormal,
    /// Unnatural parity, component `φ`.
    PhiAbnormal,
}

impl Sector {
    pub const ALL: [Sector; 3] = [Sector::F0Normal, Sector::H0Abnormal, Sector::PhiAbnormal];

    pub fn is_abnormal(self) -> bool {
        !matches!(self, Sector::F0Normal)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sector::F0Normal => "F0Normal",
            Sector::H0Abnormal => "H0Abnormal",
            Sector::PhiAbnormal => "PhiAbnormal",
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sector {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "f0normal" | "f0" | "normal" => Ok(Sector::F0Normal),
            "h0abnormal" | "h0" => Ok(Sector::H0Abnormal),
            "phiabnormal" | "phi" => Ok(Sector::PhiAbnormal),
            _ => Err(format!("unknown sector `{s}`")),
        }
    }
}

/// One of the six potential coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parameter {
    Xr,
    Yr,
    Zr,
    X0,
    Y0,
    Z0,
}

impl Parameter {
    pub const ALL: [Parameter; 6] = [
        Parameter::Xr,
        Parameter::Yr,
        Parameter::Zr,
        Parameter::X0,
        Parameter::Y0,
        Parameter::Z0,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Parameter::Xr => "x_r",
            Parameter::Yr => "y_r",
            Parameter::Zr => "z_r",
            Parameter::X0 => "x_0",
            Parameter::Y0 => "y_0",
            Parameter::Z0 => "z_0",
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Parameter {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Parameter::ALL
            .into_iter()
            .find(|p| p.as_str() == s || p.as_str().replace('_', "") == s)
            .ok_or_else(|| format!("unknown parameter `{s}`"))
    }
}

/// Coefficients of `A_r = x_r/r + y_r/r² + z_r` and `A₀ = x₀/r + y₀/r² + z₀`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct PotentialParams<T> {
    pub x_r: T,
    pub y_r: T,
    pub z_r: T,
    pub x_0: T,
    pub y_0: T,
    pub z_0: T,
}

impl<T: Real> PotentialParams<T> {
    /// Space component only.
    pub fn space(x_r: T, y_r: T, z_r: T) -> Self {
        Self {
            x_r,
            y_r,
            z_r,
            x_0: T::zero(),
            y_0: T::zero(),
            z_0: T::zero(),
        }
    }

    /// Converts every coefficient with `f`.
    pub fn map<U>(&self, f: impl Fn(T) -> U) -> PotentialParams<U> {
        PotentialParams {
            x_r: f(self.x_r),
            y_r: f(self.y_r),
            z_r: f(self.z_r),
            x_0: f(self.x_0),
            y_0: f(self.y_0),
            z_0: f(self.z_0),
        }
    }

    pub fn get(&self, p: Parameter) -> T {
        match p {
            Parameter::Xr => self.x_r,
            Parameter::Yr => self.y_r,
            Parameter::Zr => self.z_r,
            Parameter::X0 => self.x_0,
            Parameter::Y0 => self.y_0,
            Parameter::Z0 => self.z_0,
        }
    }

    pub fn with(&self, p: Parameter, v: T) -> Self {
        let mut out = *self;
        match p {
            Parameter::Xr => out.x_r = v,
            Parameter::Yr => out.y_r = v,
            Parameter::Zr => out.z_r = v,
            Parameter::X0 => out.x_0 = v,
            Parameter::Y0 => out.y_0 = v,
            Parameter::Z0 => out.z_0 = v,
        }
        out
    }

    pub fn has_time_component(&self) -> bool {
        !(self.x_0.is_zero() && self.y_0.is_zero() && self.z_0.is_zero())
    }

    /// The sign pattern of a physical Kratzer well: `x_r < 0 < y_r, z_r`.
    pub fn is_physical_kratzer(&self) -> bool {
        self.x_r < T::zero() && self.y_r > T::zero() && self.z_r > T::zero()
    }

    fn check_finite(&self) -> Result<(), DkpError> {
        for p in Parameter::ALL {
            if !self.get(p).is_finite() {
                return Err(DkpError::NonFinite { name: p.as_str() });
            }
        }
        Ok(())
    }

    pub fn space_potential(&self, r: T) -> T {
        self.x_r / r + self.y_r / (r * r) + self.z_r
    }

    pub fn space_potential_derivative(&self, r: T) -> T {
        -self.x_r / (r * r) - T::lit(2.0) * self.y_r / (r * r * r)
    }

    pub fn time_potential(&self, r: T) -> T {
        self.x_0 / r + self.y_0 / (r * r) + self.z_0
    }
}

/// Modified Kratzer well `D_e((r − r_e)/r)²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KratzerPhysical<T> {
    pub well_depth: T,
    pub equilibrium_radius: T,
}

impl<T: Real> KratzerPhysical<T> {
    pub fn new(well_depth: T, equilibrium_radius: T) -> Result<Self, DkpError> {
        if !(well_depth > T::zero() && equilibrium_radius > T::zero())
            || !well_depth.is_finite()
            || !equilibrium_radius.is_finite()
        {
            return Err(DkpError::NonPositiveKratzer);
        }
        Ok(Self {
            well_depth,
            equilibrium_radius,
        })
    }

    /// Inverse of [`kratzer_from_physical`]: `D_e = z`, `r_e = −x/(2z)`.
    pub fn from_coefficients(x: T, _y: T, z: T) -> Result<Self, DkpError> {
        Self::new(z, -x / (T::lit(2.0) * z))
    }
}

/// Expands `D_e((r − r_e)/r)² = D_e − 2D_e r_e/r + D_e r_e²/r²` into `(x, y, z)`.
pub fn kratzer_from_physical<T: Real>(k: &KratzerPhysical<T>) -> (T, T, T) {
    let d = k.well_depth;
    let re = k.equilibrium_radius;
    (-T::lit(2.0) * d * re, d * re * re, d)
}

/// Inverse-quartic coefficients of the sector's radial equation at energy
/// `E²`.
pub fn sector_coefficients<T: Real>(
    p: &PotentialParams<T>,
    mass: T,
    energy_squared: T,
    j: u32,
    sector: Sector,
) -> Result<InverseQuarticCoefficients<T>, DkpError> {
    p.check_finite()?;
    if sector.is_abnormal() && p.has_time_component() {
        return Err(DkpError::SectorConstraintViolated { sector });
    }
    let two = T::lit(2.0);
    let jj = T::lit(f64::from(j) * (f64::from(j) + 1.0));
    let alpha = energy_squared - mass * mass + alpha_offset(p, sector);
    let PotentialParams {
        x_r,
        y_r,
        z_r,
        x_0,
        y_0,
        z_0,
    } = *p;
    let c = match sector {
        Sector::F0Normal => InverseQuarticCoefficients {
            alpha,
            beta: two * (x_0 * z_0 - x_r * z_r),
            omega: two * (y_0 * z_0 - y_r * z_r) - jj + x_r + x_0 * x_0 - x_r * x_r,
            delta: two * (x_0 * y_0 - x_r * y_r + y_r),
            sigma: y_0 * y_0 - y_r * y_r,
        },
        Sector::H0Abnormal => InverseQuarticCoefficients {
            alpha,
            beta: -two * x_r * z_r,
            omega: -(jj + x_r * (x_r + T::one()) + two * y_r * z_r),
            delta: -two * (x_r + T::one()) * y_r,
            sigma: -y_r * y_r,
        },
        Sector::PhiAbnormal => InverseQuarticCoefficients {
            alpha,
            beta: -(two * x_r + T::one()) * z_r,
            omega: -(jj + x_r * x_r + two * y_r * z_r),
            delta: (T::one() - two * x_r) * y_r,
            sigma: -y_r * y_r,
        },
    };
    c.check_finite()?;
    Ok(c)
}

/// `α − (E² − M²)`: the energy-independent part of the constant term.
fn alpha_offset<T: Real>(p: &PotentialParams<T>, sector: Sector) -> T {
    match sector {
        Sector::F0Normal => p.z_0 * p.z_0 - p.z_r * p.z_r,
        _ => -p.z_r * p.z_r,
    }
}

fn check_algebraizable<T: Real>(p: &PotentialParams<T>, sector: Sector) -> Result<(), DkpError> {
    p.check_finite()?;
    match sector {
        Sector::F0Normal if !(p.y_r.abs() > p.y_0.abs()) => Err(DkpError::NonAlgebraizable {
            sector,
            reason: "need |y_r| > |y_0|",
        }),
        Sector::H0Abnormal | Sector::PhiAbnormal if p.has_time_component() => {
            Err(DkpError::SectorConstraintViolated { sector })
        }
        Sector::H0Abnormal | Sector::PhiAbnormal if !(p.y_r > T::zero()) => {
            Err(DkpError::NonAlgebraizable {
                sector,
                reason: "need y_r > 0",
            })
        }
        _ => Ok(()),
    }
}

/// Energy pair of one level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EnergyPair<T> {
    /// `±E` with `E ≥ 0`.
    Real { magnitude: T },
    /// `E² < 0`: the eigenenergy is imaginary.
    Complex { energy_squared: T },
    /// The quantization condition has no admissible root.
    NoRealSpectrum,
}

impl<T: Real> EnergyPair<T> {
    fn from_energy_squared(e2: T) -> Self {
        if e2 >= T::zero() {
            EnergyPair::Real {
                magnitude: e2.sqrt(),
            }
        } else {
            EnergyPair::Complex { energy_squared: e2 }
        }
    }

    pub fn plus(&self) -> Option<T> {
        match *self {
            EnergyPair::Real { magnitude } => Some(magnitude),
            _ => None,
        }
    }

    pub fn minus(&self) -> Option<T> {
        self.plus().map(|e| -e)
    }

    pub fn is_real(&self) -> bool {
        matches!(self, EnergyPair::Real { .. })
    }
}

/// Admissibility conditions that can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Abnormal sectors need `A₀ = 0`.
    TimeComponentPresent,
    /// `σ < 0`.
    SigmaNotNegative,
    /// Abnormal sectors need `y_r > 0` for the closed forms.
    InnerCouplingNotPositive,
    /// `α < 0` at the quantized energy.
    AlphaNotNegative,
    /// `1 − η > 0`.
    NotNormalizable,
    /// `√(−α) = β / 2(n + 1 − η)` must be strictly positive.
    NonPositiveDecay,
    /// `E²` must be non-negative.
    ComplexEnergy,
    NonFinite,
}

impl Condition {
    pub fn as_str(self) -> &'static str {
        match self {
            Condition::TimeComponentPresent => "A0!=0",
            Condition::SigmaNotNegative => "sigma>=0",
            Condition::InnerCouplingNotPositive => "y_r<=0",
            Condition::AlphaNotNegative => "alpha>=0",
            Condition::NotNormalizable => "1-eta<=0",
            Condition::NonPositiveDecay => "sqrt(-alpha)<=0",
            Condition::ComplexEnergy => "E^2<0",
            Condition::NonFinite => "non-finite",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Verdict plus the list of failed conditions.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Admissibility {
    pub failures: Vec<Condition>,
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn reasons(&self) -> String {
        if self.failures.is_empty() {
            "ok".to_string()
        } else {
            self.failures
                .iter()
                .map(|c| c.as_str())
                .collect::<Vec<_>>()
                .join(";")
        }
    }
}

/// Checks every condition the closed-form level `n` relies on. Never fails;
/// problems are reported, not raised.
pub fn admissibility<T: Real>(
    p: &PotentialParams<T>,
    mass: T,
    j: u32,
    sector: Sector,
    n: usize,
) -> Admissibility {
    let mut failures = Vec::new();
    if p.check_finite().is_err() || !mass.is_finite() {
        return Admissibility {
            failures: vec![Condition::NonFinite],
        };
    }
    if sector.is_abnormal() && p.has_time_component() {
        failures.push(Condition::TimeComponentPresent);
    }
    let coeffs = match sector_coefficients(&p.with_time_cleared(sector), mass, T::zero(), j, sector)
    {
        Ok(c) => c,
        Err(_) => {
            failures.push(Condition::NonFinite);
            return Admissibility { failures };
        }
    };
    if !(coeffs.sigma < T::zero()) {
        failures.push(Condition::SigmaNotNegative);
        return Admissibility { failures };
    }
    if sector.is_abnormal() && p.y_r < T::zero() {
        failures.push(Condition::InnerCouplingNotPositive);
    }
    let eta = coeffs.delta / (T::lit(2.0) * (-coeffs.sigma).sqrt());
    if !(T::one() - eta > T::zero()) {
        failures.push(Condition::NotNormalizable);
    }
    let gap = T::from_usize_lossy(n) + T::one() - eta;
    if !(gap > T::zero()) {
        failures.push(Condition::NonPositiveDecay);
        return Admissibility { failures };
    }
    let decay = coeffs.beta / (T::lit(2.0) * gap);
    if decay.is_zero() {
        failures.push(Condition::AlphaNotNegative);
    }
    if !(decay > T::zero()) {
        failures.push(Condition::NonPositiveDecay);
    }
    let e2 = mass * mass - alpha_offset(p, sector) - decay * decay;
    if e2 < T::zero() {
        failures.push(Condition::ComplexEnergy);
    }
    Admissibility { failures }
}

impl<T: Real> PotentialParams<T> {
    fn with_time_cleared(&self, sector: Sector) -> Self {
        if sector.is_abnormal() {
            Self::space(self.x_r, self.y_r, self.z_r)
        } else {
            *self
        }
    }
}

/// One level of a sector spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumPoint<T> {
    pub sector: Sector,
    pub n: usize,
    /// `ε²`, absent when the sector has no real spectrum at this level.
    pub epsilon_squared: Option<T>,
    pub energy: EnergyPair<T>,
    pub eta: T,
    /// Solved `√(−α)`; non-positive values mean no decaying solution.
    pub sqrt_minus_alpha: T,
    pub admissibility: Admissibility,
    /// `E² < M²` in an abnormal sector.
    pub below_mass_gap: bool,
}

impl<T: Real> SpectrumPoint<T> {
    pub fn is_admissible(&self) -> bool {
        self.admissibility.is_admissible()
    }

    pub fn energy_squared(&self) -> Option<T> {
        match self.energy {
            EnergyPair::Real { magnitude } => Some(magnitude * magnitude),
            EnergyPair::Complex { energy_squared } => Some(energy_squared),
            EnergyPair::NoRealSpectrum => None,
        }
    }
}

/// Closed-form `ε²` (natural sector, and `H₀`) or the solved
/// `√(M² − E² + z_r²)` (`φ`), straight from the sector formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedForm<T> {
    EpsilonSquared(T),
    PhiDecay(T),
}

pub fn closed_form<T: Real>(
    p: &PotentialParams<T>,
    sector: Sector,
    n: usize,
) -> Result<ClosedForm<T>, DkpError> {
    check_algebraizable(p, sector)?;
    let nf = T::from_usize_lossy(n);
    let two = T::lit(2.0);
    let PotentialParams {
        x_r,
        y_r,
        z_r,
        x_0,
        y_0,
        z_0,
    } = *p;
    match sector {
        Sector::F0Normal => {
            let root = (y_r * y_r - y_0 * y_0).sqrt();
            let denom = x_0 * y_0 - x_r * y_r + y_r - (nf + T::one()) * root;
            if denom.is_zero() {
                return Err(DkpError::SingularLevel { n });
            }
            let ratio = (x_r * z_r - x_0 * z_0) / denom;
            Ok(ClosedForm::EpsilonSquared(
                (y_r * y_r - y_0 * y_0) * ratio * ratio - z_r * z_r + z_0 * z_0,
            ))
        }
        Sector::H0Abnormal => {
            let denom = x_r + nf + two;
            if denom.is_zero() {
                return Err(DkpError::SingularLevel { n });
            }
            let ratio = x_r * z_r / denom;
            Ok(ClosedForm::EpsilonSquared(z_r * z_r - ratio * ratio))
        }
        Sector::PhiAbnormal => {
            let denom = two * nf + two * x_r + T::one();
            if denom.is_zero() {
                return Err(DkpError::SingularLevel { n });
            }
            Ok(ClosedForm::PhiDecay(-(two * x_r + T::one()) * z_r / denom))
        }
    }
}

/// Closed-form energies of level `n`.
pub fn energy_levels<T: Real>(
    p: &PotentialParams<T>,
    mass: T,
    j: u32,
    sector: Sector,
    n: usize,
) -> Result<SpectrumPoint<T>, DkpError> {
    let form = closed_form(p, sector, n)?;
    let coeffs = sector_coefficients(p, mass, T::zero(), j, sector)?;
    let eta = coeffs.delta / (T::lit(2.0) * (-coeffs.sigma).sqrt());
    let gap = T::from_usize_lossy(n) + T::one() - eta;
    let m2 = mass * mass;
    let (epsilon_squared, energy, decay) = match (sector, form) {
        (Sector::F0Normal, ClosedForm::EpsilonSquared(eps2)) => (
            Some(eps2),
            EnergyPair::from_energy_squared(m2 - eps2),
            coeffs.beta / (T::lit(2.0) * gap),
        ),
        (Sector::H0Abnormal, ClosedForm::EpsilonSquared(eps2)) => (
            Some(eps2),
            EnergyPair::from_energy_squared(m2 + eps2),
            coeffs.beta / (T::lit(2.0) * gap),
        ),
        (Sector::PhiAbnormal, ClosedForm::PhiDecay(decay)) => {
            if decay > T::zero() {
                let eps2 = p.z_r * p.z_r - decay * decay;
                (
                    Some(eps2),
                    EnergyPair::from_energy_squared(m2 + eps2),
                    decay,
                )
            } else {
                (None, EnergyPair::NoRealSpectrum, decay)
            }
        }
        _ => unreachable!("closed form matches sector"),
    };
    let below_mass_gap =
        sector.is_abnormal() && matches!(epsilon_squared, Some(e) if e < T::zero());
    Ok(SpectrumPoint {
        sector,
        n,
        epsilon_squared,
        energy,
        eta,
        sqrt_minus_alpha: decay,
        admissibility: admissibility(p, mass, j, sector, n),
        below_mass_gap,
    })
}

/// A level obtained through the generic algebraization pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantizedLevel<T> {
    pub coefficients: InverseQuarticCoefficients<T>,
    pub algebraization: Algebraization<T>,
    pub energy_squared: T,
}

/// Reads the sector coefficients, solves the quantization condition for
/// `√(−α)`, and algebraizes at the resulting energy.
pub fn quantized_level<T: Real>(
    p: &PotentialParams<T>,
    mass: T,
    j: u32,
    sector: Sector,
    n: usize,
) -> Result<QuantizedLevel<T>, DkpError> {
    check_algebraizable(p, sector)?;
    let mut coeffs = sector_coefficients(p, mass, T::zero(), j, sector)?;
    let sqrt_minus_sigma = (-coeffs.sigma).sqrt();
    let eta = coeffs.delta / (T::lit(2.0) * sqrt_minus_sigma);
    let decay = solve_quantization(coeffs.beta, eta, n)?;
    coeffs.alpha = -decay * decay;
    let energy_squared = mass * mass - alpha_offset(p, sector) - decay * decay;
    let algebraization = algebraize(&coeffs, n)?;
    Ok(QuantizedLevel {
        coefficients: coeffs,
        algebraization,
        energy_squared,
    })
}

/// A determinant-constraint root in the freed parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintRoot<T> {
    pub value: T,
    pub normalized_determinant: T,
    pub relative_tail: T,
    pub spectrum: SpectrumPoint<T>,
}

fn constraint_value<T: Real>(
    p: &PotentialParams<T>,
    mass: T,
    j: u32,
    sector: Sector,
    n: usize,
) -> Option<T> {
    if !admissibility(p, mass, j, sector, n).is_admissible() {
        return None;
    }
    let level = quantized_level(p, mass, j, sector, n).ok()?;
    let det = normalized_determinant(&level.algebraization).normalized;
    det.is_finite().then_some(det)
}

/// Frees one potential parameter and finds every value in `[lo, hi]` where
/// the quantization determinant vanishes.
///
/// The energy is recomputed at each trial value. Sign changes are located
/// on a uniform grid of [`CONSTRAINT_GRID_POINTS`] points and refined by
/// bisection; candidates that fail the determinant or recursion-tail
/// zero tests are dropped.
pub fn solve_determinant_constraint<T: Real>(
    p: &PotentialParams<T>,
    mass: T,
    j: u32,
    sector: Sector,
    n: usize,
    free: Parameter,
    (lo, hi): (T, T),
) -> Result<Vec<ConstraintRoot<T>>, DkpError> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(DkpError::InvalidInterval {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !(hi > lo) {
        return Err(DkpError::NoRootInInterval);
    }
    let eval = |v: T| constraint_value(&p.with(free, v), mass, j, sector, n);
    let steps = T::from_usize_lossy(CONSTRAINT_GRID_POINTS - 1);
    let grid: Vec<(T, Option<T>)> = (0..CONSTRAINT_GRID_POINTS)
        .map(|i| {
            let v = if i + 1 == CONSTRAINT_GRID_POINTS {
                hi
            } else {
                lo + (hi - lo) * T::from_usize_lossy(i) / steps
            };
            (v, eval(v))
        })
        .collect();
    if grid.iter().all(|(_, f)| f.is_none()) {
        return Err(DkpError::InadmissibleThroughoutInterval);
    }

    let mut candidates = Vec::new();
    for (i, &(v, f)) in grid.iter().enumerate() {
        if f == Some(T::zero()) {
            candidates.push(v);
            continue;
        }
        let Some(&(w, g)) = grid.get(i + 1) else {
            continue;
        };
        if let (Some(f), Some(g)) = (f, g) {
            if g != T::zero() && (f < T::zero()) != (g < T::zero()) {
                if let Some(root) = bisect(&eval, (v, f), w) {
                    candidates.push(root);
                }
            }
        }
    }

    let tol = T::zero_tol();
    let roots: Vec<_> = candidates
        .into_iter()
        .filter_map(|v| {
            let q = p.with(free, v);
            let level = quantized_level(&q, mass, j, sector, n).ok()?;
            let det = normalized_determinant(&level.algebraization).normalized;
            let poly = recursion_coefficients(&level.algebraization).ok()?;
            let tail = poly.relative_tail();
            if det.abs() > tol || tail > tol {
                return None;
            }
            Some(ConstraintRoot {
                value: v,
                normalized_determinant: det,
                relative_tail: tail,
                spectrum: energy_levels(&q, mass, j, sector, n).ok()?,
            })
        })
        .collect();
    if roots.is_empty() {
        Err(DkpError::NoRootInInterval)
    } else {
        Ok(roots)
    }
}

fn bisect<T: Real>(eval: &impl Fn(T) -> Option<T>, (mut a, fa): (T, T), mut b: T) -> Option<T> {
    let negative_at_a = fa < T::zero();
    let half = T::lit(0.5);
    for _ in 0..200 {
        let mid = half * (a + b);
        if mid == a || mid == b {
            return Some(mid);
        }
        let fm = eval(mid)?;
        if fm.is_zero() {
            return Some(mid);
        }
        if (fm < T::zero()) == negative_at_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    Some(half * (a + b))
}

/// A quantized polynomial solution of one sector.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialSolution<T> {
    pub sector: Sector,
    pub n: usize,
    pub energy: T,
    /// `1 − η` in the prefactor `r^{1−η}`.
    pub prefactor_exponent: T,
    /// `√(−α)`, the rate of `exp(−√(−α) r)`.
    pub decay_rate: T,
    /// `√(−σ)`, the rate of `exp(−√(−σ)/r)`.
    pub inner_decay: T,
    pub algebraization: Algebraization<T>,
    pub polynomial: PolynomialSolution<T>,
}

impl<T: Real> RadialSolution<T> {
    pub fn evaluate(&self, r: T) -> Result<WaveValue<T>, QesError> {
        evaluate_solution(&self.algebraization, &self.polynomial, r)
    }
}

/// Assembles the polynomial solution at energy `energy`, checking that the
/// level is quantized and the determinant constraint holds.
pub fn wavefunction<T: Real>(
    p: &PotentialParams<T>,
    mass: T,
    j: u32,
    sector: Sector,
    n: usize,
    energy: T,
) -> Result<RadialSolution<T>, DkpError> {
    check_algebraizable(p, sector)?;
    let coeffs = sector_coefficients(p, mass, energy * energy, j, sector)?;
    solution_from(algebraize(&coeffs, n)?, sector, energy)
}

fn solution_from<T: Real>(
    alg: Algebraization<T>,
    sector: Sector,
    energy: T,
) -> Result<RadialSolution<T>, DkpError> {
    if !alg.quantized {
        return Err(DkpError::QuantizationViolated {
            defect: alg.quantization_defect().to_f64().unwrap_or(f64::NAN),
        });
    }
    let det = normalized_determinant(&alg);
    if !det.vanishes(T::zero_tol()) {
        return Err(DkpError::ConstraintViolated {
            normalized: det.normalized.to_f64().unwrap_or(f64::NAN),
        });
    }
    let polynomial = recursion_coefficients(&alg)?;
    Ok(RadialSolution {
        sector,
        n: alg.n,
        energy,
        prefactor_exponent: T::one() - alg.eta,
        decay_rate: alg.sqrt_minus_alpha,
        inner_decay: alg.sqrt_minus_sigma,
        algebraization: alg,
        polynomial,
    })
}

/// The positive-energy solution of level `n`, provided the current
/// parameters already satisfy the determinant constraint.
pub fn eigenpair<T: Real>(
    p: &PotentialParams<T>,
    mass: T,
    j: u32,
    sector: Sector,
    n: usize,
) -> Result<RadialSolution<T>, DkpError> {
    let level = quantized_level(p, mass, j, sector, n)?;
    if level.energy_squared < T::zero() {
        return Err(DkpError::NonAlgebraizable {
            sector,
            reason: "quantized energy is imaginary",
        });
    }
    let energy = level.energy_squared.sqrt();
    solution_from(level.algebraization, sector, energy)
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = PotentialParams<f64>;

    fn worked_f0() -> PotentialParams<f64> {
        PotentialParams {
            x_r: -0.2,
            y_r: 1.0,
            z_r: 0.5,
            x_0: 1.0,
            y_0: -0.8,
            z_0: 0.1,
        }
    }

    #[test]
    fn kratzer_expansion() {
        let k = KratzerPhysical::<f64>::new(4.0, 0.5).unwrap();
        assert_eq!(kratzer_from_physical(&k), (-4.0, 1.0, 4.0));
        let k = KratzerPhysical::<f64>::new(1.0, 1.0).unwrap();
        assert_eq!(kratzer_from_physical(&k), (-2.0, 1.0, 1.0));
        let (x, y, z) = kratzer_from_physical(&KratzerPhysical::<f64>::new(1e-300, 1.0).unwrap());
        assert!(x.abs() < 1e-299 && y.abs() < 1e-299 && z.abs() < 1e-299);
        assert!(matches!(
            KratzerPhysical::<f64>::new(0.0, 1.0),
            Err(DkpError::NonPositiveKratzer)
        ));
        assert!(matches!(
            KratzerPhysical::<f64>::new(1.0, -1.0),
            Err(DkpError::NonPositiveKratzer)
        ));
        let back = KratzerPhysical::from_coefficients(-4.0, 1.0, 4.0).unwrap();
        assert_eq!(back, KratzerPhysical::<f64>::new(4.0, 0.5).unwrap());
    }

    #[test]
    fn f0_coefficients() {
        let p = P::space(-1.0, 2.0, 1.0);
        let c = sector_coefficients(&p, 1.0, 0.5, 1, Sector::F0Normal).unwrap();
        assert_eq!((c.beta, c.omega, c.delta, c.sigma), (2.0, -8.0, 8.0, -4.0));
        assert_eq!(c.alpha, 0.5 - 1.0 - 1.0);
    }

    #[test]
    fn h0_coefficients() {
        let p = P::space(-0.5, 1.0, 1.0);
        for j in 0..4u32 {
            let c = sector_coefficients(&p, 1.0, 0.0, j, Sector::H0Abnormal).unwrap();
            let jj = f64::from(j * (j + 1));
            assert_eq!(c.beta, 1.0);
            assert_eq!(c.omega, -(jj - 0.25 + 2.0));
            assert_eq!(c.delta, -1.0);
            assert_eq!(c.sigma, -1.0);
        }
    }

    #[test]
    fn abnormal_sectors_reject_time_component() {
        let p = PotentialParams {
            x_0: 1.0,
            ..P::space(-0.5, 1.0, 1.0)
        };
        assert!(matches!(
            sector_coefficients(&p, 1.0, 0.0, 0, Sector::PhiAbnormal),
            Err(DkpError::SectorConstraintViolated {
                sector: Sector::PhiAbnormal
            })
        ));
        assert!(matches!(
            energy_levels(&p, 1.0, 0, Sector::H0Abnormal, 0),
            Err(DkpError::SectorConstraintViolated { .. })
        ));
    }

    #[test]
    fn worked_f0_level_two_ways() {
        let p = worked_f0();
        let pt = energy_levels(&p, 1.0, 0, Sector::F0Normal, 0).unwrap();
        let eps2 = pt.epsilon_squared.unwrap();
        assert!((eps2 - 0.12).abs() < 1e-12);
        assert!((pt.energy.plus().unwrap() - 0.88f64.sqrt()).abs() < 1e-12);
        assert!((pt.eta - 2.0 / 3.0).abs() < 1e-12);
        assert!((pt.sqrt_minus_alpha - 0.6).abs() < 1e-12);
        let level = quantized_level(&p, 1.0, 0, Sector::F0Normal, 0).unwrap();
        assert!((level.energy_squared - 0.88).abs() < 1e-12);
        assert!(pt.is_admissible(), "{}", pt.admissibility.reasons());
    }

    #[test]
    fn h0_levels() {
        let p = P::space(-0.5, 1.0, 1.0);
        let expected = [
            (17.0f64 / 9.0).sqrt(),
            1.96f64.sqrt(),
            (2.0 - 1.0 / 49.0f64).sqrt(),
        ];
        for (n, e) in expected.iter().enumerate() {
            let pt = energy_levels(&p, 1.0, 1, Sector::H0Abnormal, n).unwrap();
            assert!((pt.energy.plus().unwrap() - e).abs() < 1e-12);
            assert_eq!(pt.energy.minus().unwrap(), -pt.energy.plus().unwrap());
        }
        let free = P::space(-0.5, 1.0, 0.0);
        let pt = energy_levels(&free, 1.3, 0, Sector::H0Abnormal, 0).unwrap();
        assert_eq!(pt.energy.plus(), Some(1.3));
    }

    #[test]
    fn phi_sector_has_no_real_spectrum_in_physical_window() {
        let p = P::space(-0.25, 1.0, 1.0);
        for n in 0..5 {
            let pt = energy_levels(&p, 1.0, 0, Sector::PhiAbnormal, n).unwrap();
            assert_eq!(pt.energy, EnergyPair::NoRealSpectrum);
            assert!(!pt.is_admissible());
        }
    }

    #[test]
    fn admissibility_examples() {
        let p = P::space(-0.3, 1.0, 1.0);
        let a = admissibility(&p, 1.0, 0, Sector::F0Normal, 0);
        assert!(a.failures.contains(&Condition::NotNormalizable));

        let p = P::space(-0.5, 1.0, 1.0);
        for n in 0..8 {
            assert!(admissibility(&p, 1.0, 1, Sector::H0Abnormal, n).is_admissible());
        }

        let p = PotentialParams {
            y_0: 1.0,
            ..P::space(-0.5, 1.0, 1.0)
        };
        let a = admissibility(&p, 1.0, 0, Sector::F0Normal, 0);
        assert!(a.failures.contains(&Condition::SigmaNotNegative));
    }

    #[test]
    fn f0_complex_energy_is_flagged() {
        let p = worked_f0();
        let pt = energy_levels(&p, 0.1, 0, Sector::F0Normal, 0).unwrap();
        assert!(matches!(pt.energy, EnergyPair::Complex { .. }));
        assert!(pt
            .admissibility
            .failures
            .contains(&Condition::ComplexEnergy));
    }

    #[test]
    fn h0_penetration_is_flagged() {
        let p = P::space(-1.5, 1.0, 1.0);
        let pt = energy_levels(&p, 5.0, 0, Sector::H0Abnormal, 0).unwrap();
        assert!(pt.below_mass_gap);
    }

    #[test]
    fn n0_constraint_matches_closed_form() {
        // H0, n = 0: b = j(j+1) - 2(x_r+1) + 4 y_r z_r/(x_r+2) = 0.
        let p = P::space(-0.5, 1.0, 1.0);
        let roots = solve_determinant_constraint(
            &p,
            1.0,
            0,
            Sector::H0Abnormal,
            0,
            Parameter::Yr,
            (0.1, 10.0),
        )
        .unwrap();
        assert_eq!(roots.len(), 1);
        let exact = 1.5 * 1.0 / 4.0;
        assert!((roots[0].value - exact).abs() < 1e-12, "{}", roots[0].value);
    }

    #[test]
    fn n1_constraint_root_from_quadratic() {
        // 5.76 y^2 - 3.2 y - 2 = 0.
        let p = P::space(-0.5, 1.0, 1.0);
        let roots = solve_determinant_constraint(
            &p,
            1.0,
            1,
            Sector::H0Abnormal,
            1,
            Parameter::Yr,
            (0.1, 10.0),
        )
        .unwrap();
        let exact = (3.2 + (3.2f64 * 3.2 + 4.0 * 5.76 * 2.0).sqrt()) / (2.0 * 5.76);
        assert_eq!(roots.len(), 1);
        assert!((roots[0].value - exact).abs() < 1e-12);
    }

    #[test]
    fn constraint_error_paths() {
        let p = P::space(-0.5, 1.0, 1.0);
        assert_eq!(
            solve_determinant_constraint(
                &p,
                1.0,
                0,
                Sector::H0Abnormal,
                0,
                Parameter::Yr,
                (1.0, 1.0)
            ),
            Err(DkpError::NoRootInInterval)
        );
        assert_eq!(
            solve_determinant_constraint(
                &p,
                1.0,
                0,
                Sector::H0Abnormal,
                0,
                Parameter::X0,
                (0.5, 1.0)
            ),
            Err(DkpError::InadmissibleThroughoutInterval)
        );
        // j = 1, n = 0 needs y_r z_r < 0.
        assert_eq!(
            solve_determinant_constraint(
                &p,
                1.0,
                1,
                Sector::H0Abnormal,
                0,
                Parameter::Yr,
                (0.1, 10.0)
            ),
            Err(DkpError::NoRootInInterval)
        );
    }

    #[test]
    fn wavefunction_prefactors() {
        let p = P::space(-0.5, 0.375, 1.0);
        let sol = eigenpair(&p, 1.0, 0, Sector::H0Abnormal, 0).unwrap();
        assert!((sol.prefactor_exponent - 1.5).abs() < 1e-15);
        assert!((sol.inner_decay - 0.375).abs() < 1e-15);

        let level = quantized_level(&worked_f0(), 1.0, 0, Sector::F0Normal, 0).unwrap();
        assert!((1.0 - level.algebraization.eta - 1.0 / 3.0).abs() < 1e-12);
        assert!((level.algebraization.sqrt_minus_sigma - 0.6).abs() < 1e-12);

        let phi = P::space(-0.25, 1.0, -1.0);
        let c = sector_coefficients(&phi, 1.0, 0.0, 0, Sector::PhiAbnormal).unwrap();
        let eta = c.delta / (2.0 * (-c.sigma).sqrt());
        assert!((1.0 - eta - 0.25).abs() < 1e-15);
    }

    #[test]
    fn wavefunction_rejects_wrong_energy_and_constraint() {
        let p = P::space(-0.5, 0.375, 1.0);
        let e = quantized_level(&p, 1.0, 0, Sector::H0Abnormal, 0)
            .unwrap()
            .energy_squared
            .sqrt();
        assert!(matches!(
            wavefunction(&p, 1.0, 0, Sector::H0Abnormal, 0, e + 1e-3),
            Err(DkpError::QuantizationViolated { .. })
        ));
        let off = P::space(-0.5, 0.5, 1.0);
        let e = quantized_level(&off, 1.0, 0, Sector::H0Abnormal, 0)
            .unwrap()
            .energy_squared
            .sqrt();
        assert!(matches!(
            wavefunction(&off, 1.0, 0, Sector::H0Abnormal, 0, e),
            Err(DkpError::ConstraintViolated { .. })
        ));
    }

    #[test]
    fn parse_names() {
        assert_eq!("h0".parse::<Sector>().unwrap(), Sector::H0Abnormal);
        assert_eq!(
            "PhiAbnormal".parse::<Sector>().unwrap(),
            Sector::PhiAbnormal
        );
        assert_eq!("y_r".parse::<Parameter>().unwrap(), Parameter::Yr);
        assert_eq!("z0".parse::<Parameter>().unwrap(), Parameter::Z0);
        assert!("w".parse::<Parameter>().is_err());
    }
}
