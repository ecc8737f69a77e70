//! Heun-type classification of rational effective potentials.
//!
//! A potential enters `ψ″ + V(r)ψ = 0` as a polynomial part of degree at
//! most two plus finitely many poles of order at most four. The class is
//! read off the singularity structure: the number of finite poles, their
//! orders, and the growth of `V` at infinity.

use std::fmt;

use thiserror::Error;

use crate::qes::InverseQuarticCoefficients;
use crate::scalar::Real;

/// Coefficients below `ZERO_RELATIVE · max|coefficient|` count as absent.
pub const ZERO_RELATIVE: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeunError {
    #[error("poles at {location} coincide")]
    CoincidentPoles { location: f64 },
    #[error("potential has a non-finite coefficient")]
    NonFinite,
}

/// The result of [`classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeunClass {
    GeneralHeun,
    ConfluentHeun,
    BiconfluentHeun,
    DoublyConfluentHeun,
    HypergeometricReducible,
    Unsupported,
}

impl HeunClass {
    pub fn as_str(self) -> &'static str {
        match self {
            HeunClass::GeneralHeun => "GeneralHeun",
            HeunClass::ConfluentHeun => "ConfluentHeun",
            HeunClass::BiconfluentHeun => "BiconfluentHeun",
            HeunClass::DoublyConfluentHeun => "DoublyConfluentHeun",
            HeunClass::HypergeometricReducible => "HypergeometricReducible",
            HeunClass::Unsupported => "Unsupported",
        }
    }
}

impl fmt::Display for HeunClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `Σ_k c_k / (r − location)^k` for `k = 1…4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pole<T> {
    pub location: T,
    /// `[c₁, c₂, c₃, c₄]`.
    pub coefficients: [T; 4],
}

impl<T: Real> Pole<T> {
    pub fn new(location: T, coefficients: [T; 4]) -> Self {
        Self {
            location,
            coefficients,
        }
    }

    fn order(&self, threshold: T) -> usize {
        self.coefficients
            .iter()
            .rposition(|c| c.abs() > threshold)
            .map_or(0, |k| k + 1)
    }
}

/// Non-rational terms the classifier recognizes but cannot place.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TranscendentalTerm<T> {
    /// `amplitude · exp(−rate · r)`.
    Exponential { amplitude: T, rate: T },
    /// `amplitude · exp(−screening · r) / r`.
    Yukawa { amplitude: T, screening: T },
}

/// `k + A₁ r + A₂ r² + Σ poles`, optionally with transcendental terms.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPotential<T> {
    pub constant: T,
    pub linear: T,
    pub quadratic: T,
    pub poles: Vec<Pole<T>>,
    pub transcendental: Vec<TranscendentalTerm<T>>,
}

impl<T: Real> Default for RationalPotential<T> {
    fn default() -> Self {
        Self {
            constant: T::zero(),
            linear: T::zero(),
            quadratic: T::zero(),
            poles: Vec::new(),
            transcendental: Vec::new(),
        }
    }
}

impl<T: Real> RationalPotential<T> {
    pub fn with_constant(mut self, k: T) -> Self {
        self.constant = k;
        self
    }

    pub fn with_linear(mut self, a1: T) -> Self {
        self.linear = a1;
        self
    }

    pub fn with_quadratic(mut self, a2: T) -> Self {
        self.quadratic = a2;
        self
    }

    pub fn with_pole(mut self, location: T, coefficients: [T; 4]) -> Self {
        self.poles.push(Pole::new(location, coefficients));
        self
    }

    pub fn with_term(mut self, term: TranscendentalTerm<T>) -> Self {
        self.transcendental.push(term);
        self
    }

    /// Multiplies every coefficient by `c`.
    pub fn scaled(&self, c: T) -> Self {
        Self {
            constant: self.constant * c,
            linear: self.linear * c,
            quadratic: self.quadratic * c,
            poles: self
                .poles
                .iter()
                .map(|p| Pole::new(p.location, p.coefficients.map(|v| v * c)))
                .collect(),
            transcendental: self
                .transcendental
                .iter()
                .map(|t| match *t {
                    TranscendentalTerm::Exponential { amplitude, rate } => {
                        TranscendentalTerm::Exponential {
                            amplitude: amplitude * c,
                            rate,
                        }
                    }
                    TranscendentalTerm::Yukawa {
                        amplitude,
                        screening,
                    } => TranscendentalTerm::Yukawa {
                        amplitude: amplitude * c,
                        screening,
                    },
                })
                .collect(),
        }
    }

    /// `α + β/r + ω/r² + δ/r³ + σ/r⁴` as a single pole at the origin.
    pub fn from_inverse_quartic(c: &InverseQuarticCoefficients<T>) -> Self {
        Self::default()
            .with_constant(c.alpha)
            .with_pole(T::zero(), [c.beta, c.omega, c.delta, c.sigma])
    }

    fn largest_coefficient(&self) -> T {
        let mut m = self
            .constant
            .abs()
            .max(self.linear.abs())
            .max(self.quadratic.abs());
        for p in &self.poles {
            for c in p.coefficients {
                m = m.max(c.abs());
            }
        }
        m
    }

    fn check(&self) -> Result<(), HeunError> {
        let finite = self.constant.is_finite()
            && self.linear.is_finite()
            && self.quadratic.is_finite()
            && self
                .poles
                .iter()
                .all(|p| p.location.is_finite() && p.coefficients.iter().all(|c| c.is_finite()));
        if !finite {
            return Err(HeunError::NonFinite);
        }
        for (i, a) in self.poles.iter().enumerate() {
            if self.poles[i + 1..].iter().any(|b| b.location == a.location) {
                return Err(HeunError::CoincidentPoles {
                    location: a.location.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }
}

/// Classifies `v` by its singularity structure.
///
/// Vanishing coefficients are dropped first, so a potential that fits a
/// simpler family is reported as that family.
pub fn classify<T: Real>(v: &RationalPotential<T>) -> Result<HeunClass, HeunError> {
    v.check()?;
    let active_terms = v.transcendental.iter().any(|t| match *t {
        TranscendentalTerm::Exponential { amplitude, .. } => !amplitude.is_zero(),
        TranscendentalTerm::Yukawa { amplitude, .. } => !amplitude.is_zero(),
    });
    if active_terms {
        return Ok(HeunClass::Unsupported);
    }

    let threshold = T::lit(ZERO_RELATIVE) * v.largest_coefficient();
    let degree = if v.quadratic.abs() > threshold {
        2
    } else if v.linear.abs() > threshold {
        1
    } else {
        0
    };
    let orders: Vec<usize> = v
        .poles
        .iter()
        .map(|p| p.order(threshold))
        .filter(|&k| k > 0)
        .collect();
    let max_order = orders.iter().copied().max().unwrap_or(0);

    let class = match (orders.len(), degree) {
        (3, 0) if max_order <= 2 => HeunClass::GeneralHeun,
        (2, 0) if max_order <= 2 => HeunClass::ConfluentHeun,
        (1, 1 | 2) if max_order <= 2 => HeunClass::BiconfluentHeun,
        (1, 0) if max_order >= 3 => HeunClass::DoublyConfluentHeun,
        (1, 0) => HeunClass::HypergeometricReducible,
        _ => HeunClass::Unsupported,
    };
    Ok(class)
}
