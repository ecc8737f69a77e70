//! Independent checks of the closed-form machinery.
//!
//! Nothing here reuses the code path it verifies: determinants go through
//! LU factorization instead of the three-term recurrence, ODE residuals are
//! evaluated on the unexpanded radial equations, and the sl(2) relations are
//! checked in exact rational arithmetic.

use thiserror::Error;

use crate::dkp::{PotentialParams, RadialSolution, Sector};
use crate::matrix::DenseMatrix;
use crate::qes::{
    evaluate_reduced, invariance_leak, qes_hamiltonian_matrix, tilde_h_matrix, Algebraization,
    GeneratorMatrices, QesError,
};
use crate::scalar::{Real, Ring};

/// Largest matrix accepted by [`dense_determinant`].
pub const MAX_DENSE_SIZE: usize = 64;

/// Floor of the pointwise residual normalization.
pub const RESIDUAL_FLOOR: f64 = 1e-30;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Qes(#[from] QesError),
    #[error("radius {r} is not positive")]
    NonPositiveRadius { r: f64 },
    #[error("the polynomial is identically zero")]
    TrivialSolution,
    #[error("residual grid is empty")]
    EmptyGrid,
}

/// LU factorization with partial pivoting; closed form for sizes up to 2.
///
/// Panics when the matrix exceeds [`MAX_DENSE_SIZE`].
pub fn dense_determinant<T: Real + Ring>(matrix: &DenseMatrix<T>) -> T {
    let n = matrix.size();
    assert!(
        n <= MAX_DENSE_SIZE,
        "dense determinant limited to {MAX_DENSE_SIZE}x{MAX_DENSE_SIZE}"
    );
    match n {
        0 => return T::one(),
        1 => return matrix[(0, 0)],
        2 => return matrix[(0, 0)] * matrix[(1, 1)] - matrix[(0, 1)] * matrix[(1, 0)],
        _ => {}
    }
    let mut a = matrix.clone();
    let mut det = T::one();
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| {
                a[(i, k)]
                    .abs()
                    .partial_cmp(&a[(j, k)].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(k);
        if a[(pivot, k)].is_zero() {
            return T::zero();
        }
        if pivot != k {
            for c in 0..n {
                let tmp = a[(k, c)];
                a[(k, c)] = a[(pivot, c)];
                a[(pivot, c)] = tmp;
            }
            det = -det;
        }
        let p = a[(k, k)];
        det = det * p;
        for i in k + 1..n {
            let factor = a[(i, k)] / p;
            if factor.is_zero() {
                continue;
            }
            for c in k..n {
                let v = a[(k, c)];
                a[(i, c)] = a[(i, c)] - factor * v;
            }
        }
    }
    det
}

/// Outcome of an ODE residual scan.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport<T> {
    pub grid: Vec<T>,
    pub max_relative_residual: T,
    pub worst_radius: T,
}

/// `n` log-spaced radii on `[lo, hi]`.
pub fn log_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let steps = T::from_usize_lossy(n - 1);
    (0..n)
        .map(|i| (a + (b - a) * T::from_usize_lossy(i) / steps).exp())
        .collect()
}

/// Default residual grid: 60 log-spaced points on `[0.05, 30]`.
pub fn default_residual_grid<T: Real>() -> Vec<T> {
    log_grid(T::lit(0.05), T::lit(30.0), 60)
}

/// Potential term `V` of the unexpanded radial equation `ψ″ + Vψ = 0`.
pub fn raw_radial_potential<T: Real>(
    sector: Sector,
    p: &PotentialParams<T>,
    mass: T,
    j: u32,
    energy: T,
    r: T,
) -> T {
    let a_r = p.space_potential(r);
    let da_r = p.space_potential_derivative(r);
    let centrifugal = T::lit(f64::from(j) * (f64::from(j) + 1.0)) / (r * r);
    let base = energy * energy - mass * mass - centrifugal - a_r * a_r;
    match sector {
        Sector::F0Normal => {
            let a_0 = p.time_potential(r);
            base - da_r + a_0 * a_0
        }
        Sector::H0Abnormal => base + da_r,
        Sector::PhiAbnormal => base - da_r - a_r / r,
    }
}

/// Evaluates `ψ″ + Vψ` on `grid` with the potential built from `A_r`, its
/// derivative and `A₀` directly, and reports the largest residual relative
/// to `max(|ψ″|, |Vψ|)`.
///
/// The envelope `r^{1−η} exp(…)` is a common positive factor of `ψ″` and
/// `Vψ`, so both are evaluated with it stripped; the ratio is unchanged and
/// no underflow occurs at the ends of the grid.
pub fn ode_residual<T: Real>(
    sector: Sector,
    p: &PotentialParams<T>,
    mass: T,
    j: u32,
    energy: T,
    sol: &RadialSolution<T>,
    grid: &[T],
) -> Result<ResidualReport<T>, OracleError> {
    if sol.polynomial.is_zero() {
        return Err(OracleError::TrivialSolution);
    }
    if grid.is_empty() {
        return Err(OracleError::EmptyGrid);
    }
    let floor = T::lit(RESIDUAL_FLOOR);
    let mut worst = T::zero();
    let mut worst_radius = grid[0];
    for &r in grid {
        if !(r > T::zero()) {
            return Err(OracleError::NonPositiveRadius {
                r: r.to_f64().unwrap_or(f64::NAN),
            });
        }
        let w = evaluate_reduced(&sol.algebraization, &sol.polynomial, r)?;
        let v = raw_radial_potential(sector, p, mass, j, energy, r);
        let potential_term = v * w.value;
        let residual = (w.second + potential_term).abs();
        let scale = w.second.abs().max(potential_term.abs()).max(floor);
        let rel = residual / scale;
        if rel > worst || rel.is_nan() {
            worst = rel;
            worst_radius = r;
        }
    }
    Ok(ResidualReport {
        grid: grid.to_vec(),
        max_relative_residual: worst,
        worst_radius,
    })
}

/// Exact check of `[J⁺,J⁻] = −2J⁰`, `[J⁺,J⁰] = −J⁺` and `[J⁻,J⁰] = J⁻`.
pub fn commutator_audit<R: Ring + PartialEq>(g: &GeneratorMatrices<R>) -> bool {
    let two = R::from_i64(2);
    let plus_minus = &g.raising.commutator(&g.lowering) + &g.neutral.scale(&two);
    let plus_zero = &g.raising.commutator(&g.neutral) + &g.raising;
    let minus_zero = &g.lowering.commutator(&g.neutral) - &g.lowering;
    plus_minus.is_zero() && plus_zero.is_zero() && minus_zero.is_zero()
}

/// Comparison of the sl(2) assembly against the direct operator matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorEquivalence<T> {
    /// `max |H_QES + H̃|` entrywise; the sl(2) form equals `−H̃`.
    pub max_deviation: T,
    /// Coefficient of `r^{n+1}` in `H̃ rⁿ`.
    pub invariance_leak: T,
}

impl<T: Real> OperatorEquivalence<T> {
    pub fn holds(&self, tol: T) -> bool {
        self.max_deviation <= tol && self.invariance_leak.abs() <= tol
    }
}

pub fn operator_equivalence<T: Real + Ring>(alg: &Algebraization<T>) -> OperatorEquivalence<T> {
    let sl2 = qes_hamiltonian_matrix(alg);
    let direct = tilde_h_matrix(alg);
    let size = alg.n + 1;
    let mut max_deviation = T::zero();
    for i in 0..size {
        for j in 0..size {
            max_deviation = max_deviation.max((sl2[(i, j)] + direct[(i, j)]).abs());
        }
    }
    OperatorEquivalence {
        max_deviation,
        invariance_leak: invariance_leak(alg),
    }
}

/// Largest relative mismatch between analytic `ψ′, ψ″` and central
/// differences with step `h` (`ψ″` is differenced from the analytic `ψ′`).
pub fn finite_difference_mismatch<T: Real>(
    sol: &RadialSolution<T>,
    radii: &[T],
    h: T,
) -> Result<T, QesError> {
    let mut worst = T::zero();
    let two = T::lit(2.0);
    for &r in radii {
        let w = sol.evaluate(r)?;
        let up = sol.evaluate(r + h)?;
        let down = sol.evaluate(r - h)?;
        let d1 = (up.psi - down.psi) / (two * h);
        let d2 = (up.dpsi - down.dpsi) / (two * h);
        let scale1 = w.dpsi.abs().max(w.psi.abs());
        let scale2 = w.d2psi.abs().max(w.psi.abs());
        worst = worst.max((w.dpsi - d1).abs() / scale1);
        worst = worst.max((w.d2psi - d2).abs() / scale2);
    }
    Ok(worst)
}
