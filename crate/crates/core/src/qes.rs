//! sl(2) algebraization of inverse-quartic radial Hamiltonians
//!
//! `H = d²/dr² + α + β/r + ω/r² + δ/r³ + σ/r⁴`
//!
//! With `ψ(r) = r^{1−η} exp(−√(−α) r − √(−σ)/r) R(r)` and `η = δ / 2√(−σ)`,
//! the equation `Hψ = 0` turns into `H̃R = 0` where
//!
//! `H̃ = r² d²/dr² − 2(√(−α) r² − (1−η) r − √(−σ)) d/dr − (a r + b)`.
//!
//! When `a = −2n√(−α)` the operator preserves the polynomials of degree
//! `≤ n` and is a quadratic element of the sl(2) enveloping algebra. The
//! polynomial coefficients then satisfy a three-term recursion whose
//! compatibility condition is a tridiagonal determinant.
//!
//! Matrix convention used by every routine in this module: entry `(i, j)` is
//! the coefficient of `r^i` in the image of `r^j`.

use thiserror::Error;

use crate::matrix::DenseMatrix;
use crate::scalar::{Real, Ring};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QesError {
    #[error("coefficient {name} is not finite")]
    NonFinite { name: &'static str },
    #[error("not algebraizable: need alpha < 0 and sigma < 0 (alpha = {alpha}, sigma = {sigma})")]
    NonAlgebraizable { alpha: f64, sigma: f64 },
    #[error("no bound state: quantization requires beta > 0 (beta = {beta})")]
    NoBoundState { beta: f64 },
    #[error("quantization denominator n + 1 - eta = {value} is not positive")]
    NonPositiveLevelGap { value: f64 },
    #[error("algebraization is not quantized (a + 2n sqrt(-alpha) = {defect})")]
    NotQuantized { defect: f64 },
    #[error("radius must be positive, got {r}")]
    NonPositiveRadius { r: f64 },
}

/// The five coefficients of `d²/dr² + α + β/r + ω/r² + δ/r³ + σ/r⁴`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InverseQuarticCoefficients<T> {
    pub alpha: T,
    pub beta: T,
    pub omega: T,
    pub delta: T,
    pub sigma: T,
}

impl<T: Real> InverseQuarticCoefficients<T> {
    pub fn new(alpha: T, beta: T, omega: T, delta: T, sigma: T) -> Result<Self, QesError> {
        let c = Self {
            alpha,
            beta,
            omega,
            delta,
            sigma,
        };
        c.check_finite()?;
        Ok(c)
    }

    pub fn check_finite(&self) -> Result<(), QesError> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("omega", self.omega),
            ("delta", self.delta),
            ("sigma", self.sigma),
        ] {
            if !v.is_finite() {
                return Err(QesError::NonFinite { name });
            }
        }
        Ok(())
    }

    pub fn is_algebraizable(&self) -> bool {
        self.alpha < T::zero() && self.sigma < T::zero()
    }

    /// Potential part `α + β/r + ω/r² + δ/r³ + σ/r⁴`.
    pub fn potential(&self, r: T) -> T {
        let u = r.recip();
        self.alpha + u * (self.beta + u * (self.omega + u * (self.delta + u * self.sigma)))
    }
}

/// Quantities derived from the gauge transformation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Algebraization<T> {
    pub eta: T,
    pub sqrt_minus_alpha: T,
    pub sqrt_minus_sigma: T,
    pub a: T,
    pub b: T,
    pub n: usize,
    pub quantized: bool,
}

impl<T: Real> Algebraization<T> {
    /// Builds a quantized algebraization directly, with `a = −2n√(−α)`.
    pub fn quantized(n: usize, eta: T, sqrt_minus_alpha: T, sqrt_minus_sigma: T, b: T) -> Self {
        let a = -T::lit(2.0) * T::from_usize_lossy(n) * sqrt_minus_alpha;
        Self {
            eta,
            sqrt_minus_alpha,
            sqrt_minus_sigma,
            a,
            b,
            n,
            quantized: true,
        }
    }

    /// `a + 2n√(−α)`; zero exactly when the level is quantized.
    pub fn quantization_defect(&self) -> T {
        self.a + T::lit(2.0) * T::from_usize_lossy(self.n) * self.sqrt_minus_alpha
    }

    /// `1 − η > 0`: the prefactor `r^{1−η}` vanishes at the origin.
    pub fn is_normalizable(&self) -> bool {
        T::one() - self.eta > T::zero()
    }

    /// Same algebraization with a different `b`.
    pub fn with_b(&self, b: T) -> Self {
        Self { b, ..*self }
    }

    fn require_quantized(&self) -> Result<(), QesError> {
        if self.quantized {
            Ok(())
        } else {
            Err(QesError::NotQuantized {
                defect: self.quantization_defect().to_f64().unwrap_or(f64::NAN),
            })
        }
    }
}

fn is_quantized<T: Real>(a: T, n: usize, sqrt_minus_alpha: T) -> bool {
    let defect = a + T::lit(2.0) * T::from_usize_lossy(n) * sqrt_minus_alpha;
    defect.abs() <= T::quantization_tol() * (T::one() + a.abs())
}

/// Gauge-transforms `coeffs` at level `n`.
pub fn algebraize<T: Real>(
    coeffs: &InverseQuarticCoefficients<T>,
    n: usize,
) -> Result<Algebraization<T>, QesError> {
    coeffs.check_finite()?;
    if !coeffs.is_algebraizable() {
        return Err(QesError::NonAlgebraizable {
            alpha: coeffs.alpha.to_f64().unwrap_or(f64::NAN),
            sigma: coeffs.sigma.to_f64().unwrap_or(f64::NAN),
        });
    }
    let two = T::lit(2.0);
    let sqrt_minus_alpha = (-coeffs.alpha).sqrt();
    let sqrt_minus_sigma = (-coeffs.sigma).sqrt();
    let eta = coeffs.delta / (two * sqrt_minus_sigma);
    let a = two * (T::one() - eta) * sqrt_minus_alpha - coeffs.beta;
    let b = eta * (T::one() - eta) + two * sqrt_minus_alpha * sqrt_minus_sigma - coeffs.omega;
    Ok(Algebraization {
        eta,
        sqrt_minus_alpha,
        sqrt_minus_sigma,
        a,
        b,
        n,
        quantized: is_quantized(a, n, sqrt_minus_alpha),
    })
}

/// Solves `2(1−η)x − β = −2n x` for the decay rate `x = √(−α)`.
pub fn solve_quantization<T: Real>(beta: T, eta: T, n: usize) -> Result<T, QesError> {
    let gap = T::from_usize_lossy(n) + T::one() - eta;
    if !(gap > T::zero()) {
        return Err(QesError::NonPositiveLevelGap {
            value: gap.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !(beta > T::zero()) {
        return Err(QesError::NoBoundState {
            beta: beta.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(beta / (T::lit(2.0) * gap))
}

/// Coefficients `c₀ … cₙ` of `R(r) = Σ c_m r^m` with `c₀ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialSolution<T> {
    pub n: usize,
    pub coefficients: Vec<T>,
    /// `c_{n+1}` as produced by the recursion; zero for a true solution.
    pub tail_residual: T,
}

impl<T: Real> PolynomialSolution<T> {
    pub fn max_coefficient(&self) -> T {
        self.coefficients
            .iter()
            .fold(T::zero(), |acc, c| acc.max(c.abs()))
    }

    /// `|c_{n+1}| / max_m |c_m|`.
    pub fn relative_tail(&self) -> T {
        let scale = self.max_coefficient();
        if scale > T::zero() {
            self.tail_residual.abs() / scale
        } else {
            T::infinity()
        }
    }

    pub fn is_admissible(&self, tol: T) -> bool {
        self.relative_tail() <= tol
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_zero())
    }

    /// `(P, P′, P″)` at `r` by Horner's scheme.
    pub fn eval_with_derivatives(&self, r: T) -> (T, T, T) {
        let (mut p, mut dp, mut d2p) = (T::zero(), T::zero(), T::zero());
        for &c in self.coefficients.iter().rev() {
            d2p = d2p * r + T::lit(2.0) * dp;
            dp = dp * r + p;
            p = p * r + c;
        }
        (p, dp, d2p)
    }
}

/// Runs the three-term recursion from `c₀ = 1`.
pub fn recursion_coefficients<T: Real>(
    alg: &Algebraization<T>,
) -> Result<PolynomialSolution<T>, QesError> {
    alg.require_quantized()?;
    let n = alg.n;
    let two = T::lit(2.0);
    let mut c = Vec::with_capacity(n + 2);
    c.push(T::one());
    let mut prev = T::zero();
    for m in 0..=n {
        let mf = T::from_usize_lossy(m);
        let diag = alg.b + mf * (two * alg.eta - mf - T::one());
        let sub = two * (mf - T::from_usize_lossy(n) - T::one()) * alg.sqrt_minus_alpha;
        let next = (diag * c[m] + sub * prev) / (two * (mf + T::one()) * alg.sqrt_minus_sigma);
        prev = c[m];
        c.push(next);
    }
    let tail_residual = c.pop().expect("recursion produced c_{n+1}");
    Ok(PolynomialSolution {
        n,
        coefficients: c,
        tail_residual,
    })
}

/// Diagonal, super- and sub-diagonal of the quantization matrix.
///
/// `sub[k]` sits in row `k + 1`, `sup[k]` in row `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiagonal<T> {
    pub diag: Vec<T>,
    pub sup: Vec<T>,
    pub sub: Vec<T>,
}

impl<T: Real> Tridiagonal<T> {
    pub fn from_algebraization(alg: &Algebraization<T>) -> Self {
        let n = alg.n;
        let two = T::lit(2.0);
        let nf = T::from_usize_lossy(n);
        let diag = (0..=n)
            .map(|m| {
                let mf = T::from_usize_lossy(m);
                alg.b - mf * (mf - two * alg.eta + T::one())
            })
            .collect();
        let sup = (0..n)
            .map(|m| -two * T::from_usize_lossy(m + 1) * alg.sqrt_minus_sigma)
            .collect();
        let sub = (1..=n)
            .map(|m| two * (T::from_usize_lossy(m) - nf - T::one()) * alg.sqrt_minus_alpha)
            .collect();
        Self { diag, sup, sub }
    }

    pub fn to_dense(&self) -> DenseMatrix<T>
    where
        T: Ring,
    {
        let size = self.diag.len();
        DenseMatrix::from_fn(size, |i, j| {
            if i == j {
                self.diag[i]
            } else if j == i + 1 {
                self.sup[i]
            } else if i == j + 1 {
                self.sub[j]
            } else {
                T::zero()
            }
        })
    }

    /// Three-term recurrence `D_m = d_m D_{m−1} − u_{m−1} l_m D_{m−2}`.
    pub fn determinant(&self) -> T {
        let mut before = T::one();
        let mut current = self.diag[0];
        for m in 1..self.diag.len() {
            let next = self.diag[m] * current - self.sup[m - 1] * self.sub[m - 1] * before;
            before = current;
            current = next;
        }
        current
    }

    /// `Π_m max(1, Σ_k |row_m|)`, a Hadamard-type bound on `|det|`.
    pub fn row_norm_product(&self) -> T {
        let size = self.diag.len();
        (0..size).fold(T::one(), |acc, m| {
            let mut row = self.diag[m].abs();
            if m + 1 < size {
                row = row + self.sup[m].abs();
            }
            if m > 0 {
                row = row + self.sub[m - 1].abs();
            }
            acc * row.max(T::one())
        })
    }
}

/// Determinant of the quantization matrix by its three-term recurrence.
pub fn tridiagonal_determinant<T: Real>(alg: &Algebraization<T>) -> T {
    Tridiagonal::from_algebraization(alg).determinant()
}

/// Raw determinant together with its scale-free version.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeterminantValue<T> {
    pub raw: T,
    pub normalized: T,
}

impl<T: Real> DeterminantValue<T> {
    pub fn vanishes(&self, tol: T) -> bool {
        self.normalized.abs() <= tol
    }
}

pub fn normalized_determinant<T: Real>(alg: &Algebraization<T>) -> DeterminantValue<T> {
    let tri = Tridiagonal::from_algebraization(alg);
    let raw = tri.determinant();
    DeterminantValue {
        raw,
        normalized: raw / tri.row_norm_product(),
    }
}

/// All `b` at which the quantization determinant vanishes, ascending.
///
/// The off-diagonal products `u_{m−1} l_m` are positive whenever
/// `√(−α), √(−σ) > 0`, so the matrix is similar to a symmetric Jacobi
/// matrix and the `n + 1` roots are real and simple. They are isolated by
/// Sturm-sequence bisection.
pub fn constraint_roots_in_b<T: Real>(alg: &Algebraization<T>) -> Vec<T> {
    // det(K) = det(bI − A) with A = b·I − K independent of b.
    let tri = Tridiagonal::from_algebraization(&alg.with_b(T::zero()));
    let diag: Vec<T> = tri.diag.iter().map(|&d| -d).collect();
    let products: Vec<T> = tri.sup.iter().zip(&tri.sub).map(|(&u, &l)| u * l).collect();
    let size = diag.len();
    let radius = |m: usize| {
        let mut r = T::zero();
        if m > 0 {
            r = r + products[m - 1].abs().sqrt();
        }
        if m + 1 < size {
            r = r + products[m].abs().sqrt();
        }
        r
    };
    let lo0 = (0..size).fold(T::infinity(), |acc, m| acc.min(diag[m] - radius(m)));
    let hi0 = (0..size).fold(T::neg_infinity(), |acc, m| acc.max(diag[m] + radius(m)));
    let span = (hi0 - lo0).abs().max(T::one());
    let lo0 = lo0 - span * T::lit(1e-3);
    let hi0 = hi0 + span * T::lit(1e-3);

    // Number of eigenvalues of A strictly below x.
    let count_below = |x: T| -> usize {
        let tiny = T::epsilon() * span;
        let mut count = 0;
        let mut q = T::one();
        for m in 0..size {
            q = if m == 0 {
                diag[0] - x
            } else {
                diag[m] - x - products[m - 1] / q
            };
            if q == T::zero() {
                q = -tiny;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    };

    (0..size)
        .map(|k| {
            let (mut lo, mut hi) = (lo0, hi0);
            for _ in 0..200 {
                let mid = T::lit(0.5) * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if count_below(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            T::lit(0.5) * (lo + hi)
        })
        .collect()
}

/// Matrices of `J⁺ = r² d/dr − n r`, `J⁰ = r d/dr − n/2` and `J⁻ = d/dr`
/// on `⟨1, r, …, rⁿ⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorMatrices<R> {
    pub n: usize,
    pub raising: DenseMatrix<R>,
    pub neutral: DenseMatrix<R>,
    pub lowering: DenseMatrix<R>,
}

pub fn build_generators<R: Ring>(n: usize) -> GeneratorMatrices<R> {
    let size = n + 1;
    let mut raising = DenseMatrix::zeros(size);
    let mut neutral = DenseMatrix::zeros(size);
    let mut lowering = DenseMatrix::zeros(size);
    let nn = n as i64;
    for m in 0..size {
        let mi = m as i64;
        if m < n {
            raising[(m + 1, m)] = R::from_i64(mi - nn);
        }
        neutral[(m, m)] = R::from_i64(2 * mi - nn) / R::from_i64(2);
        if m > 0 {
            lowering[(m - 1, m)] = R::from_i64(mi);
        }
    }
    GeneratorMatrices {
        n,
        raising,
        neutral,
        lowering,
    }
}

/// `−J⁺J⁻ + 2√(−α)J⁺ − 2√(−σ)J⁻ + (2η−n−2)(J⁰ + n/2) + b`, assembled from
/// generator products.
pub fn qes_hamiltonian_matrix<T: Real + Ring>(alg: &Algebraization<T>) -> DenseMatrix<T> {
    let g = build_generators::<T>(alg.n);
    let two = T::lit(2.0);
    let size = alg.n + 1;
    let id = DenseMatrix::identity(size);
    let half_n = T::from_usize_lossy(alg.n) / two;
    let shifted_neutral = &g.neutral + &id.scale(&half_n);

    let mut h = (&g.raising * &g.lowering).scale(&-T::one());
    h = &h + &g.raising.scale(&(two * alg.sqrt_minus_alpha));
    h = &h - &g.lowering.scale(&(two * alg.sqrt_minus_sigma));
    h = &h + &shifted_neutral.scale(&(two * alg.eta - T::from_usize_lossy(alg.n) - two));
    &h + &id.scale(&alg.b)
}

/// Matrix of the gauge-transformed operator `H̃` on monomials, built
/// column by column from its action on `r^m`.
///
/// Uses the actual `a`; the entry below column `m` is `−2m√(−α) − a`, which
/// equals `2(n−m)√(−α)` exactly when the level is quantized. The image of
/// `rⁿ` in `r^{n+1}` is dropped; see [`invariance_leak`].
pub fn tilde_h_matrix<T: Real + Ring>(alg: &Algebraization<T>) -> DenseMatrix<T> {
    let size = alg.n + 1;
    let two = T::lit(2.0);
    let mut h = DenseMatrix::zeros(size);
    for m in 0..size {
        let mf = T::from_usize_lossy(m);
        if m > 0 {
            h[(m - 1, m)] = two * mf * alg.sqrt_minus_sigma;
        }
        h[(m, m)] = mf * (mf + T::one() - two * alg.eta) - alg.b;
        if m < alg.n {
            h[(m + 1, m)] = -two * mf * alg.sqrt_minus_alpha - alg.a;
        }
    }
    h
}

/// Coefficient of `r^{n+1}` in `H̃ rⁿ`; nonzero means `H̃` leaves the
/// polynomial space.
pub fn invariance_leak<T: Real>(alg: &Algebraization<T>) -> T {
    -alg.quantization_defect()
}

/// `ψ` and its first two derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveValue<T> {
    pub psi: T,
    pub dpsi: T,
    pub d2psi: T,
}

/// Envelope-stripped values: with `g = r^{1−η} exp(−√(−α) r − √(−σ)/r)`,
/// `ψ = g·value`, `ψ′ = g·first`, `ψ″ = g·second`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedWaveValue<T> {
    pub envelope: T,
    pub value: T,
    pub first: T,
    pub second: T,
}

/// Evaluates `ψ(r)` and its derivatives through the logarithmic derivative
/// of the envelope, without dividing by the polynomial.
pub fn evaluate_reduced<T: Real>(
    alg: &Algebraization<T>,
    poly: &PolynomialSolution<T>,
    r: T,
) -> Result<ReducedWaveValue<T>, QesError> {
    if !(r > T::zero()) || !r.is_finite() {
        return Err(QesError::NonPositiveRadius {
            r: r.to_f64().unwrap_or(f64::NAN),
        });
    }
    let exponent = T::one() - alg.eta;
    let inv = r.recip();
    let log_deriv = exponent * inv - alg.sqrt_minus_alpha + alg.sqrt_minus_sigma * inv * inv;
    let log_deriv_prime =
        -exponent * inv * inv - T::lit(2.0) * alg.sqrt_minus_sigma * inv * inv * inv;
    let envelope =
        (exponent * r.ln() - alg.sqrt_minus_alpha * r - alg.sqrt_minus_sigma * inv).exp();
    let (p, dp, d2p) = poly.eval_with_derivatives(r);
    Ok(ReducedWaveValue {
        envelope,
        value: p,
        first: log_deriv * p + dp,
        second: (log_deriv_prime + log_deriv * log_deriv) * p + T::lit(2.0) * log_deriv * dp + d2p,
    })
}

pub fn evaluate_solution<T: Real>(
    alg: &Algebraization<T>,
    poly: &PolynomialSolution<T>,
    r: T,
) -> Result<WaveValue<T>, QesError> {
    let red = evaluate_reduced(alg, poly, r)?;
    Ok(WaveValue {
        psi: red.envelope * red.value,
        dpsi: red.envelope * red.first,
        d2psi: red.envelope * red.second,
    })
}
