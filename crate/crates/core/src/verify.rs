//! Verification driver: runs the oracles over generated and user-supplied
//! cases and collects a pass/fail report.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dkp::{
    admissibility, eigenpair, quantized_level, solve_determinant_constraint, Parameter,
    PotentialParams, RadialSolution, Sector,
};
use crate::oracles::{
    commutator_audit, default_residual_grid, dense_determinant, ode_residual, operator_equivalence,
};
use crate::qes::{
    build_generators, constraint_roots_in_b, normalized_determinant, recursion_coefficients,
    Algebraization, Tridiagonal,
};
use crate::scalar::Real;
use crate::{DoubleDouble, Rational};

/// Thresholds of the verification suite.
pub mod thresholds {
    pub const OPERATOR_EQUIVALENCE: f64 = 1e-12;
    pub const DETERMINANT_AGREEMENT: f64 = 1e-10;
    pub const DUALITY_ZERO: f64 = 1e-9;
    pub const ODE_RESIDUAL: f64 = 1e-8;
    pub const PERTURBATION: f64 = 1e-3;
    pub const PERTURBATION_GAIN: f64 = 1e3;
}

/// One sector configuration whose eigenpairs get residual-checked.
///
/// [`run_verification`] solves and checks these in [`DoubleDouble`]
/// arithmetic. Roots of high levels can be so sensitive to the parameter
/// that a single `f64` ulp leaves a residual far above the threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyCase {
    pub sector: Sector,
    pub params: PotentialParams<f64>,
    pub mass: f64,
    pub j: u32,
    pub levels: RangeInclusive<usize>,
    /// When present, eigenpairs are found by solving the determinant
    /// constraint in this parameter; otherwise the parameters must already
    /// satisfy it.
    pub free: Option<(Parameter, (f64, f64))>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub max_generator_n: usize,
    pub operator_samples: usize,
    pub max_operator_n: usize,
    pub determinant_samples: usize,
    pub max_determinant_n: usize,
    pub max_residual_n: usize,
    /// Added to `a` of every operator-equivalence sample; nonzero values
    /// break quantization on purpose.
    pub quantization_offset: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            max_generator_n: 10,
            operator_samples: 100,
            max_operator_n: 10,
            determinant_samples: 200,
            max_determinant_n: 12,
            max_residual_n: 6,
            quantization_offset: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    pub eigenpairs_checked: usize,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

/// Random quantized algebraization with `n ≤ max_n`.
pub fn random_quantized_algebraization(rng: &mut impl Rng, max_n: usize) -> Algebraization<f64> {
    let n = rng.gen_range(0..=max_n);
    Algebraization::quantized(
        n,
        rng.gen_range(-2.0..0.95),
        rng.gen_range(0.1..3.0),
        rng.gen_range(0.1..3.0),
        rng.gen_range(-10.0..10.0),
    )
}

/// Draws `(params, mass, j)` admissible for `(sector, n)` by rejection.
///
/// The `φ` sector has no real spectrum for `z_r > 0` inside its
/// normalizability window, so its draws use `z_r < 0`.
pub fn random_admissible_params(
    rng: &mut impl Rng,
    sector: Sector,
    n: usize,
) -> (PotentialParams<f64>, f64, u32) {
    loop {
        let mass = rng.gen_range(0.5..3.0);
        let j = rng.gen_range(0..=3u32);
        let p = match sector {
            Sector::F0Normal => {
                let y_r = rng.gen_range(0.5..2.0);
                PotentialParams {
                    x_r: rng.gen_range(-1.0..-0.01),
                    y_r,
                    z_r: rng.gen_range(0.1..1.5),
                    x_0: rng.gen_range(-2.0..2.0),
                    y_0: rng.gen_range(-0.9..0.9) * y_r,
                    z_0: rng.gen_range(-1.0..1.0),
                }
            }
            Sector::H0Abnormal => PotentialParams::space(
                rng.gen_range(-1.9..-0.05),
                rng.gen_range(0.1..3.0),
                rng.gen_range(0.1..2.0),
            ),
            Sector::PhiAbnormal => PotentialParams::space(
                rng.gen_range(-0.45..0.5),
                rng.gen_range(0.1..3.0),
                rng.gen_range(-2.0..-0.1),
            ),
        };
        if admissibility(&p, mass, j, sector, n).is_admissible() {
            return (p, mass, j);
        }
    }
}

/// Exact sl(2) relations for every `n ≤ max_n`.
pub fn check_commutators(max_n: usize) -> (bool, String) {
    let failed: Vec<usize> = (0..=max_n)
        .filter(|&n| !commutator_audit(&build_generators::<Rational>(n)))
        .collect();
    (
        failed.is_empty(),
        format!("n = 0..={max_n}, failures at {failed:?}"),
    )
}

/// Largest operator-equivalence deviation (including the invariance leak)
/// over random samples.
pub fn check_operator_equivalence(
    rng: &mut impl Rng,
    samples: usize,
    max_n: usize,
    quantization_offset: f64,
) -> f64 {
    (0..samples)
        .map(|_| {
            let mut alg = random_quantized_algebraization(rng, max_n);
            if quantization_offset != 0.0 {
                alg.a += quantization_offset;
                alg.quantized = false;
            }
            let eq = operator_equivalence(&alg);
            eq.max_deviation.max(eq.invariance_leak.abs())
        })
        .fold(0.0, f64::max)
}

/// Worst relative disagreement between the recurrence and dense LU.
pub fn check_determinant_agreement(rng: &mut impl Rng, samples: usize, max_n: usize) -> f64 {
    (0..samples)
        .map(|_| {
            let alg = random_quantized_algebraization(rng, max_n);
            let tri = Tridiagonal::from_algebraization(&alg);
            let rec = tri.determinant();
            let lu = dense_determinant(&tri.to_dense());
            (rec - lu).abs() / lu.abs()
        })
        .fold(0.0, f64::max)
}

/// `tail ≤ tol ⇔ det ≤ tol` at `alg`; returns whether the two tests agree
/// and whether both vanish.
pub fn duality_at<T: Real>(alg: &Algebraization<T>, tol: T) -> (bool, bool) {
    let det_zero = normalized_determinant(alg).vanishes(tol);
    let tail_zero = recursion_coefficients(alg)
        .map(|p| p.is_admissible(tol))
        .unwrap_or(false);
    (det_zero == tail_zero, det_zero && tail_zero)
}

/// Duality over admissible parameter draws: at the sector's own `b` both
/// tests must agree, at every determinant root in `b` both must vanish.
/// Returns `(violations, roots checked)`.
///
/// Draws are made in `f64` and evaluated in [`DoubleDouble`]: near
/// `√(−σ) ≈ 0.1` the forward recursion loses enough digits that `f64`
/// tails of genuine roots land just above the threshold.
pub fn check_sector_duality(
    rng: &mut impl Rng,
    samples_per_sector: usize,
    max_n: usize,
) -> (usize, usize) {
    let tol = DoubleDouble::from(thresholds::DUALITY_ZERO);
    let mut violations = 0;
    let mut roots = 0;
    for sector in Sector::ALL {
        for _ in 0..samples_per_sector {
            let n = rng.gen_range(0..=max_n);
            let (p, mass, j) = random_admissible_params(rng, sector, n);
            let p = p.map(DoubleDouble::from);
            let Ok(level) = quantized_level(&p, mass.into(), j, sector, n) else {
                violations += 1;
                continue;
            };
            let alg = level.algebraization;
            if !duality_at(&alg, tol).0 {
                violations += 1;
            }
            for b in constraint_roots_in_b(&alg) {
                roots += 1;
                if !duality_at(&alg.with_b(b), tol).1 {
                    violations += 1;
                }
            }
        }
    }
    (violations, roots)
}

/// Residual of one eigenpair and of the same pair with the energy shifted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualProbe {
    pub base: f64,
    pub perturbed: f64,
}

impl ResidualProbe {
    pub fn passes(&self) -> bool {
        self.base < thresholds::ODE_RESIDUAL
            && self.perturbed >= thresholds::PERTURBATION_GAIN * self.base
    }
}

pub fn probe_residual<T: Real>(
    p: &PotentialParams<T>,
    mass: T,
    j: u32,
    sol: &RadialSolution<T>,
) -> Option<ResidualProbe> {
    let grid = default_residual_grid::<T>();
    let base = ode_residual(sol.sector, p, mass, j, sol.energy, sol, &grid).ok()?;
    let perturbed = ode_residual(
        sol.sector,
        p,
        mass,
        j,
        sol.energy + T::lit(thresholds::PERTURBATION),
        sol,
        &grid,
    )
    .ok()?;
    Some(ResidualProbe {
        base: base.max_relative_residual.to_f64()?,
        perturbed: perturbed.max_relative_residual.to_f64()?,
    })
}

/// Every eigenpair of `case` with `n ≤ max_n`, as `(params, solution)`,
/// computed in the scalar `T`.
pub fn case_eigenpairs<T: Real>(
    case: &VerifyCase,
    max_n: usize,
) -> Vec<(PotentialParams<T>, RadialSolution<T>)> {
    let params = case.params.map(T::lit);
    let mass = T::lit(case.mass);
    let mut out = Vec::new();
    for n in case.levels.clone().filter(|&n| n <= max_n) {
        match case.free {
            Some((param, (lo, hi))) => {
                let roots = solve_determinant_constraint(
                    &params,
                    mass,
                    case.j,
                    case.sector,
                    n,
                    param,
                    (T::lit(lo), T::lit(hi)),
                )
                .unwrap_or_default();
                for root in roots {
                    let q = params.with(param, root.value);
                    if let Ok(sol) = eigenpair(&q, mass, case.j, case.sector, n) {
                        out.push((q, sol));
                    }
                }
            }
            None => {
                if admissibility(&params, mass, case.j, case.sector, n).is_admissible() {
                    if let Ok(sol) = eigenpair(&params, mass, case.j, case.sector, n) {
                        out.push((params, sol));
                    }
                }
            }
        }
    }
    out
}

/// Runs every check.
pub fn run_verification(cases: &[VerifyCase], opts: &VerifyOptions) -> VerificationReport {
    let mut report = VerificationReport::default();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let (ok, detail) = check_commutators(opts.max_generator_n);
    report.push("sl2-commutators", ok, detail);

    let dev = check_operator_equivalence(
        &mut rng,
        opts.operator_samples,
        opts.max_operator_n,
        opts.quantization_offset,
    );
    report.push(
        "operator-equivalence",
        dev <= thresholds::OPERATOR_EQUIVALENCE,
        format!("{} samples, max deviation {dev:.3e}", opts.operator_samples),
    );

    let rel =
        check_determinant_agreement(&mut rng, opts.determinant_samples, opts.max_determinant_n);
    report.push(
        "determinant-recurrence-vs-lu",
        rel <= thresholds::DETERMINANT_AGREEMENT,
        format!(
            "{} samples, max relative difference {rel:.3e}",
            opts.determinant_samples
        ),
    );

    let (violations, roots) =
        check_sector_duality(&mut rng, opts.determinant_samples, opts.max_residual_n);
    report.push(
        "determinant-duality",
        violations == 0,
        format!(
            "{} draws per sector, {roots} roots in b, {violations} violations",
            opts.determinant_samples
        ),
    );

    for case in cases {
        let mass = DoubleDouble::from(case.mass);
        for (q, sol) in case_eigenpairs::<DoubleDouble>(case, opts.max_residual_n) {
            report.eigenpairs_checked += 1;
            let name = format!(
                "ode-residual {} n={} E={:.6}",
                sol.sector, sol.n, sol.energy
            );
            match probe_residual(&q, mass, case.j, &sol) {
                Some(probe) => report.push(
                    name,
                    probe.passes(),
                    format!(
                        "residual {:.3e}, perturbed {:.3e}",
                        probe.base, probe.perturbed
                    ),
                ),
                None => report.push(name, false, "residual evaluation failed"),
            }
        }
    }
    report
}
