//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dkp_qes::dkp::closed_form;
use dkp_qes::oracles::dense_determinant;
use dkp_qes::qes::Tridiagonal;
use dkp_qes::scan::{scan, ScanSpec};
use dkp_qes::verify::{
    case_eigenpairs, check_commutators, check_operator_equivalence, check_sector_duality,
    probe_residual, thresholds, VerifyCase,
};
use dkp_qes::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0)
}

fn worked_f0() -> PotentialParams64 {
    PotentialParams {
        x_r: -0.2,
        y_r: 1.0,
        z_r: 0.5,
        x_0: 1.0,
        y_0: -0.8,
        z_0: 0.1,
    }
}

fn commutators() -> Outcome {
    let (ok, detail) = check_commutators(10);
    outcome(ok, detail)
}

fn operator_equivalence() -> Outcome {
    let dev = check_operator_equivalence(&mut rng(), 100, 10, 0.0);
    outcome(
        dev <= thresholds::OPERATOR_EQUIVALENCE,
        format!("100 samples, n <= 10, max deviation {dev:.3e}"),
    )
}

fn determinant_duality() -> Outcome {
    let mut rng = rng();
    let (violations, roots_checked) = check_sector_duality(&mut rng, 200, 6);
    let mut worst = 0.0f64;
    for n in 0..=12 {
        for _ in 0..20 {
            let alg = Algebraization64::quantized(
                n,
                rng.gen_range(-2.0..0.95),
                rng.gen_range(0.1..3.0),
                rng.gen_range(0.1..3.0),
                rng.gen_range(-10.0..10.0),
            );
            let tri = Tridiagonal::from_algebraization(&alg);
            let lu = dense_determinant(&tri.to_dense());
            worst = worst.max((tri.determinant() - lu).abs() / lu.abs());
        }
    }
    outcome(
        violations == 0 && worst <= thresholds::DETERMINANT_AGREEMENT,
        format!(
            "600 draws, {roots_checked} roots in b, {violations} violations; recurrence vs LU max {worst:.3e}"
        ),
    )
}

fn residual_cases() -> Vec<VerifyCase> {
    vec![
        VerifyCase {
            sector: Sector::F0Normal,
            params: worked_f0(),
            mass: 1.0,
            j: 1,
            levels: 0..=6,
            free: Some((Parameter::X0, (0.0, 5.0))),
        },
        VerifyCase {
            sector: Sector::F0Normal,
            params: worked_f0(),
            mass: 1.0,
            j: 0,
            levels: 0..=6,
            free: Some((Parameter::Z0, (-3.0, 3.0))),
        },
        VerifyCase {
            sector: Sector::H0Abnormal,
            params: PotentialParams::space(-0.5, 1.0, 1.0),
            mass: 1.0,
            j: 1,
            levels: 0..=6,
            free: Some((Parameter::Yr, (0.1, 10.0))),
        },
        VerifyCase {
            sector: Sector::H0Abnormal,
            params: PotentialParams::space(-1.5, 0.7, 0.4),
            mass: 2.0,
            j: 2,
            levels: 0..=6,
            free: Some((Parameter::Zr, (0.05, 5.0))),
        },
        VerifyCase {
            sector: Sector::PhiAbnormal,
            params: PotentialParams::space(-0.25, 1.0, -1.0),
            mass: 1.0,
            j: 0,
            levels: 0..=6,
            free: Some((Parameter::Yr, (0.1, 10.0))),
        },
        VerifyCase {
            sector: Sector::PhiAbnormal,
            params: PotentialParams::space(-0.25, 1.0, -1.0),
            mass: 1.0,
            j: 1,
            levels: 0..=6,
            free: Some((Parameter::Zr, (-10.0, -0.1))),
        },
    ]
}

fn ode_residuals() -> Outcome {
    let mut count = 0;
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut weakest_gain = f64::INFINITY;
    for case in residual_cases() {
        let mass = DoubleDouble::from(case.mass);
        for (q, sol) in case_eigenpairs::<DoubleDouble>(&case, 6) {
            count += 1;
            let Some(probe) = probe_residual(&q, mass, case.j, &sol) else {
                failures.push(format!("{} n={} unevaluable", sol.sector, sol.n));
                continue;
            };
            worst = worst.max(probe.base);
            weakest_gain = weakest_gain.min(probe.perturbed / probe.base.max(f64::MIN_POSITIVE));
            if !probe.passes() {
                failures.push(format!(
                    "{} n={} residual {:.2e}",
                    sol.sector, sol.n, probe.base
                ));
            }
        }
    }
    outcome(
        count > 0 && failures.is_empty(),
        format!(
            "{count} eigenpairs, max residual {worst:.3e}, min perturbation gain {weakest_gain:.3e}{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!(", failing: {}", failures.join("; "))
            }
        ),
    )
}

fn identity_error(e2: f64, eps2: f64, m2: f64, sign: f64) -> f64 {
    (e2 + sign * eps2 - m2).abs() / 1f64.max(eps2.abs()).max(m2)
}

fn normal_sector_circle() -> Outcome {
    let mut real = 0;
    let mut worst = 0.0f64;
    let mut symmetric = true;
    for (parameter, range) in [(Parameter::Z0, (-1.0, 1.0)), (Parameter::X0, (-2.0, 2.0))] {
        let rows = scan(&ScanSpec {
            sector: Sector::F0Normal,
            params: worked_f0(),
            mass: 1.0,
            j: 1,
            levels: 0..=5,
            parameter,
            range,
            points: 201,
        });
        for row in rows {
            let (Some(e), Some(eps2)) = (row.e_plus, row.epsilon_squared) else {
                continue;
            };
            real += 1;
            worst = worst.max(identity_error(e * e, eps2, 1.0, 1.0));
            symmetric &= row.e_minus == Some(-e);
        }
    }
    outcome(
        real > 0 && worst <= 1e-12 && symmetric,
        format!(
            "{real} real points, max |E^2 + eps^2 - M^2| {worst:.3e}, +-E symmetric: {symmetric}"
        ),
    )
}

fn h0_hyperbola() -> Outcome {
    let mut real = 0;
    let mut worst = 0.0f64;
    let mut below_gap = 0;
    for mass in [0.5, 1.0, 2.0] {
        let rows = scan(&ScanSpec {
            sector: Sector::H0Abnormal,
            params: PotentialParams::space(-0.5, 1.0, 1.0),
            mass,
            j: 1,
            levels: 0..=5,
            parameter: Parameter::Xr,
            range: (-0.999, -0.001),
            points: 201,
        });
        for row in rows {
            let (Some(e), Some(eps2)) = (row.e_plus, row.epsilon_squared) else {
                continue;
            };
            real += 1;
            worst = worst.max(identity_error(e * e, eps2, mass * mass, -1.0));
            if e * e < mass * mass {
                below_gap += 1;
            }
        }
    }
    outcome(
        real > 0 && worst <= 1e-12 && below_gap == 0,
        format!("{real} real points, max |E^2 - eps^2 - M^2| {worst:.3e}, {below_gap} below M^2"),
    )
}

fn phi_emptiness() -> Outcome {
    let mut rng = rng();
    let mut real = 0;
    let mut levels = 0;
    for _ in 0..100 {
        let p = PotentialParams::space(
            rng.gen_range(-0.5..0.0),
            rng.gen_range(0.1..3.0),
            rng.gen_range(0.01..3.0),
        );
        let mass = rng.gen_range(0.5..3.0);
        let j = rng.gen_range(0..=3);
        for n in 0..=10 {
            levels += 1;
            match energy_levels(&p, mass, j, Sector::PhiAbnormal, n) {
                Ok(pt) if pt.energy == EnergyPair::NoRealSpectrum => {}
                _ => real += 1,
            }
        }
    }
    outcome(
        real == 0,
        format!("{levels} levels, {real} with a spectrum"),
    )
}

fn worked_value() -> Outcome {
    let p = worked_f0();
    let direct = match closed_form(&p, Sector::F0Normal, 0) {
        Ok(dkp::ClosedForm::EpsilonSquared(e)) => e,
        _ => f64::NAN,
    };
    let pipeline = quantized_level(&p, 1.0, 0, Sector::F0Normal, 0)
        .map(|l| l.energy_squared)
        .unwrap_or(f64::NAN);
    let energy = energy_levels(&p, 1.0, 0, Sector::F0Normal, 0)
        .ok()
        .and_then(|pt| pt.energy.plus())
        .unwrap_or(f64::NAN);
    let ok = (direct - 0.12).abs() <= 1e-12
        && (pipeline - 0.88).abs() <= 1e-12
        && (1.0 - direct - pipeline).abs() <= 1e-12
        && (energy - 0.88f64.sqrt()).abs() <= 1e-12;
    outcome(
        ok,
        format!("eps^2 = {direct:.15}, pipeline E^2 = {pipeline:.15}, E = +-{energy:.15}"),
    )
}

fn classifier() -> Outcome {
    type V = RationalPotential<f64>;
    let canonical = [
        (
            V::default()
                .with_pole(0.0, [0.3, -0.2, 0.0, 0.0])
                .with_pole(1.0, [-0.5, 0.1, 0.0, 0.0])
                .with_pole(3.0, [0.2, 0.4, 0.0, 0.0]),
            HeunClass::GeneralHeun,
        ),
        (
            V::default()
                .with_constant(-0.25)
                .with_pole(0.0, [0.3, -0.2, 0.0, 0.0])
                .with_pole(1.0, [-0.5, 0.1, 0.0, 0.0]),
            HeunClass::ConfluentHeun,
        ),
        (
            V::default()
                .with_constant(-0.25)
                .with_linear(0.5)
                .with_quadratic(-1.0)
                .with_pole(0.0, [0.3, -0.2, 0.0, 0.0]),
            HeunClass::BiconfluentHeun,
        ),
        (
            V::default()
                .with_constant(-0.25)
                .with_pole(0.0, [0.3, -0.2, 0.6, -1.0]),
            HeunClass::DoublyConfluentHeun,
        ),
    ];
    let mut mismatches = Vec::new();
    for (v, expected) in &canonical {
        let got = classify(v).ok();
        if got != Some(*expected) {
            mismatches.push(format!("{expected} classified {got:?}"));
        }
    }
    let sectors = [
        (Sector::F0Normal, worked_f0()),
        (Sector::H0Abnormal, PotentialParams::space(-0.5, 1.0, 1.0)),
        (
            Sector::PhiAbnormal,
            PotentialParams::space(-0.25, 1.0, -1.0),
        ),
    ];
    for (sector, p) in sectors {
        let got = sector_coefficients(&p, 1.0, 0.9, 1, sector)
            .ok()
            .and_then(|c| classify(&RationalPotential::from_inverse_quartic(&c)).ok());
        if got != Some(HeunClass::DoublyConfluentHeun) {
            mismatches.push(format!("{sector} classified {got:?}"));
        }
    }
    outcome(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "4 canonical forms and 3 sectors classified as expected".to_string()
        } else {
            mismatches.join("; ")
        },
    )
}

fn kratzer() -> Outcome {
    let mut rng = rng();
    let mut sign_errors = 0;
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let d_e = 10f64.powf(rng.gen_range(-3.0..3.0));
        let r_e = 10f64.powf(rng.gen_range(-3.0..3.0));
        let k = KratzerPhysical::new(d_e, r_e).expect("positive inputs");
        let (x, y, z) = kratzer_from_physical(&k);
        if !(x < 0.0 && y > 0.0 && z > 0.0) {
            sign_errors += 1;
        }
        worst = worst.max((x * x / (4.0 * y) - d_e).abs() / d_e);
    }
    outcome(
        sign_errors == 0 && worst <= 1e-12,
        format!("1000 draws, {sign_errors} sign errors, max relative round-trip error {worst:.3e}"),
    )
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("sl(2) commutators", Duration::from_secs(1), commutators),
        (
            "operator equivalence",
            Duration::from_secs(5),
            operator_equivalence,
        ),
        (
            "determinant duality",
            Duration::from_secs(10),
            determinant_duality,
        ),
        ("ODE residuals", Duration::from_secs(10), ode_residuals),
        (
            "normal sector E^2 + eps^2 = M^2",
            Duration::from_secs(10),
            normal_sector_circle,
        ),
        (
            "H0 sector E^2 - eps^2 = M^2",
            Duration::from_secs(10),
            h0_hyperbola,
        ),
        (
            "phi sector emptiness",
            Duration::from_secs(10),
            phi_emptiness,
        ),
        ("worked F0 value", Duration::from_secs(10), worked_value),
        ("Heun classifier", Duration::from_secs(10), classifier),
        ("Kratzer mapping", Duration::from_secs(10), kratzer),
    ];
    let suite = Instant::now();
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let passed = out.passed && elapsed <= *budget;
        if !passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({}; {:.3} s)",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            name,
            out.detail,
            elapsed.as_secs_f64()
        );
    }
    let total = suite.elapsed();
    println!(
        "acceptance: {}/10 passed in {:.3} s",
        10 - failed,
        total.as_secs_f64()
    );
    if failed == 0 && total <= Duration::from_secs(60) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
