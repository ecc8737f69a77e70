use dkp_qes::dkp::{closed_form, ClosedForm};
use dkp_qes::verify::random_admissible_params;
use dkp_qes::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

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

#[test]
fn f0_closed_form_matches_pipeline_on_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..200 {
        let n = i % 6;
        let (p, mass, j) = random_admissible_params(&mut rng, Sector::F0Normal, n);
        let Ok(ClosedForm::EpsilonSquared(eps2)) = closed_form(&p, Sector::F0Normal, n) else {
            panic!("no closed form for {p:?}");
        };
        let e2 = quantized_level(&p, mass, j, Sector::F0Normal, n)
            .unwrap()
            .energy_squared;
        let scale = 1f64.max(eps2.abs()).max(mass * mass);
        assert!(
            (e2 + eps2 - mass * mass).abs() <= 1e-12 * scale,
            "{p:?} n={n}"
        );
    }
}

#[test]
fn worked_example_energy() {
    let pt = energy_levels(&worked_f0(), 1.0, 0, Sector::F0Normal, 0).unwrap();
    assert!((pt.epsilon_squared.unwrap() - 0.12).abs() < 1e-12);
    assert!((pt.energy.plus().unwrap() - 0.88f64.sqrt()).abs() < 1e-12);
    assert_eq!(pt.energy.minus(), pt.energy.plus().map(|e| -e));
}

#[test]
fn h0_low_levels_match_hand_values() {
    let p = PotentialParams64::space(-0.5, 1.0, 1.0);
    let expected = [(0, 1.0 + 1.0 - 1.0 / 9.0), (1, 1.96), (2, 2.0 - 1.0 / 49.0)];
    for (n, e2) in expected {
        let e = energy_levels(&p, 1.0, 1, Sector::H0Abnormal, n)
            .unwrap()
            .energy
            .plus()
            .unwrap();
        assert!((e * e - e2).abs() < 1e-12, "n={n}: {e}");
    }
}

#[test]
fn h0_constraint_roots_match_closed_forms() {
    // n = 0, j = 0, x = −1/2, z = 1: y = 3/8.
    let p = PotentialParams64::space(-0.5, 2.0, 1.0);
    let roots = solve_determinant_constraint(
        &p,
        1.0,
        0,
        Sector::H0Abnormal,
        0,
        Parameter::Yr,
        (0.01, 5.0),
    )
    .unwrap();
    assert_eq!(roots.len(), 1);
    assert!((roots[0].value - 0.375).abs() < 1e-12);

    // n = 1, j = 1: 5.76 y² − 3.2 y − 2 = 0.
    let roots = solve_determinant_constraint(
        &p,
        1.0,
        1,
        Sector::H0Abnormal,
        1,
        Parameter::Yr,
        (0.01, 5.0),
    )
    .unwrap();
    let y = (3.2 + (3.2f64 * 3.2 + 4.0 * 5.76 * 2.0).sqrt()) / (2.0 * 5.76);
    assert!(
        roots.iter().any(|r| (r.value - y).abs() < 1e-10),
        "{roots:?}"
    );
}

#[test]
fn phi_sector_has_no_spectrum_for_positive_z() {
    let p = PotentialParams64::space(-0.25, 1.0, 0.8);
    for n in 0..=10 {
        let pt = energy_levels(&p, 1.0, 0, Sector::PhiAbnormal, n).unwrap();
        assert_eq!(pt.energy, EnergyPair::NoRealSpectrum);
    }
}

proptest! {
    #[test]
    fn h0_energies_rise_with_level(
        x in -0.99..-0.01f64,
        y in 0.1..3.0f64,
        z in 0.05..3.0f64,
        mass in 0.1..3.0f64,
    ) {
        let p = PotentialParams64::space(x, y, z);
        let energies: Vec<f64> = (0..=8)
            .map(|n| energy_levels(&p, mass, 1, Sector::H0Abnormal, n).unwrap().energy.plus().unwrap())
            .collect();
        for pair in energies.windows(2) {
            prop_assert!(pair[1] >= pair[0]);
        }
        prop_assert!(energies[0] >= mass);
    }

    #[test]
    fn constraint_roots_zero_the_recursion_tail(
        x in -1.5..-0.1f64,
        z in 0.2..2.0f64,
        n in 0usize..=4,
        j in 0u32..=2,
    ) {
        let p = PotentialParams64::space(x, 1.0, z);
        if let Ok(roots) =
            solve_determinant_constraint(&p, 1.0, j, Sector::H0Abnormal, n, Parameter::Yr, (0.1, 6.0))
        {
            for root in roots {
                let q = p.with(Parameter::Yr, root.value);
                let level = quantized_level(&q, 1.0, j, Sector::H0Abnormal, n).unwrap();
                let poly = recursion_coefficients(&level.algebraization).unwrap();
                prop_assert!(poly.is_admissible(1e-9));
                prop_assert!(eigenpair(&q, 1.0, j, Sector::H0Abnormal, n).is_ok());
            }
        }
    }

    #[test]
    fn kratzer_signs_and_round_trip(d_e in 1e-3..1e3f64, r_e in 1e-3..1e3f64) {
        let k = KratzerPhysical::new(d_e, r_e).unwrap();
        let (x, y, z) = kratzer_from_physical(&k);
        prop_assert!(x < 0.0 && y > 0.0 && z > 0.0);
        prop_assert!((x * x / (4.0 * y) - d_e).abs() <= 1e-12 * d_e);
    }
}
