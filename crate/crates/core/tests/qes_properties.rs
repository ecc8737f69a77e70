use dkp_qes::oracles::log_grid;
use dkp_qes::*;
use proptest::prelude::*;

fn algebraization(max_n: usize) -> impl Strategy<Value = Algebraization64> {
    (0..=max_n, -2.0..0.95, 0.1..3.0, 0.1..3.0, -10.0..10.0f64)
        .prop_map(|(n, eta, sa, ss, b)| Algebraization::quantized(n, eta, sa, ss, b))
}

proptest! {
    #[test]
    fn sl2_assembly_matches_direct_operator(alg in algebraization(10)) {
        let eq = operator_equivalence(&alg);
        prop_assert!(eq.holds(1e-12), "{eq:?}");
    }

    #[test]
    fn determinant_is_monic_of_degree_n_plus_one(alg in algebraization(5)) {
        // Forward differences with unit step: the (n+1)-th is (n+1)!, the
        // (n+2)-th vanishes.
        let n = alg.n;
        let mut values: Vec<f64> = (0..=n + 2)
            .map(|k| tridiagonal_determinant(&alg.with_b(alg.b + k as f64)))
            .collect();
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for _ in 0..=n {
            values = values.windows(2).map(|w| w[1] - w[0]).collect();
        }
        let factorial: f64 = (1..=n + 1).map(|k| k as f64).product();
        prop_assert!((values[0] - factorial).abs() <= 1e-9 * scale, "{values:?}");
        prop_assert!((values[1] - values[0]).abs() <= 1e-9 * scale, "{values:?}");
    }

    #[test]
    fn tail_times_pivot_product_is_determinant(alg in algebraization(8)) {
        let poly = recursion_coefficients(&alg).unwrap();
        let pivots: f64 = (0..=alg.n)
            .map(|k| 2.0 * (k as f64 + 1.0) * alg.sqrt_minus_sigma)
            .product();
        let det = tridiagonal_determinant(&alg);
        let scale = Tridiagonal::from_algebraization(&alg).row_norm_product();
        prop_assert!((poly.tail_residual * pivots - det).abs() <= 1e-10 * scale);
    }

    // Small pivots make the forward recursion lose up to eight digits, so
    // the full sample range runs in double-double.
    #[test]
    fn determinant_roots_zero_the_tail(alg in algebraization(8)) {
        let d = DoubleDouble::from;
        let alg = Algebraization::quantized(
            alg.n,
            d(alg.eta),
            d(alg.sqrt_minus_alpha),
            d(alg.sqrt_minus_sigma),
            d(alg.b),
        );
        let tol = d(1e-9);
        for b in constraint_roots_in_b(&alg) {
            let at_root = alg.with_b(b);
            prop_assert!(normalized_determinant(&at_root).vanishes(tol));
            prop_assert!(recursion_coefficients(&at_root).unwrap().is_admissible(tol));
        }
    }

    #[test]
    fn admissible_wavefunctions_peak_and_decay(alg in algebraization(4)) {
        let grid = log_grid(1e-3, 1e3, 400);
        for b in constraint_roots_in_b(&alg) {
            let at_root = alg.with_b(b);
            let poly = recursion_coefficients(&at_root).unwrap();
            let psi: Vec<f64> = grid
                .iter()
                .map(|&r| evaluate_solution(&at_root, &poly, r).unwrap().psi.abs())
                .collect();
            let (peak_index, peak) = psi
                .iter()
                .copied()
                .enumerate()
                .fold((0, 0.0), |best, (i, v)| if v > best.1 { (i, v) } else { best });
            prop_assert!(peak > 0.0);
            let r_peak = grid[peak_index];
            for (&r, &v) in grid.iter().zip(&psi) {
                if r < r_peak / 10.0 || r > 10.0 * r_peak {
                    prop_assert!(v <= peak);
                }
            }
            prop_assert!(psi[0] < 1e-6 * peak && psi[psi.len() - 1] < 1e-6 * peak);
        }
    }
}

#[test]
fn generators_close_in_exact_arithmetic() {
    for n in 0..=10 {
        assert!(commutator_audit(&build_generators::<Rational>(n)));
    }
}
