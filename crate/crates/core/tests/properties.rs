use dhydro::*;
use proptest::prelude::*;

fn convention() -> impl Strategy<Value = Convention> {
    prop_oneof![Just(Convention::Gaussian4Pi), Just(Convention::SolidAngle)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_flux_is_constant(d in 1u32..=12, z in 0.1f64..10.0, conv in convention(), log_r in -3.0f64..3.0) {
        let model = PotentialModel::consistent(d, z, conv).unwrap();
        let r = 10f64.powf(log_r);
        let q = model.source_strength();
        prop_assert!((model.enclosed_flux(r).unwrap() - q).abs() <= 1e-13 * q);
    }

    #[test]
    fn potential_energy_is_minus_phi(d in 1u32..=10, z in 0.1f64..5.0, conv in convention(), r in 0.01f64..50.0) {
        let model = PotentialModel::consistent(d, z, conv).unwrap();
        prop_assert_eq!(model.potential_energy(r).unwrap(), -model.electrostatic_potential(r).unwrap());
        let newton = PotentialModel::newtonian(d, z).unwrap();
        prop_assert!((newton.potential_energy(r).unwrap() + z / r).abs() <= 1e-15 * (z / r));
    }

    #[test]
    fn potential_is_linear_in_charge(d in 1u32..=10, z in 0.1f64..5.0, conv in convention(), r in 0.01f64..50.0) {
        let one = PotentialModel::consistent(d, 1.0, conv).unwrap().potential_energy(r).unwrap();
        let many = PotentialModel::consistent(d, z, conv).unwrap().potential_energy(r).unwrap();
        prop_assert!((many - z * one).abs() <= 1e-13 * (1.0 + many.abs()));
    }

    #[test]
    fn attraction_is_monotone(d in 1u32..=10, conv in convention(), r in 0.01f64..50.0) {
        let model = PotentialModel::consistent(d, 1.0, conv).unwrap();
        prop_assert!(model.force_gradient(r).unwrap() > 0.0);
        prop_assert!(model.potential_energy(r * 1.01).unwrap() > model.potential_energy(r).unwrap());
    }

    #[test]
    fn log_cutoff_shifts_by_a_constant(r0 in 0.1f64..10.0, r in 0.01f64..50.0, z in 0.1f64..3.0) {
        let base = PotentialModel::consistent(2, z, Convention::Gaussian4Pi).unwrap();
        let moved = base.with_cutoff(r0).unwrap();
        let shift = moved.potential_energy(r).unwrap() - base.potential_energy(r).unwrap();
        prop_assert!((shift + 2.0 * z * r0.ln()).abs() <= 1e-12 * (1.0 + (z * r.ln()).abs()));
    }

    #[test]
    fn centrifugal_interdimensional_degeneracy(l in 1i64..20, d in 2i64..30) {
        prop_assert_eq!(centrifugal_coefficient(l, d).unwrap(), centrifugal_coefficient(l - 1, d + 2).unwrap());
    }

    #[test]
    fn newtonian_spectrum_depends_on_l_plus_half_d(d in 2i64..30, l in 1i64..10, n_r in 0i64..10, z in 0.1f64..5.0) {
        let a = analytic_energy_newtonian(d, l, n_r, z).unwrap();
        prop_assert_eq!(a, analytic_energy_newtonian(d + 2, l - 1, n_r, z).unwrap());
        prop_assert!(a < analytic_energy_newtonian(d, l, n_r + 1, z).unwrap());
        prop_assert!(a < 0.0);
    }

    #[test]
    fn sphere_area_recurrence(d in 1i64..40) {
        // unit sphere in R^{D+2} has 2π/D times the area of the one in R^D
        let lower = sphere_surface_area(d).unwrap();
        let upper = sphere_surface_area(d + 2).unwrap();
        prop_assert!((upper - 2.0 * std::f64::consts::PI * lower / d as f64).abs() <= 1e-13 * upper);
    }

    #[test]
    fn sturm_count_is_monotone(values in proptest::collection::vec(-50.0f64..50.0, 3..40), a in -100.0f64..100.0, b in -100.0f64..100.0) {
        let grid = GridSpec::new(0.0, 1.0, values.len()).unwrap();
        let op = TridiagonalOperator::from_potential_values(grid, &values).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(count_below(&op, lo) <= count_below(&op, hi));
        let (glo, ghi) = op.gershgorin_bounds();
        prop_assert_eq!(count_below(&op, glo - 1.0), 0);
        prop_assert_eq!(count_below(&op, ghi + 1.0), values.len());
    }

    #[test]
    fn eigenvalues_shift_with_the_operator(values in proptest::collection::vec(-5.0f64..5.0, 4..30), shift in -3.0f64..3.0) {
        let grid = GridSpec::new(0.0, 10.0, values.len()).unwrap();
        let op = TridiagonalOperator::from_potential_values(grid, &values).unwrap();
        let base = eigen_lowest(&op, 3).unwrap();
        let moved = eigen_lowest(&op.shifted(shift), 3).unwrap();
        for (x, y) in base.iter().zip(&moved) {
            prop_assert!((y - x - shift).abs() < 1e-10);
        }
        prop_assert!(base.windows(2).all(|w| w[0] < w[1]));
    }
}
