//! Randomized invariants: distribution structure, route agreement, and
//! symmetry identities over broad parameter draws.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use revspin_core::measure::{
    coefficient_magnitude_sq, expected_outcome, reversibility_condition, CoefficientSet,
};
use revspin_core::oracle::evolve;
use revspin_core::prep::{cat_state, spin_variance, CatAxis};
use revspin_core::reverse::{
    final_state, left_inverse_measurement, recovery_probability, recovery_report,
    symmetry_check, RECOVERY_FIDELITY_THRESHOLD,
};
use revspin_core::wigner::WignerMatrix;
use revspin_core::{joint_measure, measure, HalfInt, MeasurementParams, SpinState};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_6, PI};

fn arb_params(max_twice_j: i32) -> impl Strategy<Value = MeasurementParams> {
    (1..=max_twice_j, 0.02f64..1.4, 0.05f64..3.09, -3.1f64..3.1).prop_map(
        |(twice_j, g, theta, phi)| {
            MeasurementParams::new(HalfInt::from_twice(twice_j), g, theta, phi)
                .expect("ranges keep the constructor happy")
        },
    )
}

fn arb_state(max_twice_s: i32) -> impl Strategy<Value = SpinState> {
    (1..=max_twice_s)
        .prop_flat_map(|twice| {
            let dim = HalfInt::from_twice(twice).dim();
            (Just(twice), prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim))
        })
        .prop_filter_map("state norm too small", |(twice, parts)| {
            let amps: Vec<Complex64> =
                parts.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
            if amps.iter().map(|a| a.norm_sqr()).sum::<f64>() < 1e-3 {
                return None;
            }
            SpinState::normalized(HalfInt::from_twice(twice), amps).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn first_stage_statistics_form_a_distribution(
        params in arb_params(16),
        state in arb_state(6),
    ) {
        let table = measure(&state, &params);
        prop_assert!((table.total_probability() - 1.0).abs() < 1e-11);
        for outcome in table.outcomes() {
            prop_assert!(outcome.probability >= 0.0);
            if !outcome.underflow {
                prop_assert!((outcome.post.norm_sqr() - 1.0).abs() < 1e-9);
                prop_assert!(outcome.fidelity >= 0.0 && outcome.fidelity <= 1.0 + 1e-12);
            }
        }
        let defect = CoefficientSet::new(&params, state.spin())
            .expect("validated parameters")
            .completeness_defect();
        prop_assert!(defect < 1e-11);
        let mean = table.mean_outcome();
        prop_assert!((mean - expected_outcome(&state, &params)).abs() < 1e-9);
    }

    #[test]
    fn joint_statistics_are_consistent(
        params in arb_params(12),
        state in arb_state(4),
    ) {
        let joint = joint_measure(&state, &params);
        prop_assert!((joint.total_probability() - 1.0).abs() < 1e-11);
        prop_assert!(joint.diagonal_mass() <= 1.0 + 1e-12);
        let first = measure(&state, &params);
        for ((m, marginal), outcome) in joint.marginal_first().into_iter().zip(first.outcomes()) {
            prop_assert_eq!(m, outcome.m);
            prop_assert!((marginal - outcome.probability).abs() < 1e-11);
        }
    }

    #[test]
    fn magnitude_routes_agree(
        params in arb_params(16),
        twice_sigma in -5i32..=5,
    ) {
        let sigma = HalfInt::from_twice(twice_sigma);
        for m in params.j().projections() {
            let binomial = coefficient_magnitude_sq(&params, m, sigma)
                .expect("m runs over the outcome lattice");
            let complex = revspin_core::measure::coefficient_a(&params, m, sigma)
                .expect("m runs over the outcome lattice")
                .norm_sqr();
            if binomial > 1e-200 {
                prop_assert!(((complex - binomial) / binomial).abs() < 1e-10);
            } else {
                prop_assert!(complex <= 1e-190);
            }
        }
    }

    #[test]
    fn recovery_is_state_independent(
        params in arb_params(20),
        state in arb_state(1),
    ) {
        let closed = recovery_probability(&params, None).expect("spin-half closed form");
        let routed = recovery_probability(&params, Some(&state)).expect("spin-half state");
        prop_assert!((closed - routed).abs() < 1e-12);
    }

    #[test]
    fn fidelity_depends_only_on_the_outcome_sum(
        params in arb_params(12),
        state in arb_state(1),
    ) {
        let joint = joint_measure(&state, &params);
        let mut by_sum: std::collections::BTreeMap<i32, (f64, f64)> =
            std::collections::BTreeMap::new();
        for e in joint.entries() {
            if e.probability < 1e-280 {
                continue;
            }
            let slot = by_sum
                .entry(e.m.twice() + e.mp.twice())
                .or_insert((f64::INFINITY, f64::NEG_INFINITY));
            slot.0 = slot.0.min(e.fidelity);
            slot.1 = slot.1.max(e.fidelity);
        }
        for (lo, hi) in by_sum.values() {
            prop_assert!(hi - lo < 1e-11);
        }
    }

    #[test]
    fn oracle_matches_closed_form(
        params in arb_params(6),
        state in arb_state(4),
    ) {
        let joint = evolve(params.theta(), params.phi(), &state, params.j(), params.g())
            .expect("small joint dimension");
        let set = CoefficientSet::new(&params, state.spin()).expect("validated parameters");
        for (row, m) in params.j().projections().enumerate() {
            for (col, sigma) in state.spin().projections().enumerate() {
                let closed = set.table()[(row, col)] * state.amplitudes()[col];
                let brute = joint.amplitude(m, sigma).expect("on the joint grid");
                prop_assert!((closed - brute).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn rotation_matrices_stay_orthogonal(
        twice_j in 1i32..=12,
        theta in 0.0f64..PI,
    ) {
        let d = WignerMatrix::new(HalfInt::from_twice(twice_j), theta)
            .expect("theta in range");
        prop_assert!(d.orthogonality_defect() < 1e-11);
    }

    #[test]
    fn complement_identity_holds(
        params in arb_params(16),
        twice_s in 1i32..=6,
    ) {
        let dev = symmetry_check(&params, HalfInt::from_twice(twice_s))
            .expect("validated parameters");
        prop_assert!(dev.max() < 1e-11);
    }
}

#[test]
fn recovery_phase_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut accepted = 0usize;
    while accepted < 20 {
        let j = HalfInt::from_twice(rng.random_range(1..=16));
        let params = MeasurementParams::new(
            j,
            rng.random_range(0.05..1.4),
            rng.random_range(0.2..PI - 0.2),
            rng.random_range(-PI..PI),
        )
        .unwrap();
        if !reversibility_condition(&params, HalfInt::HALF).holds {
            continue;
        }
        let amps = vec![
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        ];
        if amps.iter().map(|a| a.norm_sqr()).sum::<f64>() < 1e-3 {
            continue;
        }
        let state = SpinState::normalized(HalfInt::HALF, amps).unwrap();
        accepted += 1;
        let report = recovery_report(&state, &params, RECOVERY_FIDELITY_THRESHOLD).unwrap();
        for &(m, phase) in &report.phase_per_m {
            let fs = final_state(&state, &params, m, -m).unwrap();
            if fs.probability < 1e-30 {
                continue;
            }
            assert!(
                (fs.phase - phase).norm() < 1e-9,
                "phase routes disagree at m = {m}: {} vs {}",
                fs.phase,
                phase
            );
        }
    }
}

#[test]
fn left_inverse_undoes_every_outcome_on_the_grid() {
    for twice_j in 1..=8 {
        let j = HalfInt::from_twice(twice_j);
        let params = MeasurementParams::new(j, 0.3, 1.0, 0.7).unwrap();
        for twice_s in 1..=6 {
            let s = HalfInt::from_twice(twice_s);
            let set = CoefficientSet::new(&params, s).unwrap();
            for m in j.projections() {
                let inv = left_inverse_measurement(&params, s, m, None).unwrap();
                for (col, sigma) in s.projections().enumerate() {
                    let a = set.a(m, sigma).unwrap();
                    let undone = inv.r0[col] * a;
                    assert!(
                        (undone - Complex64::new(inv.kappa, 0.0)).norm() < 1e-10,
                        "R0 T deviates from kappa at 2j = {twice_j}, 2s = {twice_s}, m = {m}"
                    );
                    let total = inv.r0[col].norm_sqr() + inv.r1[col] * inv.r1[col];
                    assert!(
                        (total - 1.0).abs() < 1e-10,
                        "branch completeness fails at 2j = {twice_j}, 2s = {twice_s}, m = {m}"
                    );
                }
            }
        }
    }
}

#[test]
fn joint_peaks_sit_near_the_predicted_pair() {
    let params = MeasurementParams::new(HalfInt::from_int(10), 0.25, FRAC_PI_6, FRAC_PI_6).unwrap();
    let state = SpinState::uniform(HalfInt::HALF).unwrap();
    let joint = joint_measure(&state, &params);
    let top = joint
        .entries()
        .iter()
        .max_by(|a, b| a.probability.total_cmp(&b.probability))
        .unwrap();
    let j = params.j().value();
    let chi_plus = revspin_core::measure::chi(HalfInt::HALF, &params);
    let chi_minus = revspin_core::measure::chi(-HalfInt::HALF, &params);
    let near_one = |pair: (f64, f64)| {
        (top.m.value() - pair.0).abs() <= 1.0 && (top.mp.value() - pair.1).abs() <= 1.0
    };
    assert!(
        near_one((-j * chi_plus, j * chi_minus)) || near_one((-j * chi_minus, j * chi_plus)),
        "argmax ({}, {}) far from both predicted peaks",
        top.m,
        top.mp
    );
}

#[test]
fn cat_variances_split_by_axis() {
    let s = HalfInt::from_int(10);
    let w = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = cat_state(CatAxis::Z, s, w, w).unwrap();
    let (z_mean, z_var) = spin_variance(&z);
    assert!(z_mean.abs() < 1e-12);
    assert!((z_var - 100.0).abs() < 1e-12);
    let x = cat_state(CatAxis::X, s, w, w).unwrap();
    let (_, x_var) = spin_variance(&x);
    assert!(x_var < s.value());
}
