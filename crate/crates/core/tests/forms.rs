mod common;

use ergodec::fixtures;
use ergodec::forms::{is_markovian, DirichletForm, QuadraticForm};
use ergodec::space::FiniteMeasureSpace;
use ergodec::Error;
use nalgebra::{DMatrix, DVector};

use common::*;

#[test]
fn energy_agrees_with_beurling_deny_data() {
    for seed in 0..50 {
        let form = instance(seed, 30, 5, 0.4);
        let mut r = rng(seed);
        for _ in 0..5 {
            let f = random_vector(&mut r, form.len());
            let e = energy_from_data(&form, &f);
            assert!(
                (form.energy(&f) - e).abs() <= 1e-12 * (1.0 + e),
                "seed {seed}"
            );
        }
    }
}

#[test]
fn semigroup_matches_taylor_exponential() {
    for seed in 0..30 {
        let form = instance(seed, 25, 4, 0.3);
        let l = generator(&form);
        for t in [0.05, 1.0, 7.0] {
            let d = frobenius(&(form.semigroup(t).unwrap() - expm(&(&l * t))));
            assert!(d <= 1e-9, "seed {seed}, t {t}: {d:e}");
        }
    }
}

#[test]
fn resolvent_matches_lu_inverse() {
    for seed in 0..30 {
        let form = instance(seed, 25, 4, 0.3);
        for alpha in [0.1, 1.0, 50.0] {
            let d = frobenius(&(form.resolvent(alpha).unwrap() - resolvent(&form, alpha)));
            assert!(d <= 1e-10, "seed {seed}, alpha {alpha}: {d:e}");
        }
    }
}

#[test]
fn edge_semigroup_closed_form() {
    // L = [[-1, 1], [1, -1]] has T_t = ½(1 + e^{-2t}) on the diagonal.
    let edge = fixtures::edge();
    for t in [0.0, 0.3, 2.0] {
        let p = edge.semigroup(t).unwrap();
        let d = 0.5 * (1.0 + (-2.0 * t).exp());
        assert!((p[(0, 0)] - d).abs() < 1e-14);
        assert!((p[(0, 1)] - (1.0 - d)).abs() < 1e-14);
    }
    assert!(matches!(edge.semigroup(-1.0), Err(Error::NegativeTime(_))));
    assert!(matches!(
        edge.resolvent(0.0),
        Err(Error::NonPositiveAlpha(_))
    ));
}

#[test]
fn kill_decays() {
    let kill = fixtures::kill();
    let one = DVector::from_element(2, 1.0);
    let mut prev = 1.0;
    for t in [1.0, 5.0, 20.0] {
        let sup = (kill.semigroup(t).unwrap() * &one).amax();
        assert!(sup < prev);
        prev = sup;
    }
    assert!((kill.semigroup(60.0).unwrap() * &one).amax() < 1e-8);
}

#[test]
fn markov_property_rejects_positive_off_diagonal() {
    let space = FiniteMeasureSpace::unlabeled(vec![1.0, 1.0]).unwrap();
    let q = QuadraticForm::new(
        space.clone(),
        DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]),
    )
    .unwrap();
    assert!(!is_markovian(&q).is_markovian());
    assert!(matches!(
        DirichletForm::from_matrix(space, DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0])),
        Err(Error::NotMarkovian(_))
    ));
}

#[test]
fn invariant_sets_match_brute_force() {
    for seed in 0..100 {
        let form = instance(seed, 11, 4, 0.3);
        assert_eq!(
            exhaustive_partition(&form, 1e-10 * form.scale()),
            form.invariant_sets(),
            "seed {seed}"
        );
    }
}

#[test]
fn indicators_of_components_are_harmonic_without_killing() {
    for seed in 0..40 {
        let form = instance(seed, 30, 6, 0.0);
        let l = generator(&form);
        for block in form.invariant_sets() {
            let v = indicator(form.len(), &block);
            assert!((&l * v).amax() <= 1e-12 * (1.0 + max_abs(&l)));
        }
    }
}

#[test]
fn yosida_form_increases_to_energy() {
    let form = fixtures::grid();
    let f = DVector::from_fn(form.len(), |i, _| (i as f64).sin());
    let e = form.energy(&f);
    let mut prev = 0.0;
    for beta in [0.1, 1.0, 10.0, 1e3, 1e6] {
        let q = form.yosida_form(beta).unwrap().energy(&f);
        assert!(q >= prev && q <= e + 1e-12);
        prev = q;
    }
    assert!((e - prev).abs() <= form.lambda_max() * e / 1e6 + 1e-12);
}

#[test]
fn girsanov_keeps_components_and_conservativeness() {
    for seed in 0..30 {
        let form = instance(seed, 20, 4, 0.0);
        let mut r = rng(seed);
        let phi: Vec<f64> = (0..form.len())
            .map(|_| 0.5 + random_vector(&mut r, 1)[0].abs())
            .collect();
        let t = form.girsanov_transform(&phi).unwrap();
        assert_eq!(t.invariant_sets(), form.invariant_sets());
        assert!(t.energy(&DVector::from_element(form.len(), 1.0)).abs() <= 1e-12);
        let mu_phi: Vec<f64> = (0..form.len())
            .map(|i| phi[i] * phi[i] * form.space().mu()[i])
            .collect();
        assert_eq!(t.space().mu(), &mu_phi[..]);
    }
    assert!(matches!(
        fixtures::kill().girsanov_transform(&[1.0, 1.0]),
        Err(Error::HasKilling)
    ));
}
