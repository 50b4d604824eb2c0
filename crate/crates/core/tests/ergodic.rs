mod common;

use ergodec::ergodic::{
    decompose, decompose_invariant_measure, decompose_weighted, ergodic_measures,
    measure_invariance_defect, verify_decomposition,
};
use ergodec::fixtures;
use ergodec::Error;
use nalgebra::DVector;

use common::*;

#[test]
fn fiber_generators_are_blocks_of_generator() {
    for seed in 0..40 {
        let form = instance(seed, 40, 6, 0.3);
        let dec = decompose(&form).unwrap();
        let l = generator(&form);
        for (block, fiber) in dec.blocks().iter().zip(dec.fibers()) {
            let lf = generator(fiber);
            for (a, &x) in block.iter().enumerate() {
                for (b, &y) in block.iter().enumerate() {
                    assert!((lf[(a, b)] - l[(x, y)]).abs() <= 1e-12 * (1.0 + l[(x, y)].abs()));
                }
            }
        }
    }
}

#[test]
fn fiber_measures_are_probabilities_and_nu_sums_to_one() {
    for seed in 0..40 {
        let form = instance(seed, 40, 6, 0.3);
        let dec = decompose(&form).unwrap();
        assert!((dec.nu().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (fiber, (&nu, &raw)) in dec.fibers().iter().zip(dec.nu().iter().zip(&dec.raw_nu())) {
            assert!((fiber.space().total_mass() - 1.0).abs() < 1e-12);
            assert!((raw - nu * dec.scale()).abs() < 1e-12 * dec.scale());
        }
    }
}

#[test]
fn verification_passes_on_random_instances() {
    for seed in 0..60 {
        let form = instance(seed, 50, 8, 0.3);
        let r = verify_decomposition(&decompose(&form).unwrap()).unwrap();
        assert!(r.passes(1e-10), "seed {seed}: {r:?}");
    }
}

#[test]
fn irreducible_form_has_one_fiber() {
    let dec = decompose(&fixtures::edge()).unwrap();
    assert_eq!(dec.len(), 1);
    assert_eq!(dec.nu(), vec![1.0]);
}

#[test]
fn weighted_decomposition_pushforward() {
    let form = instance(4, 30, 5, 0.0);
    let phi: Vec<f64> = (0..form.len()).map(|i| 1.0 + (i % 3) as f64).collect();
    let w = decompose_weighted(&form, &phi).unwrap();
    let mu = form.space().mu();
    let total: f64 = phi.iter().zip(mu).map(|(p, m)| p * p * m).sum();
    for (block, nu) in w.blocks().iter().zip(w.nu()) {
        let mass: f64 = block.iter().map(|&x| phi[x] * phi[x] * mu[x]).sum();
        assert!((nu - mass / total).abs() < 1e-12);
    }
    let mut r = rng(4);
    let f = random_vector(&mut r, form.len());
    assert!(w.reassembly_defect(&form, &f) < 1e-10);
    assert!(matches!(
        decompose_weighted(&form, &vec![0.0; form.len()]),
        Err(Error::NonPositivePhi(0))
    ));
}

#[test]
fn ergodic_measures_span_invariant_measures() {
    for seed in 0..40 {
        let form = instance(seed, 30, 6, 0.3);
        let ms = ergodic_measures(&form);
        let free = form
            .invariant_sets()
            .iter()
            .filter(|b| b.iter().all(|&x| form.killing()[x] == 0.0))
            .count();
        assert_eq!(ms.len(), free);
        let l = generator(&form);
        assert_eq!(nullity(&l, 1e-9 * (1.0 + max_abs(&l))), free, "seed {seed}");
        for m in &ms {
            assert!((m.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(measure_invariance_defect(&form, &m.weights) < 1e-12);
            let lam = DVector::from_column_slice(&m.weights);
            assert!((l.transpose() * lam).amax() <= 1e-10 * (1.0 + max_abs(&l)));
        }
    }
}

#[test]
fn non_invariant_measure_rejected() {
    let twin = fixtures::twin();
    assert!(matches!(
        decompose_invariant_measure(&twin, &[1.0, 0.0, 0.0, 0.0]),
        Err(Error::NotInvariant(_))
    ));
    assert!(matches!(
        decompose_invariant_measure(&twin, &[1.0, 1.0, -1.0, -1.0]),
        Err(Error::NegativeMass(_))
    ));
    let mix = decompose_invariant_measure(&twin, &[1.0, 1.0, 3.0, 3.0]).unwrap();
    assert_eq!(mix.weights, vec![2.0, 6.0]);
}
