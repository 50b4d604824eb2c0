mod common;

use ergodec::direct_integral::{
    assemble_l2, assemble_lp, decompose_operator, diagonalizable, functional_calculus,
    multiplication_on_base, superpose, ChebyshevSeries, MatrixPolynomial, Polynomial,
};
use ergodec::ergodic::decompose;
use ergodec::fixtures;
use ergodec::space::{
    disintegrate_over_partition, is_separated, verify_pseudo_disintegration, Fiber, IndexSpace,
    MeasureFamily,
};
use ergodec::Error;
use nalgebra::{DMatrix, DVector};

use common::*;

#[test]
fn disintegration_reproduces_measure() {
    for seed in 0..40 {
        let form = instance(seed, 40, 6, 0.3);
        let (q, family) =
            disintegrate_over_partition(form.space(), &form.invariant_sets()).unwrap();
        assert!(verify_pseudo_disintegration(form.space(), &family).passes(1e-12));
        assert!(is_separated(&family).is_separated());
        let total: f64 = q.index().nu().iter().sum();
        assert!((total - form.space().total_mass()).abs() < 1e-12);
    }
}

#[test]
fn l2_embedding_is_unitary_for_separated_families() {
    let form = fixtures::grid();
    let (_, family) = disintegrate_over_partition(form.space(), &form.invariant_sets()).unwrap();
    let iota = assemble_l2(form.space(), &family, true).unwrap();
    assert!(iota.is_onto());
    assert_eq!(iota.rank(), form.len());
    let f = DVector::from_fn(form.len(), |i, _| (i as f64 * 0.7).cos());
    let back = iota.pullback(&iota.embed(&f)).unwrap();
    assert_eq!(back, f);
    // Gram matrix of ι in the coordinate measure equals M.
    let m = iota.matrix();
    let w = DMatrix::from_diagonal(&DVector::from_vec(iota.space().coordinate_measure()));
    let gram = m.transpose() * w * &m;
    let mu = DMatrix::from_diagonal(&DVector::from_column_slice(form.space().mu()));
    assert!(max_abs(&(gram - mu)) < 1e-14);
}

#[test]
fn overlapping_family_is_not_onto() {
    let base = ergodec::space::FiniteMeasureSpace::new(vec!["*"], vec![2.0]).unwrap();
    let fib = || Fiber {
        support: vec![0],
        weights: vec![1.0],
    };
    let family = MeasureFamily::new(
        IndexSpace::numbered(vec![1.0, 1.0]).unwrap(),
        vec![fib(), fib()],
        1,
    )
    .unwrap();
    assert!(!is_separated(&family).is_separated());
    let iota = assemble_l2(&base, &family, false).unwrap();
    assert_eq!((iota.rank(), iota.space().dim()), (1, 2));
    assert!(matches!(
        assemble_l2(&base, &family, true),
        Err(Error::NotSeparated(_))
    ));
}

#[test]
fn lp_norms_agree() {
    let form = instance(12, 30, 5, 0.0);
    let (_, family) = disintegrate_over_partition(form.space(), &form.invariant_sets()).unwrap();
    let mut r = rng(12);
    for p in [1.0, 1.5, 3.0] {
        let lp = assemble_lp(form.space(), &family, p).unwrap();
        let f = random_vector(&mut r, form.len());
        let direct: f64 = f
            .iter()
            .zip(form.space().mu())
            .map(|(v, m)| v.abs().powf(p) * m)
            .sum::<f64>()
            .powf(1.0 / p);
        assert!((lp.fibered_norm(&f) - direct).abs() < 1e-12);
    }
}

#[test]
fn superposition_of_twin_fibers() {
    let twin = fixtures::twin();
    let (_, family) = disintegrate_over_partition(twin.space(), &twin.invariant_sets()).unwrap();
    let fibers = vec![
        DMatrix::from_row_slice(2, 2, &[2.0, -2.0, -2.0, 2.0]),
        DMatrix::from_row_slice(2, 2, &[4.0, -4.0, -4.0, 4.0]),
    ];
    let sup = superpose(twin.space(), &family, fibers).unwrap();
    assert!(max_abs(&(sup.form().matrix() - twin.matrix())) < 1e-15);
    let mut r = rng(3);
    let samples: Vec<_> = (0..5).map(|_| random_vector(&mut r, 4)).collect();
    let rep = sup.equivalence_report(&samples);
    assert!(rep.form_residual < 1e-14 && rep.isomorphism_residual < 1e-14);
    assert!(rep.roundtrip_exact && rep.lattice_exact);
}

#[test]
fn diagonalizable_operators_match_multiplication() {
    let form = fixtures::grid();
    let dec = decompose(&form).unwrap();
    let q = dec.quotient();
    let g: Vec<f64> = (0..q.len()).map(|z| z as f64 + 0.5).collect();
    let space = decompose_operator(&form.semigroup(1.0).unwrap(), form.space(), q)
        .unwrap()
        .space()
        .clone();
    let d = diagonalizable(&space, &g).unwrap();
    assert_eq!(d.to_base(q).unwrap(), multiplication_on_base(q, &g));
    let t = form.semigroup(1.0).unwrap();
    let m = multiplication_on_base(q, &g);
    assert!(max_abs(&(&t * &m - &m * &t)) < 1e-14);
}

#[test]
fn functional_calculus_of_semigroup_is_semigroup() {
    // (T_1)^3 = T_3 and exp(log T_1) via Chebyshev on the spectrum.
    let form = instance(8, 20, 4, 0.3);
    let dec = decompose(&form).unwrap();
    let t1 =
        decompose_operator(&form.semigroup(1.0).unwrap(), form.space(), dec.quotient()).unwrap();
    let cube = functional_calculus(&t1, &Polynomial::new(vec![0.0, 0.0, 0.0, 1.0]));
    let t3 = form.semigroup(3.0).unwrap();
    assert!(max_abs(&(cube.to_base(dec.quotient()).unwrap() - &t3)) < 1e-12);

    let sq = ChebyshevSeries::fit(|x| x * x, 8, -1.0, 1.0);
    let t2 = functional_calculus(&t1, &sq)
        .to_base(dec.quotient())
        .unwrap();
    assert!(max_abs(&(t2 - form.semigroup(2.0).unwrap())) < 1e-12);
    assert!((sq.eval(0.3) - 0.09).abs() < 1e-14);
}

#[test]
fn coupling_operator_is_not_decomposable() {
    let twin = fixtures::twin();
    let dec = decompose(&twin).unwrap();
    let mut b = DMatrix::identity(4, 4);
    b[(0, 2)] = 1e-3;
    b[(2, 0)] = 1e-3;
    assert!(matches!(
        decompose_operator(&b, twin.space(), dec.quotient()),
        Err(Error::NotDecomposable(_))
    ));
    let p = Polynomial::from_roots(&[1.0, 2.0]);
    assert_eq!(
        p.eval_matrix(&(DMatrix::identity(2, 2) * 2.0)),
        DMatrix::zeros(2, 2)
    );
}
