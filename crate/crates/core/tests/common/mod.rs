//! Independent reference computations for the integration tests.
//!
//! Nothing here goes through the library's eigendecomposition: the
//! exponential is a scaled-and-squared Taylor series, inverses come from LU,
//! invariant sets are found by brute force over all subsets.

#![allow(dead_code)]

use ergodec::forms::DirichletForm;
use ergodec::generate::{generate, GenConfig};
use ergodec::space::FiniteMeasureSpace;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0))
}

pub fn basis(n: usize) -> Vec<DVector<f64>> {
    (0..n)
        .map(|x| DVector::from_fn(n, |i, _| if i == x { 1.0 } else { 0.0 }))
        .collect()
}

pub fn indicator(n: usize, set: &[usize]) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    for &x in set {
        v[x] = 1.0;
    }
    v
}

/// A form with random edges (each pair present with probability `p`), so
/// that the component structure is not prescribed.
pub fn random_graph_form(
    rng: &mut ChaCha8Rng,
    n: usize,
    p: f64,
    killing_prob: f64,
) -> DirichletForm {
    let mu: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..=2.0)).collect();
    let space = FiniteMeasureSpace::unlabeled(mu).unwrap();
    let mut edges = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if rng.random_bool(p) {
                edges.push((x, y, rng.random_range(0.1..=2.0)));
            }
        }
    }
    let killing: Vec<f64> = (0..n)
        .map(|_| {
            if rng.random_bool(killing_prob) {
                rng.random_range(0.1..=2.0)
            } else {
                0.0
            }
        })
        .collect();
    DirichletForm::from_edges(space, &edges, &killing).unwrap()
}

/// Instance `i` of a mixed family: even indices from the component
/// generator, odd ones random graphs.
pub fn instance(
    seed: u64,
    max_n: usize,
    max_components: usize,
    killing_prob: f64,
) -> DirichletForm {
    let mut r = rng(seed);
    let n = r.random_range(1..=max_n);
    if seed.is_multiple_of(2) {
        let components = r.random_range(1..=max_components.min(n));
        generate(GenConfig {
            seed,
            n,
            components,
            killing_prob,
            density: r.random_range(0.0..=0.5),
        })
        .unwrap()
    } else {
        let p = r.random_range(0.5..=3.0) / n as f64;
        random_graph_form(&mut r, n, p.min(1.0), killing_prob)
    }
}

/// `E(f) = ½ Σ J(x,y)(f(x)−f(y))² + Σ k(x) f(x)²` from the Beurling–Deny data.
pub fn energy_from_data(form: &DirichletForm, f: &DVector<f64>) -> f64 {
    let j = form.jump();
    let k = form.killing();
    let n = form.len();
    let mut e = 0.0;
    for x in 0..n {
        for y in 0..n {
            e += 0.5 * j[(x, y)] * (f[x] - f[y]).powi(2);
        }
        e += k[x] * f[x] * f[x];
    }
    e
}

/// `L = −M⁻¹A` assembled by hand.
pub fn generator(form: &DirichletForm) -> DMatrix<f64> {
    let mu = form.space().mu();
    DMatrix::from_fn(form.len(), form.len(), |i, j| {
        -form.matrix()[(i, j)] / mu[i]
    })
}

/// `e^M` by scaling and squaring a degree-20 Taylor polynomial.
pub fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m.iter().map(|v| v.abs()).fold(0.0, f64::max) * n as f64;
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let a = m / 2f64.powi(s);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=20 {
        term = &term * &a / k as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// `(αI − L)⁻¹` by LU.
pub fn resolvent(form: &DirichletForm, alpha: f64) -> DMatrix<f64> {
    let n = form.len();
    let m = DMatrix::<f64>::identity(n, n) * alpha - generator(form);
    m.lu().try_inverse().expect("α − L is invertible")
}

/// `E(1_A f, 1_{A^c} g) = 0` for all basis pairs across the cut.
pub fn energy_splits(form: &DirichletForm, inside: &[bool], tol: f64) -> bool {
    let n = form.len();
    let e = basis(n);
    for x in 0..n {
        for y in 0..n {
            if inside[x] && !inside[y] && form.bilinear(&e[x], &e[y]).abs() > tol {
                return false;
            }
        }
    }
    true
}

/// All invariant subsets by brute force, then the atoms of the algebra they
/// generate: two points share an atom when no invariant set separates them.
pub fn exhaustive_partition(form: &DirichletForm, tol: f64) -> Vec<Vec<usize>> {
    let n = form.len();
    let mut signature = vec![Vec::new(); n];
    for mask in 0u32..(1 << n) {
        let inside: Vec<bool> = (0..n).map(|x| mask >> x & 1 == 1).collect();
        if energy_splits(form, &inside, tol) {
            for x in 0..n {
                signature[x].push(inside[x]);
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        match blocks.iter_mut().find(|b| signature[b[0]] == signature[x]) {
            Some(b) => b.push(x),
            None => blocks.push(vec![x]),
        }
    }
    blocks
}

pub fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Nullity of `m` from its singular values.
pub fn nullity(m: &DMatrix<f64>, tol: f64) -> usize {
    m.clone()
        .singular_values()
        .iter()
        .filter(|&&s| s <= tol)
        .count()
}
