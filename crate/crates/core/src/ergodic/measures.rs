//! Ergodic invariant measures and the mixture decomposition of invariant
//! measures.
//!
//! A measure `η` is invariant when `∫ T_t f dη = ∫ f dη`. Invariant densities
//! with respect to `μ` lie in `ker L`: constant on each conservative
//! component and zero on components with killing. The ergodic ones are the
//! normalized restrictions `λ_ζ = μ|_{A_ζ} / μ(A_ζ)`, and every invariant `η`
//! is the mixture `Σ η(A_ζ) λ_ζ`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::forms::{DirichletForm, DEFAULT_TOLERANCE};

/// Relative mass below which a point counts as outside a support.
const SUPPORT_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ErgodicMeasure {
    /// The component carrying the measure.
    pub support: Vec<usize>,
    /// Probability weights on all of `X`, zero off the support.
    pub weights: Vec<f64>,
}

/// The ergodic invariant probability measures, one per conservative component.
pub fn ergodic_measures(form: &DirichletForm) -> Vec<ErgodicMeasure> {
    let mu = form.space().mu();
    form.classify()
        .components
        .into_iter()
        .filter(|c| c.conservative && c.recurrent)
        .map(|c| {
            let mass: f64 = c.points.iter().map(|&x| mu[x]).sum();
            let mut weights = vec![0.0; form.len()];
            for &x in &c.points {
                weights[x] = mu[x] / mass;
            }
            ErgodicMeasure {
                support: c.points,
                weights,
            }
        })
        .collect()
}

/// `max_x |∫ T_1 e_x dη − η(x)|`, relative to `max(1, η(X))`.
pub fn measure_invariance_defect(form: &DirichletForm, eta: &[f64]) -> f64 {
    let t1 = form.semigroup(1.0).expect("t = 1");
    let e = DVector::from_column_slice(eta);
    let pushed = t1.transpose() * &e;
    let mass: f64 = eta.iter().sum();
    (pushed - e).amax() / mass.max(1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantMeasureMixture {
    pub measures: Vec<ErgodicMeasure>,
    /// `η̄(ζ) = η(A_ζ)`.
    pub weights: Vec<f64>,
}

impl InvariantMeasureMixture {
    /// `Σ η̄(ζ) λ_ζ`.
    pub fn reconstruct(&self) -> Vec<f64> {
        let n = self.measures.first().map_or(0, |m| m.weights.len());
        let mut out = vec![0.0; n];
        for (m, w) in self.measures.iter().zip(&self.weights) {
            for (o, v) in out.iter_mut().zip(&m.weights) {
                *o += w * v;
            }
        }
        out
    }

    /// `max_x |η(x) − Σ η̄(ζ) λ_ζ(x)|`.
    pub fn reconstruction_defect(&self, eta: &[f64]) -> f64 {
        let r = self.reconstruct();
        eta.iter()
            .enumerate()
            .map(|(x, v)| (v - r.get(x).copied().unwrap_or(0.0)).abs())
            .fold(0.0, f64::max)
    }
}

/// Splits an invariant measure into its ergodic components.
pub fn decompose_invariant_measure(
    form: &DirichletForm,
    eta: &[f64],
) -> Result<InvariantMeasureMixture> {
    if eta.len() != form.len() {
        return Err(Error::LengthMismatch {
            points: form.len(),
            weights: eta.len(),
        });
    }
    if let Some(i) = eta.iter().position(|&v| !(v >= 0.0 && v.is_finite())) {
        return Err(Error::NegativeMass(i));
    }
    let defect = measure_invariance_defect(form, eta);
    if defect > DEFAULT_TOLERANCE {
        return Err(Error::NotInvariant(defect));
    }
    let measures = ergodic_measures(form);
    let weights = measures
        .iter()
        .map(|m| m.support.iter().map(|&x| eta[x]).sum())
        .collect();
    Ok(InvariantMeasureMixture { measures, weights })
}

fn support(m: &[f64]) -> Vec<bool> {
    let top = m.iter().copied().fold(0.0, f64::max);
    m.iter().map(|&v| v > SUPPORT_THRESHOLD * top).collect()
}

/// `a ≪ b`: every point charged by `a` is charged by `b`.
pub fn is_absolutely_continuous(a: &[f64], b: &[f64]) -> bool {
    support(a).iter().zip(support(b)).all(|(&x, y)| !x || y)
}

/// `a ⊥ b`: the supports are disjoint.
pub fn is_mutually_singular(a: &[f64], b: &[f64]) -> bool {
    support(a).iter().zip(support(b)).all(|(&x, y)| !(x && y))
}
