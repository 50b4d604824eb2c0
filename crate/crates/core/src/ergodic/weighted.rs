//! Weighted decomposition through a Girsanov transform, and its projective
//! uniqueness.
//!
//! For a positive density `φ` with `‖φ‖_{L²(μ)} = 1`, the transformed form
//! `E^φ` lives on the probability space `(X, φ²μ)` and has the same invariant
//! sets as `E`. Its decomposition gives `ν_φ` and fibers `μ_ζ^{(φ)}`; lifting by
//! `φ⁻²` yields `μ_ζ^{[φ]} = μ|_{A_ζ} / ν_φ(ζ)`. The lifted fiber form is the
//! source energy density integrated against `μ_ζ^{[φ]}`, which for a jump form
//! is `A|_{A_ζ} / ν_φ(ζ)`, so that `E = Σ ν_φ(ζ) E_ζ^{[φ]}`.
//!
//! Two densities give the same partition, and the lifted data differ only by
//! `g = ν_ψ / ν_φ`: `μ_ζ^{[φ]} = g(ζ) μ_ζ^{[ψ]}` and `E_ζ^{[φ]} = g(ζ) E_ζ^{[ψ]}`.

use nalgebra::{DMatrix, DVector};

use super::{decompose, ErgodicDecomposition};
use crate::error::{Error, Result};
use crate::forms::DirichletForm;
use crate::linalg::{max_abs, principal_submatrix};

#[derive(Debug, Clone)]
pub struct WeightedDecomposition {
    phi: Vec<f64>,
    base: ErgodicDecomposition,
    lifted_measures: Vec<Vec<f64>>,
    lifted: Vec<DirichletForm>,
    partition_matches: bool,
}

/// Decomposes `form` through `E^φ`, with `φ` normalized in `L²(μ)` first.
pub fn decompose_weighted(form: &DirichletForm, phi: &[f64]) -> Result<WeightedDecomposition> {
    if phi.len() != form.len() {
        return Err(Error::LengthMismatch {
            points: form.len(),
            weights: phi.len(),
        });
    }
    if let Some(i) = phi.iter().position(|&p| !(p > 0.0 && p.is_finite())) {
        return Err(Error::NonPositivePhi(i));
    }
    let norm = form.space().norm(&DVector::from_column_slice(phi));
    let phi: Vec<f64> = phi.iter().map(|p| p / norm).collect();
    let transformed = form.girsanov_transform(&phi)?;
    let base = decompose(&transformed)?;
    let partition_matches = base.blocks() == form.invariant_sets().as_slice();

    let nu_phi = base.raw_nu();
    let mut lifted_measures = Vec::with_capacity(base.len());
    let mut lifted = Vec::with_capacity(base.len());
    for (block, &nu) in base.blocks().iter().zip(&nu_phi) {
        let weights: Vec<f64> = block.iter().map(|&x| form.space().mu()[x] / nu).collect();
        let space = form.space().subspace(block, weights.clone())?;
        lifted.push(DirichletForm::from_matrix(
            space,
            principal_submatrix(form.matrix(), block) / nu,
        )?);
        lifted_measures.push(weights);
    }
    Ok(WeightedDecomposition {
        phi,
        base,
        lifted_measures,
        lifted,
        partition_matches,
    })
}

impl WeightedDecomposition {
    /// The normalized density.
    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// Decomposition of `E^φ` on `L²(φ²μ)`.
    pub fn base(&self) -> &ErgodicDecomposition {
        &self.base
    }

    /// `ν_φ`, the pushforward of `φ²μ`.
    pub fn nu(&self) -> Vec<f64> {
        self.base.raw_nu()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        self.base.blocks()
    }

    /// `μ_ζ^{(φ)}`, the probability fibers of `φ²μ`.
    pub fn transformed_measures(&self) -> Vec<Vec<f64>> {
        self.base
            .family()
            .fibers()
            .iter()
            .map(|f| f.weights.clone())
            .collect()
    }

    /// `μ_ζ^{[φ]} = φ⁻² μ_ζ^{(φ)}`.
    pub fn lifted_measures(&self) -> &[Vec<f64>] {
        &self.lifted_measures
    }

    /// `E_ζ^{[φ]}` on `L²(μ_ζ^{[φ]})`.
    pub fn lifted_forms(&self) -> &[DirichletForm] {
        &self.lifted
    }

    /// Whether `E^φ` has the same invariant sets as the source form.
    pub fn partition_matches(&self) -> bool {
        self.partition_matches
    }

    /// `Σ ν_φ(ζ) E_ζ^{[φ]}(f|_ζ)`.
    pub fn reassembled_energy(&self, f: &DVector<f64>) -> f64 {
        self.lifted
            .iter()
            .zip(self.nu())
            .enumerate()
            .map(|(z, (e, nu))| nu * e.energy(&self.base.restrict(f, z)))
            .sum()
    }

    /// `|E(f) − Σ ν_φ E_ζ^{[φ]}(f_ζ)| / (1 + E(f))` against `source`.
    pub fn reassembly_defect(&self, source: &DirichletForm, f: &DVector<f64>) -> f64 {
        let e = source.energy(f);
        (e - self.reassembled_energy(f)).abs() / (1.0 + e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveComparison {
    /// `g = ν_ψ / ν_φ`.
    pub density: Vec<f64>,
    /// `max_ζ ‖μ_ζ^{[φ]} − g(ζ) μ_ζ^{[ψ]}‖_∞`.
    pub measure_defect: f64,
    /// `max_ζ max |A_ζ^{[φ]} − g(ζ) A_ζ^{[ψ]}|`, relative to `1 + max|A_ζ^{[φ]}|`.
    pub form_defect: f64,
}

impl ProjectiveComparison {
    pub fn defect(&self) -> f64 {
        self.measure_defect.max(self.form_defect)
    }
}

/// Compares two weighted decompositions of the same form.
pub fn compare_projective(
    a: &WeightedDecomposition,
    b: &WeightedDecomposition,
) -> Result<ProjectiveComparison> {
    if a.blocks() != b.blocks() {
        return Err(Error::PartitionMismatch);
    }
    let density: Vec<f64> = b.nu().iter().zip(a.nu()).map(|(p, q)| p / q).collect();
    let mut measure_defect: f64 = 0.0;
    let mut form_defect: f64 = 0.0;
    for (z, &g) in density.iter().enumerate() {
        for (m, n) in a.lifted_measures[z].iter().zip(&b.lifted_measures[z]) {
            measure_defect = measure_defect.max((m - g * n).abs());
        }
        let ma: &DMatrix<f64> = a.lifted[z].matrix();
        let mb: &DMatrix<f64> = b.lifted[z].matrix();
        form_defect = form_defect.max(max_abs(&(ma - mb * g)) / (1.0 + max_abs(ma)));
    }
    Ok(ProjectiveComparison {
        density,
        measure_defect,
        form_defect,
    })
}
