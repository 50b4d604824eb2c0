//! Direct integrals of quadratic forms and superpositions.

use nalgebra::{DMatrix, DVector};

use super::{
    assemble_l2, field_min, field_positive_part, DecomposableOperator, DirectIntegralSpace, Field,
    L2Embedding,
};
use crate::error::{Error, Result};
use crate::forms::{BeurlingDeny, DirichletForm, MarkovCheck, MarkovViolation, QuadraticForm};
use crate::linalg::block_diagonal;
use crate::space::{FiniteMeasureSpace, MeasureFamily};

/// `Q(u, v) = Σ_ζ ν(ζ) Q_ζ(u_ζ, v_ζ)`.
#[derive(Debug, Clone)]
pub struct DirectIntegralForm {
    space: DirectIntegralSpace,
    fibers: Vec<QuadraticForm>,
}

/// Builds the direct integral of the fiber matrices, each read as a form on
/// the corresponding fiber `L²(μ_ζ)`.
pub fn assemble_form(
    space: &DirectIntegralSpace,
    fiber_matrices: Vec<DMatrix<f64>>,
) -> Result<DirectIntegralForm> {
    if fiber_matrices.len() != space.fibers().len() {
        return Err(Error::FiberDimensionMismatch {
            fiber: fiber_matrices.len().min(space.fibers().len()),
            expected: space.fibers().len(),
            found: fiber_matrices.len(),
        });
    }
    let fibers = fiber_matrices
        .into_iter()
        .zip(space.fibers())
        .enumerate()
        .map(|(z, (m, fib))| {
            if m.nrows() != fib.len() || m.ncols() != fib.len() {
                return Err(Error::FiberDimensionMismatch {
                    fiber: z,
                    expected: fib.len(),
                    found: m.nrows(),
                });
            }
            QuadraticForm::new(fib.clone(), m)
        })
        .collect::<Result<_>>()?;
    Ok(DirectIntegralForm {
        space: space.clone(),
        fibers,
    })
}

impl DirectIntegralForm {
    pub fn space(&self) -> &DirectIntegralSpace {
        &self.space
    }

    pub fn fibers(&self) -> &[QuadraticForm] {
        &self.fibers
    }

    pub fn bilinear(&self, u: &Field, v: &Field) -> f64 {
        self.fibers
            .iter()
            .zip(self.space.index().nu())
            .zip(u.iter().zip(v))
            .map(|((q, nu), (a, b))| nu * q.bilinear(a, b))
            .sum()
    }

    pub fn energy(&self, u: &Field) -> f64 {
        self.bilinear(u, u)
    }

    /// The assembled form on the flattened coordinates: matrix `⊕ ν(ζ) A_ζ`
    /// over the measure `⊕ ν(ζ) μ_ζ`.
    pub fn global_form(&self) -> Result<QuadraticForm> {
        let blocks: Vec<DMatrix<f64>> = self
            .fibers
            .iter()
            .zip(self.space.index().nu())
            .map(|(q, nu)| q.matrix() * *nu)
            .collect();
        QuadraticForm::new(self.space.coordinate_space()?, block_diagonal(&blocks))
    }

    /// Markovian iff every fiber is; a bad fiber's witness is lifted by zero
    /// extension, which scales both energies by `ν(ζ)`.
    pub fn markov_check(&self) -> MarkovCheck {
        let dims = self.space.fiber_dims();
        let mut jumps = Vec::new();
        let mut killing = Vec::new();
        let mut off = 0;
        for (z, q) in self.fibers.iter().enumerate() {
            let nu = self.space.index().nu()[z];
            match q.markov_check() {
                MarkovCheck::Violated(v) => {
                    let mut witness = DVector::zeros(self.space.dim());
                    witness.rows_mut(off, dims[z]).copy_from(&v.witness);
                    return MarkovCheck::Violated(MarkovViolation {
                        witness,
                        energy: nu * v.energy,
                        contracted_energy: nu * v.contracted_energy,
                    });
                }
                MarkovCheck::Markovian(bd) => {
                    jumps.push(bd.jump * nu);
                    killing.extend(bd.killing.iter().map(|k| k * nu));
                }
            }
            off += dims[z];
        }
        MarkovCheck::Markovian(BeurlingDeny {
            jump: block_diagonal(&jumps),
            killing: DVector::from_vec(killing),
        })
    }

    pub fn fiber_dirichlet_forms(&self) -> Result<Vec<DirichletForm>> {
        self.fibers
            .iter()
            .map(|q| q.clone().into_dirichlet())
            .collect()
    }

    /// `⊕ T_{ζ,t}`.
    pub fn semigroup(&self, t: f64) -> Result<DecomposableOperator> {
        let blocks = self
            .fiber_dirichlet_forms()?
            .iter()
            .map(|f| f.semigroup(t))
            .collect::<Result<_>>()?;
        DecomposableOperator::new(self.space.clone(), blocks)
    }

    /// `⊕ G_{ζ,α}`.
    pub fn resolvent(&self, alpha: f64) -> Result<DecomposableOperator> {
        let blocks = self
            .fiber_dirichlet_forms()?
            .iter()
            .map(|f| f.resolvent(alpha))
            .collect::<Result<_>>()?;
        DecomposableOperator::new(self.space.clone(), blocks)
    }
}

/// A superposition `ℰ(f) = Σ_ζ ν(ζ) E_ζ(f|_ζ)` on functions over the base
/// space, together with the direct-integral form it should be isomorphic to.
#[derive(Debug, Clone)]
pub struct Superposition {
    form: QuadraticForm,
    direct: DirectIntegralForm,
    iota: L2Embedding,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionReport {
    /// max `|ℰ(f) − Q(ιf)| / (1 + ℰ(f))`.
    pub form_residual: f64,
    /// max `|ℰ₁(f) − Q₁(ιf)| / (1 + ℰ₁(f))`, ℰ₁ = ℰ + ‖·‖².
    pub isomorphism_residual: f64,
    /// `ι⁻¹ ∘ ι = id` on the samples, bit for bit.
    pub roundtrip_exact: bool,
    pub lattice_exact: bool,
}

/// Requires a separated family.
pub fn superpose(
    base: &FiniteMeasureSpace,
    family: &MeasureFamily,
    fiber_matrices: Vec<DMatrix<f64>>,
) -> Result<Superposition> {
    let iota = assemble_l2(base, family, true)?;
    let direct = assemble_form(iota.space(), fiber_matrices)?;
    let n = base.len();
    let mut m = DMatrix::zeros(n, n);
    for ((fib, q), nu) in family
        .fibers()
        .iter()
        .zip(direct.fibers())
        .zip(family.index().nu())
    {
        for (a, &x) in fib.support.iter().enumerate() {
            for (b, &y) in fib.support.iter().enumerate() {
                m[(x, y)] += nu * q.matrix()[(a, b)];
            }
        }
    }
    Ok(Superposition {
        form: QuadraticForm::new(base.clone(), m)?,
        direct,
        iota,
    })
}

impl Superposition {
    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn direct_integral(&self) -> &DirectIntegralForm {
        &self.direct
    }

    pub fn embedding(&self) -> &L2Embedding {
        &self.iota
    }

    pub fn energy(&self, f: &DVector<f64>) -> f64 {
        self.form.energy(f)
    }

    pub fn equivalence_report(&self, samples: &[DVector<f64>]) -> SuperpositionReport {
        let base = self.iota.base();
        let hspace = self.iota.space();
        let mut form_residual: f64 = 0.0;
        let mut isomorphism_residual: f64 = 0.0;
        let mut roundtrip_exact = true;
        let mut lattice_exact = true;
        for (i, f) in samples.iter().enumerate() {
            let u = self.iota.embed(f);
            let e = self.form.energy(f);
            let q = self.direct.energy(&u);
            form_residual = form_residual.max((e - q).abs() / (1.0 + e.abs()));
            let e1 = e + base.norm(f).powi(2);
            let q1 = q + hspace.norm(&u).powi(2);
            isomorphism_residual = isomorphism_residual.max((e1 - q1).abs() / (1.0 + e1.abs()));
            roundtrip_exact &= self.iota.pullback(&u).map(|g| &g == f).unwrap_or(false);
            lattice_exact &= self.iota.embed(&f.map(|x| x.max(0.0))) == field_positive_part(&u);
            if let Some(g) = samples.get(i + 1) {
                lattice_exact &=
                    self.iota.embed(&f.zip_map(g, f64::min)) == field_min(&u, &self.iota.embed(g));
            }
        }
        SuperpositionReport {
            form_residual,
            isomorphism_residual,
            roundtrip_exact,
            lattice_exact,
        }
    }
}
