//! Ergodic decomposition of finite Dirichlet forms.
//!
//! The minimal invariant sets partition `X` into blocks `A_ζ`. With
//! `ν(ζ) = μ(A_ζ)` and `μ_ζ = μ|_{A_ζ} / ν(ζ)`, the fiber form
//! `A_ζ = A|_{A_ζ} / ν(ζ)` is the unique form on `L²(μ_ζ)` whose generator is
//! the block of `L`, and `E(f) = Σ_ζ ν(ζ) E_ζ(f|_{A_ζ})`.
//!
//! The decomposition is stated for probability spaces, so `ν` is reported
//! normalized by `μ(X)`; [`ErgodicDecomposition::raw_nu`] gives the unnormalized
//! weights that reassemble `E` itself.

mod measures;
mod weighted;

use nalgebra::{DMatrix, DVector};

use crate::direct_integral::{assemble_form, assemble_l2, DirectIntegralForm, DirectIntegralSpace};
use crate::error::{Error, Result};
use crate::forms::{CarreDuChamp, Classification, DirichletForm};
use crate::linalg::{frobenius, max_abs, principal_submatrix};
use crate::space::{disintegrate_over_partition, disintegration_along, MeasureFamily, QuotientMap};

pub use measures::{
    decompose_invariant_measure, ergodic_measures, is_absolutely_continuous, is_mutually_singular,
    measure_invariance_defect, ErgodicMeasure, InvariantMeasureMixture,
};
pub use weighted::{
    compare_projective, decompose_weighted, ProjectiveComparison, WeightedDecomposition,
};

pub const SEMIGROUP_TIMES: [f64; 3] = [0.1, 1.0, 10.0];
pub const RESOLVENT_ALPHAS: [f64; 3] = [0.5, 1.0, 10.0];

#[derive(Debug, Clone)]
pub struct ErgodicDecomposition {
    source: DirichletForm,
    quotient: QuotientMap,
    family: MeasureFamily,
    fibers: Vec<DirichletForm>,
    scale: f64,
}

/// Decomposes a Dirichlet form into irreducible fibers.
pub fn decompose(form: &DirichletForm) -> Result<ErgodicDecomposition> {
    let partition = form.invariant_sets();
    let (raw, _) = disintegrate_over_partition(form.space(), &partition)?;
    let fibers = raw
        .blocks()
        .iter()
        .zip(raw.index().nu())
        .map(|(block, &nu)| principal_submatrix(form.matrix(), block) / nu)
        .collect();
    ErgodicDecomposition::from_parts(form.clone(), &partition, fibers)
}

impl ErgodicDecomposition {
    /// Builds a decomposition from a partition and explicit fiber matrices
    /// (each on `L²(μ_ζ)`, in increasing point order within the block).
    /// Only the shape and the Markov property of the fibers are checked;
    /// [`verify`](Self::verify) measures how well they reassemble the source.
    pub fn from_parts(
        source: DirichletForm,
        partition: &[Vec<usize>],
        fiber_matrices: Vec<DMatrix<f64>>,
    ) -> Result<Self> {
        let scale = source.space().total_mass();
        let (raw, family) = disintegrate_over_partition(source.space(), partition)?;
        if fiber_matrices.len() != raw.len() {
            return Err(Error::FiberDimensionMismatch {
                fiber: fiber_matrices.len().min(raw.len()),
                expected: raw.len(),
                found: fiber_matrices.len(),
            });
        }
        let fibers = fiber_matrices
            .into_iter()
            .enumerate()
            .map(|(z, m)| {
                let space = family.fiber_space(source.space(), z)?;
                if m.nrows() != space.len() || m.ncols() != space.len() {
                    return Err(Error::FiberDimensionMismatch {
                        fiber: z,
                        expected: space.len(),
                        found: m.nrows(),
                    });
                }
                DirichletForm::from_matrix(space, m)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            quotient: raw.with_scaled_nu(1.0 / scale)?,
            family,
            fibers,
            scale,
            source,
        })
    }

    pub fn source(&self) -> &DirichletForm {
        &self.source
    }

    /// `s` with the normalized `ν`.
    pub fn quotient(&self) -> &QuotientMap {
        &self.quotient
    }

    /// The probability fibers `μ_ζ`.
    pub fn family(&self) -> &MeasureFamily {
        &self.family
    }

    pub fn fibers(&self) -> &[DirichletForm] {
        &self.fibers
    }

    pub fn len(&self) -> usize {
        self.fibers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.is_empty()
    }

    /// `μ(X)`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Normalized `ν`, a probability on `Z`.
    pub fn nu(&self) -> &[f64] {
        self.quotient.index().nu()
    }

    /// `μ(s⁻¹(ζ))`.
    pub fn raw_nu(&self) -> Vec<f64> {
        self.nu().iter().map(|v| v * self.scale).collect()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        self.quotient.blocks()
    }

    pub fn restrict(&self, f: &DVector<f64>, z: usize) -> DVector<f64> {
        self.family.fibers()[z].restrict(f)
    }

    /// `Σ_ζ μ(s⁻¹(ζ)) E_ζ(f|_ζ)`.
    pub fn reassembled_energy(&self, f: &DVector<f64>) -> f64 {
        self.fibers
            .iter()
            .zip(self.raw_nu())
            .enumerate()
            .map(|(z, (fib, nu))| nu * fib.energy(&self.restrict(f, z)))
            .sum()
    }

    /// `|E(f) − Σ ν E_ζ(f_ζ)| / (1 + E(f))`.
    pub fn reassembly_defect(&self, f: &DVector<f64>) -> f64 {
        let e = self.source.energy(f);
        (e - self.reassembled_energy(f)).abs() / (1.0 + e)
    }

    /// The fibers weighted by the unnormalized `ν`, so that ι is an isometry
    /// from `L²(μ)`.
    pub fn direct_integral_space(&self) -> Result<DirectIntegralSpace> {
        let raw = self.quotient.with_scaled_nu(self.scale)?;
        DirectIntegralSpace::from_family(
            self.source.space(),
            &disintegration_along(self.source.space(), &raw)?,
        )
    }

    pub fn direct_integral_form(&self) -> Result<DirectIntegralForm> {
        assemble_form(
            &self.direct_integral_space()?,
            self.fibers.iter().map(|f| f.matrix().clone()).collect(),
        )
    }

    /// `⊕ A_ζ ν(ζ)` placed back on `X`.
    pub fn reassembled_matrix(&self) -> DMatrix<f64> {
        let n = self.source.len();
        let mut out = DMatrix::zeros(n, n);
        for ((block, fib), nu) in self.blocks().iter().zip(&self.fibers).zip(self.raw_nu()) {
            for (a, &x) in block.iter().enumerate() {
                for (b, &y) in block.iter().enumerate() {
                    out[(x, y)] = nu * fib.matrix()[(a, b)];
                }
            }
        }
        out
    }

    /// Runs every check of the decomposition.
    pub fn verify(&self) -> Result<DecompositionResiduals> {
        verify_decomposition(self)
    }

    pub fn carre_du_champ(&self) -> CarreDecomposition<'_> {
        CarreDecomposition { dec: self }
    }

    pub fn classification(&self) -> ClassificationDecomposition {
        classification_decomposition(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionResiduals {
    /// `max_{x,y} |E(e_x, e_y) − Σ ν E_ζ(e_x|_ζ, e_y|_ζ)|`.
    pub form: f64,
    /// `max_ζ max |L_ζ − L|_{A_ζ}|`.
    pub generator: f64,
    /// `‖T_t − ⊕ T_{ζ,t}‖_F` for each entry of [`SEMIGROUP_TIMES`].
    pub semigroup: Vec<f64>,
    /// `‖G_α − ⊕ G_{ζ,α}‖_F` for each entry of [`RESOLVENT_ALPHAS`].
    pub resolvent: Vec<f64>,
    /// Relative norm defect of ι on the basis and on `1`.
    pub isometry: f64,
    pub fibers_irreducible: Vec<bool>,
    pub fibers_markovian: Vec<bool>,
    /// `max |A|`, the reference for the form residual.
    pub form_scale: f64,
}

impl DecompositionResiduals {
    /// Semigroup, resolvent and isometry residuals must be at most `tol`;
    /// form and generator residuals at most `tol · (1 + max|A|)`.
    pub fn passes(&self, tol: f64) -> bool {
        let rel = tol * (1.0 + self.form_scale);
        self.form <= rel
            && self.generator <= rel
            && self.semigroup.iter().all(|&r| r <= tol)
            && self.resolvent.iter().all(|&r| r <= tol)
            && self.isometry <= tol
            && self.fibers_irreducible.iter().all(|&b| b)
            && self.fibers_markovian.iter().all(|&b| b)
    }

    pub fn max(&self) -> f64 {
        [self.form, self.generator, self.isometry]
            .into_iter()
            .chain(self.semigroup.iter().copied())
            .chain(self.resolvent.iter().copied())
            .fold(0.0, f64::max)
    }
}

pub fn verify_decomposition(dec: &ErgodicDecomposition) -> Result<DecompositionResiduals> {
    let source = &dec.source;
    let n = source.len();
    let form = max_abs(&(source.matrix() - dec.reassembled_matrix()));

    let l = source.generator();
    let generator = dec
        .blocks()
        .iter()
        .zip(&dec.fibers)
        .map(|(block, fib)| max_abs(&(fib.generator() - principal_submatrix(&l, block))))
        .fold(0.0, f64::max);

    let direct = dec.direct_integral_form()?;
    let semigroup = SEMIGROUP_TIMES
        .iter()
        .map(|&t| {
            let blocks = direct.semigroup(t)?.to_base(&dec.quotient)?;
            Ok(frobenius(&(source.semigroup(t)? - blocks)))
        })
        .collect::<Result<_>>()?;
    let resolvent = RESOLVENT_ALPHAS
        .iter()
        .map(|&a| {
            let blocks = direct.resolvent(a)?.to_base(&dec.quotient)?;
            Ok(frobenius(&(source.resolvent(a)? - blocks)))
        })
        .collect::<Result<_>>()?;

    let raw = dec.quotient.with_scaled_nu(dec.scale)?;
    let iota = assemble_l2(
        source.space(),
        &disintegration_along(source.space(), &raw)?,
        true,
    )?;
    let mut samples: Vec<DVector<f64>> = (0..n)
        .map(|x| DVector::from_fn(n, |i, _| if i == x { 1.0 } else { 0.0 }))
        .collect();
    samples.push(DVector::from_element(n, 1.0));
    let isometry = iota.isometry_report(&samples).norm_defect;

    Ok(DecompositionResiduals {
        form,
        generator,
        semigroup,
        resolvent,
        isometry,
        fibers_irreducible: dec.fibers.iter().map(|f| f.is_irreducible()).collect(),
        fibers_markovian: dec
            .fibers
            .iter()
            .map(|f| f.quadratic().markov_check().is_markovian())
            .collect(),
        form_scale: max_abs(source.matrix()),
    })
}

/// The fiberwise carré du champ of a decomposition.
#[derive(Debug, Clone, Copy)]
pub struct CarreDecomposition<'a> {
    dec: &'a ErgodicDecomposition,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CarreReport {
    /// `max |Γ_ζ(f_ζ, g_ζ)(x) − Γ(f, g)(x)|` over fibers and points.
    pub pointwise: f64,
    /// `max |∫Γ_ζ(f_ζ) dμ_ζ − E_ζ(f_ζ)|` over killing-free fibers.
    pub integral: f64,
    /// Largest residual of the product-rule identity on a fiber.
    pub identity: f64,
    /// `max |1_{A_ζ} Γ(f, g) − Γ(1_{A_ζ} f, g)|`.
    pub invariance: f64,
}

impl CarreReport {
    pub fn max(&self) -> f64 {
        self.pointwise
            .max(self.integral)
            .max(self.identity)
            .max(self.invariance)
    }
}

/// Per-fiber carré du champ operators of `dec`.
pub fn carre_decomposition(dec: &ErgodicDecomposition) -> CarreDecomposition<'_> {
    dec.carre_du_champ()
}

impl<'a> CarreDecomposition<'a> {
    pub fn fiber(&self, z: usize) -> CarreDuChamp<'a> {
        self.dec.fibers[z].carre_du_champ()
    }

    /// `Γ_ζ` of the restrictions, one vector per fiber.
    pub fn gamma(&self, f: &DVector<f64>, g: &DVector<f64>) -> Vec<DVector<f64>> {
        (0..self.dec.len())
            .map(|z| {
                self.fiber(z)
                    .gamma(&self.dec.restrict(f, z), &self.dec.restrict(g, z))
            })
            .collect()
    }

    /// Checks on consecutive triples `(s_i, s_{i+1}, s_{i+2})` of `samples`.
    pub fn report(&self, samples: &[DVector<f64>]) -> CarreReport {
        let dec = self.dec;
        let global = dec.source.carre_du_champ();
        let n = dec.source.len();
        let mut r = CarreReport::default();
        for i in 0..samples.len() {
            let f = &samples[i];
            let g = &samples[(i + 1) % samples.len()];
            let h = &samples[(i + 2) % samples.len()];
            let whole = global.gamma(f, g);
            for (z, block) in dec.blocks().iter().enumerate() {
                let (fz, gz, hz) = (dec.restrict(f, z), dec.restrict(g, z), dec.restrict(h, z));
                let cdc = self.fiber(z);
                let local = cdc.gamma(&fz, &gz);
                for (a, &x) in block.iter().enumerate() {
                    r.pointwise = r.pointwise.max((local[a] - whole[x]).abs());
                }
                if dec.fibers[z].is_killing_free() {
                    let fiber = &dec.fibers[z];
                    let d = (cdc.integral(&fz, &fz) - fiber.energy(&fz)).abs()
                        / (1.0 + fiber.energy(&fz));
                    r.integral = r.integral.max(d);
                }
                r.identity = r.identity.max(cdc.identity_residual(&fz, &gz, &hz));

                let one =
                    DVector::from_fn(n, |x, _| if dec.quotient.s()[x] == z { 1.0 } else { 0.0 });
                let lhs = one.component_mul(&whole);
                let rhs = global.gamma(&one.component_mul(f), g);
                r.invariance = r.invariance.max((lhs - rhs).amax());
            }
        }
        r
    }
}

/// Global and per-fiber classification with the equivalences checked.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationDecomposition {
    pub global: Classification,
    pub fibers: Vec<Classification>,
    /// Global conservative / transient / recurrent flags each equal the
    /// conjunction of the fiber flags.
    pub flags_consistent: bool,
    /// Union of the recurrent fibers.
    pub conservative_part: Vec<usize>,
    /// Union of the transient fibers.
    pub dissipative_part: Vec<usize>,
    /// Agreement of the fiber split with the global one.
    pub split_consistent: bool,
}

pub fn classification_decomposition(dec: &ErgodicDecomposition) -> ClassificationDecomposition {
    let global = dec.source.classify();
    let fibers: Vec<Classification> = dec.fibers.iter().map(|f| f.classify()).collect();
    let all = |p: fn(&Classification) -> bool| fibers.iter().all(p);
    let flags_consistent = global.conservative == all(|c| c.conservative)
        && global.transient == all(|c| c.transient)
        && global.recurrent == all(|c| c.recurrent);
    let mut conservative_part = Vec::new();
    let mut dissipative_part = Vec::new();
    for (block, c) in dec.blocks().iter().zip(&fibers) {
        if c.recurrent {
            conservative_part.extend_from_slice(block);
        } else if c.transient {
            dissipative_part.extend_from_slice(block);
        }
    }
    conservative_part.sort_unstable();
    dissipative_part.sort_unstable();
    let split_consistent = conservative_part == global.conservative_part
        && dissipative_part == global.dissipative_part
        && global.exceptional.is_empty();
    ClassificationDecomposition {
        global,
        fibers,
        flags_consistent,
        conservative_part,
        dissipative_part,
        split_consistent,
    }
}
