//! Direct integrals over a finite index space.
//!
//! With `Z` finite and every fiber finite-dimensional, a direct integral is a
//! ν-weighted direct sum: a field `u = (u_ζ)_ζ` has
//! `‖u‖² = Σ_ζ ν(ζ) ‖u_ζ‖²_{L²(μ_ζ)}`. Every field is measurable, so the
//! space of measurable fields is the full product of the fibers.
//!
//! The embedding `ι: L²(μ) → H` restricts a function to each fiber support.
//! It is an isometry for any pseudo-disintegration and is onto exactly when
//! the fiber supports are pairwise disjoint.

pub mod form;
pub mod operator;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::space::{is_separated, FiniteMeasureSpace, IndexSpace, MeasureFamily};

pub use form::{assemble_form, superpose, DirectIntegralForm, Superposition, SuperpositionReport};
pub use operator::{
    commutes_with_diagonalizables, decompose_operator, diagonalizable, functional_calculus,
    multiplication_on_base, ChebyshevSeries, Commutation, DecomposableOperator, MatrixPolynomial,
    Polynomial,
};

/// A vector field over the index space: one vector per fiber.
pub type Field = Vec<DVector<f64>>;

/// The fibers `L²(μ_ζ)` weighted by `ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectIntegralSpace {
    index: IndexSpace,
    fibers: Vec<FiniteMeasureSpace>,
}

impl DirectIntegralSpace {
    pub fn new(index: IndexSpace, fibers: Vec<FiniteMeasureSpace>) -> Result<Self> {
        if index.len() != fibers.len() {
            return Err(Error::LengthMismatch {
                points: index.len(),
                weights: fibers.len(),
            });
        }
        Ok(Self { index, fibers })
    }

    pub fn from_family(base: &FiniteMeasureSpace, family: &MeasureFamily) -> Result<Self> {
        let fibers = (0..family.index().len())
            .map(|z| family.fiber_space(base, z))
            .collect::<Result<_>>()?;
        Self::new(family.index().clone(), fibers)
    }

    pub fn index(&self) -> &IndexSpace {
        &self.index
    }

    pub fn fibers(&self) -> &[FiniteMeasureSpace] {
        &self.fibers
    }

    pub fn fiber_dims(&self) -> Vec<usize> {
        self.fibers.iter().map(|f| f.len()).collect()
    }

    /// Total dimension `Σ_ζ dim L²(μ_ζ)`.
    pub fn dim(&self) -> usize {
        self.fibers.iter().map(|f| f.len()).sum()
    }

    pub fn zero_field(&self) -> Field {
        self.fibers
            .iter()
            .map(|f| DVector::zeros(f.len()))
            .collect()
    }

    pub fn inner(&self, u: &Field, v: &Field) -> f64 {
        self.fibers
            .iter()
            .zip(self.index.nu())
            .zip(u.iter().zip(v))
            .map(|((fib, nu), (a, b))| nu * fib.inner(a, b))
            .sum()
    }

    pub fn norm(&self, u: &Field) -> f64 {
        self.inner(u, u).sqrt()
    }

    /// Lᵖ norm `(Σ_ζ ν(ζ) ‖u_ζ‖ᵖ_{Lᵖ(μ_ζ)})^{1/p}`.
    pub fn lp_norm(&self, u: &Field, p: f64) -> f64 {
        self.fibers
            .iter()
            .zip(self.index.nu())
            .zip(u)
            .map(|((fib, nu), a)| nu * lp_sum(fib.mu(), a, p))
            .sum::<f64>()
            .powf(1.0 / p)
    }

    /// Concatenates a field fiber by fiber (ι-coordinates).
    pub fn flatten(&self, u: &Field) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim());
        let mut off = 0;
        for a in u {
            out.rows_mut(off, a.len()).copy_from(a);
            off += a.len();
        }
        out
    }

    pub fn unflatten(&self, v: &DVector<f64>) -> Field {
        let mut off = 0;
        self.fibers
            .iter()
            .map(|f| {
                let part = v.rows(off, f.len()).into_owned();
                off += f.len();
                part
            })
            .collect()
    }

    /// The measure `ν(ζ) μ_ζ` on the flattened coordinates.
    pub fn coordinate_measure(&self) -> Vec<f64> {
        self.fibers
            .iter()
            .zip(self.index.nu())
            .flat_map(|(f, nu)| f.mu().iter().map(move |m| nu * m))
            .collect()
    }

    /// The flattened coordinates as a measure space; labels are `ζ:x`.
    pub fn coordinate_space(&self) -> Result<FiniteMeasureSpace> {
        let labels = self
            .fibers
            .iter()
            .zip(self.index.labels())
            .flat_map(|(f, z)| f.points().iter().map(move |p| format!("{z}:{p}")))
            .collect();
        FiniteMeasureSpace::new(labels, self.coordinate_measure())
    }
}

fn lp_sum(mu: &[f64], f: &DVector<f64>, p: f64) -> f64 {
    f.iter().zip(mu).map(|(v, m)| m * v.abs().powf(p)).sum()
}

/// Pointwise minimum of two fields.
pub fn field_min(u: &Field, v: &Field) -> Field {
    u.iter()
        .zip(v)
        .map(|(a, b)| a.zip_map(b, f64::min))
        .collect()
}

/// Pointwise positive part of a field.
pub fn field_positive_part(u: &Field) -> Field {
    u.iter().map(|a| a.map(|x| x.max(0.0))).collect()
}

/// The diagonal embedding ι of L²(μ) into the direct integral of a family.
#[derive(Debug, Clone)]
pub struct L2Embedding {
    base: FiniteMeasureSpace,
    family: MeasureFamily,
    space: DirectIntegralSpace,
    separated: bool,
}

/// Builds ι for `family`. With `require_unitary`, a non-separated family is
/// rejected; otherwise ι is returned and is isometric but not onto.
pub fn assemble_l2(
    base: &FiniteMeasureSpace,
    family: &MeasureFamily,
    require_unitary: bool,
) -> Result<L2Embedding> {
    let separation = is_separated(family);
    if let crate::space::Separation::Overlap { point, .. } = separation {
        if require_unitary {
            return Err(Error::NotSeparated(base.points()[point].clone()));
        }
    }
    Ok(L2Embedding {
        base: base.clone(),
        family: family.clone(),
        space: DirectIntegralSpace::from_family(base, family)?,
        separated: separation.is_separated(),
    })
}

impl L2Embedding {
    pub fn space(&self) -> &DirectIntegralSpace {
        &self.space
    }

    pub fn base(&self) -> &FiniteMeasureSpace {
        &self.base
    }

    pub fn is_separated(&self) -> bool {
        self.separated
    }

    /// `ι(f)_ζ = f` restricted to the support of `μ_ζ`. Every function on a
    /// finite space is square-integrable, so the zero fallback of the
    /// diagonal embedding never triggers.
    pub fn embed(&self, f: &DVector<f64>) -> Field {
        self.family
            .fibers()
            .iter()
            .map(|fib| fib.restrict(f))
            .collect()
    }

    /// ι⁻¹ on a separated family covering every point.
    pub fn pullback(&self, u: &Field) -> Result<DVector<f64>> {
        if !self.separated {
            return Err(Error::NotSeparated(String::from("family overlaps")));
        }
        let mut f = DVector::zeros(self.base.len());
        let mut covered = vec![false; self.base.len()];
        for (fib, a) in self.family.fibers().iter().zip(u) {
            for (k, &x) in fib.support.iter().enumerate() {
                f[x] = a[k];
                covered[x] = true;
            }
        }
        if let Some(x) = covered.iter().position(|c| !c) {
            return Err(Error::NotAPartition(format!(
                "point {:?} lies in no fiber",
                self.base.points()[x]
            )));
        }
        Ok(f)
    }

    /// ι as a `dim H × n` matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.space.dim(), self.base.len());
        let mut row = 0;
        for fib in self.family.fibers() {
            for &x in &fib.support {
                m[(row, x)] = 1.0;
                row += 1;
            }
        }
        m
    }

    /// Dimension of the image of ι.
    pub fn rank(&self) -> usize {
        let m = self.matrix();
        if m.is_empty() {
            return 0;
        }
        m.singular_values().iter().filter(|&&s| s > 1e-12).count()
    }

    pub fn is_onto(&self) -> bool {
        self.rank() == self.space.dim()
    }

    /// Norm and lattice checks on the sample functions.
    pub fn isometry_report(&self, samples: &[DVector<f64>]) -> IsometryReport {
        isometry_report(&self.base, &self.space, samples, 2.0, |f| self.embed(f))
    }
}

/// Lᵖ version of ι on a separated family.
#[derive(Debug, Clone)]
pub struct LpEmbedding {
    inner: L2Embedding,
    p: f64,
}

pub fn assemble_lp(
    base: &FiniteMeasureSpace,
    family: &MeasureFamily,
    p: f64,
) -> Result<LpEmbedding> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidP(p));
    }
    Ok(LpEmbedding {
        inner: assemble_l2(base, family, true)?,
        p,
    })
}

impl LpEmbedding {
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn embed(&self, f: &DVector<f64>) -> Field {
        self.inner.embed(f)
    }

    pub fn base_norm(&self, f: &DVector<f64>) -> f64 {
        lp_sum(self.inner.base.mu(), f, self.p).powf(1.0 / self.p)
    }

    pub fn fibered_norm(&self, f: &DVector<f64>) -> f64 {
        self.inner.space.lp_norm(&self.embed(f), self.p)
    }

    pub fn isometry_report(&self, samples: &[DVector<f64>]) -> IsometryReport {
        isometry_report(&self.inner.base, &self.inner.space, samples, self.p, |f| {
            self.embed(f)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometryReport {
    /// max over samples of `|‖ιf‖ − ‖f‖| / (1 + ‖f‖)`.
    pub norm_defect: f64,
    /// `ι(f ∧ g) = ιf ∧ ιg` and `ι(f⁺) = (ιf)⁺` held exactly on consecutive sample pairs.
    pub lattice_exact: bool,
}

fn isometry_report<F: Fn(&DVector<f64>) -> Field>(
    base: &FiniteMeasureSpace,
    space: &DirectIntegralSpace,
    samples: &[DVector<f64>],
    p: f64,
    embed: F,
) -> IsometryReport {
    let mut norm_defect: f64 = 0.0;
    let mut lattice_exact = true;
    for (i, f) in samples.iter().enumerate() {
        let lhs = lp_sum(base.mu(), f, p).powf(1.0 / p);
        let rhs = space.lp_norm(&embed(f), p);
        norm_defect = norm_defect.max((lhs - rhs).abs() / (1.0 + lhs));

        let pos = f.map(|x| x.max(0.0));
        lattice_exact &= embed(&pos) == field_positive_part(&embed(f));
        if let Some(g) = samples.get(i + 1) {
            let meet = f.zip_map(g, f64::min);
            lattice_exact &= embed(&meet) == field_min(&embed(f), &embed(g));
        }
    }
    IsometryReport {
        norm_defect,
        lattice_exact,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::space::{disintegrate_over_partition, Fiber};

    fn twin_embedding() -> L2Embedding {
        let twin = fixtures::twin();
        let (_, fam) = disintegrate_over_partition(twin.space(), &twin.invariant_sets()).unwrap();
        assemble_l2(twin.space(), &fam, true).unwrap()
    }

    #[test]
    fn twin_l2_norm() {
        let iota = twin_embedding();
        let f = DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]);
        let lhs = iota.base().norm(&f).powi(2);
        let rhs = iota.space().norm(&iota.embed(&f)).powi(2);
        assert!((lhs - 7.5).abs() < 1e-14);
        assert!((rhs - 7.5).abs() < 1e-14);
        assert_eq!(iota.pullback(&iota.embed(&f)).unwrap(), f);
        assert!(iota.is_onto());
    }

    #[test]
    fn positivity_is_fiberwise() {
        let iota = twin_embedding();
        let f = DVector::from_vec(vec![0.5, 0.0, 2.0, 1.0]);
        assert!(iota.embed(&f).iter().all(|u| u.iter().all(|&x| x >= 0.0)));
        let g = DVector::from_vec(vec![0.5, -1.0, 2.0, 1.0]);
        assert!(!iota.embed(&g).iter().all(|u| u.iter().all(|&x| x >= 0.0)));
    }

    #[test]
    fn two_copies_is_not_onto() {
        let point = FiniteMeasureSpace::new(vec!["*"], vec![2.0]).unwrap();
        let dirac = Fiber {
            support: vec![0],
            weights: vec![1.0],
        };
        let fam = MeasureFamily::new(
            IndexSpace::numbered(vec![1.0, 1.0]).unwrap(),
            vec![dirac.clone(), dirac],
            1,
        )
        .unwrap();
        assert!(matches!(
            assemble_l2(&point, &fam, true),
            Err(Error::NotSeparated(_))
        ));
        let iota = assemble_l2(&point, &fam, false).unwrap();
        assert_eq!(iota.space().dim(), 2);
        assert_eq!(iota.rank(), 1);
        assert!(!iota.is_onto());
        let f = DVector::from_vec(vec![3.0]);
        assert!((iota.base().norm(&f) - iota.space().norm(&iota.embed(&f))).abs() < 1e-14);
        assert!(iota.pullback(&iota.embed(&f)).is_err());
    }

    #[test]
    fn lp_examples() {
        let twin = fixtures::twin();
        let (_, fam) = disintegrate_over_partition(twin.space(), &twin.invariant_sets()).unwrap();
        let l1 = assemble_lp(twin.space(), &fam, 1.0).unwrap();
        let f = DVector::from_vec(vec![1.0, -1.0, 0.0, 0.0]);
        assert!((l1.base_norm(&f) - 0.5).abs() < 1e-15);
        assert!((l1.fibered_norm(&f) - 0.5).abs() < 1e-15);

        let l4 = assemble_lp(twin.space(), &fam, 4.0).unwrap();
        let e = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
        assert!((l4.base_norm(&e).powi(4) - 0.25).abs() < 1e-15);
        assert!((l4.fibered_norm(&e).powi(4) - 0.25).abs() < 1e-15);

        let l2 = assemble_lp(twin.space(), &fam, 2.0).unwrap();
        let g = DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]);
        assert!((l2.fibered_norm(&g) - 7.5f64.sqrt()).abs() < 1e-14);

        assert!(matches!(
            assemble_lp(twin.space(), &fam, 0.5),
            Err(Error::InvalidP(_))
        ));
    }

    #[test]
    fn zero_field_has_zero_norm() {
        let iota = twin_embedding();
        assert_eq!(iota.space().norm(&iota.space().zero_field()), 0.0);
    }
}
