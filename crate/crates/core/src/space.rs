//! Finite measure spaces, index spaces, (pseudo-)disintegrations and the
//! quotient onto the minimal invariant partition.
//!
//! Everything here is plain arithmetic on positive weight vectors. A fiber
//! measure is stored on its support only, as point indices into the base
//! space plus strictly positive weights.

use std::collections::HashSet;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A finite point set with strictly positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMeasureSpace {
    points: Vec<String>,
    mu: Vec<f64>,
    total_mass: f64,
}

impl FiniteMeasureSpace {
    pub fn new<S: Into<String>>(points: Vec<S>, mu: Vec<f64>) -> Result<Self> {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        if points.is_empty() {
            return Err(Error::EmptySpace);
        }
        if points.len() != mu.len() {
            return Err(Error::LengthMismatch {
                points: points.len(),
                weights: mu.len(),
            });
        }
        if let Some(i) = mu.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::NonPositiveWeight(i));
        }
        let mut seen = HashSet::new();
        for p in &points {
            if !seen.insert(p.as_str()) {
                return Err(Error::DuplicateLabel(p.clone()));
            }
        }
        let total_mass = mu.iter().sum();
        Ok(Self {
            points,
            mu,
            total_mass,
        })
    }

    /// Space with points labelled `x0, x1, …`.
    pub fn unlabeled(mu: Vec<f64>) -> Result<Self> {
        let points = (0..mu.len()).map(|i| format!("x{i}")).collect();
        Self::new(points, mu)
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == label)
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    pub fn mass_of(&self, set: &[usize]) -> f64 {
        set.iter().map(|&i| self.mu[i]).sum()
    }

    /// ∫ f dμ.
    pub fn integrate(&self, f: &DVector<f64>) -> f64 {
        f.iter().zip(&self.mu).map(|(a, m)| a * m).sum()
    }

    /// ⟨f, g⟩ in L²(μ).
    pub fn inner(&self, f: &DVector<f64>, g: &DVector<f64>) -> f64 {
        crate::linalg::weighted_dot(f, g, &self.mu)
    }

    pub fn norm(&self, f: &DVector<f64>) -> f64 {
        self.inner(f, f).sqrt()
    }

    /// Same points, weights multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.points.clone(), self.mu.iter().map(|m| m * c).collect())
    }

    /// Subspace on `idx` with weights `weights` (aligned with `idx`).
    pub fn subspace(&self, idx: &[usize], weights: Vec<f64>) -> Result<Self> {
        Self::new(
            idx.iter().map(|&i| self.points[i].clone()).collect(),
            weights,
        )
    }
}

/// Checks a raw labelled weight list.
pub fn validate_space<S: AsRef<str>>(raw: &[(S, f64)]) -> Result<FiniteMeasureSpace> {
    FiniteMeasureSpace::new(
        raw.iter().map(|(p, _)| p.as_ref().to_string()).collect(),
        raw.iter().map(|(_, w)| *w).collect(),
    )
}

/// The index space (Z, ν).
#[derive(Debug, Clone, PartialEq)]
pub struct IndexSpace {
    labels: Vec<String>,
    nu: Vec<f64>,
}

impl IndexSpace {
    pub fn new(labels: Vec<String>, nu: Vec<f64>) -> Result<Self> {
        if labels.len() != nu.len() {
            return Err(Error::LengthMismatch {
                points: labels.len(),
                weights: nu.len(),
            });
        }
        if let Some(i) = nu.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::NonPositiveWeight(i));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self { labels, nu })
    }

    /// Labels `z0, z1, …`.
    pub fn numbered(nu: Vec<f64>) -> Result<Self> {
        Self::new((0..nu.len()).map(fiber_label).collect(), nu)
    }

    pub fn len(&self) -> usize {
        self.nu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nu.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }
}

pub(crate) fn fiber_label(i: usize) -> String {
    format!("z{i}")
}

/// One fiber measure μ_ζ, stored on its support.
#[derive(Debug, Clone, PartialEq)]
pub struct Fiber {
    pub support: Vec<usize>,
    pub weights: Vec<f64>,
}

impl Fiber {
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn weight_at(&self, x: usize) -> f64 {
        self.support
            .iter()
            .position(|&p| p == x)
            .map_or(0.0, |k| self.weights[k])
    }

    /// Restriction of a global function to the support.
    pub fn restrict(&self, f: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.support.len(), self.support.iter().map(|&i| f[i]))
    }
}

/// A family {μ_ζ} indexed by (Z, ν), each living on a subset of the base points.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureFamily {
    index: IndexSpace,
    fibers: Vec<Fiber>,
    base_len: usize,
}

impl MeasureFamily {
    pub fn new(index: IndexSpace, fibers: Vec<Fiber>, base_len: usize) -> Result<Self> {
        if fibers.len() != index.len() {
            return Err(Error::LengthMismatch {
                points: index.len(),
                weights: fibers.len(),
            });
        }
        for f in &fibers {
            if f.support.len() != f.weights.len() {
                return Err(Error::LengthMismatch {
                    points: f.support.len(),
                    weights: f.weights.len(),
                });
            }
            if let Some(i) = f.weights.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
                return Err(Error::NonPositiveWeight(i));
            }
            let mut seen = HashSet::new();
            for &x in &f.support {
                if x >= base_len {
                    return Err(Error::UnknownPoint(format!("#{x}")));
                }
                if !seen.insert(x) {
                    return Err(Error::DuplicateLabel(format!("#{x}")));
                }
            }
        }
        Ok(Self {
            index,
            fibers,
            base_len,
        })
    }

    pub fn index(&self) -> &IndexSpace {
        &self.index
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    pub fn base_len(&self) -> usize {
        self.base_len
    }

    /// x ↦ Σ_ζ ν(ζ) μ_ζ({x}).
    pub fn mixture(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.base_len];
        for (fiber, nu) in self.fibers.iter().zip(self.index.nu()) {
            for (&x, w) in fiber.support.iter().zip(&fiber.weights) {
                out[x] += nu * w;
            }
        }
        out
    }

    /// The fiber's measure as a standalone space.
    pub fn fiber_space(&self, base: &FiniteMeasureSpace, z: usize) -> Result<FiniteMeasureSpace> {
        let f = &self.fibers[z];
        base.subspace(&f.support, f.weights.clone())
    }
}

/// The quotient map s: X → Z onto blocks of a partition, with ν = s♯μ.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientMap {
    s: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    index: IndexSpace,
}

impl QuotientMap {
    pub fn s(&self) -> &[usize] {
        &self.s
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn index(&self) -> &IndexSpace {
        &self.index
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The quotient measure rescaled by `c` (same map, same blocks).
    pub fn with_scaled_nu(&self, c: f64) -> Result<Self> {
        Ok(Self {
            s: self.s.clone(),
            blocks: self.blocks.clone(),
            index: IndexSpace::new(
                self.index.labels().to_vec(),
                self.index.nu().iter().map(|v| v * c).collect(),
            )?,
        })
    }

    /// Permutation listing points fiber by fiber (ι-coordinates).
    pub fn fiber_order(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }
}

/// Sorts blocks by smallest member and checks they partition `0..n`.
pub(crate) fn canonical_partition(n: usize, partition: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let mut owner = vec![usize::MAX; n];
    for (b, block) in partition.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::NotAPartition(format!("block {b} is empty")));
        }
        for &x in block {
            if x >= n {
                return Err(Error::NotAPartition(format!("point #{x} out of range")));
            }
            if owner[x] != usize::MAX {
                return Err(Error::NotAPartition(format!("point #{x} in two blocks")));
            }
            owner[x] = b;
        }
    }
    if let Some(x) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::NotAPartition(format!("point #{x} not covered")));
    }
    let mut blocks: Vec<Vec<usize>> = partition
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b
        })
        .collect();
    blocks.sort_by_key(|b| b[0]);
    Ok(blocks)
}

/// Quotient onto an invariant partition; ν is the pushforward of μ.
pub fn quotient_by_invariant_partition(
    space: &FiniteMeasureSpace,
    partition: &[Vec<usize>],
) -> Result<QuotientMap> {
    let blocks = canonical_partition(space.len(), partition)?;
    let mut s = vec![0; space.len()];
    for (z, block) in blocks.iter().enumerate() {
        for &x in block {
            s[x] = z;
        }
    }
    let nu = blocks.iter().map(|b| space.mass_of(b)).collect();
    Ok(QuotientMap {
        s,
        blocks,
        index: IndexSpace::numbered(nu)?,
    })
}

/// ν(ζ) = μ(A_ζ), μ_ζ = μ|_{A_ζ} / ν(ζ).
pub fn disintegrate_over_partition(
    space: &FiniteMeasureSpace,
    partition: &[Vec<usize>],
) -> Result<(QuotientMap, MeasureFamily)> {
    let quotient = quotient_by_invariant_partition(space, partition)?;
    let family = disintegration_along(space, &quotient)?;
    Ok((quotient, family))
}

/// The disintegration of μ strongly consistent with `quotient`.
pub fn disintegration_along(
    space: &FiniteMeasureSpace,
    quotient: &QuotientMap,
) -> Result<MeasureFamily> {
    let fibers = quotient
        .blocks()
        .iter()
        .zip(quotient.index().nu())
        .map(|(block, &nu)| Fiber {
            support: block.clone(),
            weights: block.iter().map(|&x| space.mu()[x] / nu).collect(),
        })
        .collect();
    MeasureFamily::new(quotient.index().clone(), fibers, space.len())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudoDisintegrationReport {
    /// max_x |μ({x}) − Σ_ζ ν(ζ) μ_ζ({x})|
    pub singleton_defect: f64,
    /// max over sampled g of |∫ g dμ − ∫_Z ∫ g dμ_ζ dν|
    pub integral_defect: f64,
}

impl PseudoDisintegrationReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.singleton_defect <= tol && self.integral_defect <= tol
    }
}

const INTEGRAL_SAMPLES: usize = 20;

pub fn verify_pseudo_disintegration(
    space: &FiniteMeasureSpace,
    family: &MeasureFamily,
) -> PseudoDisintegrationReport {
    let mixed = family.mixture();
    let singleton_defect = space
        .mu()
        .iter()
        .zip(&mixed)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut integral_defect: f64 = 0.0;
    for _ in 0..INTEGRAL_SAMPLES {
        let g = DVector::from_fn(space.len(), |_, _| rng.random_range(-1.0..1.0));
        let lhs = space.integrate(&g);
        let rhs: f64 = family
            .fibers()
            .iter()
            .zip(family.index().nu())
            .map(|(f, nu)| {
                nu * f
                    .support
                    .iter()
                    .zip(&f.weights)
                    .map(|(&x, w)| g[x] * w)
                    .sum::<f64>()
            })
            .sum();
        integral_defect = integral_defect.max((lhs - rhs).abs());
    }
    PseudoDisintegrationReport {
        singleton_defect,
        integral_defect,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Separation {
    /// Supports are pairwise disjoint; they form the separating family.
    Separated(Vec<Vec<usize>>),
    /// `point` lies in the supports of both fibers.
    Overlap {
        point: usize,
        fibers: (usize, usize),
    },
}

impl Separation {
    pub fn is_separated(&self) -> bool {
        matches!(self, Separation::Separated(_))
    }
}

pub fn is_separated(family: &MeasureFamily) -> Separation {
    let mut owner: Vec<Option<usize>> = vec![None; family.base_len()];
    for (z, f) in family.fibers().iter().enumerate() {
        for &x in &f.support {
            if let Some(prev) = owner[x] {
                return Separation::Overlap {
                    point: x,
                    fibers: (prev, z),
                };
            }
            owner[x] = Some(z);
        }
    }
    Separation::Separated(family.fibers().iter().map(|f| f.support.clone()).collect())
}
