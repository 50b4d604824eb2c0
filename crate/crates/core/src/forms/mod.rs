//! Symmetric quadratic forms and Dirichlet forms on a finite measure space.
//!
//! A form is a symmetric positive semidefinite matrix `A` with
//! `E(f, g) = fᵀ A g`. It is a Dirichlet form exactly when its Beurling–Deny
//! data are nonnegative: the jump kernel `J(x, y) = −A(x, y)` off the diagonal
//! and the killing `k(x) = Σ_y A(x, y)`. In that case
//!
//! ```text
//! E(f, g) = ½ Σ_{x,y} J(x,y) (f(x) − f(y)) (g(x) − g(y)) + Σ_x k(x) f(x) g(x).
//! ```
//!
//! The generator, semigroup and resolvent live in [`dynamics`], the carré du
//! champ in [`carre`], invariant sets in [`invariant`], the Girsanov-type
//! transform in [`girsanov`] and the conservative/transient/recurrent
//! classification in [`classify`].

pub mod carre;
pub mod classify;
pub mod dynamics;
pub mod girsanov;
pub mod invariant;

use std::fmt;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{symmetrize, SymmetricSpectrum};
use crate::space::FiniteMeasureSpace;

pub use carre::CarreDuChamp;
pub use classify::{Classification, ComponentClass};
pub use dynamics::YosidaForm;
pub use invariant::{InvarianceProbe, InvariantReport};

/// Relative threshold under which a coupling counts as absent.
pub const COUPLING_THRESHOLD: f64 = 1e-12;
/// Relative slack allowed in the sign conditions of the Markov check.
pub const MARKOV_SLACK: f64 = 1e-14;
/// Relative slack allowed for the smallest eigenvalue in the PSD check.
pub const PSD_SLACK: f64 = 1e-12;
/// Default tolerance for verification reports, relative to `1 + ‖A‖`.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// A symmetric positive semidefinite form on L²(μ), not necessarily Markovian.
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    space: FiniteMeasureSpace,
    matrix: DMatrix<f64>,
    min_eigenvalue: f64,
    norm: f64,
}

impl QuadraticForm {
    /// Symmetrizes `matrix` and checks positive semidefiniteness.
    pub fn new(space: FiniteMeasureSpace, matrix: DMatrix<f64>) -> Result<Self> {
        let n = space.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::Schema("matrix has non-finite entries".into()));
        }
        let matrix = symmetrize(&matrix);
        let spec = SymmetricSpectrum::new(&matrix);
        let min_eigenvalue = spec.min();
        let norm = spec.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if min_eigenvalue < -PSD_SLACK * (1.0 + norm) {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self {
            space,
            matrix,
            min_eigenvalue,
            norm,
        })
    }

    pub fn space(&self) -> &FiniteMeasureSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// `1 + ‖A‖₂`, the reference magnitude for relative tolerances.
    pub fn scale(&self) -> f64 {
        1.0 + self.norm
    }

    pub fn bilinear(&self, f: &DVector<f64>, g: &DVector<f64>) -> f64 {
        f.dot(&(&self.matrix * g))
    }

    pub fn energy(&self, f: &DVector<f64>) -> f64 {
        self.bilinear(f, f)
    }

    /// Decides the sub-Markov property and returns either the
    /// Beurling–Deny data or a contraction that increases the energy.
    pub fn markov_check(&self) -> MarkovCheck {
        is_markovian(self)
    }

    pub fn into_dirichlet(self) -> Result<DirichletForm> {
        match is_markovian(&self) {
            MarkovCheck::Markovian(bd) => Ok(DirichletForm::assemble(self, bd)),
            MarkovCheck::Violated(v) => Err(Error::NotMarkovian(v)),
        }
    }
}

/// Jump kernel and killing measure of a Dirichlet form.
#[derive(Debug, Clone, PartialEq)]
pub struct BeurlingDeny {
    /// Symmetric, nonnegative, zero diagonal.
    pub jump: DMatrix<f64>,
    pub killing: DVector<f64>,
}

impl BeurlingDeny {
    /// `A(x,y) = −J(x,y)` for `x ≠ y`, `A(x,x) = Σ_y J(x,y) + k(x)`.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.killing.len();
        let mut a = -self.jump.clone();
        for x in 0..n {
            a[(x, x)] = self.jump.row(x).sum() + self.killing[x];
        }
        a
    }
}

/// A normal contraction that increases the energy.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovViolation {
    pub witness: DVector<f64>,
    /// Q(f)
    pub energy: f64,
    /// Q(f⁺ ∧ 1)
    pub contracted_energy: f64,
}

impl MarkovViolation {
    pub fn margin(&self) -> f64 {
        self.contracted_energy - self.energy
    }
}

impl fmt::Display for MarkovViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witness.iter().map(|v| format!("{v}")).collect();
        write!(
            f,
            "witness f = ({}) has Q(f) = {} < Q(f⁺∧1) = {}",
            w.join(", "),
            self.energy,
            self.contracted_energy
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MarkovCheck {
    Markovian(BeurlingDeny),
    Violated(MarkovViolation),
}

impl MarkovCheck {
    pub fn is_markovian(&self) -> bool {
        matches!(self, MarkovCheck::Markovian(_))
    }
}

/// `f ↦ f⁺ ∧ 1`, pointwise.
pub fn unit_contraction(f: &DVector<f64>) -> DVector<f64> {
    f.map(|v| v.clamp(0.0, 1.0))
}

pub fn is_markovian(q: &QuadraticForm) -> MarkovCheck {
    let a = q.matrix();
    let n = q.len();
    let slack = MARKOV_SLACK * q.scale();

    let violation = |witness: DVector<f64>| {
        let energy = q.energy(&witness);
        let contracted_energy = q.energy(&unit_contraction(&witness));
        MarkovViolation {
            witness,
            energy,
            contracted_energy,
        }
    };

    // Largest positive off-diagonal entry: f = e_x − (c / A_yy) e_y.
    let mut worst: Option<(usize, usize, f64)> = None;
    for x in 0..n {
        for y in 0..n {
            if x != y && a[(x, y)] > slack && worst.is_none_or(|(_, _, c)| a[(x, y)] > c) {
                worst = Some((x, y, a[(x, y)]));
            }
        }
    }
    if let Some((x, y, c)) = worst {
        let mut f = DVector::zeros(n);
        f[x] = 1.0;
        f[y] = -c / a[(y, y)];
        return MarkovCheck::Violated(violation(f));
    }

    // Most negative row sum: f = 1 + s e_x with s = −r / A_xx.
    let row_sums: Vec<f64> = (0..n).map(|x| a.row(x).sum()).collect();
    let (x, r) = row_sums
        .iter()
        .copied()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |acc, (i, r)| if r < acc.1 { (i, r) } else { acc },
        );
    if n > 0 && r < -slack {
        let mut f = DVector::from_element(n, 1.0);
        f[x] += -r / a[(x, x)];
        return MarkovCheck::Violated(violation(f));
    }

    let jump = DMatrix::from_fn(
        n,
        n,
        |x, y| if x == y { 0.0 } else { (-a[(x, y)]).max(0.0) },
    );
    let killing = DVector::from_iterator(n, row_sums.into_iter().map(|r| r.max(0.0)));
    MarkovCheck::Markovian(BeurlingDeny { jump, killing })
}

/// A symmetric Markovian form on L²(μ) with its Beurling–Deny data.
#[derive(Debug, Clone)]
pub struct DirichletForm {
    form: QuadraticForm,
    data: BeurlingDeny,
    spectrum: OnceLock<dynamics::GeneratorSpectrum>,
}

impl DirichletForm {
    fn assemble(form: QuadraticForm, data: BeurlingDeny) -> Self {
        Self {
            form,
            data,
            spectrum: OnceLock::new(),
        }
    }

    pub fn from_matrix(space: FiniteMeasureSpace, matrix: DMatrix<f64>) -> Result<Self> {
        QuadraticForm::new(space, matrix)?.into_dirichlet()
    }

    /// Builds `A` from an edge list `(x, y, w)` and a killing vector.
    /// Repeated edges accumulate.
    pub fn from_edges(
        space: FiniteMeasureSpace,
        edges: &[(usize, usize, f64)],
        killing: &[f64],
    ) -> Result<Self> {
        let n = space.len();
        if killing.len() != n {
            return Err(Error::LengthMismatch {
                points: n,
                weights: killing.len(),
            });
        }
        let mut jump = DMatrix::zeros(n, n);
        for &(x, y, w) in edges {
            if x >= n || y >= n {
                return Err(Error::UnknownPoint(format!("#{}", x.max(y))));
            }
            if x == y {
                return Err(Error::Schema(format!("self-loop at point #{x}")));
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::Schema(format!(
                    "edge weight {w} is not a nonnegative number"
                )));
            }
            jump[(x, y)] += w;
            jump[(y, x)] += w;
        }
        if let Some(i) = killing.iter().position(|&k| !(k >= 0.0 && k.is_finite())) {
            return Err(Error::Schema(format!(
                "killing at index {i} is not a nonnegative number"
            )));
        }
        let data = BeurlingDeny {
            jump,
            killing: DVector::from_column_slice(killing),
        };
        let form = QuadraticForm::new(space, data.to_matrix())?;
        Ok(Self::assemble(form, data))
    }

    /// Zero form on `space`.
    pub fn zero(space: FiniteMeasureSpace) -> Self {
        let n = space.len();
        Self::from_edges(space, &[], &vec![0.0; n]).expect("zero form is Dirichlet")
    }

    pub fn space(&self) -> &FiniteMeasureSpace {
        self.form.space()
    }

    pub fn quadratic(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        self.form.matrix()
    }

    pub fn len(&self) -> usize {
        self.form.len()
    }

    pub fn is_empty(&self) -> bool {
        self.form.is_empty()
    }

    pub fn scale(&self) -> f64 {
        self.form.scale()
    }

    pub fn jump(&self) -> &DMatrix<f64> {
        &self.data.jump
    }

    pub fn killing(&self) -> &DVector<f64> {
        &self.data.killing
    }

    pub fn beurling_deny(&self) -> &BeurlingDeny {
        &self.data
    }

    pub fn bilinear(&self, f: &DVector<f64>, g: &DVector<f64>) -> f64 {
        self.form.bilinear(f, g)
    }

    pub fn energy(&self, f: &DVector<f64>) -> f64 {
        self.form.energy(f)
    }

    /// True when every killing entry is below the coupling threshold.
    pub fn is_killing_free(&self) -> bool {
        let tau = COUPLING_THRESHOLD * self.scale();
        self.killing().iter().all(|&k| k <= tau)
    }

    /// Edge list `(x, y, J(x, y))` with `x < y` and `J` above the coupling threshold.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let j = self.jump();
        let tau = COUPLING_THRESHOLD * self.jump_max();
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in x + 1..self.len() {
                if j[(x, y)] > tau {
                    out.push((x, y, j[(x, y)]));
                }
            }
        }
        out
    }

    pub(crate) fn jump_max(&self) -> f64 {
        self.jump().iter().copied().fold(0.0, f64::max)
    }

    /// Same matrix over a different measure.
    pub fn with_space(&self, space: FiniteMeasureSpace) -> Result<Self> {
        Self::from_edges(space, &self.edges_all(), self.killing().as_slice())
    }

    fn edges_all(&self) -> Vec<(usize, usize, f64)> {
        let j = self.jump();
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in x + 1..self.len() {
                if j[(x, y)] > 0.0 {
                    out.push((x, y, j[(x, y)]));
                }
            }
        }
        out
    }
}

/// Free-function form of [`DirichletForm::beurling_deny`] for quadratic forms.
pub fn beurling_deny(q: &QuadraticForm) -> Result<BeurlingDeny> {
    match is_markovian(q) {
        MarkovCheck::Markovian(bd) => Ok(bd),
        MarkovCheck::Violated(v) => Err(Error::NotMarkovian(v)),
    }
}
