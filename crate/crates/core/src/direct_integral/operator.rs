//! Decomposable and diagonalizable operators, and polynomial functional calculus.
//!
//! A decomposable operator is a block family `(B_ζ)_ζ`, one block per fiber.
//! Its norm on the direct integral is the maximum of the fiber norms: the
//! weights `ν(ζ)` cancel in every block. An operator on L²(μ) decomposes over
//! a quotient exactly when it commutes with multiplication by every fiber
//! indicator.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::DirectIntegralSpace;
use crate::error::{Error, Result};
use crate::linalg::{block_diagonal, weighted_op_norm};
use crate::space::{disintegration_along, FiniteMeasureSpace, QuotientMap};

/// Relative off-block mass above which an operator is not decomposable.
pub const DECOMPOSABLE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DecomposableOperator {
    space: DirectIntegralSpace,
    blocks: Vec<DMatrix<f64>>,
}

impl DecomposableOperator {
    pub fn new(space: DirectIntegralSpace, blocks: Vec<DMatrix<f64>>) -> Result<Self> {
        let dims = space.fiber_dims();
        if blocks.len() != dims.len() {
            return Err(Error::FiberDimensionMismatch {
                fiber: blocks.len().min(dims.len()),
                expected: dims.len(),
                found: blocks.len(),
            });
        }
        for (z, (b, &d)) in blocks.iter().zip(&dims).enumerate() {
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::FiberDimensionMismatch {
                    fiber: z,
                    expected: d,
                    found: b.nrows(),
                });
            }
        }
        Ok(Self { space, blocks })
    }

    pub fn space(&self) -> &DirectIntegralSpace {
        &self.space
    }

    pub fn blocks(&self) -> &[DMatrix<f64>] {
        &self.blocks
    }

    /// Block-diagonal matrix in the flattened coordinates.
    pub fn assembled(&self) -> DMatrix<f64> {
        block_diagonal(&self.blocks)
    }

    /// `‖B_ζ‖` on `L²(μ_ζ)` for each fiber.
    pub fn fiber_norms(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .zip(self.space.fibers())
            .map(|(b, f)| weighted_op_norm(b, f.mu()))
            .collect()
    }

    /// Norm of the assembled operator on the direct integral.
    pub fn op_norm(&self) -> f64 {
        weighted_op_norm(&self.assembled(), &self.space.coordinate_measure())
    }

    /// Places the blocks back at the points of each fiber of `quotient`.
    pub fn to_base(&self, quotient: &QuotientMap) -> Result<DMatrix<f64>> {
        let n = quotient.s().len();
        if quotient.blocks().len() != self.blocks.len() {
            return Err(Error::FiberDimensionMismatch {
                fiber: self.blocks.len().min(quotient.len()),
                expected: quotient.len(),
                found: self.blocks.len(),
            });
        }
        let mut out = DMatrix::zeros(n, n);
        for (z, (idx, b)) in quotient.blocks().iter().zip(&self.blocks).enumerate() {
            if idx.len() != b.nrows() {
                return Err(Error::FiberDimensionMismatch {
                    fiber: z,
                    expected: idx.len(),
                    found: b.nrows(),
                });
            }
            for (a, &x) in idx.iter().enumerate() {
                for (c, &y) in idx.iter().enumerate() {
                    out[(x, y)] = b[(a, c)];
                }
            }
        }
        Ok(out)
    }

    /// `φ(B) = ⊕ φ(B_ζ)`.
    pub fn apply<P: MatrixPolynomial + ?Sized>(&self, phi: &P) -> DecomposableOperator {
        DecomposableOperator {
            space: self.space.clone(),
            blocks: self.blocks.iter().map(|b| phi.eval_matrix(b)).collect(),
        }
    }

    /// `[−‖B‖, ‖B‖]`, or `[−1, 1]` for the zero operator.
    pub fn spectral_interval(&self) -> (f64, f64) {
        let r = self.op_norm();
        if r > 0.0 {
            (-r, r)
        } else {
            (-1.0, 1.0)
        }
    }
}

/// Splits an operator on L²(μ) into its blocks along `quotient`, failing
/// when the off-block part has norm above `1e-12 · (1 + ‖B‖)`.
pub fn decompose_operator(
    b: &DMatrix<f64>,
    base: &FiniteMeasureSpace,
    quotient: &QuotientMap,
) -> Result<DecomposableOperator> {
    let n = base.len();
    if b.nrows() != n || b.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            rows: b.nrows(),
            cols: b.ncols(),
        });
    }
    let s = quotient.s();
    let off_block = DMatrix::from_fn(n, n, |i, j| if s[i] == s[j] { 0.0 } else { b[(i, j)] });
    let off_norm = weighted_op_norm(&off_block, base.mu());
    let norm = weighted_op_norm(b, base.mu());
    if off_norm > DECOMPOSABLE_TOLERANCE * (1.0 + norm) {
        return Err(Error::NotDecomposable(off_norm));
    }
    let family = disintegration_along(base, quotient)?;
    let space = DirectIntegralSpace::from_family(base, &family)?;
    let blocks = quotient
        .blocks()
        .iter()
        .map(|idx| crate::linalg::principal_submatrix(b, idx))
        .collect();
    DecomposableOperator::new(space, blocks)
}

/// Multiplication by `g(ζ)` on each fiber.
pub fn diagonalizable(space: &DirectIntegralSpace, g: &[f64]) -> Result<DecomposableOperator> {
    if g.len() != space.index().len() {
        return Err(Error::LengthMismatch {
            points: space.index().len(),
            weights: g.len(),
        });
    }
    let blocks = space
        .fibers()
        .iter()
        .zip(g)
        .map(|(f, &v)| DMatrix::identity(f.len(), f.len()) * v)
        .collect();
    DecomposableOperator::new(space.clone(), blocks)
}

/// Multiplication by `g ∘ s` on L²(μ).
pub fn multiplication_on_base(quotient: &QuotientMap, g: &[f64]) -> DMatrix<f64> {
    let s = quotient.s();
    DMatrix::from_fn(s.len(), s.len(), |i, j| if i == j { g[s[i]] } else { 0.0 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Commutation {
    pub commutes: bool,
    /// `‖[B, M_{1_ζ}]‖` for each fiber indicator.
    pub commutator_norms: Vec<f64>,
    /// First fiber whose indicator fails to commute.
    pub witness: Option<usize>,
}

pub fn commutes_with_diagonalizables(
    b: &DMatrix<f64>,
    base: &FiniteMeasureSpace,
    quotient: &QuotientMap,
) -> Commutation {
    let scale = 1.0 + weighted_op_norm(b, base.mu());
    let commutator_norms: Vec<f64> = (0..quotient.len())
        .map(|z| {
            let mut g = vec![0.0; quotient.len()];
            g[z] = 1.0;
            let m = multiplication_on_base(quotient, &g);
            weighted_op_norm(&(b * &m - &m * b), base.mu())
        })
        .collect();
    let witness = commutator_norms
        .iter()
        .position(|&c| c > DECOMPOSABLE_TOLERANCE * scale);
    Commutation {
        commutes: witness.is_none(),
        commutator_norms,
        witness,
    }
}

/// Something that can be evaluated both on scalars and on square matrices.
pub trait MatrixPolynomial {
    fn eval(&self, x: f64) -> f64;
    fn eval_matrix(&self, m: &DMatrix<f64>) -> DMatrix<f64>;
}

/// `Σ_k c_k x^k`, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// `∏ (x − r)`.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut c = vec![1.0];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (k, &a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= r * a;
            }
            c = next;
        }
        Self { coeffs: c }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut c = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial { coeffs: c }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
        Polynomial {
            coeffs: (0..n)
                .map(|k| get(&self.coeffs, k) + get(&other.coeffs, k))
                .collect(),
        }
    }
}

impl MatrixPolynomial for Polynomial {
    fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn eval_matrix(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let n = m.nrows();
        let id = DMatrix::<f64>::identity(n, n);
        self.coeffs
            .iter()
            .rev()
            .fold(DMatrix::zeros(n, n), |acc, c| acc * m + &id * *c)
    }
}

/// Chebyshev interpolant on `[lo, hi]`: `Σ' c_j T_j(y)` with
/// `y = (2x − lo − hi) / (hi − lo)` and the first term halved.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevSeries {
    pub coeffs: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
}

impl ChebyshevSeries {
    /// Interpolates `f` at the `degree + 1` Chebyshev–Gauss nodes.
    pub fn fit<F: Fn(f64) -> f64>(f: F, degree: usize, lo: f64, hi: f64) -> Self {
        let n = degree + 1;
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let samples: Vec<f64> = (0..n)
            .map(|k| f(mid + half * (PI * (k as f64 + 0.5) / n as f64).cos()))
            .collect();
        let coeffs = (0..n)
            .map(|j| {
                2.0 / n as f64
                    * samples
                        .iter()
                        .enumerate()
                        .map(|(k, s)| s * (PI * j as f64 * (k as f64 + 0.5) / n as f64).cos())
                        .sum::<f64>()
            })
            .collect();
        Self { coeffs, lo, hi }
    }

    /// Fit over the spectral interval of `op`.
    pub fn for_operator<F: Fn(f64) -> f64>(f: F, degree: usize, op: &DecomposableOperator) -> Self {
        let (lo, hi) = op.spectral_interval();
        Self::fit(f, degree, lo, hi)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

impl MatrixPolynomial for ChebyshevSeries {
    fn eval(&self, x: f64) -> f64 {
        let y = (2.0 * x - self.lo - self.hi) / (self.hi - self.lo);
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = c + 2.0 * y * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        0.5 * self.coeffs.first().copied().unwrap_or(0.0) + y * b1 - b2
    }

    fn eval_matrix(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let n = m.nrows();
        let id = DMatrix::<f64>::identity(n, n);
        let y = (m * 2.0 - &id * (self.lo + self.hi)) / (self.hi - self.lo);
        let mut b1 = DMatrix::zeros(n, n);
        let mut b2 = DMatrix::zeros(n, n);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = &id * c + (&y * &b1) * 2.0 - &b2;
            b2 = b1;
            b1 = b0;
        }
        &id * (0.5 * self.coeffs.first().copied().unwrap_or(0.0)) + &y * &b1 - &b2
    }
}

/// `φ(B) = ⊕ φ(B_ζ)`.
pub fn functional_calculus<P: MatrixPolynomial + ?Sized>(
    b: &DecomposableOperator,
    phi: &P,
) -> DecomposableOperator {
    b.apply(phi)
}
