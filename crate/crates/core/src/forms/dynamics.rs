//! Generator, semigroup, resolvent and Yosida approximations.
//!
//! With `M = diag(μ)` the generator is `L = −M⁻¹A`. It is self-adjoint in
//! L²(μ), so `S = M^{-1/2} A M^{-1/2}` is symmetric and `−L = M^{-1/2} S M^{1/2}`.
//! Every spectral function `h(−L)` is computed from one cached
//! eigen-decomposition of `S`.

use nalgebra::{DMatrix, DVector};

use super::DirichletForm;
use crate::error::{Error, Result};
use crate::linalg::SymmetricSpectrum;

#[derive(Debug, Clone)]
pub(crate) struct GeneratorSpectrum {
    sym: SymmetricSpectrum,
    sqrt_mu: DVector<f64>,
}

impl GeneratorSpectrum {
    fn new(form: &DirichletForm) -> Self {
        let sqrt_mu =
            DVector::from_iterator(form.len(), form.space().mu().iter().map(|m| m.sqrt()));
        let a = form.matrix();
        let s = DMatrix::from_fn(form.len(), form.len(), |i, j| {
            a[(i, j)] / (sqrt_mu[i] * sqrt_mu[j])
        });
        Self {
            sym: SymmetricSpectrum::new(&s),
            sqrt_mu,
        }
    }

    /// `h(−L)` as a matrix acting on functions.
    fn apply<F: Fn(f64) -> f64>(&self, h: F) -> DMatrix<f64> {
        let mut m = self.sym.apply(h);
        let n = m.nrows();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] *= self.sqrt_mu[j] / self.sqrt_mu[i];
            }
        }
        m
    }

    /// Coordinates of `f` in the orthonormal eigenbasis of L²(μ).
    fn coordinates(&self, f: &DVector<f64>) -> DVector<f64> {
        self.sym.vectors.transpose() * f.component_mul(&self.sqrt_mu)
    }
}

impl DirichletForm {
    pub(crate) fn generator_spectrum(&self) -> &GeneratorSpectrum {
        self.spectrum.get_or_init(|| GeneratorSpectrum::new(self))
    }

    /// Spectrum of `−L`, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.generator_spectrum()
            .sym
            .values
            .iter()
            .copied()
            .collect()
    }

    /// Largest eigenvalue of `−L`.
    pub fn lambda_max(&self) -> f64 {
        self.generator_spectrum().sym.max().max(0.0)
    }

    /// `L = −M⁻¹A`.
    pub fn generator(&self) -> DMatrix<f64> {
        let mu = self.space().mu();
        DMatrix::from_fn(self.len(), self.len(), |i, j| {
            -self.matrix()[(i, j)] / mu[i]
        })
    }

    /// `h(−L)` for an arbitrary real function `h` on the spectrum.
    pub fn spectral_function<F: Fn(f64) -> f64>(&self, h: F) -> DMatrix<f64> {
        self.generator_spectrum().apply(h)
    }

    /// `T_t = e^{tL}`.
    pub fn semigroup(&self, t: f64) -> Result<DMatrix<f64>> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        Ok(self.spectral_function(|lambda| (-t * lambda).exp()))
    }

    /// `G_α = (α − L)⁻¹`.
    pub fn resolvent(&self, alpha: f64) -> Result<DMatrix<f64>> {
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(Error::NonPositiveAlpha(alpha));
        }
        Ok(self.spectral_function(|lambda| 1.0 / (alpha + lambda.max(0.0))))
    }

    /// The bounded approximating form `Q^{(β)}(u, v) = ⟨βu − βG_β u, v⟩`.
    pub fn yosida_form(&self, beta: f64) -> Result<YosidaForm<'_>> {
        if beta.is_nan() || beta <= 0.0 {
            return Err(Error::NonPositiveBeta(beta));
        }
        Ok(YosidaForm { form: self, beta })
    }
}

/// Evaluator for the Yosida approximation at a fixed β.
#[derive(Debug, Clone, Copy)]
pub struct YosidaForm<'a> {
    form: &'a DirichletForm,
    beta: f64,
}

impl YosidaForm<'_> {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Evaluated spectrally as `Σ βλ/(β+λ) ⟨f,φ_λ⟩⟨g,φ_λ⟩`, which avoids the
    /// cancellation in `β‖f‖² − β⟨G_β f, f⟩` for large β.
    pub fn bilinear(&self, f: &DVector<f64>, g: &DVector<f64>) -> f64 {
        let spec = self.form.generator_spectrum();
        let cf = spec.coordinates(f);
        let cg = spec.coordinates(g);
        spec.sym
            .values
            .iter()
            .zip(cf.iter().zip(cg.iter()))
            .map(|(&lambda, (a, b))| {
                let lambda = lambda.max(0.0);
                self.beta * lambda / (self.beta + lambda) * a * b
            })
            .sum()
    }

    pub fn energy(&self, f: &DVector<f64>) -> f64 {
        self.bilinear(f, f)
    }

    /// `λ_max(−L) · E(f) / β`, an upper bound for `E(f) − Q^{(β)}(f)`.
    pub fn error_bound(&self, f: &DVector<f64>) -> f64 {
        self.form.lambda_max() * self.form.energy(f) / self.beta
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::frobenius;

    fn mat(n: usize, v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(n, n, v)
    }

    #[test]
    fn generators_of_fixtures() {
        let l = fixtures::edge().generator();
        assert!(frobenius(&(l - mat(2, &[-1.0, 1.0, 1.0, -1.0]))) < 1e-15);
        let l = fixtures::twin().generator();
        let expected = mat(
            4,
            &[
                -4.0, 4.0, 0.0, 0.0, 4.0, -4.0, 0.0, 0.0, 0.0, 0.0, -8.0, 8.0, 0.0, 0.0, 8.0, -8.0,
            ],
        );
        assert!(frobenius(&(l - expected)) < 1e-14);
        let zero = DirichletForm::zero(fixtures::edge().space().clone());
        assert_eq!(zero.generator(), DMatrix::zeros(2, 2));
    }

    #[test]
    fn edge_semigroup_at_ln2() {
        let t = fixtures::edge().semigroup(2f64.ln()).unwrap();
        assert!(frobenius(&(t - mat(2, &[0.625, 0.375, 0.375, 0.625]))) < 1e-14);
    }

    #[test]
    fn semigroup_at_zero_and_negative() {
        let f = fixtures::grid();
        let t0 = f.semigroup(0.0).unwrap();
        assert!(frobenius(&(t0 - DMatrix::identity(6, 6))) < 1e-14);
        assert_eq!(f.semigroup(-1.0), Err(Error::NegativeTime(-1.0)));
    }

    #[test]
    fn killing_absorbs() {
        // Slowest decay rate of [[2,-1],[-1,1]] is (3 - √5)/2.
        let kill = fixtures::kill();
        let rate = (3.0 - 5f64.sqrt()) / 2.0;
        assert!((kill.eigenvalues()[0] - rate).abs() < 1e-14);
        let t20 = kill.semigroup(20.0).unwrap();
        assert!(t20.iter().all(|&x| x.abs() <= (-20.0 * rate).exp() + 1e-15));
        let t60 = kill.semigroup(60.0).unwrap();
        assert!(t60.iter().all(|&x| x.abs() < 1e-8));
    }

    #[test]
    fn resolvent_examples() {
        let g = fixtures::edge().resolvent(1.0).unwrap();
        assert!(frobenius(&(g - mat(2, &[2.0, 1.0, 1.0, 2.0]) / 3.0)) < 1e-14);
        let zero = DirichletForm::zero(fixtures::edge().space().clone());
        let g = zero.resolvent(2.0).unwrap();
        assert!(frobenius(&(g - DMatrix::identity(2, 2) * 0.5)) < 1e-15);
        let g = fixtures::twin().resolvent(1.0).unwrap();
        let block = g.view((0, 0), (2, 2)).into_owned();
        assert!(frobenius(&(block - mat(2, &[5.0, 4.0, 4.0, 5.0]) / 9.0)) < 1e-14);
        assert_eq!(
            fixtures::edge().resolvent(0.0),
            Err(Error::NonPositiveAlpha(0.0))
        );
    }

    #[test]
    fn yosida_examples() {
        let edge = fixtures::edge();
        let f = DVector::from_vec(vec![1.0, 0.0]);
        let q2 = edge.yosida_form(2.0).unwrap().energy(&f);
        assert!((q2 - 0.5).abs() < 1e-14);
        let q = edge.yosida_form(1e6).unwrap().energy(&f);
        assert!((1.0 - q).abs() <= 2e-6);
        let ones = DVector::from_element(4, 1.0);
        assert!(
            fixtures::twin()
                .yosida_form(3.0)
                .unwrap()
                .energy(&ones)
                .abs()
                < 1e-14
        );
        assert!(matches!(
            edge.yosida_form(-1.0),
            Err(Error::NonPositiveBeta(_))
        ));
    }
}
