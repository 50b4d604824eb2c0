//! Carré du champ.
//!
//! `Γ(f,g)(x) = (1 / 2μ(x)) [Σ_y J(x,y)(f(x)−f(y))(g(x)−g(y)) + k(x) f(x) g(x)]`.
//! The killing term makes `E(f,gh) + E(fh,g) − E(fg,h) = 2∫ h Γ(f,g) dμ` hold
//! for every Dirichlet form; `∫ Γ(f) dμ = E(f)` only when `k ≡ 0`.

use nalgebra::DVector;

use super::DirichletForm;

#[derive(Debug, Clone, Copy)]
pub struct CarreDuChamp<'a> {
    form: &'a DirichletForm,
}

impl DirichletForm {
    pub fn carre_du_champ(&self) -> CarreDuChamp<'_> {
        CarreDuChamp { form: self }
    }
}

impl CarreDuChamp<'_> {
    pub fn gamma(&self, f: &DVector<f64>, g: &DVector<f64>) -> DVector<f64> {
        let form = self.form;
        let j = form.jump();
        let k = form.killing();
        let mu = form.space().mu();
        let n = form.len();
        DVector::from_fn(n, |x, _| {
            let jump: f64 = (0..n)
                .map(|y| j[(x, y)] * (f[x] - f[y]) * (g[x] - g[y]))
                .sum();
            (jump + k[x] * f[x] * g[x]) / (2.0 * mu[x])
        })
    }

    pub fn gamma_diag(&self, f: &DVector<f64>) -> DVector<f64> {
        self.gamma(f, f)
    }

    /// `∫ Γ(f, g) dμ`.
    pub fn integral(&self, f: &DVector<f64>, g: &DVector<f64>) -> f64 {
        self.form.space().integrate(&self.gamma(f, g))
    }

    /// `E(f,gh) + E(fh,g) − E(fg,h) − 2∫ h Γ(f,g) dμ`.
    pub fn identity_residual(&self, f: &DVector<f64>, g: &DVector<f64>, h: &DVector<f64>) -> f64 {
        let e = |a: &DVector<f64>, b: &DVector<f64>| self.form.bilinear(a, b);
        let lhs = e(f, &g.component_mul(h)) + e(&f.component_mul(h), g) - e(&f.component_mul(g), h);
        let rhs = 2.0
            * self
                .form
                .space()
                .integrate(&h.component_mul(&self.gamma(f, g)));
        lhs - rhs
    }
}
