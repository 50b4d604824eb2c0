//! Girsanov-type transform of a killing-free form.
//!
//! `E^φ(f,g) = ∫ Γ(f,g) φ² dμ` on L²(φ²μ). For a jump form this is again a
//! jump form with `J^φ(x,y) = J(x,y) (φ(x)² + φ(y)²) / 2` and no killing.

use super::DirichletForm;
use crate::error::{Error, Result};

impl DirichletForm {
    pub fn girsanov_transform(&self, phi: &[f64]) -> Result<DirichletForm> {
        if phi.len() != self.len() {
            return Err(Error::LengthMismatch {
                points: self.len(),
                weights: phi.len(),
            });
        }
        if let Some(i) = phi.iter().position(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(Error::NonPositivePhi(i));
        }
        if !self.is_killing_free() {
            return Err(Error::HasKilling);
        }
        let sq: Vec<f64> = phi.iter().map(|p| p * p).collect();
        let mu: Vec<f64> = self
            .space()
            .mu()
            .iter()
            .zip(&sq)
            .map(|(m, s)| m * s)
            .collect();
        let space = crate::space::FiniteMeasureSpace::new(self.space().points().to_vec(), mu)?;
        let edges: Vec<(usize, usize, f64)> = self
            .edges()
            .into_iter()
            .map(|(x, y, w)| (x, y, w * (sq[x] + sq[y]) / 2.0))
            .collect();
        DirichletForm::from_edges(space, &edges, &vec![0.0; self.len()])
    }
}
