//! Conservative / transient / recurrent classification.
//!
//! Each minimal invariant component is tested against the definitions
//! directly: `T_1 1 = 1` on the component (conservative), `E(1_C) = 0`
//! (recurrent) and positive definiteness of `E` restricted to the component
//! (transient, the extended space being all functions on the component).

use nalgebra::DVector;

use super::{DirichletForm, DEFAULT_TOLERANCE, PSD_SLACK};
use crate::linalg::{principal_submatrix, SymmetricSpectrum};

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentClass {
    pub points: Vec<usize>,
    pub conservative: bool,
    pub transient: bool,
    pub recurrent: bool,
    /// `‖T_1 1_C − 1_C‖_∞` on the component.
    pub semigroup_defect: f64,
    /// `E(1_C)`.
    pub energy_of_one: f64,
    /// Smallest eigenvalue of `A` restricted to the component.
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub conservative: bool,
    pub transient: bool,
    pub recurrent: bool,
    pub components: Vec<ComponentClass>,
    /// Union of the recurrent components.
    pub conservative_part: Vec<usize>,
    /// Union of the transient components.
    pub dissipative_part: Vec<usize>,
    /// Points in neither part; always empty for finite forms.
    pub exceptional: Vec<usize>,
}

impl DirichletForm {
    pub fn classify(&self) -> Classification {
        let scale = self.scale();
        let t1 = self.semigroup(1.0).expect("t = 1");
        let components: Vec<ComponentClass> = self
            .invariant_sets()
            .into_iter()
            .map(|points| {
                let mut one = DVector::zeros(self.len());
                for &x in &points {
                    one[x] = 1.0;
                }
                let image = &t1 * &one;
                let semigroup_defect = points
                    .iter()
                    .map(|&x| (image[x] - 1.0).abs())
                    .fold(0.0, f64::max);
                let energy_of_one = self.energy(&one);
                let min_eigenvalue =
                    SymmetricSpectrum::new(&principal_submatrix(self.matrix(), &points)).min();
                ComponentClass {
                    conservative: semigroup_defect <= DEFAULT_TOLERANCE,
                    recurrent: energy_of_one <= DEFAULT_TOLERANCE * scale,
                    transient: min_eigenvalue > PSD_SLACK * scale,
                    points,
                    semigroup_defect,
                    energy_of_one,
                    min_eigenvalue,
                }
            })
            .collect();

        let mut conservative_part = Vec::new();
        let mut dissipative_part = Vec::new();
        let mut exceptional = Vec::new();
        for c in &components {
            let target = if c.recurrent {
                &mut conservative_part
            } else if c.transient {
                &mut dissipative_part
            } else {
                &mut exceptional
            };
            target.extend_from_slice(&c.points);
        }
        conservative_part.sort_unstable();
        dissipative_part.sort_unstable();
        exceptional.sort_unstable();

        Classification {
            conservative: components.iter().all(|c| c.conservative),
            transient: components.iter().all(|c| c.transient),
            recurrent: components.iter().all(|c| c.recurrent),
            components,
            conservative_part,
            dissipative_part,
            exceptional,
        }
    }
}
