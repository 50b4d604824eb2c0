//! Ergodic decomposition of Dirichlet forms on finite weighted measure spaces.
//!
//! A symmetric Markovian form `E(f, g) = fᵀ A g` on `L²(X, μ)` splits along its
//! minimal invariant sets into irreducible pieces. Over a finite index space
//! the direct integral `E = ∫⊕ E_ζ dν(ζ)` is a ν-weighted direct sum, so every
//! identity of the decomposition can be checked exactly with linear algebra.
//!
//! ```
//! use ergodec::{ergodic::decompose, fixtures};
//!
//! let dec = decompose(&fixtures::twin()).unwrap();
//! assert_eq!(dec.nu(), &[0.5, 0.5]);
//! assert!(dec.verify().unwrap().passes(1e-12));
//! ```
//!
//! Modules follow the construction: [`space`] holds measure spaces,
//! disintegrations and quotient maps, [`forms`] the Dirichlet forms and their
//! dynamics, [`direct_integral`] the fibered Hilbert spaces, forms and
//! operators, and [`ergodic`] the decomposition pipelines. [`schema`] and
//! [`report`] define the JSON formats used by the command-line tool.

pub mod direct_integral;
pub mod ergodic;
pub mod error;
pub mod fixtures;
pub mod forms;
pub mod generate;
pub mod linalg;
pub mod report;
pub mod schema;
pub mod space;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/forms.md")]
    mod forms {}
    #[doc = include_str!("../../../book/src/invariant_sets.md")]
    mod invariant_sets {}
    #[doc = include_str!("../../../book/src/direct_integrals.md")]
    mod direct_integrals {}
    #[doc = include_str!("../../../book/src/ergodic.md")]
    mod ergodic {}
    #[doc = include_str!("../../../book/src/weighted.md")]
    mod weighted {}
    #[doc = include_str!("../../../book/src/measures.md")]
    mod measures {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
