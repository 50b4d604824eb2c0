//! Seeded random instances with a prescribed number of components.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::forms::DirichletForm;
use crate::space::FiniteMeasureSpace;

/// Parameters of [`generate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub n: usize,
    pub components: usize,
    /// Probability that a point carries killing.
    pub killing_prob: f64,
    /// Probability of each extra edge inside a component, on top of a
    /// spanning tree.
    pub density: f64,
}

/// Random Markovian form on points `p0..p{n-1}` with exactly
/// `components` minimal invariant sets.
///
/// Points are dealt to components at random, each component gets a random
/// spanning tree plus extra edges, edge weights and killing rates are
/// uniform in `[0.1, 2]` and masses uniform in `[0.5, 2]`.
pub fn generate(cfg: GenConfig) -> Result<DirichletForm> {
    let GenConfig {
        seed,
        n,
        components,
        killing_prob,
        density,
    } = cfg;
    if components == 0 || n < components {
        return Err(Error::InvalidShape(format!(
            "need n >= components >= 1, got n = {n}, components = {components}"
        )));
    }
    for (name, p) in [("killing probability", killing_prob), ("density", density)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidShape(format!(
                "{name} must lie in [0, 1], got {p}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut blocks = vec![Vec::new(); components];
    for (i, &x) in order.iter().enumerate() {
        let c = if i < components {
            i
        } else {
            rng.random_range(0..components)
        };
        blocks[c].push(x);
    }

    let mut edges = Vec::new();
    for block in &blocks {
        for i in 1..block.len() {
            let j = rng.random_range(0..i);
            edges.push((block[i], block[j], rng.random_range(0.1..=2.0)));
        }
        for i in 0..block.len() {
            for j in 0..i {
                if rng.random_bool(density) {
                    edges.push((block[i], block[j], rng.random_range(0.1..=2.0)));
                }
            }
        }
    }
    let killing: Vec<f64> = (0..n)
        .map(|_| {
            if rng.random_bool(killing_prob) {
                rng.random_range(0.1..=2.0)
            } else {
                0.0
            }
        })
        .collect();
    let mu: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..=2.0)).collect();
    let space = FiniteMeasureSpace::new((0..n).map(|i| format!("p{i}")).collect(), mu)?;
    DirichletForm::from_edges(space, &edges, &killing)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(seed: u64, n: usize, components: usize, killing_prob: f64, density: f64) -> GenConfig {
        GenConfig {
            seed,
            n,
            components,
            killing_prob,
            density,
        }
    }

    #[test]
    fn component_count() {
        let f = generate(cfg(1, 8, 3, 0.0, 0.5)).unwrap();
        assert_eq!(f.invariant_sets().len(), 3);
        assert!(f.is_killing_free());
    }

    #[test]
    fn single_point() {
        let f = generate(cfg(7, 1, 1, 0.0, 1.0)).unwrap();
        assert_eq!(f.matrix()[(0, 0)], 0.0);
        let f = generate(cfg(7, 1, 1, 1.0, 1.0)).unwrap();
        assert!(f.matrix()[(0, 0)] >= 0.1);
    }

    #[test]
    fn deterministic() {
        let a = generate(cfg(42, 20, 4, 0.3, 0.2)).unwrap();
        let b = generate(cfg(42, 20, 4, 0.3, 0.2)).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        assert_eq!(a.space(), b.space());
    }

    #[test]
    fn bad_shapes() {
        assert!(matches!(
            generate(cfg(0, 2, 3, 0.0, 0.0)),
            Err(Error::InvalidShape(_))
        ));
        assert!(matches!(
            generate(cfg(0, 2, 0, 0.0, 0.0)),
            Err(Error::InvalidShape(_))
        ));
        assert!(matches!(
            generate(cfg(0, 2, 1, 1.5, 0.0)),
            Err(Error::InvalidShape(_))
        ));
    }
}
