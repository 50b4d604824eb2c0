//! Invariant sets and irreducibility.
//!
//! A set `A` is invariant when any of the following equivalent conditions
//! hold, each tested here on the standard basis of L²(μ):
//!
//! - (a) `T_t(1_A f) = 1_A T_t f` for `t ∈ {0.3, 1}`;
//! - (b) `T_t(1_A f)` vanishes on `Aᶜ`;
//! - (c) `G_α(1_A f)` vanishes on `Aᶜ` for `α ∈ {1, 5}`;
//! - (d) `E(f,g) = E(1_A f, 1_A g) + E(1_{Aᶜ} f, 1_{Aᶜ} g)`.
//!
//! The minimal invariant sets are the connected components of the jump graph.

use nalgebra::DMatrix;

use super::{DirichletForm, COUPLING_THRESHOLD, DEFAULT_TOLERANCE};
use crate::linalg::max_abs;

pub const PROBE_TIMES: [f64; 2] = [0.3, 1.0];
pub const PROBE_ALPHAS: [f64; 2] = [1.0, 5.0];

/// Largest defect found by each criterion, and the verdicts at the probe tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantReport {
    pub commutation_defect: f64,
    pub semigroup_leak: f64,
    pub resolvent_leak: f64,
    pub energy_split_defect: f64,
    pub commutes: bool,
    pub semigroup_confined: bool,
    pub resolvent_confined: bool,
    pub energy_splits: bool,
}

impl InvariantReport {
    pub fn verdicts(&self) -> [bool; 4] {
        [
            self.commutes,
            self.semigroup_confined,
            self.resolvent_confined,
            self.energy_splits,
        ]
    }

    /// All four criteria give the same answer.
    pub fn agree(&self) -> bool {
        let v = self.verdicts();
        v.iter().all(|&b| b == v[0])
    }

    /// The common verdict; when the criteria disagree the energy split decides.
    pub fn is_invariant(&self) -> bool {
        self.energy_splits
    }
}

/// Semigroup and resolvent matrices at the probe parameters, computed once.
#[derive(Debug, Clone)]
pub struct InvarianceProbe<'a> {
    form: &'a DirichletForm,
    semigroups: Vec<DMatrix<f64>>,
    resolvents: Vec<DMatrix<f64>>,
    tolerance: f64,
}

impl<'a> InvarianceProbe<'a> {
    pub fn new(form: &'a DirichletForm, tolerance: f64) -> Self {
        let semigroups = PROBE_TIMES
            .iter()
            .map(|&t| form.semigroup(t).expect("probe times are nonnegative"))
            .collect();
        let resolvents = PROBE_ALPHAS
            .iter()
            .map(|&a| form.resolvent(a).expect("probe alphas are positive"))
            .collect();
        Self {
            form,
            semigroups,
            resolvents,
            tolerance,
        }
    }

    /// `set` given as a membership mask.
    pub fn check_mask(&self, inside: &[bool]) -> InvariantReport {
        let n = inside.len();
        let ind = |i: usize| if inside[i] { 1.0 } else { 0.0 };

        // (a) entries of T D − D T, i.e. T_ij (1_A(j) − 1_A(i)).
        let commutation_defect = self
            .semigroups
            .iter()
            .map(|t| entrywise_max(n, |i, j| t[(i, j)] * (ind(j) - ind(i))))
            .fold(0.0, f64::max);
        // (b) entries of (I − D) T D.
        let semigroup_leak = self
            .semigroups
            .iter()
            .map(|t| entrywise_max(n, |i, j| (1.0 - ind(i)) * t[(i, j)] * ind(j)))
            .fold(0.0, f64::max);
        // (c) entries of (I − D) G D.
        let resolvent_leak = self
            .resolvents
            .iter()
            .map(|g| entrywise_max(n, |i, j| (1.0 - ind(i)) * g[(i, j)] * ind(j)))
            .fold(0.0, f64::max);
        // (d) E(e_i, e_j) − E(1_A e_i, 1_A e_j) − E(1_{Aᶜ} e_i, 1_{Aᶜ} e_j).
        let a = self.form.matrix();
        let energy_split_defect = entrywise_max(n, |i, j| {
            a[(i, j)] - ind(i) * ind(j) * a[(i, j)] - (1.0 - ind(i)) * (1.0 - ind(j)) * a[(i, j)]
        });

        let tol = self.tolerance;
        let t_scale = 1.0 + self.semigroups.iter().map(max_abs).fold(0.0, f64::max);
        let g_scale = 1.0 + self.resolvents.iter().map(max_abs).fold(0.0, f64::max);
        InvariantReport {
            commutation_defect,
            semigroup_leak,
            resolvent_leak,
            energy_split_defect,
            commutes: commutation_defect <= tol * t_scale,
            semigroup_confined: semigroup_leak <= tol * t_scale,
            resolvent_confined: resolvent_leak <= tol * g_scale,
            energy_splits: energy_split_defect <= tol * self.form.scale(),
        }
    }

    pub fn check(&self, set: &[usize]) -> InvariantReport {
        let mut inside = vec![false; self.form.len()];
        for &x in set {
            inside[x] = true;
        }
        self.check_mask(&inside)
    }
}

fn entrywise_max<F: Fn(usize, usize) -> f64>(n: usize, f: F) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            m = m.max(f(i, j).abs());
        }
    }
    m
}

impl DirichletForm {
    pub fn invariance_probe(&self, tolerance: f64) -> InvarianceProbe<'_> {
        InvarianceProbe::new(self, tolerance)
    }

    /// Evaluates all four invariance criteria for `set`.
    pub fn is_invariant(&self, set: &[usize]) -> InvariantReport {
        self.invariance_probe(DEFAULT_TOLERANCE).check(set)
    }

    /// The minimal invariant partition: connected components of the graph
    /// with an edge wherever `J(x,y) > 1e-12 · max J`. Blocks are sorted
    /// internally and ordered by smallest point index.
    pub fn invariant_sets(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let j = self.jump();
        let tau = COUPLING_THRESHOLD * self.jump_max();
        let mut label = vec![usize::MAX; n];
        let mut blocks = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            let mut block = vec![start];
            label[start] = id;
            let mut head = 0;
            while head < block.len() {
                let x = block[head];
                head += 1;
                for y in 0..n {
                    if label[y] == usize::MAX && j[(x, y)] > tau {
                        label[y] = id;
                        block.push(y);
                    }
                }
            }
            block.sort_unstable();
            blocks.push(block);
        }
        blocks
    }

    pub fn is_irreducible(&self) -> bool {
        self.invariant_sets().len() == 1
    }
}
