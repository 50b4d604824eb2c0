//! Serializable reports for each pipeline.
//!
//! Every report carries a `passed` flag computed against the tolerance it
//! was built with. Maps keep insertion order, so the same input always
//! serializes to the same bytes.

use indexmap::IndexMap;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::direct_integral::superpose;
use crate::ergodic::{
    compare_projective, decompose, decompose_invariant_measure, decompose_weighted,
    ergodic_measures, measure_invariance_defect, ErgodicDecomposition, RESOLVENT_ALPHAS,
    SEMIGROUP_TIMES,
};
use crate::error::{Error, Result};
use crate::forms::{Classification, DirichletForm};
use crate::schema::{parse_matrix, FormJson, SuperpositionJson};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassFlags {
    pub conservative: bool,
    pub transient: bool,
    pub recurrent: bool,
}

impl From<&Classification> for ClassFlags {
    fn from(c: &Classification) -> Self {
        Self {
            conservative: c.conservative,
            transient: c.transient,
            recurrent: c.recurrent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberReport {
    pub support: Vec<String>,
    pub mu: Vec<f64>,
    pub edges: Vec<(String, String, f64)>,
    pub killing: Vec<f64>,
    pub class: ClassFlags,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub form: f64,
    pub generator: f64,
    pub semigroup: IndexMap<String, f64>,
    pub resolvent: IndexMap<String, f64>,
    pub isometry: f64,
    pub fibers_irreducible: bool,
    pub fibers_markovian: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub scale: f64,
    pub nu: IndexMap<String, f64>,
    pub fibers: IndexMap<String, FiberReport>,
    pub residuals: ResidualReport,
}

fn fiber_report(f: &DirichletForm) -> FiberReport {
    let labels = f.space().points();
    FiberReport {
        support: labels.to_vec(),
        mu: f.space().mu().to_vec(),
        edges: f
            .edges()
            .into_iter()
            .map(|(x, y, w)| (labels[x].clone(), labels[y].clone(), w))
            .collect(),
        killing: f.killing().iter().copied().collect(),
        class: (&f.classify()).into(),
    }
}

fn keyed(params: &[f64], values: &[f64]) -> IndexMap<String, f64> {
    params
        .iter()
        .map(|p| p.to_string())
        .zip(values.iter().copied())
        .collect()
}

fn residual_report(dec: &ErgodicDecomposition, tol: f64) -> Result<ResidualReport> {
    let r = dec.verify()?;
    Ok(ResidualReport {
        form: r.form,
        generator: r.generator,
        semigroup: keyed(&SEMIGROUP_TIMES, &r.semigroup),
        resolvent: keyed(&RESOLVENT_ALPHAS, &r.resolvent),
        isometry: r.isometry,
        fibers_irreducible: r.fibers_irreducible.iter().all(|&b| b),
        fibers_markovian: r.fibers_markovian.iter().all(|&b| b),
        passed: r.passes(tol),
    })
}

pub fn decomposition_report(form: &DirichletForm, tol: f64) -> Result<DecompositionReport> {
    let dec = decompose(form)?;
    let labels = dec.quotient().index().labels();
    Ok(DecompositionReport {
        scale: dec.scale(),
        nu: labels
            .iter()
            .cloned()
            .zip(dec.nu().iter().copied())
            .collect(),
        fibers: labels
            .iter()
            .cloned()
            .zip(dec.fibers().iter().map(fiber_report))
            .collect(),
        residuals: residual_report(&dec, tol)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentReport {
    pub points: Vec<String>,
    pub conservative: bool,
    pub transient: bool,
    pub recurrent: bool,
    pub semigroup_defect: f64,
    pub energy_of_one: f64,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub conservative: bool,
    pub transient: bool,
    pub recurrent: bool,
    pub conservative_part: Vec<String>,
    pub dissipative_part: Vec<String>,
    pub exceptional: Vec<String>,
    pub components: Vec<ComponentReport>,
    /// Beurling–Deny data of the input.
    pub form: FormJson,
    /// Eigenvalues of `−L`, ascending.
    pub spectrum: Vec<f64>,
    /// Global flags agree with the fiber flags of the decomposition.
    pub consistent: bool,
    pub passed: bool,
}

pub fn classification_report(form: &DirichletForm) -> Result<ClassificationReport> {
    let labels = form.space().points();
    let names = |idx: &[usize]| idx.iter().map(|&x| labels[x].clone()).collect::<Vec<_>>();
    let cd = decompose(form)?.classification();
    let c = &cd.global;
    let consistent = cd.flags_consistent && cd.split_consistent;
    Ok(ClassificationReport {
        conservative: c.conservative,
        transient: c.transient,
        recurrent: c.recurrent,
        conservative_part: names(&c.conservative_part),
        dissipative_part: names(&c.dissipative_part),
        exceptional: names(&c.exceptional),
        components: c
            .components
            .iter()
            .map(|k| ComponentReport {
                points: names(&k.points),
                conservative: k.conservative,
                transient: k.transient,
                recurrent: k.recurrent,
                semigroup_defect: k.semigroup_defect,
                energy_of_one: k.energy_of_one,
                min_eigenvalue: k.min_eigenvalue,
            })
            .collect(),
        form: form.into(),
        spectrum: form.eigenvalues(),
        consistent,
        passed: consistent,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarreSummary {
    pub pointwise: f64,
    pub integral: f64,
    pub identity: f64,
    pub invariance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub fibers: usize,
    pub residuals: ResidualReport,
    /// Largest `|E(f) − Σ ν E_ζ(f_ζ)| / (1 + E(f))` over random `f`.
    pub reassembly: f64,
    pub carre_du_champ: CarreSummary,
    pub classification_consistent: bool,
    pub passed: bool,
}

/// Random test vectors with entries uniform in `[−1, 1]`.
pub fn random_vectors(seed: u64, n: usize, count: usize) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| DVector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0)))
        .collect()
}

pub fn verification_report(
    form: &DirichletForm,
    tol: f64,
    seed: u64,
) -> Result<VerificationReport> {
    let dec = decompose(form)?;
    let residuals = residual_report(&dec, tol)?;
    let samples = random_vectors(seed, form.len(), 20);
    let reassembly = samples
        .iter()
        .map(|f| dec.reassembly_defect(f))
        .fold(0.0, f64::max);
    let c = dec.carre_du_champ().report(&samples);
    let cd = dec.classification();
    let classification_consistent = cd.flags_consistent && cd.split_consistent;
    let carre_scale = 1.0 + crate::linalg::max_abs(form.matrix());
    let passed = residuals.passed
        && reassembly <= tol
        && c.max() <= tol * carre_scale
        && classification_consistent;
    Ok(VerificationReport {
        fibers: dec.len(),
        residuals,
        reassembly,
        carre_du_champ: CarreSummary {
            pointwise: c.pointwise,
            integral: c.integral,
            identity: c.identity,
            invariance: c.invariance,
        },
        classification_consistent,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedFiberReport {
    pub support: Vec<String>,
    /// `μ_ζ^{(φ)}`.
    pub transformed_mu: Vec<f64>,
    /// `μ_ζ^{[φ]}`.
    pub lifted_mu: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GirsanovReport {
    /// The density normalized in `L²(μ)`.
    pub phi: Vec<f64>,
    /// `E^φ` on `L²(φ²μ)`.
    pub transformed: FormJson,
    pub nu: IndexMap<String, f64>,
    pub fibers: IndexMap<String, WeightedFiberReport>,
    pub partition_matches: bool,
    /// Largest reassembly defect of the source form over random `f`.
    pub reassembly: f64,
    /// `ν_1 / ν_φ` against the constant density.
    pub density_vs_uniform: IndexMap<String, f64>,
    pub projective_defect: f64,
    pub passed: bool,
}

pub fn girsanov_report(
    form: &DirichletForm,
    phi: &[f64],
    tol: f64,
    seed: u64,
) -> Result<GirsanovReport> {
    let w = decompose_weighted(form, phi)?;
    let uniform = decompose_weighted(form, &vec![1.0; form.len()])?;
    let cmp = compare_projective(&w, &uniform)?;
    let samples = random_vectors(seed, form.len(), 20);
    let reassembly = samples
        .iter()
        .map(|f| w.reassembly_defect(form, f))
        .fold(0.0, f64::max);
    let transformed = form.girsanov_transform(w.phi())?;
    let labels = w.base().quotient().index().labels().to_vec();
    let points = form.space().points();
    let fibers = labels
        .iter()
        .cloned()
        .zip(
            w.blocks()
                .iter()
                .zip(w.transformed_measures())
                .zip(w.lifted_measures())
                .map(|((block, t), l)| WeightedFiberReport {
                    support: block.iter().map(|&x| points[x].clone()).collect(),
                    transformed_mu: t,
                    lifted_mu: l.clone(),
                }),
        )
        .collect();
    let passed = w.partition_matches() && reassembly <= tol && cmp.defect() <= tol;
    Ok(GirsanovReport {
        phi: w.phi().to_vec(),
        transformed: (&transformed).into(),
        nu: labels.iter().cloned().zip(w.nu()).collect(),
        fibers,
        partition_matches: w.partition_matches(),
        reassembly,
        density_vs_uniform: labels
            .iter()
            .cloned()
            .zip(cmp.density.iter().copied())
            .collect(),
        projective_defect: cmp.defect(),
        passed,
    })
}

/// A density uniform in `[0.5, 2]` per point.
pub fn random_density(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(0.5..=2.0)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperpositionOutput {
    pub form: FormJson,
    pub separated: bool,
    pub onto: bool,
    pub form_residual: f64,
    pub isomorphism_residual: f64,
    pub roundtrip_exact: bool,
    pub lattice_exact: bool,
    pub passed: bool,
}

pub fn superposition_report(
    input: &SuperpositionJson,
    tol: f64,
    seed: u64,
) -> Result<SuperpositionOutput> {
    let base = input.space.to_space()?;
    let family = input.family.to_family(&base)?;
    if input.forms.len() != input.family.nu.len() {
        return Err(Error::Schema(String::from(
            "\"forms\" must have one matrix per fiber",
        )));
    }
    let mats = input
        .family
        .nu
        .keys()
        .map(|k| {
            input
                .forms
                .get(k)
                .ok_or_else(|| Error::Schema(format!("no form for fiber {k:?}")))
                .and_then(|rows| parse_matrix(rows))
        })
        .collect::<Result<Vec<_>>>()?;
    let sup = superpose(&base, &family, mats)?;
    let samples = random_vectors(seed, base.len(), 20);
    let r = sup.equivalence_report(&samples);
    let form = sup.form().clone().into_dirichlet()?;
    let separated = sup.embedding().is_separated();
    let passed = r.form_residual <= tol
        && r.isomorphism_residual <= tol
        && r.lattice_exact
        && (!separated || r.roundtrip_exact);
    Ok(SuperpositionOutput {
        form: (&form).into(),
        separated,
        onto: sup.embedding().is_onto(),
        form_residual: r.form_residual,
        isomorphism_residual: r.isomorphism_residual,
        roundtrip_exact: r.roundtrip_exact,
        lattice_exact: r.lattice_exact,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub support: Vec<String>,
    pub weights: Vec<f64>,
    pub invariance_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureReport {
    pub weights: Vec<f64>,
    pub reconstruction_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasuresReport {
    pub ergodic: IndexMap<String, MeasureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixture: Option<MixtureReport>,
    pub passed: bool,
}

pub fn measures_report(
    form: &DirichletForm,
    eta: Option<&[f64]>,
    tol: f64,
) -> Result<MeasuresReport> {
    let points = form.space().points();
    let mut passed = true;
    let ergodic = ergodic_measures(form)
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let invariance_defect = measure_invariance_defect(form, &m.weights);
            passed &= invariance_defect <= tol;
            (
                format!("m{i}"),
                MeasureReport {
                    support: m.support.iter().map(|&x| points[x].clone()).collect(),
                    weights: m.weights,
                    invariance_defect,
                },
            )
        })
        .collect();
    let mixture = match eta {
        Some(eta) => {
            let mix = decompose_invariant_measure(form, eta)?;
            let reconstruction_defect = mix.reconstruction_defect(eta);
            passed &= reconstruction_defect <= tol;
            Some(MixtureReport {
                weights: mix.weights,
                reconstruction_defect,
            })
        }
        None => None,
    };
    Ok(MeasuresReport {
        ergodic,
        mixture,
        passed,
    })
}
