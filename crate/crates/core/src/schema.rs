//! JSON instance formats.
//!
//! ```text
//! space   {"points": [...], "mu": [...]}
//! family  {"nu": {ζ: ν}, "fibers": {ζ: {"support": [...], "weights": [...]}}}
//! form    {"space": space, "edges": [[x, y, w], ...], "killing": [...]}
//!         {"space": space, "matrix": [[...], ...]}
//! blocks  {"nu": {ζ: ν}, "blocks": {ζ: [[...], ...]}}
//! ```
//!
//! Points in edges and supports are labels or zero-based indices. In the
//! matrix form `space` may be omitted, which means unit masses on points
//! `x0, x1, ...`. Unknown fields are rejected.

use indexmap::IndexMap;
use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::direct_integral::{DecomposableOperator, DirectIntegralSpace};
use crate::error::{Error, Result};
use crate::forms::{DirichletForm, QuadraticForm};
use crate::space::{Fiber, FiniteMeasureSpace, IndexSpace, MeasureFamily};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceJson {
    pub points: Vec<String>,
    pub mu: Vec<f64>,
}

/// A point given by label or by index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRef {
    Index(usize),
    Label(String),
}

impl PointRef {
    pub fn resolve(&self, space: &FiniteMeasureSpace) -> Result<usize> {
        match self {
            PointRef::Index(i) if *i < space.len() => Ok(*i),
            PointRef::Index(i) => Err(Error::UnknownPoint(format!("#{i}"))),
            PointRef::Label(l) => space.index_of(l),
        }
    }
}

pub type EdgeJson = (PointRef, PointRef, f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<EdgeJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub killing: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberJson {
    pub support: Vec<PointRef>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub nu: IndexMap<String, f64>,
    pub fibers: IndexMap<String, FiberJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockOperatorJson {
    pub nu: IndexMap<String, f64>,
    pub blocks: IndexMap<String, Vec<Vec<f64>>>,
}

/// Input of a superposition: a base space, a family over it and one form
/// matrix per fiber, keyed like the family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperpositionJson {
    pub space: SpaceJson,
    pub family: FamilyJson,
    pub forms: IndexMap<String, Vec<Vec<f64>>>,
}

/// Parses JSON text, reporting syntax errors with their position.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        let (line, column) = (e.line(), e.column());
        match e.classify() {
            serde_json::error::Category::Data => Error::Schema(e.to_string()),
            _ => Error::Json {
                line,
                column,
                message: e.to_string(),
            },
        }
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

pub fn parse_form(text: &str) -> Result<DirichletForm> {
    from_json::<FormJson>(text)?.to_form()
}

impl SpaceJson {
    pub fn to_space(&self) -> Result<FiniteMeasureSpace> {
        FiniteMeasureSpace::new(self.points.clone(), self.mu.clone())
    }
}

impl From<&FiniteMeasureSpace> for SpaceJson {
    fn from(s: &FiniteMeasureSpace) -> Self {
        Self {
            points: s.points().to_vec(),
            mu: s.mu().to_vec(),
        }
    }
}

fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            rows: n,
            cols: r.len(),
        });
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl FormJson {
    pub fn to_form(&self) -> Result<DirichletForm> {
        match (&self.edges, &self.matrix) {
            (Some(edges), None) => {
                let space = self
                    .space
                    .as_ref()
                    .ok_or_else(|| Error::Schema(String::from("edge form needs a \"space\"")))?
                    .to_space()?;
                let edges = edges
                    .iter()
                    .map(|(x, y, w)| Ok((x.resolve(&space)?, y.resolve(&space)?, *w)))
                    .collect::<Result<Vec<_>>>()?;
                let killing = self
                    .killing
                    .clone()
                    .unwrap_or_else(|| vec![0.0; space.len()]);
                DirichletForm::from_edges(space, &edges, &killing)
            }
            (None, Some(rows)) => {
                if self.killing.is_some() {
                    return Err(Error::Schema(String::from(
                        "\"killing\" is only allowed with \"edges\"",
                    )));
                }
                let m = matrix_from_rows(rows)?;
                let space = match &self.space {
                    Some(s) => s.to_space()?,
                    None => FiniteMeasureSpace::unlabeled(vec![1.0; m.nrows()])?,
                };
                QuadraticForm::new(space, m)?.into_dirichlet()
            }
            _ => Err(Error::Schema(String::from(
                "a form needs exactly one of \"edges\" and \"matrix\"",
            ))),
        }
    }
}

impl From<&DirichletForm> for FormJson {
    fn from(f: &DirichletForm) -> Self {
        let labels = f.space().points();
        Self {
            space: Some(f.space().into()),
            edges: Some(
                f.edges()
                    .into_iter()
                    .map(|(x, y, w)| {
                        (
                            PointRef::Label(labels[x].clone()),
                            PointRef::Label(labels[y].clone()),
                            w,
                        )
                    })
                    .collect(),
            ),
            killing: Some(f.killing().iter().copied().collect()),
            matrix: None,
        }
    }
}

impl FamilyJson {
    pub fn to_family(&self, base: &FiniteMeasureSpace) -> Result<MeasureFamily> {
        if self.fibers.len() != self.nu.len()
            || self.nu.keys().any(|k| !self.fibers.contains_key(k))
        {
            return Err(Error::Schema(String::from(
                "\"nu\" and \"fibers\" must have the same keys",
            )));
        }
        let index = IndexSpace::new(
            self.nu.keys().cloned().collect(),
            self.nu.values().copied().collect(),
        )?;
        let fibers = self
            .nu
            .keys()
            .map(|k| {
                let f = &self.fibers[k];
                Ok(Fiber {
                    support: f
                        .support
                        .iter()
                        .map(|p| p.resolve(base))
                        .collect::<Result<_>>()?,
                    weights: f.weights.clone(),
                })
            })
            .collect::<Result<_>>()?;
        MeasureFamily::new(index, fibers, base.len())
    }

    pub fn from_family(base: &FiniteMeasureSpace, family: &MeasureFamily) -> Self {
        let labels = family.index().labels();
        Self {
            nu: labels
                .iter()
                .cloned()
                .zip(family.index().nu().iter().copied())
                .collect(),
            fibers: labels
                .iter()
                .cloned()
                .zip(family.fibers().iter().map(|f| {
                    FiberJson {
                        support: f
                            .support
                            .iter()
                            .map(|&x| PointRef::Label(base.points()[x].clone()))
                            .collect(),
                        weights: f.weights.clone(),
                    }
                }))
                .collect(),
        }
    }
}

impl BlockOperatorJson {
    /// Blocks over fibers whose points are labelled `ζ:0, ζ:1, ...` with the
    /// given fiber measures.
    pub fn to_operator(
        &self,
        fiber_measures: &IndexMap<String, Vec<f64>>,
    ) -> Result<DecomposableOperator> {
        if self.blocks.len() != self.nu.len()
            || self.nu.keys().any(|k| !self.blocks.contains_key(k))
        {
            return Err(Error::Schema(String::from(
                "\"nu\" and \"blocks\" must have the same keys",
            )));
        }
        let index = IndexSpace::new(
            self.nu.keys().cloned().collect(),
            self.nu.values().copied().collect(),
        )?;
        let mut fibers = Vec::new();
        let mut blocks = Vec::new();
        for k in self.nu.keys() {
            let m = matrix_from_rows(&self.blocks[k])?;
            let mu = fiber_measures
                .get(k)
                .cloned()
                .unwrap_or_else(|| vec![1.0 / m.nrows().max(1) as f64; m.nrows()]);
            fibers.push(FiniteMeasureSpace::new(
                (0..mu.len()).map(|i| format!("{k}:{i}")).collect(),
                mu,
            )?);
            blocks.push(m);
        }
        DecomposableOperator::new(DirectIntegralSpace::new(index, fibers)?, blocks)
    }

    pub fn from_operator(op: &DecomposableOperator) -> Self {
        let labels = op.space().index().labels();
        Self {
            nu: labels
                .iter()
                .cloned()
                .zip(op.space().index().nu().iter().copied())
                .collect(),
            blocks: labels
                .iter()
                .cloned()
                .zip(op.blocks().iter().map(rows_of))
                .collect(),
        }
    }
}

pub(crate) fn parse_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    matrix_from_rows(rows)
}
