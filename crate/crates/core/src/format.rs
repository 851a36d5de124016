//! JSON files for algebras, cochains and run transcripts.
//!
//! Coefficients are exact strings (`"-3/2"` over Q, canonical residues over Fp),
//! entries are listed in basis order, and struct fields serialize in declaration
//! order, so equal inputs give byte-identical files.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ainfty::{check_ainfty, AInftyStructure};
use crate::error::{Error, Result};
use crate::exactlin::{BasisSpec, Field, GradedSpace, MultiMap, Tuple, Vector};
use crate::formality::{StageRecord, WeightTable};
use crate::hochschild::{Cochain, SearchReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    pub degree: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
}

/// One value `f(inputs) = Σ coefficient·label`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryFile {
    pub inputs: Vec<String>,
    pub output: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentFile {
    pub arity: usize,
    pub entries: Vec<EntryFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<Vec<String>>,
    pub basis: Vec<BasisEntry>,
    pub products: Vec<ComponentFile>,
    pub max_arity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict_units: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainFile {
    pub field: String,
    pub total_degree: i64,
    pub components: Vec<ComponentFile>,
}

fn format_err(e: impl std::fmt::Display) -> Error {
    Error::Format(e.to_string())
}

fn components_to_file(space: &GradedSpace, c: &Cochain) -> Vec<ComponentFile> {
    c.components()
        .map(|(arity, m)| ComponentFile {
            arity,
            entries: m
                .sorted_entries()
                .into_iter()
                .map(|(key, v)| EntryFile {
                    inputs: key.iter().map(|&i| space.label(i).to_string()).collect(),
                    output: v.iter().map(|(o, c)| (space.label(o).to_string(), c.to_string())).collect(),
                })
                .collect(),
        })
        .collect()
}

fn lookup(space: &GradedSpace, label: &str) -> Result<u32> {
    space.index_of(label).ok_or_else(|| Error::Format(format!("unknown basis label {label:?}")))
}

fn components_from_file(space: &GradedSpace, total_degree: i64, comps: &[ComponentFile]) -> Result<Cochain> {
    let field = space.field();
    let mut c = Cochain::new(total_degree);
    for comp in comps {
        if c.component(comp.arity).is_some() {
            return Err(Error::Format(format!("arity {} listed twice", comp.arity)));
        }
        let mut m = MultiMap::new(comp.arity, total_degree - comp.arity as i64);
        for e in &comp.entries {
            if e.inputs.len() != comp.arity {
                return Err(Error::Format(format!("entry {:?} in the arity-{} table", e.inputs, comp.arity)));
            }
            let key: Tuple = e.inputs.iter().map(|l| lookup(space, l)).collect::<Result<_>>()?;
            if m.get(&key).is_some() {
                return Err(Error::Format(format!("entry {:?} listed twice", e.inputs)));
            }
            let mut v = Vector::new();
            for (label, coeff) in &e.output {
                v.add_term(lookup(space, label)?, &field.parse_scalar(coeff)?);
            }
            if !v.is_zero() {
                m.insert_checked(space, key, v)?;
            }
        }
        c.set_component(m);
    }
    Ok(c)
}

impl AlgebraFile {
    pub fn from_structure(a: &AInftyStructure) -> Self {
        let space = a.space();
        let objects = space.objects().map(|o| o.to_vec());
        let basis = space
            .basis()
            .iter()
            .map(|b| BasisEntry {
                label: b.label.clone(),
                degree: b.degree,
                source: objects.as_ref().map(|o| o[b.source as usize].clone()),
                target: objects.as_ref().map(|o| o[b.target as usize].clone()),
            })
            .collect();
        AlgebraFile {
            field: space.field().to_string(),
            objects,
            basis,
            products: components_to_file(space, a.mu()),
            max_arity: a.max_arity(),
            strict_units: a.strict_units().map(|u| u.iter().map(|&i| space.label(i).to_string()).collect()),
        }
    }

    /// Rebuilds the structure, re-checking degrees, composability, units and the A∞ relation.
    pub fn to_structure(&self) -> Result<AInftyStructure> {
        let field: Field = self.field.parse()?;
        let specs = self
            .basis
            .iter()
            .map(|b| BasisSpec { label: b.label.clone(), degree: b.degree, source: b.source.clone(), target: b.target.clone() })
            .collect();
        let space = Arc::new(GradedSpace::new(field, self.objects.clone(), specs)?);
        let mu = components_from_file(&space, 2, &self.products)?;
        let mut a = AInftyStructure::new(space.clone(), mu, self.max_arity)?;
        if let Some(units) = &self.strict_units {
            let units = units.iter().map(|l| lookup(&space, l)).collect::<Result<_>>()?;
            a = a.with_strict_units(units)?;
        }
        check_ainfty(&a).map_err(Error::Violation)?;
        Ok(a)
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(format_err)
    }
}

impl CochainFile {
    pub fn from_cochain(space: &GradedSpace, c: &Cochain) -> Self {
        CochainFile {
            field: space.field().to_string(),
            total_degree: c.total_degree(),
            components: components_to_file(space, c),
        }
    }

    pub fn to_cochain(&self, space: &GradedSpace) -> Result<Cochain> {
        let field: Field = self.field.parse()?;
        if field != space.field() {
            return Err(Error::Format(format!("cochain over {field} for a space over {}", space.field())));
        }
        components_from_file(space, self.total_degree, &self.components)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(format_err)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(format_err)?;
    s.push('\n');
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub affine_dim: Option<usize>,
    pub rounds: usize,
}

impl From<&SearchReport> for SearchSummary {
    fn from(r: &SearchReport) -> Self {
        SearchSummary {
            unknowns: r.unknowns,
            equations: r.equations,
            rank: r.rank,
            affine_dim: r.affine_dim,
            rounds: r.rounds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageFile {
    pub stage: usize,
    pub skipped: bool,
    pub phi: Vec<ComponentFile>,
    pub search: Option<SearchSummary>,
    pub formal_to: usize,
}

impl StageFile {
    pub fn from_record(space: &GradedSpace, r: &StageRecord) -> Self {
        StageFile {
            stage: r.stage,
            skipped: r.skipped,
            phi: components_to_file(space, &r.phi),
            search: r.search.as_ref().map(SearchSummary::from),
            formal_to: r.formal_to,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightSpaceFile {
    pub weight: String,
    pub dimension: usize,
    pub degrees: Vec<i64>,
    pub integer: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightEntryFile {
    pub source: String,
    pub target: String,
    pub spaces: Vec<WeightSpaceFile>,
}

pub fn weight_table_file(space: &GradedSpace, t: &WeightTable) -> Vec<WeightEntryFile> {
    t.entries
        .iter()
        .map(|(&(s, tt), spaces)| WeightEntryFile {
            source: space.object_name(s),
            target: space.object_name(tt),
            spaces: spaces
                .iter()
                .map(|w| WeightSpaceFile {
                    weight: w.weight.to_string(),
                    dimension: w.basis.len(),
                    degrees: w.degrees.iter().copied().collect(),
                    integer: w.integer,
                })
                .collect(),
        })
        .collect()
}

/// Residual certificates of a run: each entry names a check and whether it passed.
pub type Certificates = BTreeMap<String, bool>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunTranscript {
    pub command: String,
    pub seed: Option<u64>,
    pub field: String,
    pub max_arity: usize,
    pub stages: Vec<StageFile>,
    pub certificates: Certificates,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shifts: Option<Vec<(String, String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<WeightEntryFile>>,
    /// Wall-clock seconds per phase; present only on request since it breaks byte-identity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}
