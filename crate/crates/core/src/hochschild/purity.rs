use crate::ainfty::AInftyStructure;
use crate::error::{Error, Result};
use crate::exactlin::multimap::{show_tuple, show_vector};
use crate::exactlin::MultiMap;

use super::cochain::Cochain;
use super::euler::euler_map;

/// Where a field fails to be pure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PurityFailure {
    ConstantTerm(String),
    /// Basis elements on which `b¹` differs from the Euler map, with the difference.
    LinearPart(Vec<(String, String)>),
}

impl std::fmt::Display for PurityFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PurityFailure::ConstantTerm(v) => write!(f, "b⁰ = {v} is nonzero"),
            PurityFailure::LinearPart(diffs) => {
                write!(f, "b¹ - e is nonzero on")?;
                for (a, d) in diffs {
                    write!(f, " {a} ↦ {d};")?;
                }
                Ok(())
            }
        }
    }
}

/// Chain-level purity of a degree-1 cochain on a minimal structure:
/// `b⁰ = 0` and `b¹` equals the Euler map exactly.
pub fn purity_check(a: &AInftyStructure, b: &Cochain) -> std::result::Result<(), PurityFailure> {
    let space = a.space();
    if let Some(b0) = b.component(0) {
        if let Some((_, v)) = b0.sorted_entries().first() {
            return Err(PurityFailure::ConstantTerm(show_vector(space, v)));
        }
    }
    let e = euler_map(space);
    let b1 = b.component(1).cloned().unwrap_or_else(|| MultiMap::new(1, 0));
    let keys = b1.differing_keys(&e);
    if keys.is_empty() {
        return Ok(());
    }
    let diff = b1.sub(&e);
    let diffs = keys
        .iter()
        .map(|k| (show_tuple(space, k), show_vector(space, &diff.get(k).cloned().unwrap_or_default())))
        .collect();
    Err(PurityFailure::LinearPart(diffs))
}

/// Purity as an engine error, after checking minimality.
pub fn require_pure(a: &AInftyStructure, b: &Cochain) -> Result<()> {
    a.require_minimal()?;
    purity_check(a, b).map_err(|f| Error::NotPure(f.to_string()))
}
