use log::info;

use crate::ainfty::AInftyStructure;
use crate::error::{Error, Result};
use crate::hochschild::search::cocycle_residual;
use crate::hochschild::{purity_check, Cochain, SearchMode};

use super::induction::{formalize, FormalizeResult};
use super::weights::{twisted_field, EquivariantStructures};

#[derive(Clone, Debug)]
pub struct CategoricalFormalization {
    /// The twisted field `b̃`.
    pub twisted: Cochain,
    /// The run on the total algebra.
    pub run: FormalizeResult,
    /// The formal category: the input's `μ²` on the categorical space.
    pub formal: AInftyStructure,
}

/// Twists `b` by the equivariant structures, checks that `b̃` is a cocycle whose
/// linear part is the Euler map on every morphism space, and formalizes the total algebra.
pub fn categorical_formalize(
    a: &AInftyStructure,
    b: &Cochain,
    structures: &EquivariantStructures,
    mode: SearchMode,
) -> Result<CategoricalFormalization> {
    let units = a
        .strict_units()
        .ok_or_else(|| Error::Validation("categorical formalization needs a strictly unital category".into()))?;
    a.check_units(units)?;
    a.require_minimal()?;
    let twisted = twisted_field(a, b, structures)?;
    if twisted.components().any(|(s, _)| s == 0) {
        return Err(Error::NotPure("twisted field has a constant term".into()));
    }
    purity_check(a, &twisted).map_err(|f| Error::NotPure(format!("twisted field: {f}")))?;
    let n = a.max_arity();
    if let Some((key, v)) = cocycle_residual(a, &twisted, n) {
        return Err(Error::Violation(crate::ainfty::check::report(a.space(), "cocycle equation δb̃ = 0", &key, &v)));
    }
    info!("formalizing the total algebra of {} objects", a.space().num_objects());
    let total = a.forget_objects();
    let run = formalize(&total, Some(&twisted), mode)?;
    let mu2 = run.formal.product(2).cloned().unwrap_or_else(|| crate::exactlin::MultiMap::new(2, 0));
    let formal = AInftyStructure::from_product(a.space_arc().clone(), mu2, n)?.with_strict_units(units.to_vec())?;
    Ok(CategoricalFormalization { twisted, run, formal })
}
