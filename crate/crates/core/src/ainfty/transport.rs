use crate::error::{Error, Result};
use crate::hochschild::convolve::{compose_families, convolve};
use crate::hochschild::Cochain;

use super::check::check_ainfty;
use super::diffeo::{precompose_linear, FormalDiffeomorphism};
use super::structure::AInftyStructure;

/// The structure `A_Φ` making `Φ: A → A_Φ` an A∞-functor, solved arity by arity:
/// `μ_Φ^d ∘ (Φ¹)^{⊗d} = Σ ±Φ(..., μ_A, ...) - Σ_{r<d} μ_Φ^r(Φ^{s_r}, ..., Φ^{s_1})`.
/// The result is re-checked against the A∞ relation.
pub fn transport(a: &AInftyStructure, phi: &FormalDiffeomorphism) -> Result<AInftyStructure> {
    let out = transport_unchecked(a, phi)?;
    check_ainfty(&out).map_err(Error::Violation)?;
    Ok(out)
}

pub(crate) fn transport_unchecked(a: &AInftyStructure, phi: &FormalDiffeomorphism) -> Result<AInftyStructure> {
    if a.space().basis() != phi.space().basis() {
        return Err(Error::Validation("diffeomorphism lives on a different space".into()));
    }
    let space = a.space();
    let field = space.field();
    let n = a.max_arity().min(phi.max_arity());
    if phi.is_identity() {
        return a.with_max_arity(n);
    }
    let rhs = convolve(space, phi.phi(), a.mu(), n);
    let linv = phi.linear_inverse()?;
    let identity_linear = phi.has_identity_linear_part();
    let mut mu = Cochain::new(2);
    for d in 1..=n {
        let lower = compose_families(&mu, phi.phi(), 2, d..=d, &|r, dd| r < dd, field);
        let mut r = rhs.restricted(|s| s == d).sub(&lower);
        if !identity_linear {
            r = precompose_linear(space, &r, &linv, d);
        }
        if let Some(m) = r.component(d) {
            mu.set_component(m.clone());
        }
    }
    let mut out = AInftyStructure::new(a.space_arc().clone(), mu, n)?;
    if let Some(units) = a.strict_units() {
        if out.check_units(units).is_ok() {
            out.set_units_unchecked(Some(units.to_vec()));
        }
    }
    Ok(out)
}
