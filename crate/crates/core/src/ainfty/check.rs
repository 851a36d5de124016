use crate::error::ViolationReport;
use crate::exactlin::multimap::show_vector;
use crate::exactlin::{GradedSpace, Tuple, Vector};
use crate::hochschild::convolve::{compose_families, convolve};
use crate::hochschild::Cochain;

use super::diffeo::FormalDiffeomorphism;
use super::structure::AInftyStructure;

pub(crate) fn report(space: &GradedSpace, relation: &str, key: &Tuple, residual: &Vector) -> ViolationReport {
    ViolationReport {
        relation: relation.to_string(),
        arity: key.len(),
        tuple: key.iter().map(|&i| space.label(i).to_string()).collect(),
        residual: show_vector(space, residual),
    }
}

/// Evaluates `μ∘μ` up to the truncation; the first nonzero residual (by arity,
/// then lexicographic tuple) is reported.
pub fn check_ainfty(a: &AInftyStructure) -> Result<(), ViolationReport> {
    let n = a.max_arity();
    let mm = convolve(a.space(), a.mu(), a.mu(), n);
    match mm.first_difference(&Cochain::new(3), n) {
        None => Ok(()),
        Some((key, residual)) => Err(report(a.space(), "A∞ relation μ∘μ = 0", &key, &residual)),
    }
}

/// Both sides of the functor equation up to arity `n`:
/// `Σ μ_B^r(Φ^{s_r}, ..., Φ^{s_1})` and `Σ (-1)^{†_i} Φ(..., μ_A^j, ...)`.
pub(crate) fn functor_sides(
    phi: &FormalDiffeomorphism,
    a: &AInftyStructure,
    b: &AInftyStructure,
    n: usize,
) -> (Cochain, Cochain) {
    let field = a.space().field();
    let lhs = compose_families(b.mu(), phi.phi(), 2, 1..=n, &|_, _| true, field);
    let rhs = convolve(a.space(), phi.phi(), a.mu(), n);
    (lhs, rhs)
}

/// Verifies that `Φ` is an A∞-functor from `a` to `b` up to the common truncation.
pub fn check_functor(phi: &FormalDiffeomorphism, a: &AInftyStructure, b: &AInftyStructure) -> Result<(), ViolationReport> {
    let n = phi.max_arity().min(a.max_arity()).min(b.max_arity());
    let (lhs, rhs) = functor_sides(phi, a, b, n);
    match lhs.first_difference(&rhs, n) {
        None => Ok(()),
        Some((key, residual)) => Err(report(a.space(), "functor equation", &key, &residual)),
    }
}
