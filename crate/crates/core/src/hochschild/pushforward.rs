use crate::ainfty::{invert_fd, FormalDiffeomorphism};
use crate::error::Result;

use super::cochain::Cochain;
use super::convolve::{compose_families, convolve};

/// Image of a degree-1 cochain under a formal diffeomorphism: `b_Φ = (Φ∘b)∘Φ⁻¹`,
/// where `Φ∘b` is the convolution and the outer composition is sign-free.
/// A cocycle for `A` maps to a cocycle for the transported structure `A_Φ`.
pub fn pushforward(phi: &FormalDiffeomorphism, b: &Cochain, max_arity: usize) -> Result<Cochain> {
    let space = phi.space();
    let n = max_arity.min(phi.max_arity());
    let psi = invert_fd(phi)?;
    let phi_b = convolve(space, phi.phi(), &b.truncated(n), n);
    Ok(compose_families(&phi_b, psi.phi(), 1, 0..=n, &|_, _| true, space.field()))
}
