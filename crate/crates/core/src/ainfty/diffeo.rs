use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{GradedSpace, Matrix, MultiMap, Tuple, Vector};
use crate::hochschild::convolve::compose_families;
use crate::hochschild::Cochain;

/// A formal diffeomorphism `Φ = {Φ^d}` with invertible linear part, truncated at `max_arity`.
#[derive(Clone, Debug)]
pub struct FormalDiffeomorphism {
    space: Arc<GradedSpace>,
    phi: Cochain,
    max_arity: usize,
}

impl FormalDiffeomorphism {
    pub fn new(space: Arc<GradedSpace>, phi: Cochain, max_arity: usize) -> Result<Self> {
        if phi.total_degree() != 1 {
            return Err(Error::Validation(format!(
                "formal diffeomorphisms have total degree 1, got {}",
                phi.total_degree()
            )));
        }
        phi.validate(&space)?;
        if phi.component(0).is_some_and(|m| !m.is_zero()) {
            return Err(Error::Validation("formal diffeomorphisms have no arity-0 part".into()));
        }
        let fd = Self { space, phi: phi.truncated(max_arity), max_arity };
        fd.linear_inverse()?;
        Ok(fd)
    }

    pub fn identity(space: Arc<GradedSpace>, max_arity: usize) -> Self {
        let mut phi = Cochain::new(1);
        phi.set_component(MultiMap::identity(&space));
        Self { space, phi, max_arity }
    }

    /// Identity linear part plus the given higher components.
    pub fn from_higher(space: Arc<GradedSpace>, higher: Cochain, max_arity: usize) -> Result<Self> {
        let mut phi = higher.restricted(|s| s >= 2);
        phi.set_component(MultiMap::identity(&space));
        Self::new(space, phi, max_arity)
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn space_arc(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn phi(&self) -> &Cochain {
        &self.phi
    }

    pub fn component(&self, d: usize) -> Option<&MultiMap> {
        self.phi.component(d)
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn linear_part(&self) -> MultiMap {
        self.phi.component(1).cloned().unwrap_or_else(|| MultiMap::new(1, 0))
    }

    pub fn has_identity_linear_part(&self) -> bool {
        self.linear_part() == MultiMap::identity(&self.space)
    }

    pub fn is_identity(&self) -> bool {
        self.has_identity_linear_part() && self.phi.components().all(|(s, _)| s == 1)
    }

    /// Arities `d ≥ 1` with `Φ^d` different from the identity's component.
    pub fn support(&self) -> Vec<usize> {
        self.phi.arities()
    }

    /// `Φ^d = 0` for `2 ≤ d ≤ order` and `Φ¹ = Id`.
    pub fn agrees_with_identity_to_order(&self, order: usize) -> bool {
        self.has_identity_linear_part() && self.phi.components().all(|(s, _)| s == 1 || s > order)
    }

    /// Inverse of the linear part as an arity-1 map.
    pub fn linear_inverse(&self) -> Result<MultiMap> {
        invert_linear(&self.space, &self.linear_part())
    }
}

/// Inverse of a degree-0 linear endomorphism of the whole space.
pub fn invert_linear(space: &GradedSpace, l: &MultiMap) -> Result<MultiMap> {
    if *l == MultiMap::identity(space) {
        return Ok(l.clone());
    }
    let n = space.dim();
    let f = space.field();
    let mut m = Matrix::zeros(f, n, n);
    for j in 0..n as u32 {
        if let Some(img) = l.get(&[j]) {
            for (i, c) in img.iter() {
                m.set(i as usize, j as usize, c.clone());
            }
        }
    }
    let inv = m
        .inverse()
        .ok_or_else(|| Error::Validation("linear part of the formal diffeomorphism is not invertible".into()))?;
    let mut out = MultiMap::new(1, 0);
    for j in 0..n {
        let col: Vector = (0..n).map(|i| (i as u32, inv.get(i, j).clone())).collect();
        out.insert(Tuple::from_slice(&[j as u32]), col);
    }
    Ok(out)
}

/// `c ∘ (M ⊗ ... ⊗ M)` on the arity-`d` component of `c`.
pub(crate) fn precompose_linear(space: &GradedSpace, c: &Cochain, m: &MultiMap, d: usize) -> Cochain {
    let mut inner = Cochain::new(1);
    inner.set_component(m.clone());
    let only = c.restricted(|s| s == d);
    compose_families(&only, &inner, c.total_degree(), d..=d, &|r, dd| r == dd, space.field())
}

/// `(Φ∘Ψ)^d = Σ Φ^r(Ψ^{s_r}(...), ..., Ψ^{s_1}(...))`, truncated at the smaller bound.
pub fn compose_fd(phi: &FormalDiffeomorphism, psi: &FormalDiffeomorphism) -> Result<FormalDiffeomorphism> {
    if phi.space.basis() != psi.space.basis() {
        return Err(Error::Validation("composing diffeomorphisms on different spaces".into()));
    }
    let n = phi.max_arity.min(psi.max_arity);
    let c = compose_families(&phi.phi, &psi.phi, 1, 1..=n, &|_, _| true, phi.space.field());
    FormalDiffeomorphism::new(phi.space.clone(), c, n)
}

/// Two-sided inverse up to `max_arity`, solved arity by arity from `(Ψ∘Φ)^d = 0` for `d ≥ 2`.
pub fn invert_fd(phi: &FormalDiffeomorphism) -> Result<FormalDiffeomorphism> {
    let space = &phi.space;
    let linv = phi.linear_inverse()?;
    let mut psi = Cochain::new(1);
    psi.set_component(linv.clone());
    let identity_linear = phi.has_identity_linear_part();
    for d in 2..=phi.max_arity {
        let lower = compose_families(&psi, &phi.phi, 1, d..=d, &|r, dd| r < dd, space.field());
        let mut rhs = lower.scaled(&-space.field().one());
        if !identity_linear {
            rhs = precompose_linear(space, &rhs, &linv, d);
        }
        if let Some(m) = rhs.component(d) {
            psi.set_component(m.clone());
        }
    }
    FormalDiffeomorphism::new(space.clone(), psi, phi.max_arity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;

    fn line_space() -> Arc<GradedSpace> {
        Arc::new(GradedSpace::algebra(Field::Rational, &[("p", 1), ("q", 1), ("r", 0)]).unwrap())
    }

    fn phi_k(space: &Arc<GradedSpace>, k: usize, coeff: i64, max_arity: usize) -> FormalDiffeomorphism {
        // Φ^k(p, ..., p) = coeff·p is degree-consistent only when k·1 + 1 - k = 1
        let f = space.field();
        let mut higher = Cochain::new(1);
        let mut m = MultiMap::new(k, 1 - k as i64);
        m.insert_checked(space, Tuple::from_elem(0, k), Vector::basis(0, f.from_i64(coeff))).unwrap();
        higher.set_component(m);
        FormalDiffeomorphism::from_higher(space.clone(), higher, max_arity).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let s = line_space();
        let phi = phi_k(&s, 2, 3, 7);
        let id = FormalDiffeomorphism::identity(s.clone(), 7);
        assert_eq!(compose_fd(&phi, &id).unwrap().phi(), phi.phi());
        assert_eq!(compose_fd(&id, &phi).unwrap().phi(), phi.phi());
        assert!(invert_fd(&id).unwrap().is_identity());
    }

    #[test]
    fn single_arity_inverse_negates() {
        let s = line_space();
        let phi = phi_k(&s, 3, 5, 7);
        let psi = invert_fd(&phi).unwrap();
        assert_eq!(psi.component(3), Some(&phi.component(3).unwrap().scaled(&Field::Rational.from_i64(-1))));
        assert!(psi.component(2).is_none());
        assert!(compose_fd(&psi, &phi).unwrap().is_identity());
        assert!(compose_fd(&phi, &psi).unwrap().is_identity());
    }

    #[test]
    fn composition_support_in_one_k_two_k_minus_one() {
        // truncated at 2k - 1; beyond that, Φ^k with several Ψ^k slots reaches arities up to k²
        let s = line_space();
        for k in 2..=4 {
            let n = 2 * k - 1;
            let a = phi_k(&s, k, 2, n);
            let b = phi_k(&s, k, 7, n);
            let c = compose_fd(&a, &b).unwrap();
            assert_eq!(c.support(), vec![1, k, 2 * k - 1], "k = {k}");
            // Φ^k + Ψ^k at arity k, and k slot choices of Ψ^k inside Φ^k at arity 2k - 1
            let f = Field::Rational;
            assert_eq!(c.phi().get(&vec![0; k]), Some(&Vector::basis(0, f.from_i64(9))));
            assert_eq!(c.phi().get(&vec![0; n]), Some(&Vector::basis(0, f.from_i64(14 * k as i64))));
        }
    }
}
