use crate::exactlin::{GradedSpace, MultiMap, Tuple, Vector};

use super::cochain::Cochain;

/// Arity-1 map multiplying each degree-`i` basis element by `i`. In characteristic
/// `p` the degree is read as a residue.
pub fn euler_map(space: &GradedSpace) -> MultiMap {
    let f = space.field();
    let mut m = MultiMap::new(1, 0);
    for i in 0..space.dim() as u32 {
        let c = f.from_i64(space.degree(i));
        if !c.is_zero() {
            m.insert(Tuple::from_slice(&[i]), Vector::basis(i, c));
        }
    }
    m
}

/// The Euler vector field: total degree 1, only an arity-1 component.
pub fn euler_field(space: &GradedSpace) -> Cochain {
    let mut c = Cochain::new(1);
    c.set_component(euler_map(space));
    c
}
