use std::ops::RangeInclusive;
use std::sync::Arc;

use rand::Rng;

use crate::error::Result;
use crate::exactlin::{GradedSpace, MultiMap, Vector};
use crate::hochschild::Cochain;

use super::diffeo::FormalDiffeomorphism;

/// Shape of a random formal diffeomorphism with identity linear part.
#[derive(Clone, Debug)]
pub struct RandomDiffeoOptions {
    pub arities: RangeInclusive<usize>,
    /// Probability that a given (tuple, output) coefficient is nonzero.
    pub density: f64,
    /// Coefficients are drawn from `[-bound, bound] \ {0}`.
    pub bound: i64,
    /// Basis elements never used as inputs, e.g. strict units.
    pub avoid_inputs: Vec<u32>,
}

impl Default for RandomDiffeoOptions {
    fn default() -> Self {
        Self { arities: 2..=3, density: 0.3, bound: 3, avoid_inputs: Vec::new() }
    }
}

/// Random higher components `Φ^d`, `d` in the requested arities, truncated at `max_arity`.
pub fn random_diffeo<R: Rng>(
    space: Arc<GradedSpace>,
    opts: &RandomDiffeoOptions,
    max_arity: usize,
    rng: &mut R,
) -> Result<FormalDiffeomorphism> {
    let f = space.field();
    let mut higher = Cochain::new(1);
    for d in opts.arities.clone().filter(|&d| d >= 2 && d <= max_arity) {
        let mut m = MultiMap::new(d, 1 - d as i64);
        for t in space.composable_tuples(d, &|x| !opts.avoid_inputs.contains(&x)) {
            let mut v = Vector::new();
            for o in space.outputs_for(&t, 1 - d as i64) {
                if rng.gen_bool(opts.density) {
                    let mut c = rng.gen_range(1..=opts.bound);
                    if rng.gen_bool(0.5) {
                        c = -c;
                    }
                    v.add_term(o, &f.from_i64(c));
                }
            }
            if !v.is_zero() {
                m.insert(t, v);
            }
        }
        higher.set_component(m);
    }
    FormalDiffeomorphism::from_higher(space, higher, max_arity)
}
