//! Sparse evaluation of the convolution product, the Hochschild differential
//! and sign-free multilinear composition.
//!
//! Sign table (reduced degree `‖a‖ = |a| - 1`, tuples written `(a_d, ..., a_1)`,
//! `†_i = Σ_{k≤i} ‖a_k‖`):
//!
//! * convolution `(σ∘τ)^d = Σ (-1)^{(|τ|-1)†_i} σ^{d-j+1}(a_d, ..., τ^j(a_{i+j}, ..., a_{i+1}), a_i, ..., a_1)`
//! * differential `δσ = μ∘σ + (-1)^{|σ|} σ∘μ`
//! * A∞ relation `μ∘μ = 0`
//! * composition of formal diffeomorphisms and the left side of the functor
//!   equation `Σ F^r(G^{s_r}(...), ..., G^{s_1}(...))` carry no signs.

use std::collections::HashMap;

use rayon::prelude::*;

use super::cochain::Cochain;
use crate::exactlin::{sign, Field, GradedSpace, Scalar, Tuple, Vector};

/// Entries of a cochain indexed by the output basis element they hit.
pub struct OutputIndex {
    by_output: HashMap<u32, Vec<(Tuple, Scalar)>>,
}

impl OutputIndex {
    pub fn new(c: &Cochain) -> Self {
        let mut by_output: HashMap<u32, Vec<(Tuple, Scalar)>> = HashMap::new();
        for (_, m) in c.components() {
            for (k, v) in m.sorted_entries() {
                for (o, coeff) in v.iter() {
                    by_output.entry(o).or_default().push((k.clone(), coeff.clone()));
                }
            }
        }
        Self { by_output }
    }

    /// Inputs `(U, c)` with `c` the coefficient of `o` in the value on `U`.
    pub fn preimages(&self, o: u32) -> &[(Tuple, Scalar)] {
        self.by_output.get(&o).map_or(&[], |v| v.as_slice())
    }
}

/// Entries of a cochain indexed by the basis elements occurring in their input slots.
pub struct SlotIndex {
    by_input: HashMap<u32, Vec<(Tuple, usize, Vector)>>,
}

impl SlotIndex {
    pub fn new(c: &Cochain) -> Self {
        let mut by_input: HashMap<u32, Vec<(Tuple, usize, Vector)>> = HashMap::new();
        for (_, m) in c.components() {
            for (k, v) in m.sorted_entries() {
                for (p, &x) in k.iter().enumerate() {
                    by_input.entry(x).or_default().push((k.clone(), p, v.clone()));
                }
            }
        }
        Self { by_input }
    }

    /// Entries `(key, position, value)` with `key[position] == x`.
    pub fn occurrences(&self, x: u32) -> &[(Tuple, usize, Vector)] {
        self.by_input.get(&x).map_or(&[], |v| v.as_slice())
    }
}

/// Sign weight `Σ ‖y‖` over a slice of inputs.
pub fn reduced_degree_sum(space: &GradedSpace, t: &[u32]) -> i64 {
    t.iter().map(|&y| space.degree(y) - 1).sum()
}

pub(crate) fn splice(outer: &[u32], pos: usize, inner: &[u32]) -> Tuple {
    let mut t = Tuple::with_capacity(outer.len() + inner.len() - 1);
    t.extend_from_slice(&outer[..pos]);
    t.extend_from_slice(inner);
    t.extend_from_slice(&outer[pos + 1..]);
    t
}

type Acc = HashMap<Tuple, Vector>;

fn merge(mut a: Acc, b: Acc) -> Acc {
    if a.len() < b.len() {
        return merge(b, a);
    }
    for (k, v) in b {
        match a.get_mut(&k) {
            Some(x) => {
                x.add(&v);
            }
            None => {
                a.insert(k, v);
            }
        }
    }
    a
}

fn collect_cochain(total_degree: i64, acc: Acc) -> Cochain {
    let mut c = Cochain::new(total_degree);
    for (k, v) in acc {
        if !v.is_zero() {
            c.add_to(&k, &v);
        }
    }
    c.prune();
    c
}

/// Convolution `σ∘τ` truncated at `max_arity`.
pub fn convolve(space: &GradedSpace, sigma: &Cochain, tau: &Cochain, max_arity: usize) -> Cochain {
    let field = space.field();
    let tau_idx = OutputIndex::new(tau);
    let tau_sign = tau.total_degree() - 1;
    let entries: Vec<(&Tuple, &Vector)> = sigma.components().flat_map(|(_, m)| m.iter()).collect();
    let acc = entries
        .par_iter()
        .fold(Acc::new, |mut acc, (key, val)| {
            let s = key.len();
            for p in 0..s {
                let right = reduced_degree_sum(space, &key[p + 1..]);
                let sgn = sign(field, tau_sign * right);
                for (u, c) in tau_idx.preimages(key[p]) {
                    if s - 1 + u.len() > max_arity {
                        continue;
                    }
                    let t = splice(key, p, u);
                    let coeff = &sgn * c;
                    acc.entry(t).or_default().add_scaled(val, &coeff);
                }
            }
            acc
        })
        .reduce(Acc::new, merge);
    collect_cochain(sigma.total_degree() + tau.total_degree() - 1, acc)
}

/// Hochschild differential `δσ = μ∘σ + (-1)^{|σ|} σ∘μ` truncated at `max_arity`.
pub fn differential(space: &GradedSpace, mu: &Cochain, sigma: &Cochain, max_arity: usize) -> Cochain {
    let field = space.field();
    let left = convolve(space, mu, sigma, max_arity);
    let right = convolve(space, sigma, mu, max_arity);
    let mut out = left;
    if out.total_degree() != right.total_degree() {
        // both sides are degree |σ| + 1 by construction
        unreachable!("convolution degrees disagree");
    }
    out.add_scaled(&right, &sign(field, sigma.total_degree()));
    out
}

/// Sign-free composition `Σ_r F^r(G^{s_r}(...), ..., G^{s_1}(...))` with every
/// `s_k ≥ 1`, keeping result arities in `arities` and outer arities passing `use_outer(r, d)`.
pub fn compose_families(
    outer: &Cochain,
    inner: &Cochain,
    result_total_degree: i64,
    arities: std::ops::RangeInclusive<usize>,
    use_outer: &(dyn Fn(usize, usize) -> bool + Sync),
    field: Field,
) -> Cochain {
    let inner_idx = OutputIndex::new(inner);
    let max_d = *arities.end();
    let entries: Vec<(&Tuple, &Vector)> = outer.components().flat_map(|(_, m)| m.iter()).collect();
    let acc = entries
        .par_iter()
        .fold(Acc::new, |mut acc, (key, val)| {
            let mut t = Tuple::new();
            expand(&inner_idx, key, 0, &mut t, &field.one(), max_d, &mut |t, coeff| {
                let d = t.len();
                if arities.contains(&d) && use_outer(key.len(), d) {
                    acc.entry(t.clone()).or_default().add_scaled(val, coeff);
                }
            });
            acc
        })
        .reduce(Acc::new, merge);
    collect_cochain(result_total_degree, acc)
}

fn expand(
    idx: &OutputIndex,
    key: &[u32],
    pos: usize,
    t: &mut Tuple,
    coeff: &Scalar,
    max_d: usize,
    emit: &mut dyn FnMut(&Tuple, &Scalar),
) {
    if pos == key.len() {
        emit(t, coeff);
        return;
    }
    let remaining = key.len() - pos - 1;
    for (u, c) in idx.preimages(key[pos]) {
        if u.is_empty() || t.len() + u.len() + remaining > max_d {
            continue;
        }
        let before = t.len();
        t.extend_from_slice(u);
        expand(idx, key, pos + 1, t, &(coeff * c), max_d, emit);
        t.truncate(before);
    }
}
