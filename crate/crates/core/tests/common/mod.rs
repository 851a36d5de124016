#![allow(dead_code)]

use std::sync::Arc;

use formality_core::ainfty::AInftyStructure;
use formality_core::exactlin::{Field, GradedSpace, MultiMap, Scalar, Tuple, Vector};
use formality_core::hochschild::Cochain;

pub fn q(n: i64) -> Scalar {
    Field::Rational.from_i64(n)
}

/// Encodes an associative graded product `a2·a1` as `μ²(a2, a1) = (-1)^{|a1|} a2·a1`.
pub fn mu2_from_table(space: &GradedSpace, table: &[(u32, u32, Vec<(u32, i64)>)]) -> MultiMap {
    let f = space.field();
    let mut m = MultiMap::new(2, 0);
    for (a2, a1, out) in table {
        let s = if space.degree(*a1).rem_euclid(2) == 1 { -1 } else { 1 };
        let v: Vector = out.iter().map(|&(o, c)| (o, f.from_i64(s * c))).collect();
        m.insert_checked(space, Tuple::from_slice(&[*a2, *a1]), v).unwrap();
    }
    m
}

/// Exterior algebra Λ(x, y): basis 1, x, y, xy in degrees 0, 1, 1, 2.
pub fn exterior(field: Field) -> AInftyStructure {
    let s = Arc::new(GradedSpace::algebra(field, &[("1", 0), ("x", 1), ("y", 1), ("xy", 2)]).unwrap());
    let mut table = Vec::new();
    for a in 0..4u32 {
        table.push((0, a, vec![(a, 1)]));
        if a != 0 {
            table.push((a, 0, vec![(a, 1)]));
        }
    }
    table.push((1, 2, vec![(3, 1)]));
    table.push((2, 1, vec![(3, -1)]));
    let mu2 = mu2_from_table(&s, &table);
    AInftyStructure::from_product(s, mu2, 6).unwrap().with_strict_units(vec![0]).unwrap()
}

/// 1 (deg 0), a (deg 1), b (deg 2); unital μ², a·a = 0, and μ³(a, a, a) = b.
pub fn mu3_example() -> AInftyStructure {
    let s = Arc::new(GradedSpace::algebra(Field::Rational, &[("1", 0), ("a", 1), ("b", 2)]).unwrap());
    let mut table = Vec::new();
    for a in 0..3u32 {
        table.push((0, a, vec![(a, 1)]));
        if a != 0 {
            table.push((a, 0, vec![(a, 1)]));
        }
    }
    let mut mu = Cochain::new(2);
    mu.set_component(mu2_from_table(&s, &table));
    let mut m3 = MultiMap::new(3, -1);
    m3.insert_checked(&s, Tuple::from_slice(&[1, 1, 1]), Vector::basis(2, q(1))).unwrap();
    mu.set_component(m3);
    AInftyStructure::new(s, mu, 6).unwrap()
}

/// Dense evaluation of `Σ (-1)^{†_i} μ^{d-j+1}(a_d, ..., μ^j(a_{i+j}, ..., a_{i+1}), a_i, ..., a_1)`
/// on every basis tuple of length `d`, written independently of the sparse engine.
pub fn dense_ainfty_residuals(a: &AInftyStructure, d: usize) -> Vec<(Vec<u32>, Vec<Scalar>)> {
    let s = a.space();
    let n = s.dim();
    let f = s.field();
    let mut out = Vec::new();
    let mut idx = vec![0u32; d];
    loop {
        let mut acc = vec![f.zero(); n];
        for j in 1..=d {
            for i in 0..=(d - j) {
                // tuple positions: idx[0] = a_d, ..., idx[d-1] = a_1
                let inner: Vec<u32> = idx[d - i - j..d - i].to_vec();
                let inner_val = a.product_value(&inner);
                if inner_val.is_zero() {
                    continue;
                }
                let dagger: i64 = idx[d - i..].iter().map(|&x| s.degree(x) - 1).sum();
                let sgn = if dagger.rem_euclid(2) == 1 { f.from_i64(-1) } else { f.one() };
                for (y, cy) in inner_val.iter() {
                    let mut outer: Vec<u32> = idx[..d - i - j].to_vec();
                    outer.push(y);
                    outer.extend_from_slice(&idx[d - i..]);
                    for (o, co) in a.product_value(&outer).iter() {
                        acc[o as usize] += &(&(&sgn * cy) * co);
                    }
                }
            }
        }
        out.push((idx.clone(), acc));
        let mut k = d;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if (idx[k] as usize) < n {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn all_tuples(n: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out.into_iter().flat_map(|t| (0..n as u32).map(move |x| {
            let mut t = t.clone();
            t.push(x);
            t
        })).collect();
    }
    out
}

/// Dense `(σ∘τ)^d` on every basis tuple, straight from the defining sum with
/// sign `(-1)^{(|τ|-1)†_i}`.
pub fn dense_convolve(space: &GradedSpace, sigma: &Cochain, tau: &Cochain, d: usize) -> Vec<(Vec<u32>, Vec<Scalar>)> {
    let n = space.dim();
    let f = space.field();
    let eps = tau.total_degree() - 1;
    all_tuples(n, d)
        .into_iter()
        .map(|t| {
            let mut acc = vec![f.zero(); n];
            for j in 0..=d {
                for i in 0..=(d - j) {
                    let inner: Vec<u32> = t[d - i - j..d - i].to_vec();
                    let Some(iv) = tau.get(&inner) else { continue };
                    let dagger: i64 = t[d - i..].iter().map(|&x| space.degree(x) - 1).sum();
                    let sgn = if (eps * dagger).rem_euclid(2) == 1 { f.from_i64(-1) } else { f.one() };
                    for (y, cy) in iv.iter() {
                        let mut outer: Vec<u32> = t[..d - i - j].to_vec();
                        outer.push(y);
                        outer.extend_from_slice(&t[d - i..]);
                        if let Some(ov) = sigma.get(&outer) {
                            for (o, co) in ov.iter() {
                                acc[o as usize] += &(&(&sgn * cy) * co);
                            }
                        }
                    }
                }
            }
            (t, acc)
        })
        .collect()
}

/// Dense `(δb)^d = (μ∘b)^d - (b∘μ)^d` for a degree-1 cochain.
pub fn dense_delta_field(a: &AInftyStructure, b: &Cochain, d: usize) -> Vec<(Vec<u32>, Vec<Scalar>)> {
    let s = a.space();
    let left = dense_convolve(s, a.mu(), b, d);
    let right = dense_convolve(s, b, a.mu(), d);
    left.into_iter()
        .zip(right)
        .map(|((t, l), (_, r))| (t, l.iter().zip(&r).map(|(x, y)| x - y).collect()))
        .collect()
}
