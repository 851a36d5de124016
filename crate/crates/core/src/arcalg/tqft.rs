//! Khovanov's multiplication `hom(q, r) ⊗ hom(p, q) → hom(p, r)`.
//!
//! The diagrams `p ∪ q̄` and `q ∪ r̄` are stacked and the `k` arcs of `q̄ ∪ q` are
//! contracted by saddles, innermost first. Each saddle either merges two circles
//! (`1·1 = 1`, `1·x = x·1 = x`, `x·x = 0`) or splits one
//! (`1 ↦ 1⊗x + x⊗1`, `x ↦ x⊗x`).

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::hom::{ArcGenerator, Label};
use super::matching::Matching;
use super::unlink::unlink;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Edge {
    /// Arcs of `p` and `r̄`; never removed.
    Outer(u32, u32),
    /// Arcs of `q̄` and `q`, consumed by the saddles.
    Middle(u32, u32),
    Vertical(u32),
}

struct Surface {
    n: u32,
    edges: Vec<Edge>,
}

impl Surface {
    fn components(&self) -> Vec<u32> {
        // every root is the smallest point on its circle
        let total = 2 * self.n;
        let mut parent: Vec<u32> = (0..total).collect();
        fn find(p: &mut [u32], mut x: u32) -> u32 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = match *e {
                Edge::Outer(a, b) | Edge::Middle(a, b) => (a, b),
                Edge::Vertical(i) => (i, i + self.n),
            };
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                parent[hi as usize] = lo;
            }
        }
        (0..total).map(|x| find(&mut parent, x)).collect()
    }
}

type State = BTreeMap<u32, Label>;

fn merge(a: Label, b: Label) -> Option<Label> {
    match (a, b) {
        (Label::One, Label::One) => Some(Label::One),
        (Label::One, Label::X) | (Label::X, Label::One) => Some(Label::X),
        (Label::X, Label::X) => None,
    }
}

fn split(a: Label) -> Vec<(Label, Label)> {
    match a {
        Label::One => vec![(Label::One, Label::X), (Label::X, Label::One)],
        Label::X => vec![(Label::X, Label::X)],
    }
}

/// Product `g2·g1` for `g1 ∈ hom(p, q)` and `g2 ∈ hom(q, r)`, as integer coefficients on
/// generators of `hom(p, r)`. Saddles are performed in the given order of `q`'s arcs
/// (innermost first when `order` is `None`).
pub fn multiply(
    p: &Matching,
    q: &Matching,
    r: &Matching,
    g2: &ArcGenerator,
    g1: &ArcGenerator,
    order: Option<&[usize]>,
) -> Result<Vec<(ArcGenerator, i64)>> {
    let k = p.k();
    if q.k() != k || r.k() != k {
        return Err(Error::Validation("matchings on different point counts".into()));
    }
    let d1 = unlink(p, q)?;
    let d2 = unlink(q, r)?;
    let d_out = unlink(p, r)?;
    if g1.labels.len() != d1.num_components() || g2.labels.len() != d2.num_components() {
        return Err(Error::Validation("generator does not match its unlink".into()));
    }
    let n = 2 * k as u32;
    // point i (1-based) on the upper layer is i - 1, on the lower layer n + i - 1
    let top = |i: u32| i - 1;
    let bottom = |i: u32| n + i - 1;
    let mut edges = Vec::new();
    for &(a, b) in p.arcs() {
        edges.push(Edge::Outer(top(a), top(b)));
    }
    for &(a, b) in q.arcs() {
        edges.push(Edge::Middle(top(a), top(b)));
        edges.push(Edge::Middle(bottom(a), bottom(b)));
    }
    for &(a, b) in r.arcs() {
        edges.push(Edge::Outer(bottom(a), bottom(b)));
    }
    let mut surface = Surface { n, edges };
    let comps = surface.components();
    let mut start = State::new();
    for (c, l) in d1.components.iter().zip(&g1.labels) {
        start.insert(comps[top(c.initial_point()) as usize], *l);
    }
    for (c, l) in d2.components.iter().zip(&g2.labels) {
        start.insert(comps[bottom(c.initial_point()) as usize], *l);
    }
    let mut states: Vec<(State, i64)> = vec![(start, 1)];
    let default_order: Vec<usize> = {
        let mut idx: Vec<usize> = (0..k).collect();
        idx.sort_by_key(|&i| {
            let (a, b) = q.arcs()[i];
            (b - a, a)
        });
        idx
    };
    let order = order.unwrap_or(&default_order);
    let mut comps = comps;
    for &i in order {
        let (a, b) = q.arcs()[i];
        let c_top = comps[top(a) as usize];
        let c_bottom = comps[bottom(a) as usize];
        surface.edges.retain(|e| *e != Edge::Middle(top(a), top(b)) && *e != Edge::Middle(bottom(a), bottom(b)));
        surface.edges.push(Edge::Vertical(top(a)));
        surface.edges.push(Edge::Vertical(top(b)));
        let next = surface.components();
        let mut out = Vec::new();
        if c_top != c_bottom {
            let merged = next[top(a) as usize];
            for (mut st, coeff) in states {
                let la = st.remove(&c_top).expect("labelled");
                let lb = st.remove(&c_bottom).expect("labelled");
                if let Some(l) = merge(la, lb) {
                    st.insert(merged, l);
                    out.push((st, coeff));
                }
            }
        } else {
            let (n1, n2) = (next[top(a) as usize], next[top(b) as usize]);
            if n1 == n2 {
                return Err(Error::Validation("saddle on a single circle did not split it".into()));
            }
            for (mut st, coeff) in states {
                let l = st.remove(&c_top).expect("labelled");
                for (l1, l2) in split(l) {
                    let mut s2 = st.clone();
                    s2.insert(n1, l1);
                    s2.insert(n2, l2);
                    out.push((s2, coeff));
                }
            }
        }
        // circles are keyed by their smallest point, so untouched circles keep their keys
        states = out;
        comps = next;
    }
    let mut result: BTreeMap<ArcGenerator, i64> = BTreeMap::new();
    for (st, coeff) in states {
        let labels = d_out
            .components
            .iter()
            .map(|c| *st.get(&comps[top(c.initial_point()) as usize]).expect("output circle labelled"))
            .collect();
        *result.entry(ArcGenerator { labels }).or_insert(0) += coeff;
    }
    Ok(result.into_iter().filter(|(_, c)| *c != 0).collect())
}
