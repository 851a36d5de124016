use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A crossingless perfect matching of the points `1, ..., 2k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matching {
    k: usize,
    /// Arcs `(a, b)` with `a < b`, sorted.
    arcs: Vec<(u32, u32)>,
}

impl Matching {
    pub fn new(k: usize, arcs: Vec<(u32, u32)>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Validation("matchings need k ≥ 1".into()));
        }
        let mut arcs: Vec<(u32, u32)> = arcs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        arcs.sort_unstable();
        let mut seen = vec![false; 2 * k + 1];
        for &(a, b) in &arcs {
            for x in [a, b] {
                if x == 0 || x as usize > 2 * k || std::mem::replace(&mut seen[x as usize], true) {
                    return Err(Error::Validation(format!("arcs do not partition 1..{}", 2 * k)));
                }
            }
        }
        if arcs.len() != k {
            return Err(Error::Validation(format!("expected {k} arcs, got {}", arcs.len())));
        }
        let m = Self { k, arcs };
        if !m.is_noncrossing() {
            return Err(Error::Validation(format!("matching {m} has crossing arcs")));
        }
        Ok(m)
    }

    /// `{1,2}, {3,4}, ..., {2k-1,2k}`.
    pub fn plait(k: usize) -> Self {
        Self { k, arcs: (0..k as u32).map(|i| (2 * i + 1, 2 * i + 2)).collect() }
    }

    /// `{1,2k}, {2,3}, {4,5}, ..., {2k-2,2k-1}`.
    pub fn mixed(k: usize) -> Self {
        let mut arcs = vec![(1, 2 * k as u32)];
        arcs.extend((1..k as u32).map(|i| (2 * i, 2 * i + 1)));
        arcs.sort_unstable();
        Self { k, arcs }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn arcs(&self) -> &[(u32, u32)] {
        &self.arcs
    }

    /// `partner[x]` for `x` in `1..=2k`; index 0 unused.
    pub fn partners(&self) -> Vec<u32> {
        let mut p = vec![0; 2 * self.k + 1];
        for &(a, b) in &self.arcs {
            p[a as usize] = b;
            p[b as usize] = a;
        }
        p
    }

    /// No arcs `{a, c}`, `{b, d}` with `a < b < c < d`.
    pub fn is_noncrossing(&self) -> bool {
        self.arcs.iter().all(|&(a, c)| {
            self.arcs.iter().all(|&(b, d)| !(a < b && b < c && c < d))
        })
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.arcs.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// All crossingless matchings on `2k` points, in lexicographic order of their sorted arcs.
pub fn enumerate_matchings(k: usize) -> Result<Vec<Matching>> {
    if k == 0 {
        return Err(Error::Validation("matchings need k ≥ 1".into()));
    }
    let mut out = Vec::new();
    let mut arcs = Vec::with_capacity(k);
    fill(1, 2 * k as u32, &mut arcs, &mut |arcs| {
        let mut a = arcs.to_vec();
        a.sort_unstable();
        out.push(Matching { k, arcs: a });
    });
    out.sort();
    Ok(out)
}

// matches the points lo..=hi; lo pairs with some hi' leaving an even interval inside
fn fill(lo: u32, hi: u32, arcs: &mut Vec<(u32, u32)>, emit: &mut dyn FnMut(&[(u32, u32)])) {
    if lo > hi {
        emit(arcs);
        return;
    }
    let mut partner = lo + 1;
    while partner <= hi {
        arcs.push((lo, partner));
        let depth = arcs.len();
        fill_inner(lo + 1, partner - 1, partner + 1, hi, arcs, emit);
        arcs.truncate(depth - 1);
        partner += 2;
    }
}

fn fill_inner(
    lo: u32,
    hi: u32,
    rest_lo: u32,
    rest_hi: u32,
    arcs: &mut Vec<(u32, u32)>,
    emit: &mut dyn FnMut(&[(u32, u32)]),
) {
    fill(lo, hi, arcs, &mut |inner| {
        let mut with_inner = inner.to_vec();
        fill(rest_lo, rest_hi, &mut with_inner, &mut |all| emit(all));
    });
}

/// `(1/(k+1))·C(2k, k)`.
pub fn catalan(k: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}
