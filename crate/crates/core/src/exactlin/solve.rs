//! Sparse exact linear solving.
//!
//! Equations are split into independent blocks (connected components of the
//! unknown/equation incidence graph) and each block is reduced to row echelon
//! form online. Free unknowns are set to zero in the particular solution.

use std::collections::HashMap;
use std::hash::Hash;

use rayon::prelude::*;

use super::scalar::{Field, Scalar};
use super::vector::Vector;
use super::ExactError;

/// Sparse row: strictly increasing column indices with nonzero coefficients.
pub type Row = Vec<(u32, Scalar)>;

/// A system `A x = b` over indexed unknowns `0..n`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    field: Field,
    unknowns: usize,
    equations: Vec<(Row, Scalar)>,
}

impl LinearSystem {
    pub fn new(field: Field, unknowns: usize) -> Self {
        Self { field, unknowns, equations: Vec::new() }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    /// Adds `Σ coeff·x_col = rhs`; repeated columns are summed.
    pub fn add_equation(&mut self, terms: impl IntoIterator<Item = (u32, Scalar)>, rhs: Scalar) {
        let row = normalize_row(terms);
        if row.is_empty() && rhs.is_zero() {
            return;
        }
        self.equations.push((row, rhs));
    }

    pub fn equations(&self) -> &[(Row, Scalar)] {
        &self.equations
    }
}

fn normalize_row(terms: impl IntoIterator<Item = (u32, Scalar)>) -> Row {
    let mut row: Row = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    row.sort_by_key(|(c, _)| *c);
    let mut out: Row = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => {
                *lv += &v;
                if lv.is_zero() {
                    out.pop();
                }
            }
            _ => out.push((c, v)),
        }
    }
    out
}

/// `a - f·b` on sorted sparse rows.
fn axpy(a: &Row, f: &Scalar, b: &Row) -> Row {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -&(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - &(f * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form of one block: each stored row has a leading coefficient 1
/// at its pivot column, and distinct rows have distinct pivots.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<(Row, Scalar)>,
    pivot_of: HashMap<u32, usize>,
}

impl Echelon {
    fn insert(&mut self, mut row: Row, mut rhs: Scalar) -> Result<(), ExactError> {
        loop {
            let Some((lead, coeff)) = row.first().cloned() else {
                return if rhs.is_zero() { Ok(()) } else { Err(ExactError::Inconsistent) };
            };
            match self.pivot_of.get(&lead) {
                Some(&p) => {
                    let (prow, prhs) = &self.rows[p];
                    row = axpy(&row, &coeff, prow);
                    rhs = &rhs - &(&coeff * prhs);
                }
                None => {
                    let inv = coeff.inv().expect("nonzero lead");
                    if !inv.is_one() {
                        for (_, v) in row.iter_mut() {
                            *v = &*v * &inv;
                        }
                        rhs = &rhs * &inv;
                    }
                    self.pivot_of.insert(lead, self.rows.len());
                    self.rows.push((row, rhs));
                    return Ok(());
                }
            }
        }
    }

    /// Back substitution with the given values for free columns (absent = 0).
    fn back_substitute(&self, free: &HashMap<u32, Scalar>) -> HashMap<u32, Scalar> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r].0[0].0));
        let mut x: HashMap<u32, Scalar> = free.clone();
        for r in order {
            let (row, rhs) = &self.rows[r];
            let mut v = rhs.clone();
            for (c, a) in &row[1..] {
                if let Some(xc) = x.get(c) {
                    v -= &(a * xc);
                }
            }
            if !v.is_zero() {
                x.insert(row[0].0, v);
            } else {
                x.remove(&row[0].0);
            }
        }
        x.retain(|_, v| !v.is_zero());
        x
    }
}

/// Solution of a consistent system.
#[derive(Clone, Debug)]
pub struct Solution {
    field: Field,
    unknowns: usize,
    particular: Vector,
    blocks: Vec<(Vec<u32>, Echelon)>,
    rank: usize,
}

impl Solution {
    /// One particular solution with all free unknowns set to zero.
    pub fn particular(&self) -> &Vector {
        &self.particular
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Dimension of the affine solution space.
    pub fn nullity(&self) -> usize {
        self.unknowns - self.rank
    }

    /// Basis of the homogeneous solution space, one vector per free unknown.
    pub fn nullspace_basis(&self) -> Vec<Vector> {
        let mut in_block = vec![false; self.unknowns];
        let mut out = Vec::new();
        for (cols, ech) in &self.blocks {
            for &c in cols {
                in_block[c as usize] = true;
            }
            for &c in cols {
                if ech.pivot_of.contains_key(&c) {
                    continue;
                }
                let free = HashMap::from([(c, self.field.one())]);
                let mut zero_rhs = ech.clone();
                for (_, rhs) in zero_rhs.rows.iter_mut() {
                    *rhs = self.field.zero();
                }
                let x = zero_rhs.back_substitute(&free);
                out.push(x.into_iter().collect());
            }
        }
        for c in 0..self.unknowns as u32 {
            if !in_block[c as usize] {
                out.push(Vector::basis(c, self.field.one()));
            }
        }
        out
    }
}

/// Solves `system`, returning a particular solution and the homogeneous data, or `Inconsistent`.
pub fn solve_linear(system: &LinearSystem) -> Result<Solution, ExactError> {
    let field = system.field;
    let n = system.unknowns;
    for (row, _) in &system.equations {
        if let Some((c, _)) = row.last() {
            if *c as usize >= n {
                return Err(ExactError::Invalid(format!("unknown index {c} out of range {n}")));
            }
        }
    }
    // union-find over unknowns to split independent blocks
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    for (row, rhs) in &system.equations {
        if row.is_empty() {
            if !rhs.is_zero() {
                return Err(ExactError::Inconsistent);
            }
            continue;
        }
        let r0 = find(&mut parent, row[0].0);
        for (c, _) in &row[1..] {
            let rc = find(&mut parent, *c);
            if rc != r0 {
                parent[rc as usize] = r0;
            }
        }
    }
    let mut block_of_root: HashMap<u32, usize> = HashMap::new();
    let mut block_eqs: Vec<Vec<usize>> = Vec::new();
    for (e, (row, _)) in system.equations.iter().enumerate() {
        if row.is_empty() {
            continue;
        }
        let root = find(&mut parent, row[0].0);
        let b = *block_of_root.entry(root).or_insert_with(|| {
            block_eqs.push(Vec::new());
            block_eqs.len() - 1
        });
        block_eqs[b].push(e);
    }
    let mut block_cols: Vec<Vec<u32>> = vec![Vec::new(); block_eqs.len()];
    for c in 0..n as u32 {
        let root = find(&mut parent, c);
        if let Some(&b) = block_of_root.get(&root) {
            block_cols[b].push(c);
        }
    }
    let solved: Result<Vec<(Echelon, HashMap<u32, Scalar>)>, ExactError> = block_eqs
        .par_iter()
        .map(|eqs| {
            let mut order = eqs.clone();
            order.sort_by_key(|&e| (system.equations[e].0.len(), e));
            let mut ech = Echelon::default();
            for e in order {
                let (row, rhs) = &system.equations[e];
                ech.insert(row.clone(), rhs.clone())?;
            }
            let x = ech.back_substitute(&HashMap::new());
            Ok((ech, x))
        })
        .collect();
    let solved = solved?;
    let mut particular = Vector::new();
    let mut rank = 0;
    let mut blocks = Vec::with_capacity(solved.len());
    for ((ech, x), cols) in solved.into_iter().zip(block_cols) {
        rank += ech.rows.len();
        for (c, v) in x {
            particular.set(c, v);
        }
        blocks.push((cols, ech));
    }
    Ok(Solution { field, unknowns: n, particular, blocks, rank })
}

/// Linear system over hashable unknown labels.
#[derive(Clone, Debug)]
pub struct LabeledSystem<K: Eq + Hash + Clone> {
    index: HashMap<K, u32>,
    labels: Vec<K>,
    equations: Vec<(Vec<(K, Scalar)>, Scalar)>,
    field: Field,
}

impl<K: Eq + Hash + Clone> LabeledSystem<K> {
    pub fn new(field: Field) -> Self {
        Self { index: HashMap::new(), labels: Vec::new(), equations: Vec::new(), field }
    }

    /// Registers an unknown (idempotent) and returns its index.
    pub fn unknown(&mut self, label: K) -> u32 {
        if let Some(&i) = self.index.get(&label) {
            return i;
        }
        let i = self.labels.len() as u32;
        self.index.insert(label.clone(), i);
        self.labels.push(label);
        i
    }

    pub fn add_equation(&mut self, terms: Vec<(K, Scalar)>, rhs: Scalar) {
        for (k, _) in &terms {
            self.unknown(k.clone());
        }
        self.equations.push((terms, rhs));
    }

    pub fn labels(&self) -> &[K] {
        &self.labels
    }

    /// Solves and returns `(assignment for every label, nullspace basis as label maps)`.
    #[allow(clippy::type_complexity)]
    pub fn solve(&self) -> Result<(HashMap<K, Scalar>, Vec<HashMap<K, Scalar>>), ExactError> {
        let mut sys = LinearSystem::new(self.field, self.labels.len());
        for (terms, rhs) in &self.equations {
            sys.add_equation(terms.iter().map(|(k, c)| (self.index[k], c.clone())), rhs.clone());
        }
        let sol = solve_linear(&sys)?;
        let to_map = |v: &Vector| -> HashMap<K, Scalar> {
            v.iter().map(|(i, c)| (self.labels[i as usize].clone(), c.clone())).collect()
        };
        let particular = to_map(sol.particular());
        let null = sol.nullspace_basis().iter().map(to_map).collect();
        Ok((particular, null))
    }
}

/// Residual `A x - b` of each equation, for verification.
pub fn residuals(system: &LinearSystem, x: &Vector) -> Vec<Scalar> {
    system
        .equations
        .iter()
        .map(|(row, rhs)| {
            let mut acc = -rhs;
            for (c, a) in row {
                if let Some(v) = x.get(*c) {
                    acc += &(a * v);
                }
            }
            acc
        })
        .collect()
}
