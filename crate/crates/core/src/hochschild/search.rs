//! Linear search for nc-vector fields `b` with `δb = 0` up to a truncation.
//!
//! Unknowns are the coefficients `b^s(t)_o` for free arities `s`; each equation
//! is one coefficient of `(δb)^d(T)_O` for `d ≤ max_arity`. Since `|b| = 1`,
//! `δb = μ∘b - b∘μ` and the only sign left is `(-1)^{Σ‖t_{p+1..}‖}` from `b∘μ`.

use std::collections::{BTreeSet, HashMap, HashSet};

use log::debug;

use crate::ainfty::AInftyStructure;
use crate::error::{Error, Result};
use crate::exactlin::{sign, ExactError, GradedSpace, LinearSystem, MultiMap, Scalar, Tuple, Vector};

use super::cochain::Cochain;
use super::convolve::{differential, reduced_degree_sum, splice, OutputIndex, SlotIndex};

/// How much of the system to assemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Every unknown of the free arities; reports the affine dimension.
    Full,
    /// Only the part of the incidence graph reachable from equations with a nonzero
    /// right-hand side, grown layer by layer until consistent or closed.
    Local,
}

#[derive(Clone, Debug)]
pub struct FieldConstraints {
    pub b0_zero: bool,
    pub b1: MultiMap,
    /// Arities `≥ 2` forced to vanish.
    pub vanish: BTreeSet<usize>,
    /// Equations are imposed on `(δb)^d` for `d ≤ max_arity`.
    pub max_arity: usize,
    pub mode: SearchMode,
}

impl FieldConstraints {
    /// `b⁰ = 0`, `b¹ = linear`, arities in `vanish` zero, everything else free.
    pub fn new(linear: MultiMap, vanish: impl IntoIterator<Item = usize>, max_arity: usize) -> Self {
        Self { b0_zero: true, b1: linear, vanish: vanish.into_iter().collect(), max_arity, mode: SearchMode::Full }
    }

    pub fn with_mode(mut self, mode: SearchMode) -> Self {
        self.mode = mode;
        self
    }

    fn is_free(&self, s: usize) -> bool {
        match s {
            0 => !self.b0_zero,
            1 => false,
            // b^N only reaches (δb)^{N+1}
            _ => s < self.max_arity && !self.vanish.contains(&s),
        }
    }
}

/// A degree-1 Hochschild cochain found as a cocycle up to `max_arity`.
#[derive(Clone, Debug)]
pub struct NcVectorField {
    pub field: Cochain,
    pub max_arity: usize,
    pub certified: bool,
}

/// Size and outcome data of one search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    /// Dimension of the affine solution space; known only for full searches.
    pub affine_dim: Option<usize>,
    pub rounds: usize,
}

type Unknown = (Tuple, u32);
type RowKey = (Tuple, u32);

struct Stencil<'a> {
    space: &'a GradedSpace,
    mu: &'a Cochain,
    slots: SlotIndex,
    outputs: OutputIndex,
    mu_arities: Vec<usize>,
    n: usize,
}

impl<'a> Stencil<'a> {
    fn new(space: &'a GradedSpace, mu: &'a Cochain, n: usize) -> Self {
        Self {
            space,
            mu,
            slots: SlotIndex::new(mu),
            outputs: OutputIndex::new(mu),
            mu_arities: mu.arities(),
            n,
        }
    }

    /// Equations containing the unknown `b(t)_o`, with coefficients.
    fn rows_of(&self, (t, o): &Unknown) -> Vec<(RowKey, Scalar)> {
        let field = self.space.field();
        let mut out = Vec::new();
        for (k, p, v) in self.slots.occurrences(*o) {
            if k.len() - 1 + t.len() > self.n {
                continue;
            }
            let row = splice(k, *p, t);
            for (big_o, c) in v.iter() {
                out.push(((row.clone(), big_o), c.clone()));
            }
        }
        for p in 0..t.len() {
            let sgn = -sign(field, reduced_degree_sum(self.space, &t[p + 1..]));
            for (u, c) in self.outputs.preimages(t[p]) {
                if t.len() - 1 + u.len() > self.n {
                    continue;
                }
                out.push(((splice(t, p, u), *o), &sgn * c));
            }
        }
        out
    }

    /// Unknowns of free arity occurring in the equation `(T, O)`.
    fn unknowns_of(&self, (big_t, big_o): &RowKey, c: &FieldConstraints) -> Vec<Unknown> {
        let space = self.space;
        let mut out = Vec::new();
        let d = big_t.len();
        for &r in &self.mu_arities {
            if r > d + 1 {
                continue;
            }
            let s = d + 1 - r;
            if !c.is_free(s) {
                continue;
            }
            let mu_r = self.mu.component(r).expect("listed arity");
            for p in 0..r {
                let t: Tuple = Tuple::from_slice(&big_t[p..p + s]);
                if !space.is_composable(&t) {
                    continue;
                }
                let mut key = Tuple::from_slice(&big_t[..p]);
                key.push(0);
                key.extend_from_slice(&big_t[p + s..]);
                for o in space.outputs_for(&t, 1 - s as i64) {
                    key[p] = o;
                    if mu_r.get(&key).is_some_and(|v| v.get(*big_o).is_some()) {
                        out.push((t.clone(), o));
                    }
                }
            }
        }
        for &j in &self.mu_arities {
            if j > d || j == 0 {
                continue;
            }
            let s = d + 1 - j;
            if !c.is_free(s) {
                continue;
            }
            let mu_j = self.mu.component(j).expect("listed arity");
            for p in 0..=(d - j) {
                if let Some(v) = mu_j.get(&big_t[p..p + j]) {
                    for y in v.support() {
                        out.push((splice(big_t, p, &[y]), *big_o));
                    }
                }
            }
        }
        out
    }
}

/// All unknowns of the free arities.
fn all_unknowns(space: &GradedSpace, c: &FieldConstraints) -> Vec<Unknown> {
    let mut out = Vec::new();
    for s in 0..c.max_arity {
        if !c.is_free(s) {
            continue;
        }
        for t in space.composable_tuples(s, &|_| true) {
            for o in space.outputs_for(&t, 1 - s as i64) {
                out.push((t.clone(), o));
            }
        }
    }
    out
}

fn fixed_part(c: &FieldConstraints) -> Cochain {
    let mut b = Cochain::new(1);
    b.set_component(c.b1.clone());
    b
}

fn sort_unknowns(u: &mut [Unknown]) {
    u.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.cmp(b)));
}

struct Assembled {
    system: LinearSystem,
    unknowns: Vec<Unknown>,
    rows: Vec<RowKey>,
}

fn assemble(stencil: &Stencil, unknowns: Vec<Unknown>, rhs: &HashMap<RowKey, Scalar>, field: crate::exactlin::Field) -> Assembled {
    let mut rows: HashMap<RowKey, Vec<(u32, Scalar)>> = HashMap::new();
    for (i, u) in unknowns.iter().enumerate() {
        for (row, coeff) in stencil.rows_of(u) {
            rows.entry(row).or_default().push((i as u32, coeff));
        }
    }
    for k in rhs.keys() {
        rows.entry(k.clone()).or_default();
    }
    let mut keys: Vec<RowKey> = rows.keys().cloned().collect();
    keys.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.cmp(b)));
    let mut system = LinearSystem::new(field, unknowns.len());
    for k in &keys {
        let terms = rows.remove(k).expect("present");
        let r = rhs.get(k).cloned().unwrap_or_else(|| field.zero());
        system.add_equation(terms, r);
    }
    Assembled { system, unknowns, rows: keys }
}

fn to_cochain(fixed: &Cochain, unknowns: &[Unknown], x: &Vector, space: &GradedSpace) -> Cochain {
    let mut b = fixed.clone();
    for (i, v) in x.iter() {
        let (t, o) = &unknowns[i as usize];
        let s = t.len();
        let m = b.component_mut(s);
        m.add_term(t, *o, v);
    }
    b.prune();
    debug_assert!(b.validate(space).is_ok());
    b
}

/// Finds `b` with `b⁰`, `b¹` and the vanishing arities as constrained and
/// `(δb)^d = 0` for all `d ≤ max_arity`. The result is re-verified.
pub fn find_nc_field(a: &AInftyStructure, c: &FieldConstraints) -> Result<(NcVectorField, SearchReport)> {
    a.require_minimal()?;
    let space = a.space();
    let field = space.field();
    if c.b1.arity() != 1 || c.b1.degree() != 0 {
        return Err(Error::Validation("b¹ must be an arity-1 map of degree 0".into()));
    }
    c.b1.validate(space)?;
    let n = c.max_arity;
    let mu = a.mu().truncated(n);
    let fixed = fixed_part(c);
    // equations read Σ coeff·x = -(δ b_fixed)
    let base = differential(space, &mu, &fixed, n);
    let mut rhs: HashMap<RowKey, Scalar> = HashMap::new();
    for (_, m) in base.components() {
        for (k, v) in m.iter() {
            for (o, coeff) in v.iter() {
                rhs.insert((k.clone(), o), -coeff);
            }
        }
    }
    let stencil = Stencil::new(space, &mu, n);
    let (b, report) = match c.mode {
        SearchMode::Full => {
            let mut unknowns = all_unknowns(space, c);
            sort_unknowns(&mut unknowns);
            let asm = assemble(&stencil, unknowns, &rhs, field);
            debug!("full nc-field search: {} unknowns, {} equations", asm.unknowns.len(), asm.rows.len());
            let sol = solve_or_none(&asm.system)?;
            let report = SearchReport {
                unknowns: asm.unknowns.len(),
                equations: asm.system.num_equations(),
                rank: sol.rank(),
                affine_dim: Some(sol.nullity()),
                rounds: 1,
            };
            (to_cochain(&fixed, &asm.unknowns, sol.particular(), space), report)
        }
        SearchMode::Local => local_search(&stencil, c, &rhs, &fixed, space)?,
    };
    let field_out = NcVectorField { field: b, max_arity: n, certified: false };
    let certified = certify(&mu, space, &field_out)?;
    Ok((certified, report))
}

fn solve_or_none(system: &LinearSystem) -> Result<crate::exactlin::Solution> {
    match crate::exactlin::solve_linear(system) {
        Ok(s) => Ok(s),
        Err(ExactError::Inconsistent) => Err(Error::NoSolution("the cocycle equations are inconsistent".into())),
        Err(e) => Err(e.into()),
    }
}

fn local_search(
    stencil: &Stencil,
    c: &FieldConstraints,
    rhs: &HashMap<RowKey, Scalar>,
    fixed: &Cochain,
    space: &GradedSpace,
) -> Result<(Cochain, SearchReport)> {
    let field = space.field();
    let mut known: HashSet<Unknown> = HashSet::new();
    let mut expanded: HashSet<RowKey> = HashSet::new();
    let mut frontier: Vec<RowKey> = rhs.keys().cloned().collect();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut added = 0;
        for row in frontier.drain(..) {
            for u in stencil.unknowns_of(&row, c) {
                if known.insert(u) {
                    added += 1;
                }
            }
            expanded.insert(row);
        }
        if added == 0 && rounds > 1 {
            // every equation touching the reachable unknowns is already present
            return Err(Error::NoSolution("the cocycle equations are inconsistent".into()));
        }
        let mut unknowns: Vec<Unknown> = known.iter().cloned().collect();
        sort_unknowns(&mut unknowns);
        let asm = assemble(stencil, unknowns, rhs, field);
        debug!("local nc-field search round {rounds}: {} unknowns, {} equations", asm.unknowns.len(), asm.rows.len());
        match crate::exactlin::solve_linear(&asm.system) {
            Ok(sol) => {
                let report = SearchReport {
                    unknowns: asm.unknowns.len(),
                    equations: asm.system.num_equations(),
                    rank: sol.rank(),
                    affine_dim: None,
                    rounds,
                };
                return Ok((to_cochain(fixed, &asm.unknowns, sol.particular(), space), report));
            }
            Err(ExactError::Inconsistent) => {
                frontier = asm.rows.into_iter().filter(|r| !expanded.contains(r)).collect();
                if frontier.is_empty() {
                    return Err(Error::NoSolution("the cocycle equations are inconsistent".into()));
                }
            }
            Err(e) => return Err(e.into()),
        }
    }
}

/// Recomputes `δb` up to the field's truncation and marks it certified if it vanishes.
fn certify(mu: &Cochain, space: &GradedSpace, b: &NcVectorField) -> Result<NcVectorField> {
    let db = differential(space, mu, &b.field, b.max_arity);
    if let Some((key, residual)) = db.first_difference(&Cochain::new(2), b.max_arity) {
        return Err(Error::Violation(crate::ainfty::check::report(space, "cocycle equation δb = 0", &key, &residual)));
    }
    Ok(NcVectorField { certified: true, ..b.clone() })
}

/// `δb` up to `max_arity`; `None` when it vanishes.
pub fn cocycle_residual(a: &AInftyStructure, b: &Cochain, max_arity: usize) -> Option<(Tuple, Vector)> {
    let db = differential(a.space(), &a.mu().truncated(max_arity), b, max_arity);
    db.first_difference(&Cochain::new(2), max_arity)
}

/// Certifies a given field as a cocycle of `a` up to `max_arity`.
pub fn certify_field(a: &AInftyStructure, b: Cochain, max_arity: usize) -> Result<NcVectorField> {
    if b.total_degree() != 1 {
        return Err(Error::Validation("nc-vector fields have total degree 1".into()));
    }
    b.validate(a.space())?;
    certify(&a.mu().truncated(max_arity), a.space(), &NcVectorField { field: b, max_arity, certified: false })
}
