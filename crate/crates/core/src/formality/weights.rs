//! Weight gradings from an nc-vector field and equivariant structures.
//!
//! On `hom(L, L′)` (source `L`, target `L′`) the weight endomorphism is
//! `φ ↦ b¹(φ) - c_{L′}·φ + φ·c_L`, where `·` is the associative composition
//! `x·y = (-1)^{|y|} μ²(x, y)`. It equals the arity-1 part of the twisted field
//! `b + δC` for `C = Σ_L c_L`, so shifting `c_L` by `s·1_L` and `c_{L′}` by
//! `s′·1_{L′}` shifts it by `(s - s′)·Id`.

use std::collections::{BTreeMap, BTreeSet};


use crate::ainfty::AInftyStructure;
use crate::error::{Error, Result};
use crate::exactlin::{eigen_decompose, sign, Eigenspace, GradedSpace, MultiMap, Scalar, Tuple, Vector};
use crate::hochschild::{differential, Cochain};

/// One degree-0 element `c_L ∈ hom(L, L)` per object. For minimal structures with
/// `b⁰ = 0` every such choice satisfies `dc = b⁰|_L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantStructures {
    pub c: Vec<Vector>,
}

impl EquivariantStructures {
    pub fn zero(a: &AInftyStructure) -> Self {
        Self { c: vec![Vector::new(); a.space().num_objects()] }
    }

    /// `c_L = s_L·1_L`; needs strict units.
    pub fn from_shifts(a: &AInftyStructure, shifts: &[Scalar]) -> Result<Self> {
        let units = a
            .strict_units()
            .ok_or_else(|| Error::Validation("unit shifts need strict units".into()))?;
        if shifts.len() != units.len() {
            return Err(Error::Validation(format!("expected {} shifts, got {}", units.len(), shifts.len())));
        }
        Ok(Self { c: units.iter().zip(shifts).map(|(&u, s)| Vector::basis(u, s.clone())).collect() })
    }

    pub fn validate(&self, a: &AInftyStructure) -> Result<()> {
        let space = a.space();
        if self.c.len() != space.num_objects() {
            return Err(Error::Validation(format!(
                "expected one equivariant structure per object ({}), got {}",
                space.num_objects(),
                self.c.len()
            )));
        }
        for (l, c) in self.c.iter().enumerate() {
            for i in c.support() {
                if space.source(i) != l as u32 || space.target(i) != l as u32 || space.degree(i) != 0 {
                    return Err(Error::Validation(format!(
                        "c for object {} has component {} outside hom⁰(L, L)",
                        space.object_name(l as u32),
                        space.label(i)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `C = Σ_L c_L` as an arity-0 cochain of total degree 0.
    pub fn as_cochain(&self) -> Cochain {
        let mut total = Vector::new();
        for c in &self.c {
            total.add(c);
        }
        let mut m = MultiMap::new(0, 0);
        if !total.is_zero() {
            m.insert(Tuple::new(), total);
        }
        let mut out = Cochain::new(0);
        out.set_component(m);
        out
    }
}

/// `b̃ = b + δC`: on strictly unital inputs with `c_L` multiples of units this
/// only changes the arity-1 part.
pub fn twisted_field(a: &AInftyStructure, b: &Cochain, structures: &EquivariantStructures) -> Result<Cochain> {
    structures.validate(a)?;
    let dc = differential(a.space(), a.mu(), &structures.as_cochain(), a.max_arity());
    let mut out = b.add(&dc);
    out.prune();
    Ok(out)
}

/// The weight endomorphism on `hom(L, L′)`, as an arity-1 degree-0 map on that subspace.
pub fn weight_endomorphism(
    a: &AInftyStructure,
    b: &Cochain,
    structures: &EquivariantStructures,
    source: u32,
    target: u32,
) -> Result<MultiMap> {
    structures.validate(a)?;
    let space = a.space();
    let field = space.field();
    let b1 = b.component(1);
    let mu2 = a.product(2);
    let mut out = MultiMap::new(1, 0);
    for &phi in space.hom(source, target) {
        let mut v = b1.and_then(|m| m.get(&[phi])).cloned().unwrap_or_default();
        if let Some(mu2) = mu2 {
            // - c_{L′}·φ = -(-1)^{|φ|} μ²(c_{L′}, φ)
            let s = -sign(field, space.degree(phi));
            for (c, coeff) in structures.c[target as usize].iter() {
                if let Some(w) = mu2.get(&[c, phi]) {
                    v.add_scaled(w, &(&s * coeff));
                }
            }
            // φ·c_L = μ²(φ, c_L) since |c_L| = 0
            for (c, coeff) in structures.c[source as usize].iter() {
                if let Some(w) = mu2.get(&[phi, c]) {
                    v.add_scaled(w, coeff);
                }
            }
        }
        for o in v.support() {
            if space.source(o) != source || space.target(o) != target {
                return Err(Error::Validation(format!("b¹ maps {} out of its morphism space", space.label(phi))));
            }
        }
        if !v.is_zero() {
            out.insert(Tuple::from_slice(&[phi]), v);
        }
    }
    Ok(out)
}

/// One generalized eigenspace of the weight endomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpace {
    pub weight: Scalar,
    pub basis: Vec<Vector>,
    /// Cohomological degrees of the basis elements spanning this eigenspace.
    pub degrees: BTreeSet<i64>,
    pub integer: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    /// Keyed by (source, target).
    pub entries: BTreeMap<(u32, u32), Vec<WeightSpace>>,
}

impl WeightTable {
    /// Weight minus degree on every eigenspace of `hom(L, L′)`; `None` when some
    /// eigenspace mixes degrees.
    pub fn discrepancies(&self, space: &GradedSpace, source: u32, target: u32) -> Option<BTreeSet<Scalar>> {
        let field = space.field();
        let mut out = BTreeSet::new();
        for w in self.entries.get(&(source, target))? {
            if w.degrees.len() != 1 {
                return None;
            }
            let d = *w.degrees.iter().next().expect("one degree");
            out.insert(&w.weight - &field.from_i64(d));
        }
        Some(out)
    }

    /// Every weight equals the degree of its eigenspace.
    pub fn weights_are_degrees(&self, space: &GradedSpace) -> bool {
        self.entries.keys().all(|&(s, t)| {
            self.discrepancies(space, s, t).is_some_and(|d| d.iter().all(|x| x.is_zero()))
        })
    }
}

/// Generalized eigenspaces of the weight endomorphism on every nonzero morphism
/// space, computed degree by degree. Additivity under `μ²` is verified.
pub fn weight_table(a: &AInftyStructure, b: &Cochain, structures: &EquivariantStructures) -> Result<WeightTable> {
    let space = a.space();
    let n = space.num_objects() as u32;
    let mut entries = BTreeMap::new();
    let mut endos = BTreeMap::new();
    for s in 0..n {
        for t in 0..n {
            let hom = space.hom(s, t);
            if hom.is_empty() {
                continue;
            }
            let w = weight_endomorphism(a, b, structures, s, t)?;
            let by_degree: BTreeMap<i64, Vec<u32>> = hom.iter().fold(BTreeMap::new(), |mut m, &i| {
                m.entry(space.degree(i)).or_insert_with(Vec::new).push(i);
                m
            });
            let mut spaces: Vec<WeightSpace> = Vec::new();
            for (deg, piece) in by_degree {
                for Eigenspace { eigenvalue, basis } in eigen_decompose(space, &piece, &w)? {
                    let integer = eigenvalue.as_rational().is_none_or(|q| q.is_integer());
                    match spaces.iter_mut().find(|x| x.weight == eigenvalue) {
                        Some(x) => {
                            x.basis.extend(basis);
                            x.degrees.insert(deg);
                        }
                        None => spaces.push(WeightSpace {
                            weight: eigenvalue,
                            basis,
                            degrees: [deg].into(),
                            integer,
                        }),
                    }
                }
            }
            spaces.sort_by(|x, y| x.weight.cmp(&y.weight));
            entries.insert((s, t), spaces);
            endos.insert((s, t), w);
        }
    }
    let table = WeightTable { entries };
    check_weight_additivity(a, &table, &endos)?;
    Ok(table)
}

/// `μ²(α, β)` lies in the generalized eigenspace of `wt(α) + wt(β)` for all
/// composable eigenbasis vectors.
fn check_weight_additivity(
    a: &AInftyStructure,
    table: &WeightTable,
    endos: &BTreeMap<(u32, u32), MultiMap>,
) -> Result<()> {
    let space = a.space();
    let Some(mu2) = a.product(2) else { return Ok(()) };
    for (&(s1, t1), lower) in &table.entries {
        for (&(s2, t2), upper) in table.entries.range((t1, 0)..(t1 + 1, 0)) {
            debug_assert_eq!(s2, t1);
            let w = &endos[&(s1, t2)];
            let power = space.hom(s1, t2).len();
            for beta in lower {
                for alpha in upper {
                    let lambda = &alpha.weight + &beta.weight;
                    for x in &alpha.basis {
                        for y in &beta.basis {
                            let mut p = Vector::new();
                            for (i, ci) in x.iter() {
                                for (j, cj) in y.iter() {
                                    if let Some(v) = mu2.get(&[i, j]) {
                                        p.add_scaled(v, &(ci * cj));
                                    }
                                }
                            }
                            for _ in 0..power {
                                if p.is_zero() {
                                    break;
                                }
                                let mut q = w.apply(&p);
                                q.add_scaled(&p, &-&lambda);
                                p = q;
                            }
                            if !p.is_zero() {
                                return Err(Error::Validation(format!(
                                    "weights are not additive on hom({}, {}) × hom({}, {})",
                                    space.object_name(s2),
                                    space.object_name(t2),
                                    space.object_name(s1),
                                    space.object_name(t1)
                                )));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Shift vector solving for weights equal to degrees against a reference object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftSelection {
    pub reference: u32,
    /// `c_L = shift_L·1_L`.
    pub shifts: Vec<Scalar>,
    pub structures: EquivariantStructures,
}

/// Fixes `c_ref = 0` and chooses `c_L = s_L·1_L` so that weights equal degrees on
/// `hom(L, ref)` and `hom(ref, L)` for every `L`.
pub fn select_equivariant_structures(a: &AInftyStructure, b: &Cochain, reference: u32) -> Result<ShiftSelection> {
    let space = a.space();
    let field = space.field();
    let n = space.num_objects() as u32;
    if reference >= n {
        return Err(Error::Validation(format!("reference object {reference} out of range")));
    }
    if a.strict_units().is_none() {
        return Err(Error::Validation("structure selection needs strict units".into()));
    }
    for l in 0..n {
        let h0 = space.hom_of_degree(l, l, 0).count();
        if h0 != 1 {
            return Err(Error::Validation(format!(
                "hom⁰({0}, {0}) has rank {h0}, expected 1",
                space.object_name(l)
            )));
        }
    }
    let zero = EquivariantStructures::zero(a);
    let table = weight_table(a, b, &zero)?;
    let constant = |s: u32, t: u32| -> Result<Option<Scalar>> {
        if space.hom(s, t).is_empty() {
            return Ok(None);
        }
        let d = table.discrepancies(space, s, t).ok_or_else(|| {
            Error::Unshiftable(format!(
                "weights on hom({}, {}) mix cohomological degrees",
                space.object_name(s),
                space.object_name(t)
            ))
        })?;
        if d.len() != 1 {
            let shown: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            return Err(Error::Unshiftable(format!(
                "weight minus degree on hom({}, {}) takes the values {{{}}}",
                space.object_name(s),
                space.object_name(t),
                shown.join(", ")
            )));
        }
        Ok(d.into_iter().next())
    };
    let mut shifts = vec![field.zero(); n as usize];
    for l in 0..n {
        if l == reference {
            if let Some(d) = constant(l, l)? {
                if !d.is_zero() {
                    return Err(Error::Unshiftable(format!(
                        "weights on hom({0}, {0}) are off the degrees by {d}",
                        space.object_name(l)
                    )));
                }
            }
            continue;
        }
        // shifting c_L by s moves weights on hom(L, ref) by +s and on hom(ref, L) by -s
        let out = constant(l, reference)?.map(|d| -d);
        let back = constant(reference, l)?;
        let s = match (out, back) {
            (Some(x), Some(y)) if x != y => {
                return Err(Error::Unshiftable(format!(
                    "hom({0}, {1}) asks for shift {x} but hom({1}, {0}) for {y}",
                    space.object_name(l),
                    space.object_name(reference)
                )))
            }
            (Some(x), _) | (None, Some(x)) => x,
            (None, None) => field.zero(),
        };
        shifts[l as usize] = s;
    }
    let structures = EquivariantStructures::from_shifts(a, &shifts)?;
    let check = weight_table(a, b, &structures)?;
    for l in 0..n {
        for (s, t) in [(l, reference), (reference, l)] {
            if let Some(d) = check.discrepancies(space, s, t) {
                if d.iter().any(|x| !x.is_zero()) {
                    return Err(Error::Unshiftable(format!(
                        "weights on hom({}, {}) differ from degrees after shifting",
                        space.object_name(s),
                        space.object_name(t)
                    )));
                }
            }
        }
    }
    Ok(ShiftSelection { reference, shifts, structures })
}
