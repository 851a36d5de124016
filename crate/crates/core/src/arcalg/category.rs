use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::ainfty::{default_max_arity, AInftyStructure};
use crate::error::{Error, Result};
use crate::exactlin::{BasisSpec, Field, GradedSpace, Matrix, MultiMap, Tuple, Vector};

use super::hom::{generators, ArcGenerator, Label};
use super::matching::{enumerate_matchings, Matching};
use super::tqft::multiply;
use super::unlink::{unlink, UnlinkDiagram};

/// Largest strand count accepted by [`build_arc_category`].
pub const MAX_STRANDS: usize = 4;

/// The arc category on `k` strands together with the combinatorial data behind its basis.
#[derive(Clone, Debug)]
pub struct ArcCategory {
    pub k: usize,
    /// Objects, in lexicographic order.
    pub matchings: Vec<Matching>,
    pub structure: AInftyStructure,
    /// Per basis element: (source object, target object, generator).
    generators: Vec<(usize, usize, ArcGenerator)>,
    diagrams: HashMap<(usize, usize), UnlinkDiagram>,
}

/// Basis label `"<source>|<target>|<circle word>"`.
pub fn generator_label(p: &Matching, q: &Matching, g: &ArcGenerator) -> String {
    format!("{p}|{q}|{}", g.word())
}

impl ArcCategory {
    pub fn space(&self) -> &GradedSpace {
        self.structure.space()
    }

    pub fn generator(&self, i: u32) -> (usize, usize, &ArcGenerator) {
        let (p, q, g) = &self.generators[i as usize];
        (*p, *q, g)
    }

    pub fn diagram(&self, p: usize, q: usize) -> &UnlinkDiagram {
        &self.diagrams[&(p, q)]
    }

    pub fn plait_index(&self) -> usize {
        let plait = Matching::plait(self.k);
        self.matchings.iter().position(|m| *m == plait).expect("plait is an object")
    }

    pub fn index_of(&self, p: usize, q: usize, g: &ArcGenerator) -> u32 {
        self.space()
            .index_of(&generator_label(&self.matchings[p], &self.matchings[q], g))
            .expect("generator of the category")
    }

    /// Unsigned TQFT product `g2·g1` as a vector in the total space.
    pub fn tqft_product(&self, a2: u32, a1: u32) -> Result<Vector> {
        let (q2, r, g2) = self.generator(a2);
        let (p, q, g1) = self.generator(a1);
        if q2 != q {
            return Err(Error::Validation("product of non-composable generators".into()));
        }
        let f = self.space().field();
        let m = &self.matchings;
        let terms = multiply(&m[p], &m[q], &m[r], g2, g1, None)?;
        let mut v = Vector::new();
        for (g, c) in terms {
            v.add_term(self.index_of(p, r, &g), &f.from_i64(c));
        }
        Ok(v)
    }
}

/// The categorical arc algebra: objects are the crossingless matchings on `2k` points,
/// `hom(p, q)` is spanned by labellings of the circles of `p ∪ q̄`, and
/// `μ²(g2, g1) = (-1)^{|g1|} g2·g1`. Minimal, strictly unital, only `μ²`.
pub fn build_arc_category(k: usize, field: Field) -> Result<ArcCategory> {
    if k > MAX_STRANDS {
        return Err(Error::Validation(format!("arc categories are built for k ≤ {MAX_STRANDS}, got {k}")));
    }
    let matchings = enumerate_matchings(k)?;
    let n = matchings.len();
    let objects: Vec<String> = matchings.iter().map(|m| m.to_string()).collect();
    let mut specs = Vec::new();
    let mut gens = Vec::new();
    let mut diagrams = HashMap::new();
    for p in 0..n {
        for q in 0..n {
            let d = unlink(&matchings[p], &matchings[q])?;
            for g in generators(&d) {
                specs.push(BasisSpec::morphism(
                    generator_label(&matchings[p], &matchings[q], &g),
                    g.degree(&d),
                    objects[p].clone(),
                    objects[q].clone(),
                ));
                gens.push((p, q, g));
            }
            diagrams.insert((p, q), d);
        }
    }
    let space = Arc::new(GradedSpace::new(field, Some(objects), specs)?);
    let max_arity = default_max_arity(&space);
    let provisional = ArcCategory {
        k,
        matchings,
        structure: AInftyStructure::new(space.clone(), crate::hochschild::Cochain::new(2), max_arity)?,
        generators: gens,
        diagrams,
    };
    let pairs = space.composable_tuples(2, &|_| true);
    let values: Vec<(Tuple, Vector)> = pairs
        .par_iter()
        .map(|t| {
            let v = provisional.tqft_product(t[0], t[1])?;
            let sign = if space.degree(t[1]).rem_euclid(2) == 1 { -field.one() } else { field.one() };
            Ok((t.clone(), v.scaled(&sign)))
        })
        .collect::<Result<_>>()?;
    let mut mu2 = MultiMap::new(2, 0);
    for (t, v) in values {
        if !v.is_zero() {
            mu2.insert_checked(&space, t, v)?;
        }
    }
    let units: Vec<u32> = (0..provisional.matchings.len())
        .map(|p| provisional.index_of(p, p, &ArcGenerator { labels: vec![Label::One; k] }))
        .collect();
    let structure = AInftyStructure::from_product(space, mu2, max_arity)?.with_strict_units(units)?;
    Ok(ArcCategory { structure, ..provisional })
}

/// Pairs `(p, q)` of matchings, as their display strings, failing either structural check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    pub pairs_checked: usize,
    /// `hom(p, q)` not generated by its minimal-degree element over `hom(q, q)` or `hom(p, p)`.
    pub simplicity_failures: Vec<(String, String)>,
    /// The top-degree generator of `hom(p, q)` is not a sum of products through the plait.
    pub top_class_failures: Vec<(String, String)>,
}

impl StructuralReport {
    pub fn holds(&self) -> bool {
        self.simplicity_failures.is_empty() && self.top_class_failures.is_empty()
    }
}

fn rank_of(field: Field, dim: usize, vectors: &[Vector], offset: &dyn Fn(u32) -> usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut m = Matrix::zeros(field, vectors.len(), dim);
    for (r, v) in vectors.iter().enumerate() {
        for (i, c) in v.iter() {
            m.set(r, offset(i), c.clone());
        }
    }
    m.rank()
}

/// Exact rank checks of (i) cyclicity of each `hom(p, q)` over both endomorphism
/// algebras on its minimal-degree generator, and (ii) the top-degree generator of
/// `hom(p, q)` lying in the image of `hom(•, q) ⊗ hom(p, •)` for the plait `•`.
pub fn check_structural_properties(cat: &ArcCategory) -> Result<StructuralReport> {
    if cat.k > 3 {
        return Err(Error::Validation(format!("structural checks run for k ≤ 3, got {}", cat.k)));
    }
    let space = cat.space();
    let field = space.field();
    let n = cat.matchings.len();
    let plait = cat.plait_index();
    let obj = |i: usize| i as u32;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|p| (0..n).map(move |q| (p, q))).collect();
    let results: Vec<(bool, bool)> = pairs
        .par_iter()
        .map(|&(p, q)| {
            let target = space.hom(obj(p), obj(q));
            let dim = target.len();
            let local: HashMap<u32, usize> = target.iter().enumerate().map(|(j, &i)| (i, j)).collect();
            let offset = |i: u32| local[&i];
            let c = cat.diagram(p, q).num_components();
            let g_min = cat.index_of(p, q, &ArcGenerator { labels: vec![Label::One; c] });
            let g_top = cat.index_of(p, q, &ArcGenerator { labels: vec![Label::X; c] });
            let left: Vec<Vector> = space
                .hom(obj(q), obj(q))
                .iter()
                .map(|&h| cat.tqft_product(h, g_min))
                .collect::<Result<_>>()?;
            let right: Vec<Vector> = space
                .hom(obj(p), obj(p))
                .iter()
                .map(|&h| cat.tqft_product(g_min, h))
                .collect::<Result<_>>()?;
            let simple = rank_of(field, dim, &left, &offset) == dim && rank_of(field, dim, &right, &offset) == dim;
            let mut through = Vec::new();
            for &a1 in space.hom(obj(p), obj(plait)) {
                for &a2 in space.hom(obj(plait), obj(q)) {
                    through.push(cat.tqft_product(a2, a1)?);
                }
            }
            let r = rank_of(field, dim, &through, &offset);
            through.push(Vector::basis(g_top, field.one()));
            let top = rank_of(field, dim, &through, &offset) == r;
            Ok((simple, top))
        })
        .collect::<Result<_>>()?;
    let mut report = StructuralReport { pairs_checked: pairs.len(), ..Default::default() };
    for (&(p, q), (simple, top)) in pairs.iter().zip(results) {
        let names = (cat.matchings[p].to_string(), cat.matchings[q].to_string());
        if !simple {
            report.simplicity_failures.push(names.clone());
        }
        if !top {
            report.top_class_failures.push(names);
        }
    }
    Ok(report)
}
