use std::collections::BTreeMap;

use crate::exactlin::{GradedSpace, MultiMap, Scalar, Tuple, Vector};
use crate::exactlin::ExactError;

/// Arity-indexed family of multilinear maps of one total degree.
///
/// With total degree `D`, the arity-`s` component has unshifted degree `D - s`:
/// it is an element of `Hom(A[1]^{⊗s}, A)` of degree `D`. A∞-products have
/// `D = 2`, formal diffeomorphisms and nc-vector fields `D = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    total_degree: i64,
    comps: BTreeMap<usize, MultiMap>,
}

impl Cochain {
    pub fn new(total_degree: i64) -> Self {
        Self { total_degree, comps: BTreeMap::new() }
    }

    pub fn total_degree(&self) -> i64 {
        self.total_degree
    }

    /// Unshifted degree of the arity-`s` component.
    pub fn component_degree(&self, s: usize) -> i64 {
        self.total_degree - s as i64
    }

    pub fn component(&self, s: usize) -> Option<&MultiMap> {
        self.comps.get(&s)
    }

    /// Mutable access, creating an empty component on demand.
    pub fn component_mut(&mut self, s: usize) -> &mut MultiMap {
        let d = self.component_degree(s);
        self.comps.entry(s).or_insert_with(|| MultiMap::new(s, d))
    }

    pub fn set_component(&mut self, map: MultiMap) {
        assert_eq!(
            map.degree(),
            self.component_degree(map.arity()),
            "component degree does not match the total degree"
        );
        if map.is_zero() {
            self.comps.remove(&map.arity());
        } else {
            self.comps.insert(map.arity(), map);
        }
    }

    pub fn remove_component(&mut self, s: usize) -> Option<MultiMap> {
        self.comps.remove(&s)
    }

    /// Nonzero components in increasing arity.
    pub fn components(&self) -> impl Iterator<Item = (usize, &MultiMap)> + '_ {
        self.comps.iter().filter(|(_, m)| !m.is_zero()).map(|(s, m)| (*s, m))
    }

    pub fn arities(&self) -> Vec<usize> {
        self.components().map(|(s, _)| s).collect()
    }

    pub fn max_nonzero_arity(&self) -> Option<usize> {
        self.components().map(|(s, _)| s).last()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|m| m.is_zero())
    }

    pub fn entry_count(&self) -> usize {
        self.comps.values().map(|m| m.len()).sum()
    }

    pub fn get(&self, key: &[u32]) -> Option<&Vector> {
        self.comps.get(&key.len())?.get(key)
    }

    pub fn add_to(&mut self, key: &[u32], value: &Vector) {
        if value.is_zero() {
            return;
        }
        self.component_mut(key.len()).add_to(key, value);
    }

    /// Drops components above `max_arity`.
    pub fn truncated(&self, max_arity: usize) -> Cochain {
        let mut out = self.clone();
        out.comps.retain(|s, _| *s <= max_arity);
        out
    }

    /// Keeps only the components whose arity passes `keep`.
    pub fn restricted(&self, keep: impl Fn(usize) -> bool) -> Cochain {
        let mut out = self.clone();
        out.comps.retain(|s, _| keep(*s));
        out
    }

    pub fn scaled(&self, factor: &Scalar) -> Cochain {
        let mut out = Cochain::new(self.total_degree);
        for (s, m) in self.components() {
            let scaled = m.scaled(factor);
            if !scaled.is_zero() {
                out.comps.insert(s, scaled);
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &Cochain, factor: &Scalar) {
        assert_eq!(self.total_degree, other.total_degree, "adding cochains of different degree");
        for (s, m) in other.components() {
            self.component_mut(s).add_scaled(m, factor);
        }
        self.prune();
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.total_degree, other.total_degree, "adding cochains of different degree");
        let mut out = self.clone();
        for (_, m) in other.components() {
            for (k, v) in m.iter() {
                out.add_to(k, v);
            }
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.total_degree, other.total_degree, "subtracting cochains of different degree");
        let mut out = self.clone();
        for (_, m) in other.components() {
            for (k, v) in m.iter() {
                out.add_to(k, &v.negated());
            }
        }
        out.prune();
        out
    }

    pub fn prune(&mut self) {
        self.comps.retain(|_, m| !m.is_zero());
    }

    pub fn validate(&self, space: &GradedSpace) -> Result<(), ExactError> {
        for (s, m) in &self.comps {
            if m.arity() != *s || m.degree() != self.component_degree(*s) {
                return Err(ExactError::Invalid(format!(
                    "component of arity {s} has degree {} but total degree {} requires {}",
                    m.degree(),
                    self.total_degree,
                    self.component_degree(*s)
                )));
            }
            m.validate(space)?;
        }
        Ok(())
    }

    /// First key (by arity, then lexicographic) where the two cochains differ, up to `max_arity`,
    /// with the difference `self - other` there.
    pub fn first_difference(&self, other: &Cochain, max_arity: usize) -> Option<(Tuple, Vector)> {
        let mut arities: Vec<usize> = self.comps.keys().chain(other.comps.keys()).copied().collect();
        arities.sort_unstable();
        arities.dedup();
        for s in arities.into_iter().filter(|s| *s <= max_arity) {
            let a = self.comps.get(&s).cloned().unwrap_or_else(|| MultiMap::new(s, self.component_degree(s)));
            let b = other.comps.get(&s).cloned().unwrap_or_else(|| MultiMap::new(s, other.component_degree(s)));
            if let Some(k) = a.differing_keys(&b).into_iter().next() {
                let mut diff = a.get(&k).cloned().unwrap_or_default();
                if let Some(bv) = b.get(&k) {
                    diff.add(&bv.negated());
                }
                return Some((k, diff));
            }
        }
        None
    }

    /// Components as `(arity, entries)` in deterministic order.
    pub fn sorted(&self) -> Vec<(usize, Vec<(&Tuple, &Vector)>)> {
        self.components().map(|(s, m)| (s, m.sorted_entries())).collect()
    }

    /// Replaces coefficients entrywise (used for reductions between fields).
    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar + Copy) -> Cochain {
        let mut out = Cochain::new(self.total_degree);
        for (s, m) in self.components() {
            out.comps.insert(s, m.map_coefficients(f));
        }
        out.prune();
        out
    }
}

/// Builds an arity-1 cochain from a linear map given by images of basis elements.
pub fn linear_cochain(total_degree: i64, map: MultiMap) -> Cochain {
    let mut c = Cochain::new(total_degree);
    c.set_component(map);
    c
}

/// Arity-1 identity cochain (total degree 1), the linear part of the identity diffeomorphism.
pub fn identity_cochain(space: &GradedSpace) -> Cochain {
    linear_cochain(1, MultiMap::identity(space))
}

/// Keys of `m` sorted by (arity, tuple), for deterministic traversal.
pub fn sorted_keys(c: &Cochain) -> Vec<Tuple> {
    let mut keys: Vec<Tuple> = c.comps.values().flat_map(|m| m.iter().map(|(k, _)| k.clone())).collect();
    keys.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    keys
}
