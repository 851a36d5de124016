use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{sign, GradedSpace, MultiMap, Tuple, Vector};
use crate::hochschild::Cochain;

/// An A∞-structure on a graded space (an algebra, or a category encoded with
/// object-decorated basis elements), truncated at `max_arity`.
#[derive(Clone, Debug)]
pub struct AInftyStructure {
    space: Arc<GradedSpace>,
    mu: Cochain,
    max_arity: usize,
    strict_units: Option<Vec<u32>>,
}

/// Default truncation: basis degree spread plus three.
pub fn default_max_arity(space: &GradedSpace) -> usize {
    (space.max_degree() - space.min_degree()) as usize + 3
}

impl AInftyStructure {
    /// Builds a structure from products of total degree 2, validating every entry.
    pub fn new(space: Arc<GradedSpace>, mu: Cochain, max_arity: usize) -> Result<Self> {
        if mu.total_degree() != 2 {
            return Err(Error::Validation(format!(
                "A∞ products must have total degree 2, got {}",
                mu.total_degree()
            )));
        }
        mu.validate(&space)?;
        if let Some(top) = mu.max_nonzero_arity() {
            if top > max_arity {
                return Err(Error::Validation(format!(
                    "product of arity {top} exceeds the truncation {max_arity}"
                )));
            }
        }
        Ok(Self { space, mu, max_arity, strict_units: None })
    }

    /// Structure whose only product is the given binary one.
    pub fn from_product(space: Arc<GradedSpace>, mu2: MultiMap, max_arity: usize) -> Result<Self> {
        let mut mu = Cochain::new(2);
        mu.set_component(mu2);
        Self::new(space, mu, max_arity)
    }

    /// Declares strict units (one basis element per object) after checking the unit axioms:
    /// `μ²(a, 1) = a`, `μ²(1, a) = (-1)^{|a|} a` and higher products vanish on unit inputs.
    pub fn with_strict_units(mut self, units: Vec<u32>) -> Result<Self> {
        self.check_units(&units)?;
        self.strict_units = Some(units);
        Ok(self)
    }

    pub(crate) fn set_units_unchecked(&mut self, units: Option<Vec<u32>>) {
        self.strict_units = units;
    }

    pub fn check_units(&self, units: &[u32]) -> Result<()> {
        let s = &self.space;
        let field = s.field();
        if units.len() != s.num_objects() {
            return Err(Error::Validation(format!(
                "{} units declared for {} objects",
                units.len(),
                s.num_objects()
            )));
        }
        for (obj, &u) in units.iter().enumerate() {
            if u as usize >= s.dim() || s.source(u) != obj as u32 || s.target(u) != obj as u32 || s.degree(u) != 0 {
                return Err(Error::Validation(format!(
                    "unit for object {} must be a degree-0 endomorphism of it",
                    s.object_name(obj as u32)
                )));
            }
        }
        let empty = MultiMap::new(2, 0);
        let mu2 = self.mu.component(2).unwrap_or(&empty);
        for a in 0..s.dim() as u32 {
            let right_unit = units[s.source(a) as usize];
            let left_unit = units[s.target(a) as usize];
            let got = mu2.get(&[a, right_unit]).cloned().unwrap_or_default();
            if got != Vector::basis(a, field.one()) {
                return Err(Error::Validation(format!("μ²({}, 1) ≠ {}", s.label(a), s.label(a))));
            }
            let got = mu2.get(&[left_unit, a]).cloned().unwrap_or_default();
            if got != Vector::basis(a, sign(field, s.degree(a))) {
                return Err(Error::Validation(format!(
                    "μ²(1, {}) ≠ (-1)^|a| {}",
                    s.label(a),
                    s.label(a)
                )));
            }
        }
        for (d, m) in self.mu.components() {
            if d == 2 {
                continue;
            }
            for (k, _) in m.sorted_entries() {
                if k.iter().any(|x| units.contains(x)) {
                    return Err(Error::Validation(format!(
                        "μ^{d} is nonzero on a tuple containing a unit: {}",
                        crate::exactlin::multimap::show_tuple(s, k)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn space_arc(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn mu(&self) -> &Cochain {
        &self.mu
    }

    pub fn product(&self, d: usize) -> Option<&MultiMap> {
        self.mu.component(d)
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn strict_units(&self) -> Option<&[u32]> {
        self.strict_units.as_deref()
    }

    pub fn is_unit(&self, x: u32) -> bool {
        self.strict_units.as_ref().is_some_and(|u| u.contains(&x))
    }

    /// `μ¹ = 0`.
    pub fn is_minimal(&self) -> bool {
        self.mu.component(1).is_none_or(|m| m.is_zero())
    }

    /// Higher products `μ^d` vanish for `3 ≤ d ≤ order`.
    pub fn is_formal_to_order(&self, order: usize) -> bool {
        self.mu.components().all(|(d, _)| d < 3 || d > order)
    }

    /// Lowest arity `d ≥ 3` with `μ^d ≠ 0`.
    pub fn first_higher_product(&self) -> Option<usize> {
        self.mu.components().map(|(d, _)| d).find(|d| *d >= 3)
    }

    pub fn with_max_arity(&self, max_arity: usize) -> Result<Self> {
        let mut out = self.clone();
        out.max_arity = max_arity;
        out.mu = self.mu.truncated(max_arity);
        Ok(out)
    }

    /// Same products viewed on the total space with objects forgotten.
    pub fn forget_objects(&self) -> Self {
        Self {
            space: Arc::new(self.space.forget_objects()),
            mu: self.mu.clone(),
            max_arity: self.max_arity,
            strict_units: None,
        }
    }

    /// Requires `μ¹ = 0`.
    pub fn require_minimal(&self) -> Result<()> {
        if self.is_minimal() {
            Ok(())
        } else {
            Err(Error::NotMinimal(format!(
                "μ¹ has {} nonzero entries",
                self.mu.component(1).map_or(0, |m| m.len())
            )))
        }
    }

    /// Single-entry helper for tests and fixtures.
    pub fn product_value(&self, key: &[u32]) -> Vector {
        self.mu.get(key).cloned().unwrap_or_default()
    }

    pub fn tuple(labels: &[u32]) -> Tuple {
        Tuple::from_slice(labels)
    }
}
