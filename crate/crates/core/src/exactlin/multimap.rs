use std::collections::HashMap;

use super::scalar::{Field, Scalar};
use super::space::{GradedSpace, Tuple};
use super::vector::Vector;
use super::ExactError;

/// Sparse multilinear map of fixed arity on a graded space.
///
/// `degree` is the unshifted degree: an entry on `(a_d, ..., a_1)` has output in
/// degree `Σ|a_i| + degree`. Absent entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiMap {
    arity: usize,
    degree: i64,
    entries: HashMap<Tuple, Vector>,
}

impl MultiMap {
    pub fn new(arity: usize, degree: i64) -> Self {
        Self { arity, degree, entries: HashMap::new() }
    }

    /// The identity endomorphism on the whole space.
    pub fn identity(space: &GradedSpace) -> Self {
        let one = space.field().one();
        let mut m = Self::new(1, 0);
        for i in 0..space.dim() as u32 {
            m.entries.insert(Tuple::from_slice(&[i]), Vector::basis(i, one.clone()));
        }
        m
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, key: &[u32]) -> Option<&Vector> {
        self.entries.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tuple, &Vector)> + '_ {
        self.entries.iter()
    }

    /// Entries in lexicographic key order.
    pub fn sorted_entries(&self) -> Vec<(&Tuple, &Vector)> {
        let mut v: Vec<_> = self.entries.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// Checks one entry against arity, composability and degree bookkeeping.
    pub fn check_entry(&self, space: &GradedSpace, key: &[u32], value: &Vector) -> Result<(), ExactError> {
        if key.len() != self.arity {
            return Err(ExactError::Invalid(format!(
                "entry of length {} in arity-{} map",
                key.len(),
                self.arity
            )));
        }
        if key.iter().any(|&i| i as usize >= space.dim()) {
            return Err(ExactError::Invalid("entry references unknown basis element".into()));
        }
        if !space.is_composable(key) {
            return Err(ExactError::Invalid(format!("input tuple {} is not composable", show_tuple(space, key))));
        }
        let expected = space.tuple_degree(key) + self.degree;
        for (o, _) in value.iter() {
            if o as usize >= space.dim() {
                return Err(ExactError::Invalid("output references unknown basis element".into()));
            }
            if space.degree(o) != expected {
                return Err(ExactError::Invalid(format!(
                    "entry {} -> {} has degree {} but the map requires {}",
                    show_tuple(space, key),
                    space.label(o),
                    space.degree(o),
                    expected
                )));
            }
            let (src, tgt) = (space.source(o), space.target(o));
            let ok = if key.is_empty() {
                src == tgt
            } else {
                src == space.source(key[key.len() - 1]) && tgt == space.target(key[0])
            };
            if !ok {
                return Err(ExactError::Invalid(format!(
                    "entry {} -> {} lands in the wrong morphism space",
                    show_tuple(space, key),
                    space.label(o)
                )));
            }
        }
        Ok(())
    }

    /// Inserts after validating against `space`; zero values clear the entry.
    pub fn insert_checked(&mut self, space: &GradedSpace, key: Tuple, value: Vector) -> Result<(), ExactError> {
        self.check_entry(space, &key, &value)?;
        self.insert(key, value);
        Ok(())
    }

    /// Unchecked insert for values produced by degree-correct computations.
    pub fn insert(&mut self, key: Tuple, value: Vector) {
        debug_assert_eq!(key.len(), self.arity);
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    /// `self[key] += value`.
    pub fn add_to(&mut self, key: &[u32], value: &Vector) {
        if value.is_zero() {
            return;
        }
        match self.entries.get_mut(key) {
            Some(v) => {
                v.add(value);
                if v.is_zero() {
                    self.entries.remove(key);
                }
            }
            None => {
                self.entries.insert(Tuple::from_slice(key), value.clone());
            }
        }
    }

    pub fn add_term(&mut self, key: &[u32], out: u32, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        let v = self.entries.entry(Tuple::from_slice(key)).or_default();
        v.add_term(out, coeff);
        if v.is_zero() {
            self.entries.remove(key);
        }
    }

    /// Re-validates every entry.
    pub fn validate(&self, space: &GradedSpace) -> Result<(), ExactError> {
        for (k, v) in self.sorted_entries() {
            self.check_entry(space, k, v)?;
        }
        Ok(())
    }

    pub fn scaled(&self, factor: &Scalar) -> MultiMap {
        let mut out = MultiMap::new(self.arity, self.degree);
        if factor.is_zero() {
            return out;
        }
        for (k, v) in &self.entries {
            out.entries.insert(k.clone(), v.scaled(factor));
        }
        out
    }

    pub fn add_scaled(&mut self, other: &MultiMap, factor: &Scalar) {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        for (k, v) in &other.entries {
            self.add_to(k, &v.scaled(factor));
        }
    }

    pub fn sub(&self, other: &MultiMap) -> MultiMap {
        let mut out = self.clone();
        for (k, v) in &other.entries {
            out.add_to(k, &v.negated());
        }
        out
    }

    /// Applies an arity-1 map to a vector.
    pub fn apply(&self, v: &Vector) -> Vector {
        assert_eq!(self.arity, 1);
        let mut out = Vector::new();
        for (i, c) in v.iter() {
            if let Some(img) = self.entries.get(&[i][..]) {
                out.add_scaled(img, c);
            }
        }
        out
    }

    /// Evaluates on vector arguments by multilinear expansion (no signs).
    pub fn eval(&self, field: Field, args: &[&Vector]) -> Vector {
        assert_eq!(args.len(), self.arity);
        let mut out = Vector::new();
        let mut key = Tuple::new();
        self.eval_rec(args, &mut key, &field.one(), &mut out);
        out
    }

    fn eval_rec(&self, args: &[&Vector], key: &mut Tuple, coeff: &Scalar, out: &mut Vector) {
        let pos = key.len();
        if pos == args.len() {
            if let Some(v) = self.entries.get(&key[..]) {
                out.add_scaled(v, coeff);
            }
            return;
        }
        for (i, c) in args[pos].iter() {
            key.push(i);
            self.eval_rec(args, key, &(coeff * c), out);
            key.pop();
        }
    }

    /// Keys on which `self` and `other` differ, sorted.
    pub fn differing_keys(&self, other: &MultiMap) -> Vec<Tuple> {
        let mut keys: Vec<Tuple> = self
            .entries
            .keys()
            .chain(other.entries.keys())
            .filter(|k| self.entries.get(*k) != other.entries.get(*k))
            .cloned()
            .collect();
        keys.sort();
        keys.dedup();
        keys
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&[u32]) -> bool) {
        self.entries.retain(|k, _| keep(k));
    }

    /// Changes the coefficient field of every entry via a residue map.
    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> MultiMap {
        let mut out = MultiMap::new(self.arity, self.degree);
        for (k, v) in &self.entries {
            let w: Vector = v.iter().map(|(i, c)| (i, f(c))).collect();
            out.insert(k.clone(), w);
        }
        out
    }
}

/// Parenthesized label list for diagnostics.
pub fn show_tuple(space: &GradedSpace, key: &[u32]) -> String {
    let labels: Vec<&str> = key.iter().map(|&i| space.label(i)).collect();
    format!("({})", labels.join(", "))
}

pub fn show_vector(space: &GradedSpace, v: &Vector) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = v.iter().map(|(i, c)| format!("{}*{}", c, space.label(i))).collect();
    terms.join(" + ")
}
