use std::collections::BTreeMap;

use super::scalar::Scalar;

/// Sparse vector over a graded space; absent coordinates are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Vector {
    entries: BTreeMap<u32, Scalar>,
}

impl Vector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(index: u32, coeff: Scalar) -> Self {
        let mut v = Self::new();
        v.add_term(index, &coeff);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: u32) -> Option<&Scalar> {
        self.entries.get(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Scalar)> + '_ {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }

    /// Adds `coeff * e_index`, dropping the entry if it cancels.
    pub fn add_term(&mut self, index: u32, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.entries.entry(index) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn set(&mut self, index: u32, coeff: Scalar) {
        if coeff.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, coeff);
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Vector, factor: &Scalar) {
        if factor.is_zero() {
            return;
        }
        if factor.is_one() {
            for (i, c) in other.iter() {
                self.add_term(i, c);
            }
        } else {
            for (i, c) in other.iter() {
                self.add_term(i, &(c * factor));
            }
        }
    }

    pub fn add(&mut self, other: &Vector) {
        for (i, c) in other.iter() {
            self.add_term(i, c);
        }
    }

    pub fn scaled(&self, factor: &Scalar) -> Vector {
        if factor.is_zero() {
            return Vector::new();
        }
        Vector { entries: self.entries.iter().map(|(i, c)| (*i, c * factor)).collect() }
    }

    pub fn negated(&self) -> Vector {
        Vector { entries: self.entries.iter().map(|(i, c)| (*i, -c)).collect() }
    }

    pub fn retain(&mut self, mut keep: impl FnMut(u32) -> bool) {
        self.entries.retain(|i, _| keep(*i));
    }
}

impl FromIterator<(u32, Scalar)> for Vector {
    fn from_iter<T: IntoIterator<Item = (u32, Scalar)>>(iter: T) -> Self {
        let mut v = Vector::new();
        for (i, c) in iter {
            v.add_term(i, &c);
        }
        v
    }
}
