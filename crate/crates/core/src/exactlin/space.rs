use std::collections::HashMap;

use smallvec::SmallVec;

use super::scalar::Field;
use super::ExactError;

/// Basis tuple in written order `(a_d, ..., a_1)`: index 0 is the leftmost input.
pub type Tuple = SmallVec<[u32; 8]>;

/// One basis element of a graded space, with its object pair in categorical mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub label: String,
    pub degree: i64,
    pub source: u32,
    pub target: u32,
}

/// Input description of a basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisSpec {
    pub label: String,
    pub degree: i64,
    pub source: Option<String>,
    pub target: Option<String>,
}

impl BasisSpec {
    pub fn plain(label: impl Into<String>, degree: i64) -> Self {
        Self { label: label.into(), degree, source: None, target: None }
    }

    pub fn morphism(
        label: impl Into<String>,
        degree: i64,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Self {
        Self { label: label.into(), degree, source: Some(source.into()), target: Some(target.into()) }
    }
}

/// Finite graded vector space with an ordered basis.
///
/// A category is encoded as one total space whose basis elements carry a
/// (source, target) object pair; a tuple `(a_d, ..., a_1)` is composable when
/// `a_1: X_0 -> X_1, ..., a_d: X_{d-1} -> X_d`. Without objects every element
/// lives on the single object `0` and every tuple is composable.
#[derive(Clone, Debug)]
pub struct GradedSpace {
    field: Field,
    objects: Option<Vec<String>>,
    basis: Vec<BasisElement>,
    label_index: HashMap<String, u32>,
    by_target: Vec<Vec<u32>>,
    hom: HashMap<(u32, u32), Vec<u32>>,
}

impl GradedSpace {
    pub fn new(field: Field, objects: Option<Vec<String>>, specs: Vec<BasisSpec>) -> Result<Self, ExactError> {
        let object_index: HashMap<&str, u32> = objects
            .iter()
            .flatten()
            .enumerate()
            .map(|(i, o)| (o.as_str(), i as u32))
            .collect();
        if let Some(objs) = &objects {
            if object_index.len() != objs.len() {
                return Err(ExactError::Invalid("duplicate object names".into()));
            }
            if objs.is_empty() {
                return Err(ExactError::Invalid("categorical space without objects".into()));
            }
        }
        let mut basis = Vec::with_capacity(specs.len());
        for spec in specs {
            let (source, target) = match (&objects, &spec.source, &spec.target) {
                (None, None, None) => (0, 0),
                (Some(_), Some(s), Some(t)) => {
                    let lookup = |o: &str| {
                        object_index
                            .get(o)
                            .copied()
                            .ok_or_else(|| ExactError::Invalid(format!("unknown object {o:?} on {:?}", spec.label)))
                    };
                    (lookup(s)?, lookup(t)?)
                }
                (Some(_), _, _) => {
                    return Err(ExactError::Invalid(format!(
                        "basis element {:?} needs both source and target",
                        spec.label
                    )))
                }
                (None, _, _) => {
                    return Err(ExactError::Invalid(format!(
                        "basis element {:?} names objects but the space has none",
                        spec.label
                    )))
                }
            };
            basis.push(BasisElement { label: spec.label, degree: spec.degree, source, target });
        }
        Self::from_elements(field, objects, basis)
    }

    fn from_elements(field: Field, objects: Option<Vec<String>>, basis: Vec<BasisElement>) -> Result<Self, ExactError> {
        if basis.len() >= u32::MAX as usize {
            return Err(ExactError::Invalid("basis too large".into()));
        }
        let mut label_index = HashMap::with_capacity(basis.len());
        for (i, b) in basis.iter().enumerate() {
            if label_index.insert(b.label.clone(), i as u32).is_some() {
                return Err(ExactError::Invalid(format!("duplicate basis label {:?}", b.label)));
            }
        }
        let n_obj = objects.as_ref().map_or(1, |o| o.len());
        let mut by_target = vec![Vec::new(); n_obj];
        let mut hom: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        for (i, b) in basis.iter().enumerate() {
            by_target[b.target as usize].push(i as u32);
            hom.entry((b.source, b.target)).or_default().push(i as u32);
        }
        Ok(Self { field, objects, basis, label_index, by_target, hom })
    }

    /// Ungraded-object convenience constructor for algebras.
    pub fn algebra(field: Field, basis: &[(&str, i64)]) -> Result<Self, ExactError> {
        Self::new(field, None, basis.iter().map(|(l, d)| BasisSpec::plain(*l, *d)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_categorical(&self) -> bool {
        self.objects.is_some()
    }

    pub fn objects(&self) -> Option<&[String]> {
        self.objects.as_deref()
    }

    pub fn num_objects(&self) -> usize {
        self.by_target.len()
    }

    pub fn object_name(&self, obj: u32) -> String {
        match &self.objects {
            Some(o) => o[obj as usize].clone(),
            None => "*".to_string(),
        }
    }

    pub fn object_index(&self, name: &str) -> Option<u32> {
        self.objects.as_ref()?.iter().position(|o| o == name).map(|i| i as u32)
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn element(&self, i: u32) -> &BasisElement {
        &self.basis[i as usize]
    }

    pub fn degree(&self, i: u32) -> i64 {
        self.basis[i as usize].degree
    }

    pub fn label(&self, i: u32) -> &str {
        &self.basis[i as usize].label
    }

    pub fn source(&self, i: u32) -> u32 {
        self.basis[i as usize].source
    }

    pub fn target(&self, i: u32) -> u32 {
        self.basis[i as usize].target
    }

    pub fn index_of(&self, label: &str) -> Option<u32> {
        self.label_index.get(label).copied()
    }

    /// Basis of the morphism space `hom(source, target)`.
    pub fn hom(&self, source: u32, target: u32) -> &[u32] {
        self.hom.get(&(source, target)).map_or(&[], |v| v.as_slice())
    }

    pub fn hom_of_degree(&self, source: u32, target: u32, degree: i64) -> impl Iterator<Item = u32> + '_ {
        self.hom(source, target).iter().copied().filter(move |&i| self.degree(i) == degree)
    }

    /// Endomorphism elements of every object with the given degree (outputs of arity-0 maps).
    pub fn endo_of_degree(&self, degree: i64) -> impl Iterator<Item = u32> + '_ {
        (0..self.dim() as u32).filter(move |&i| self.source(i) == self.target(i) && self.degree(i) == degree)
    }

    pub fn min_degree(&self) -> i64 {
        self.basis.iter().map(|b| b.degree).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> i64 {
        self.basis.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    pub fn tuple_degree(&self, t: &[u32]) -> i64 {
        t.iter().map(|&i| self.degree(i)).sum()
    }

    /// Sign weight `†_i = Σ_{k≤i} (|a_k| - 1)` over the rightmost `i` inputs.
    pub fn dagger(&self, t: &[u32], i: usize) -> i64 {
        t[t.len() - i..].iter().map(|&a| self.degree(a) - 1).sum()
    }

    pub fn is_composable(&self, t: &[u32]) -> bool {
        t.windows(2).all(|w| self.source(w[0]) == self.target(w[1]))
    }

    /// Object `X_i` sitting between `a_{i+1}` and `a_i` of a nonempty composable tuple.
    pub fn gap_object(&self, t: &[u32], i: usize) -> u32 {
        let d = t.len();
        if i == 0 {
            self.source(t[d - 1])
        } else {
            self.target(t[d - i])
        }
    }

    /// Candidate output basis elements for a degree-`shift` map on the given tuple.
    pub fn outputs_for(&self, t: &[u32], shift: i64) -> Vec<u32> {
        let degree = self.tuple_degree(t) + shift;
        if t.is_empty() {
            self.endo_of_degree(degree).collect()
        } else {
            self.hom_of_degree(self.source(t[t.len() - 1]), self.target(t[0]), degree).collect()
        }
    }

    /// All composable basis tuples of length `d` whose entries pass `allowed`, in lexicographic order.
    pub fn composable_tuples(&self, d: usize, allowed: &dyn Fn(u32) -> bool) -> Vec<Tuple> {
        let mut out = Vec::new();
        if d == 0 {
            out.push(Tuple::new());
            return out;
        }
        let mut current = Tuple::new();
        for first in 0..self.dim() as u32 {
            if !allowed(first) {
                continue;
            }
            current.push(first);
            self.extend_tuples(d, allowed, &mut current, &mut out);
            current.pop();
        }
        out
    }

    fn extend_tuples(&self, d: usize, allowed: &dyn Fn(u32) -> bool, current: &mut Tuple, out: &mut Vec<Tuple>) {
        if current.len() == d {
            out.push(current.clone());
            return;
        }
        let last = *current.last().expect("nonempty");
        let obj = self.source(last);
        for &next in &self.by_target[obj as usize] {
            if !allowed(next) {
                continue;
            }
            current.push(next);
            self.extend_tuples(d, allowed, current, out);
            current.pop();
        }
    }

    /// Number of composable tuples of length `d` (transfer-matrix count).
    pub fn count_composable(&self, d: usize) -> u128 {
        if d == 0 {
            return 1;
        }
        let n = self.num_objects();
        // counts[x] = number of composable chains of current length ending (leftmost) with target x
        let mut counts = vec![0u128; n];
        for b in &self.basis {
            counts[b.target as usize] += 1;
        }
        for _ in 1..d {
            let mut next = vec![0u128; n];
            for b in &self.basis {
                next[b.target as usize] += counts[b.source as usize];
            }
            counts = next;
        }
        counts.iter().sum()
    }

    /// The same basis with object data dropped: the total algebra of a category.
    pub fn forget_objects(&self) -> GradedSpace {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElement { label: b.label.clone(), degree: b.degree, source: 0, target: 0 })
            .collect();
        Self::from_elements(self.field, None, basis).expect("labels already unique")
    }

    pub fn with_field(&self, field: Field) -> GradedSpace {
        let mut s = self.clone();
        s.field = field;
        s
    }
}
