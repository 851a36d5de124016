use serde::Serialize;

use crate::error::Result;
use crate::exactlin::{Field, GradedSpace};

use super::matching::Matching;
use super::unlink::{unlink, UnlinkDiagram};

/// Circle label of the Frobenius algebra `𝐤[x]/x²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Label {
    /// The admissible tuple takes the odd points of the circle, including the initial point.
    One,
    /// The admissible tuple takes the even points.
    X,
}

impl Label {
    pub fn symbol(self) -> char {
        match self {
            Label::One => '1',
            Label::X => 'x',
        }
    }
}

/// A generator of `hom(℘, ℘′)`: one label per component of the unlink.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ArcGenerator {
    pub labels: Vec<Label>,
}

impl ArcGenerator {
    /// `Σ_C (|C| - 1)` over circles labelled `1` plus `Σ_C (|C| + 1)` over circles labelled `x`.
    pub fn degree(&self, diagram: &UnlinkDiagram) -> i64 {
        diagram
            .components
            .iter()
            .zip(&self.labels)
            .map(|(c, l)| match l {
                Label::One => c.size() as i64 - 1,
                Label::X => c.size() as i64 + 1,
            })
            .sum()
    }

    /// The admissible tuple of endpoints this generator stands for, sorted.
    pub fn admissible_tuple(&self, diagram: &UnlinkDiagram) -> Vec<u32> {
        let mut out: Vec<u32> = diagram
            .components
            .iter()
            .zip(&self.labels)
            .flat_map(|(c, l)| match l {
                Label::One => c.odd_points(),
                Label::X => c.even_points(),
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn word(&self) -> String {
        self.labels.iter().map(|l| l.symbol()).collect()
    }
}

/// All `2^c` generators, in lexicographic order of their label words.
pub fn generators(diagram: &UnlinkDiagram) -> Vec<ArcGenerator> {
    let c = diagram.num_components();
    (0..1u64 << c)
        .map(|bits| ArcGenerator {
            labels: (0..c).map(|i| if bits >> (c - 1 - i) & 1 == 1 { Label::X } else { Label::One }).collect(),
        })
        .collect()
}

/// `hom(℘, ℘′)` as a graded space; labels are the circle words.
pub fn hom_space(field: Field, p: &Matching, q: &Matching) -> Result<GradedSpace> {
    let d = unlink(p, q)?;
    let basis: Vec<(String, i64)> = generators(&d).iter().map(|g| (g.word(), g.degree(&d))).collect();
    let refs: Vec<(&str, i64)> = basis.iter().map(|(l, g)| (l.as_str(), *g)).collect();
    Ok(GradedSpace::algebra(field, &refs)?)
}
