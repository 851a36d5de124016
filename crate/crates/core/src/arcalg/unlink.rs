use serde::Serialize;

use crate::error::{Error, Result};

use super::matching::Matching;

/// One circle of `℘ ∪ ℘̄′`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    /// Endpoints in clockwise order from the initial (leftmost) point: the first
    /// step follows an upper arc.
    pub points: Vec<u32>,
}

impl Component {
    /// Number of upper arcs on the circle.
    pub fn size(&self) -> usize {
        self.points.len() / 2
    }

    pub fn initial_point(&self) -> u32 {
        self.points[0]
    }

    /// Points at odd positions (1st, 3rd, ...) of the clockwise relabelling.
    pub fn odd_points(&self) -> Vec<u32> {
        self.points.iter().step_by(2).copied().collect()
    }

    pub fn even_points(&self) -> Vec<u32> {
        self.points.iter().skip(1).step_by(2).copied().collect()
    }
}

/// The planar unlink with `upper` in the upper half-plane and the reflection of `lower` below.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnlinkDiagram {
    pub k: usize,
    /// Sorted by initial point.
    pub components: Vec<Component>,
}

impl UnlinkDiagram {
    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn component_sizes(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.size()).collect()
    }

    /// Index of the component containing endpoint `x`.
    pub fn component_of(&self, x: u32) -> usize {
        self.components
            .iter()
            .position(|c| c.points.contains(&x))
            .expect("every endpoint lies on a component")
    }
}

/// Components of `upper ∪ reflect(lower)`, traced by alternating arcs.
pub fn unlink(upper: &Matching, lower: &Matching) -> Result<UnlinkDiagram> {
    if upper.k() != lower.k() {
        return Err(Error::Validation(format!(
            "matchings on different point counts: {} vs {}",
            2 * upper.k(),
            2 * lower.k()
        )));
    }
    let k = upper.k();
    let up = upper.partners();
    let down = lower.partners();
    let mut seen = vec![false; 2 * k + 1];
    let mut components = Vec::new();
    for start in 1..=2 * k as u32 {
        if seen[start as usize] {
            continue;
        }
        let mut points = Vec::new();
        let mut x = start;
        loop {
            points.push(x);
            seen[x as usize] = true;
            let y = up[x as usize];
            points.push(y);
            seen[y as usize] = true;
            x = down[y as usize];
            if x == start {
                break;
            }
        }
        components.push(Component { points });
    }
    Ok(UnlinkDiagram { k, components })
}
