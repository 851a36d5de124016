//! Removal of nested circles from `℘ ∪ ℘̄′` by sliding innermost circles outward.

use serde::Serialize;

use crate::error::{Error, Result};

use super::matching::Matching;
use super::unlink::{unlink, UnlinkDiagram};

/// `true` when circle `inner` lies inside circle `outer`: an odd number of the
/// points of `outer` sit to the left of the leftmost point of `inner`.
pub fn is_inside(diagram: &UnlinkDiagram, inner: usize, outer: usize) -> bool {
    if inner == outer {
        return false;
    }
    let left = diagram.components[inner].initial_point();
    diagram.components[outer].points.iter().filter(|&&x| x < left).count() % 2 == 1
}

/// For each circle, the number of circles containing it.
pub fn nesting_depths(diagram: &UnlinkDiagram) -> Vec<usize> {
    let c = diagram.num_components();
    (0..c).map(|i| (0..c).filter(|&j| is_inside(diagram, i, j)).count()).collect()
}

pub fn has_nesting(diagram: &UnlinkDiagram) -> bool {
    nesting_depths(diagram).iter().any(|&d| d > 0)
}

/// One slide: the circle through `circle_points` (original labels) was moved to
/// sit immediately left of its parent, starting at position `position`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Slide {
    pub circle_points: Vec<u32>,
    pub parent_points: Vec<u32>,
    pub position: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatPair {
    pub upper: Matching,
    pub lower: Matching,
    pub slides: Vec<Slide>,
}

/// Slides innermost nested circles across their parents until none is nested.
/// Each slide moves the points of one circle, in order, to a block directly left
/// of the leftmost point of the circle containing it; arcs keep their endpoints'
/// labels, so the circle count and circle sizes are unchanged.
pub fn remove_nesting(upper: &Matching, lower: &Matching) -> Result<FlatPair> {
    let k = upper.k();
    // order[i] = original label sitting at position i + 1
    let mut order: Vec<u32> = (1..=2 * k as u32).collect();
    let mut slides = Vec::new();
    loop {
        let (u, l) = relabel(upper, lower, &order)?;
        let d = unlink(&u, &l)?;
        let depths = nesting_depths(&d);
        let c = d.num_components();
        // an innermost nested circle: nested, and no other circle inside it
        let Some(inner) = (0..c).find(|&i| depths[i] > 0 && !(0..c).any(|j| is_inside(&d, j, i))) else {
            return Ok(FlatPair { upper: u, lower: l, slides });
        };
        // the parent is the containing circle of depth one less
        let parent = (0..c)
            .find(|&j| is_inside(&d, inner, j) && depths[j] + 1 == depths[inner])
            .expect("a nested circle has a parent");
        let block: Vec<u32> = d.components[inner].points.iter().map(|&x| order[x as usize - 1]).collect();
        let parent_start = d.components[parent].initial_point();
        let mut positions: Vec<u32> = d.components[inner].points.clone();
        positions.sort_unstable();
        let moving: Vec<u32> = positions.iter().map(|&x| order[x as usize - 1]).collect();
        let mut next: Vec<u32> = Vec::with_capacity(order.len());
        for (i, &label) in order.iter().enumerate() {
            if i as u32 + 1 == parent_start {
                next.extend(&moving);
            }
            if !moving.contains(&label) {
                next.push(label);
            }
        }
        let position = next.iter().position(|x| *x == moving[0]).expect("moved") as u32 + 1;
        slides.push(Slide {
            circle_points: sorted(block),
            parent_points: sorted(d.components[parent].points.iter().map(|&x| order[x as usize - 1]).collect()),
            position,
        });
        order = next;
        if slides.len() > 4 * k * k {
            return Err(Error::Validation("nesting removal did not terminate".into()));
        }
    }
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

/// The matchings obtained by placing original label `order[i]` at position `i + 1`.
fn relabel(upper: &Matching, lower: &Matching, order: &[u32]) -> Result<(Matching, Matching)> {
    let mut pos = vec![0u32; order.len() + 1];
    for (i, &label) in order.iter().enumerate() {
        pos[label as usize] = i as u32 + 1;
    }
    let map = |m: &Matching| m.arcs().iter().map(|&(a, b)| (pos[a as usize], pos[b as usize])).collect();
    Ok((Matching::new(upper.k(), map(upper))?, Matching::new(lower.k(), map(lower))?))
}
