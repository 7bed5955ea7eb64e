use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::simplex::SimplexX;
use crate::error::{Error, Result};
use crate::latmod::{enumerate_lattices_between, Lattice};

/// Largest number of vertices a ball enumeration may visit.
pub const MAX_BALL_VERTICES: usize = 50_000;

/// Normalized classes adjacent to [l]: all M with t l ⊊ M ⊊ l.
pub fn neighbors(l: &Lattice) -> Result<Vec<Lattice>> {
    let low = l.scale(1);
    let mut out: Vec<Lattice> = enumerate_lattices_between(&low, l)?
        .into_iter()
        .filter(|m| m != l && *m != low)
        .map(|m| m.homothety_normalize())
        .collect();
    out.sort();
    Ok(out)
}

/// Vertices at combinatorial distance at most `radius` from [center], with
/// their distances and neighbor sets (restricted to the ball).
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: Lattice,
    pub radius: usize,
    pub distance: BTreeMap<Lattice, usize>,
    pub adjacency: BTreeMap<Lattice, BTreeSet<Lattice>>,
}

pub fn ball(center: &Lattice, radius: usize) -> Result<Ball> {
    let center = center.homothety_normalize();
    let mut distance = BTreeMap::from([(center.clone(), 0usize)]);
    let mut adjacency = BTreeMap::new();
    let mut frontier = vec![center.clone()];
    for r in 0..=radius {
        let lists: Vec<(Lattice, Vec<Lattice>)> =
            frontier.par_iter().map(|v| neighbors(v).map(|nb| (v.clone(), nb))).collect::<Result<_>>()?;
        let mut next = Vec::new();
        for (v, nb) in lists {
            for w in &nb {
                if r < radius && !distance.contains_key(w) {
                    distance.insert(w.clone(), r + 1);
                    next.push(w.clone());
                }
            }
            adjacency.insert(v, nb.into_iter().collect::<BTreeSet<_>>());
        }
        if distance.len() > MAX_BALL_VERTICES {
            return Err(Error::GuardExceeded(format!("ball has more than {MAX_BALL_VERTICES} vertices")));
        }
        next.sort();
        next.dedup();
        frontier = next;
    }
    for nb in adjacency.values_mut() {
        nb.retain(|w| distance.contains_key(w));
    }
    Ok(Ball { center, radius, distance, adjacency })
}

impl Ball {
    pub fn vertices(&self) -> Vec<Lattice> {
        self.distance.keys().cloned().collect()
    }
    /// Vertices at exactly the outer radius.
    pub fn shell(&self) -> BTreeSet<Lattice> {
        self.distance.iter().filter(|(_, &d)| d == self.radius).map(|(v, _)| v.clone()).collect()
    }
    /// All simplices with every vertex in the ball (the building is a flag
    /// complex, so these are the cliques of the adjacency graph).
    pub fn simplices(&self) -> Vec<SimplexX> {
        cliques(&self.vertices(), |a, b| self.adjacency.get(a).is_some_and(|s| s.contains(b)))
    }
}

/// All nonempty cliques of a graph on sorted vertices, as simplices.
pub fn cliques(vertices: &[Lattice], adjacent: impl Fn(&Lattice, &Lattice) -> bool + Sync) -> Vec<SimplexX> {
    let n = vertices.len();
    let nbrs: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| (i + 1..n).filter(|&j| adjacent(&vertices[i], &vertices[j])).collect())
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn grow(
        stack: &mut Vec<usize>,
        candidates: &[usize],
        nbrs: &[Vec<usize>],
        vertices: &[Lattice],
        out: &mut Vec<SimplexX>,
    ) {
        out.push(SimplexX::from_normalized_unchecked(stack.iter().map(|&i| vertices[i].clone()).collect()));
        for (k, &c) in candidates.iter().enumerate() {
            let next: Vec<usize> =
                candidates[k + 1..].iter().copied().filter(|x| nbrs[c].binary_search(x).is_ok()).collect();
            stack.push(c);
            grow(stack, &next, nbrs, vertices, out);
            stack.pop();
        }
    }
    for i in 0..n {
        stack.push(i);
        grow(&mut stack, &nbrs[i], &nbrs, vertices, &mut out);
        stack.pop();
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::FiniteField;

    #[test]
    fn tree_ball_sizes() {
        // The building of GL_2 over F_q((t)) is the (q+1)-regular tree.
        for q in [2u64, 3] {
            let f = FiniteField::with_order(q).unwrap();
            let b = ball(&Lattice::standard(&f, 2), 2).unwrap();
            let verts = 1 + (q + 1) + (q + 1) * q;
            assert_eq!(b.distance.len() as u64, verts);
            let simplices = b.simplices();
            assert_eq!(simplices.len() as u64, verts + verts - 1);
        }
    }

    #[test]
    fn gl3_vertex_links() {
        let f = FiniteField::with_order(2).unwrap();
        // Points and lines of P^2(F_2).
        assert_eq!(neighbors(&Lattice::standard(&f, 3)).unwrap().len(), 14);
    }
}
