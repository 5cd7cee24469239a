use std::collections::HashMap;

use num_bigint::BigUint;

use crate::bits;
use crate::error::{Error, Result};
use crate::family::{Family, MultiPartSet, PartStructure};
use crate::layer::LayerIter;

/// Default largest vertex count the primary engine accepts.
pub const DEFAULT_VERTEX_CAP: usize = 5000;

/// The graph on layer members with an edge between every two sets that
/// intersect. Cliques are exactly the intersecting families; it is the
/// complement of the tensor product of the per-part Kneser graphs.
#[derive(Debug, Clone)]
pub struct IntersectionGraph {
    ps: PartStructure,
    vertices: Vec<MultiPartSet>,
    words: usize,
    rows: Vec<Vec<u64>>,
    /// Per ground bit: the vertices whose set contains that element.
    containing: Vec<Vec<u64>>,
    /// A fixed matching of sets disjoint in every part; see [`partners`].
    partner: Vec<Option<usize>>,
}

impl IntersectionGraph {
    pub fn build(ps: &PartStructure, cap: usize) -> Result<Self> {
        let size = ps.layer_size();
        if size > BigUint::from(cap) {
            return Err(Error::TooLarge { vertices: size.to_string(), cap });
        }
        let vertices: Vec<MultiPartSet> = LayerIter::uncapped(ps).collect();
        let n = vertices.len();
        let words = bits::words_for(n);
        let mut rows = vec![vec![0u64; words]; n];
        for u in 0..n {
            for v in u + 1..n {
                if vertices[u].meets(&vertices[v]) {
                    bits::set(&mut rows[u], v);
                    bits::set(&mut rows[v], u);
                }
            }
        }
        let mut containing = vec![vec![0u64; words]; ps.ground_size()];
        for (u, set) in vertices.iter().enumerate() {
            for b in bits::ones(set.packed()) {
                bits::set(&mut containing[b], u);
            }
        }
        let partner = partners(ps, &vertices);
        Ok(Self { ps: ps.clone(), vertices, words, rows, containing, partner })
    }

    pub fn structure(&self) -> &PartStructure {
        &self.ps
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex list in canonical layer order.
    pub fn vertices(&self) -> &[MultiPartSet] {
        &self.vertices
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        bits::test(&self.rows[u], v)
    }

    pub fn degree(&self, u: usize) -> usize {
        bits::count(&self.rows[u])
    }

    pub fn edge_count(&self) -> usize {
        (0..self.len()).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Packed adjacency row of `u`.
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u]
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub(crate) fn containing(&self, ground_bit: usize) -> &[u64] {
        &self.containing[ground_bit]
    }

    pub(crate) fn partner(&self, v: usize) -> Option<usize> {
        self.partner[v]
    }

    pub fn family_of(&self, clique: &[usize]) -> Family {
        Family::from_unsorted(self.ps.clone(), clique.iter().map(|&v| self.vertices[v].clone()).collect())
    }
}

/// Pairs each vertex with one that is disjoint from it in every part,
/// taking the product of a matching of each part's Kneser graph: the
/// complement when `n = 2k`, otherwise a greedy matching that always
/// matches the set with the fewest free disjoint sets. A pair never shares
/// a color class with a third vertex when some part has `n < 3k`, so
/// seeding classes with pairs keeps greedy coloring close to the matching
/// optimum there.
fn partners(ps: &PartStructure, vertices: &[MultiPartSet]) -> Vec<Option<usize>> {
    let per_part: Vec<HashMap<Vec<u32>, Vec<u32>>> =
        ps.ns().iter().zip(ps.ks()).map(|(&n, &k)| kneser_matching(n, k)).collect();
    let index: HashMap<&[Vec<u32>], usize> = vertices.iter().enumerate().map(|(i, v)| (v.parts(), i)).collect();
    vertices
        .iter()
        .map(|v| {
            let image: Option<Vec<Vec<u32>>> =
                v.parts().iter().zip(&per_part).map(|(vals, m)| m.get(vals).cloned()).collect();
            image.and_then(|img| index.get(img.as_slice()).copied())
        })
        .collect()
}

fn kneser_matching(n: u32, k: u32) -> HashMap<Vec<u32>, Vec<u32>> {
    let sets: Vec<Vec<u32>> = LayerIter::uncapped(&PartStructure::new(&[n as i64], &[k as i64]).expect("valid part"))
        .map(|m| m.parts()[0].clone())
        .collect();
    let mut out = HashMap::new();
    if n == 2 * k {
        for s in &sets {
            out.insert(s.clone(), (1..=n).filter(|v| !s.contains(v)).collect());
        }
        return out;
    }
    let disjoint = |a: &[u32], b: &[u32]| a.iter().all(|v| !b.contains(v));
    let adj: Vec<Vec<usize>> = (0..sets.len())
        .map(|i| (0..sets.len()).filter(|&j| disjoint(&sets[i], &sets[j])).collect())
        .collect();
    let mut free = vec![true; sets.len()];
    let free_degree = |i: usize, free: &[bool]| adj[i].iter().filter(|&&j| free[j]).count();
    loop {
        let pick = (0..sets.len())
            .filter(|&i| free[i])
            .map(|i| (free_degree(i, &free), i))
            .filter(|&(d, _)| d > 0)
            .min();
        let Some((_, i)) = pick else { break };
        let j = adj[i]
            .iter()
            .copied()
            .filter(|&j| free[j])
            .min_by_key(|&j| (free_degree(j, &free), j))
            .expect("positive free degree");
        free[i] = false;
        free[j] = false;
        out.insert(sets[i].clone(), sets[j].clone());
        out.insert(sets[j].clone(), sets[i].clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(n: &[i64], k: &[i64]) -> PartStructure {
        PartStructure::new(n, k).unwrap()
    }

    #[test]
    fn partners_are_disjoint_involutions() {
        for (n, k) in [(vec![4, 5], vec![2, 2]), (vec![6, 4], vec![3, 1]), (vec![8], vec![3])] {
            let g = IntersectionGraph::build(&ps(&n, &k), 5000).unwrap();
            for v in 0..g.len() {
                let w = g.partner(v).unwrap_or_else(|| panic!("{n:?} {k:?}: vertex {v} unmatched"));
                assert_ne!(v, w);
                assert!(!g.adjacent(v, w));
                assert_eq!(g.partner(w), Some(v));
            }
        }
        // three 1-sets of [3] cannot all be paired
        let g = IntersectionGraph::build(&ps(&[3], &[1]), 5000).unwrap();
        assert_eq!((0..3).filter(|&v| g.partner(v).is_none()).count(), 1);
    }

    #[test]
    fn vertex_counts() {
        assert_eq!(IntersectionGraph::build(&ps(&[5, 5], &[2, 2]), 5000).unwrap().len(), 100);
        assert!(matches!(
            IntersectionGraph::build(&ps(&[5, 5], &[2, 2]), 99),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn edges_are_agreements_for_k1() {
        let g = IntersectionGraph::build(&ps(&[2, 2, 2], &[1, 1, 1]), 5000).unwrap();
        assert_eq!(g.len(), 8);
        for u in 0..8 {
            assert!(!g.adjacent(u, u));
            for v in 0..8 {
                let agree = (0..3).any(|s| g.vertices()[u].part(s) == g.vertices()[v].part(s));
                assert_eq!(g.adjacent(u, v), u != v && agree);
                assert_eq!(g.adjacent(u, v), g.adjacent(v, u));
            }
        }
    }

    #[test]
    fn kneser_complement_of_k4_2_is_a_matching() {
        let g = IntersectionGraph::build(&ps(&[4], &[2]), 5000).unwrap();
        assert_eq!(g.len(), 6);
        for u in 0..6 {
            assert_eq!(g.degree(u), 4);
        }
        assert_eq!(g.edge_count(), 15 - 3);
    }
}
