//! Reference solvers that share no pruning code with the primary engine.
//!
//! Up to [`ORACLE_ENUM_CAP`] vertices every maximal clique is enumerated
//! (Bron–Kerbosch with pivoting on single-word masks) and filtered; a
//! maximum non-trivial clique is always maximal, since adding members only
//! shrinks the common intersection. Up to [`ORACLE_BNB_CAP`] vertices a
//! colour-class branch-and-bound runs over the reversed vertex order, always
//! looking for non-trivial cliques: a clique that still shares an element
//! only grows by candidates avoiding its lowest shared element, under an
//! avoider bound. The incumbent starts from the best construction
//! (re-verified) or, for intersecting search, the largest star, so the
//! search proves that nothing larger exists.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use num_bigint::BigUint;

use super::{Mode, SearchResult, SearchStatus};
use crate::error::{Error, Result};
use crate::constructions::f_hm_t_s;
use crate::family::{Family, FamilyClass, MultiPartSet, PartStructure};
use crate::formulas::m_max;
use crate::layer::LayerIter;

pub const ORACLE_ENUM_CAP: usize = 64;
pub const ORACLE_BNB_CAP: usize = 512;

fn layer_within(ps: &PartStructure, cap: usize) -> Result<Vec<MultiPartSet>> {
    let size = ps.layer_size();
    if size > BigUint::from(cap) {
        return Err(Error::TooLarge { vertices: size.to_string(), cap });
    }
    Ok(LayerIter::uncapped(ps).collect())
}

fn no_common_element(sets: &[&MultiPartSet]) -> bool {
    let Some(first) = sets.first() else {
        return false;
    };
    first.elements().all(|e| !sets.iter().all(|s| s.contains(e)))
}

fn accepts(mode: Mode, sets: &[&MultiPartSet]) -> bool {
    match mode {
        Mode::Intersecting => !sets.is_empty(),
        Mode::Nontrivial => no_common_element(sets),
    }
}

fn result(ps: &PartStructure, best: Vec<MultiPartSet>, nodes: u64, start: Instant) -> SearchResult {
    let status = if best.is_empty() { SearchStatus::Infeasible } else { SearchStatus::Optimal };
    SearchResult {
        status,
        size: best.len(),
        witness: Family::new(ps, best).expect("oracle witnesses are layer members"),
        nodes_explored: nodes,
        elapsed: start.elapsed(),
    }
}

/// Exact optimum by the oracle route: enumeration up to 64 vertices,
/// reversed-order branch-and-bound up to 512.
pub fn oracle_max(ps: &PartStructure, mode: Mode) -> Result<SearchResult> {
    let n = ps.layer_size_u64().unwrap_or(u64::MAX);
    if n <= ORACLE_ENUM_CAP as u64 {
        oracle_enumerate(ps, mode)
    } else {
        oracle_bnb(ps, mode)
    }
}

fn small_adjacency(sets: &[MultiPartSet]) -> Vec<u64> {
    (0..sets.len())
        .map(|u| {
            (0..sets.len())
                .filter(|&v| v != u && sets[u].intersects(&sets[v]).expect("same structure"))
                .fold(0u64, |m, v| m | 1 << v)
        })
        .collect()
}

/// Calls `visit` on every maximal clique of a graph with at most 64
/// vertices.
fn bron_kerbosch(adj: &[u64], r: &mut Vec<usize>, mut p: u64, mut x: u64, nodes: &mut u64, visit: &mut dyn FnMut(&[usize])) {
    *nodes += 1;
    if p == 0 {
        if x == 0 {
            visit(r);
        }
        return;
    }
    let pivot = (0..64)
        .filter(|&u| (p | x) >> u & 1 == 1)
        .max_by_key(|&u| (p & adj[u]).count_ones())
        .expect("p is non-empty");
    let mut todo = p & !adj[pivot];
    while todo != 0 {
        let v = todo.trailing_zeros() as usize;
        todo &= todo - 1;
        r.push(v);
        bron_kerbosch(adj, r, p & adj[v], x & adj[v], nodes, visit);
        r.pop();
        p &= !(1 << v);
        x |= 1 << v;
    }
}

pub fn oracle_enumerate(ps: &PartStructure, mode: Mode) -> Result<SearchResult> {
    let start = Instant::now();
    let sets = layer_within(ps, ORACLE_ENUM_CAP)?;
    let adj = small_adjacency(&sets);
    let mut best: Vec<usize> = Vec::new();
    let mut nodes = 0;
    let all = if sets.len() == 64 { u64::MAX } else { (1u64 << sets.len()) - 1 };
    bron_kerbosch(&adj, &mut Vec::new(), all, 0, &mut nodes, &mut |clique| {
        if clique.len() > best.len() {
            let members: Vec<&MultiPartSet> = clique.iter().map(|&v| &sets[v]).collect();
            if accepts(mode, &members) {
                best = clique.to_vec();
            }
        }
    });
    let members = best.iter().map(|&v| sets[v].clone()).collect();
    Ok(result(ps, members, nodes, start))
}

/// Every optimal family for `mode`, by exhausting maximal cliques. Only for
/// layers of at most 64 members.
pub fn optimal_families(ps: &PartStructure, mode: Mode) -> Result<Vec<Family>> {
    let sets = layer_within(ps, ORACLE_ENUM_CAP)?;
    let adj = small_adjacency(&sets);
    let mut best: Vec<Vec<usize>> = Vec::new();
    let mut nodes = 0;
    let all = if sets.len() == 64 { u64::MAX } else { (1u64 << sets.len()) - 1 };
    bron_kerbosch(&adj, &mut Vec::new(), all, 0, &mut nodes, &mut |clique| {
        let current = best.first().map_or(0, Vec::len);
        if clique.len() < current {
            return;
        }
        let members: Vec<&MultiPartSet> = clique.iter().map(|&v| &sets[v]).collect();
        if !accepts(mode, &members) {
            return;
        }
        if clique.len() > current {
            best.clear();
        }
        best.push(clique.to_vec());
    });
    let mut out: Vec<Family> = best
        .into_iter()
        .map(|c| Family::new(ps, c.into_iter().map(|v| sets[v].clone())).expect("layer members"))
        .collect();
    out.sort_by(|a, b| a.members().cmp(b.members()));
    Ok(out)
}

const ROW_WORDS: usize = ORACLE_BNB_CAP / 64;
type Row = [u64; ROW_WORDS];

fn row_lowest(r: &Row) -> Option<usize> {
    r.iter().position(|&w| w != 0).map(|i| i * 64 + r[i].trailing_zeros() as usize)
}

fn row_count(r: &Row) -> usize {
    r.iter().map(|w| w.count_ones() as usize).sum()
}

fn row_and(a: &Row, b: &Row) -> Row {
    std::array::from_fn(|i| a[i] & b[i])
}

fn row_has(r: &Row, v: usize) -> bool {
    r[v / 64] >> (v % 64) & 1 == 1
}

fn row_disjoint(a: &Row, b: &Row) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == 0)
}

/// Searches non-trivial cliques larger than `best`.
struct Mcq<'a> {
    sets: &'a [MultiPartSet],
    adj: Vec<Row>,
    disjoint: Vec<Row>,
    best: Vec<usize>,
    nodes: u64,
}

impl Mcq<'_> {
    /// Candidates split into classes of pairwise non-adjacent vertices,
    /// returned in class order with the class number of each. The split is
    /// the better of a greedy colouring and a greedy matching of disjoint
    /// pairs; when every class has at most two members only the matching
    /// is tight.
    fn number_sort(&self, cands: &Row) -> Vec<(usize, usize)> {
        let colouring = self.colour_classes(cands);
        let pairing = self.pair_classes(cands);
        let classes = if pairing.len() < colouring.len() { pairing } else { colouring };
        classes
            .into_iter()
            .enumerate()
            .flat_map(|(c, members)| members.into_iter().map(move |v| (v, c + 1)))
            .collect()
    }

    /// Greedy colouring scanning from the highest index down.
    fn colour_classes(&self, cands: &Row) -> Vec<Vec<usize>> {
        let mut classes: Vec<(Row, Vec<usize>)> = Vec::new();
        for v in (0..self.sets.len()).rev().filter(|&v| row_has(cands, v)) {
            match classes.iter_mut().find(|(mask, _)| row_disjoint(mask, &self.adj[v])) {
                Some((mask, members)) => {
                    mask[v / 64] |= 1 << (v % 64);
                    members.push(v);
                }
                None => {
                    let mut mask = [0u64; ROW_WORDS];
                    mask[v / 64] |= 1 << (v % 64);
                    classes.push((mask, vec![v]));
                }
            }
        }
        classes.into_iter().map(|(_, members)| members).collect()
    }

    /// Disjoint pairs and leftover singletons. The free vertex with the
    /// fewest free disjoint candidates is matched next, to its partner with
    /// the fewest; on paths and cycles this finds a maximum matching.
    fn pair_classes(&self, cands: &Row) -> Vec<Vec<usize>> {
        let mut free = *cands;
        let mut degree: Vec<usize> = vec![0; self.sets.len()];
        let mut verts = Vec::new();
        let mut rest = *cands;
        while let Some(v) = row_lowest(&rest) {
            rest[v / 64] &= !(1 << (v % 64));
            degree[v] = row_count(&row_and(cands, &self.disjoint[v]));
            verts.push(v);
        }
        let mut classes = Vec::new();
        while let Some(u) = verts.iter().copied().filter(|&v| row_has(&free, v)).min_by_key(|&v| degree[v]) {
            free[u / 64] &= !(1 << (u % 64));
            let mut options = row_and(&free, &self.disjoint[u]);
            let mut class = vec![u];
            let mut pick: Option<usize> = None;
            while let Some(v) = row_lowest(&options) {
                options[v / 64] &= !(1 << (v % 64));
                if pick.is_none_or(|p| degree[v] < degree[p]) {
                    pick = Some(v);
                }
            }
            if let Some(v) = pick {
                free[v / 64] &= !(1 << (v % 64));
                class.push(v);
            }
            for &w in &class {
                let mut touched = row_and(&free, &self.disjoint[w]);
                while let Some(x) = row_lowest(&touched) {
                    touched[x / 64] &= !(1 << (x % 64));
                    degree[x] -= 1;
                }
            }
            classes.push(class);
        }
        classes
    }

    /// Bound on how many candidates a non-trivial extension can add: it must
    /// contain, for each common element `x`, some candidate `a` avoiding `x`,
    /// and then lies inside `{a} ∪ (cands ∩ N(a))`.
    fn avoider_bound(&self, common: &[u64], cands: &Row) -> usize {
        let mut bound = usize::MAX;
        for (w, &word) in common.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let bit = w * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                let mut best_a = 0;
                let mut rest = *cands;
                while let Some(a) = row_lowest(&rest) {
                    rest[a / 64] &= !(1 << (a % 64));
                    if self.sets[a].packed()[bit / 64] >> (bit % 64) & 1 == 0 {
                        best_a = best_a.max(1 + row_count(&row_and(cands, &self.adj[a])));
                    }
                }
                bound = bound.min(best_a);
            }
        }
        bound
    }

    /// `common` is the packed intersection of the clique's members; it is
    /// all ones for the empty clique.
    fn expand(&mut self, clique: &mut Vec<usize>, common: &[u64], mut cands: Row) {
        self.nodes += 1;
        let trivial = common.iter().any(|&w| w != 0);
        if clique.len() > self.best.len() && !trivial {
            self.best = clique.clone();
        }
        if trivial {
            self.expand_avoiding(clique, common, cands);
            return;
        }
        let order = self.number_sort(&cands);
        for &(v, colour) in order.iter().rev() {
            if clique.len() + colour <= self.best.len() {
                return;
            }
            let next = row_and(&cands, &self.adj[v]);
            let next_common: Vec<u64> = common.iter().zip(self.sets[v].packed()).map(|(c, s)| c & s).collect();
            clique.push(v);
            self.expand(clique, &next_common, next);
            clique.pop();
            cands[v / 64] &= !(1 << (v % 64));
        }
    }
}

/// Vertex indices of the largest admissible construction, if one exists and
/// re-verifies as non-trivially intersecting. Only ever a lower bound: the
/// search still has to rule out anything larger.
fn construction_seed(ps: &PartStructure, sets: &[MultiPartSet]) -> Vec<usize> {
    let Ok(best) = m_max(ps) else {
        return Vec::new();
    };
    let Some(fam) = f_hm_t_s(ps, &best.argmax[0], false).ok().and_then(|c| c.into_family().ok()) else {
        return Vec::new();
    };
    if fam.classify() != FamilyClass::Nontrivial {
        return Vec::new();
    }
    let index: HashMap<&MultiPartSet, usize> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    fam.iter().map(|f| index[f]).collect()
}

impl Mcq<'_> {
    /// The clique shares an element, so a non-trivial extension contains a
    /// candidate avoiding its lowest shared element `x`. Branch over those
    /// candidates, dropping each after its branch.
    fn expand_avoiding(&mut self, clique: &mut Vec<usize>, common: &[u64], mut cands: Row) {
        if clique.len() + self.avoider_bound(common, &cands) <= self.best.len() {
            return;
        }
        let colours = self.number_sort(&cands).last().map_or(0, |&(_, c)| c);
        if clique.len() + colours <= self.best.len() {
            return;
        }
        let w = common.iter().position(|&w| w != 0).expect("clique shares an element");
        let x = w * 64 + common[w].trailing_zeros() as usize;
        let avoiders: Vec<usize> = (0..self.sets.len())
            .filter(|&a| row_has(&cands, a) && self.sets[a].packed()[x / 64] >> (x % 64) & 1 == 0)
            .collect();
        for a in avoiders {
            let next = row_and(&cands, &self.adj[a]);
            if clique.len() + 1 + row_count(&next) > self.best.len() {
                let next_common: Vec<u64> = common.iter().zip(self.sets[a].packed()).map(|(c, s)| c & s).collect();
                clique.push(a);
                self.expand(clique, &next_common, next);
                clique.pop();
            }
            cands[a / 64] &= !(1 << (a % 64));
        }
    }
}

impl Mcq<'_> {
    /// Permuting values inside each part is transitive on the layer, so some
    /// optimum contains vertex 0. Once vertex 0 and its lowest element `x`
    /// are fixed, avoiders of `x` with the same overlap with vertex 0 in
    /// every part are interchangeable, so one per overlap profile is
    /// branched on and the rest are dropped with it.
    fn root(&mut self) {
        let v0 = &self.sets[0];
        let common = v0.packed().to_vec();
        let w = common.iter().position(|&w| w != 0).expect("layer members are non-empty");
        let x = w * 64 + common[w].trailing_zeros() as usize;
        let mut profiles: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for a in (1..self.sets.len()).filter(|&a| row_has(&self.adj[0], a)) {
            if self.sets[a].packed()[x / 64] >> (x % 64) & 1 == 0 {
                profiles.entry(overlap(v0, &self.sets[a])).or_default().push(a);
            }
        }
        let mut cands = self.adj[0];
        let mut clique = vec![0];
        for group in profiles.into_values() {
            let a = group[0];
            let next = row_and(&cands, &self.adj[a]);
            if 2 + row_count(&next) > self.best.len() {
                let next_common: Vec<u64> = common.iter().zip(self.sets[a].packed()).map(|(c, s)| c & s).collect();
                clique.push(a);
                self.expand(&mut clique, &next_common, next);
                clique.pop();
            }
            for b in group {
                cands[b / 64] &= !(1 << (b % 64));
            }
        }
    }
}

fn overlap(a: &MultiPartSet, b: &MultiPartSet) -> Vec<usize> {
    a.parts().iter().zip(b.parts()).map(|(x, y)| x.iter().filter(|v| y.binary_search(v).is_ok()).count()).collect()
}

/// Members of the most popular element's star.
fn largest_star(sets: &[MultiPartSet]) -> Vec<usize> {
    let bits = sets[0].packed().len() * 64;
    (0..bits)
        .map(|bit| (0..sets.len()).filter(|&v| sets[v].packed()[bit / 64] >> (bit % 64) & 1 == 1).collect::<Vec<_>>())
        .max_by_key(Vec::len)
        .expect("at least one word")
}

/// An intersecting family larger than every star is non-trivial, so the
/// intersecting optimum is the largest star unless the non-trivial search
/// seeded with it finds more.
pub fn oracle_bnb(ps: &PartStructure, mode: Mode) -> Result<SearchResult> {
    let start = Instant::now();
    let mut sets = layer_within(ps, ORACLE_BNB_CAP)?;
    sets.reverse();
    let adj = (0..sets.len())
        .map(|u| {
            let mut r = [0u64; ROW_WORDS];
            for v in 0..sets.len() {
                if u != v && sets[u].intersects(&sets[v]).expect("same structure") {
                    r[v / 64] |= 1 << (v % 64);
                }
            }
            r
        })
        .collect::<Vec<Row>>();
    let disjoint = (0..sets.len())
        .map(|u| {
            let mut r = [0u64; ROW_WORDS];
            for v in (0..sets.len()).filter(|&v| v != u && !row_has(&adj[u], v)) {
                r[v / 64] |= 1 << (v % 64);
            }
            r
        })
        .collect();
    let seed = match mode {
        Mode::Nontrivial => construction_seed(ps, &sets),
        Mode::Intersecting => largest_star(&sets),
    };
    let mut m = Mcq { sets: &sets, adj, disjoint, best: seed, nodes: 0 };
    m.root();
    let members = m.best.iter().map(|&v| sets[v].clone()).collect();
    Ok(result(ps, members, m.nodes, start))
}
