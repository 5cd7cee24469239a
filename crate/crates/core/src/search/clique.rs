//! Bitset branch-and-bound over the intersection graph.
//!
//! Every engine fixes vertex 0 into the clique: the layer's automorphism
//! group (value permutations inside each part) acts transitively on
//! vertices and preserves both intersection and non-triviality, so some
//! optimum contains any chosen vertex.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;

use super::graph::IntersectionGraph;
use crate::bits;

/// Clique size up to which symmetric candidates are branched on once.
const ORBIT_DEPTH: usize = 6;

/// Shared incumbent. Size only ever grows; the witness is replaced under
/// the lock together with the size.
pub(crate) struct Incumbent {
    size: AtomicUsize,
    witness: Mutex<Vec<usize>>,
    nodes: AtomicU64,
}

impl Incumbent {
    pub(crate) fn new() -> Self {
        Self { size: AtomicUsize::new(0), witness: Mutex::new(Vec::new()), nodes: AtomicU64::new(0) }
    }

    #[inline]
    fn best(&self) -> usize {
        self.size.load(Ordering::Acquire)
    }

    fn offer(&self, clique: &[usize]) {
        if clique.len() <= self.best() {
            return;
        }
        let mut w = self.witness.lock().expect("incumbent lock poisoned");
        if clique.len() > w.len() {
            *w = clique.to_vec();
            self.size.store(clique.len(), Ordering::Release);
        }
    }

    pub(crate) fn into_parts(self) -> (Vec<usize>, u64) {
        (self.witness.into_inner().expect("incumbent lock poisoned"), self.nodes.into_inner())
    }
}

/// One independent subproblem: extend `clique` by vertices of `cand`.
/// `common` is the packed common intersection of `clique`.
struct Task {
    clique: Vec<usize>,
    cand: Vec<u64>,
    common: Vec<u64>,
    bound: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Kind {
    /// Any clique.
    Any,
    /// Non-trivial cliques; branch on avoiders of a common element until the
    /// common intersection is empty.
    Forcing,
    /// Non-trivial cliques; plain expansion, incumbent accepts only
    /// non-trivial cliques.
    Filter,
}

pub(crate) struct Solver<'g> {
    g: &'g IntersectionGraph,
    inc: Incumbent,
    kind: Kind,
}

impl<'g> Solver<'g> {
    pub(crate) fn new(g: &'g IntersectionGraph, kind: Kind) -> Self {
        Self { g, inc: Incumbent::new(), kind }
    }

    /// Offers the largest star. Every intersecting family is inside a star
    /// or non-trivial, so a forcing search from this incumbent is exact for
    /// plain intersecting families too.
    pub(crate) fn seed_largest_star(&self) {
        let best = (0..self.g.structure().ground_size()).max_by_key(|&x| (bits::count(self.g.containing(x)), usize::MAX - x));
        if let Some(x) = best {
            let star: Vec<usize> = bits::ones(self.g.containing(x)).collect();
            self.inc.offer(&star);
        }
    }

    pub(crate) fn run(self, threads: usize) -> Incumbent {
        if self.g.is_empty() {
            return self.inc;
        }
        let root = vec![0usize];
        let cand = self.g.row(0).to_vec();
        let common = self.g.vertices()[0].packed().to_vec();
        if self.kind == Kind::Any || bits::is_zero(&common) {
            self.inc.offer(&root);
        }
        let tasks = self.split(root, cand, common);
        let run_one = |t: Task| {
            if t.clique.len() - 1 + t.bound <= self.inc.best() {
                return;
            }
            let mut nodes = 0u64;
            let mut c = t.clique;
            self.dispatch(&mut c, t.cand, t.common, &mut nodes);
            self.inc.nodes.fetch_add(nodes, Ordering::Relaxed);
        };
        if threads == 1 {
            tasks.into_iter().for_each(run_one);
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("thread pool construction");
            pool.install(|| tasks.into_par_iter().for_each(run_one));
        }
        self.inc
    }

    /// First-level branches below the fixed root vertex. Each task already
    /// contains its branching vertex; `bound` bounds the task's gain over
    /// the root clique size.
    fn split(&self, root: Vec<usize>, mut cand: Vec<u64>, common: Vec<u64>) -> Vec<Task> {
        let mut tasks = Vec::new();
        match self.kind {
            Kind::Forcing if !bits::is_zero(&common) => {
                if self.pick_forced(&cand, &common).is_none() {
                    return tasks;
                }
                // one representative per orbit of the root's stabilizer
                for orbit in self.orbits(&root, &cand) {
                    let u = orbit[0];
                    let mut nc = cand.clone();
                    bits::and_assign(&mut nc, self.g.row(u));
                    let bound = 1 + bits::count(&nc);
                    tasks.push(self.task(&root, u, nc, &common, bound));
                    for v in orbit {
                        bits::clear(&mut cand, v);
                    }
                }
            }
            _ => {
                let (order, colors) = color_sort(self.g, &cand);
                for idx in (0..order.len()).rev() {
                    let v = order[idx];
                    let mut nc = cand.clone();
                    bits::and_assign(&mut nc, self.g.row(v));
                    tasks.push(self.task(&root, v, nc, &common, colors[idx]));
                    bits::clear(&mut cand, v);
                }
            }
        }
        tasks
    }

    /// Candidates grouped into orbits of the group of value permutations
    /// fixing every clique member. That group permutes each atom of the
    /// partition the members cut each part into, so a candidate's orbit is
    /// fixed by how many of its values fall in each atom.
    fn orbits(&self, clique: &[usize], cand: &[u64]) -> Vec<Vec<usize>> {
        let ps = self.g.structure();
        let mut atom = Vec::with_capacity(ps.ground_size());
        for (s, &n) in ps.ns().iter().enumerate() {
            atom.extend(std::iter::repeat_n(s as u32, n as usize));
        }
        let mut renumber: HashMap<(u32, bool), u32> = HashMap::new();
        for &v in clique {
            let packed = self.g.vertices()[v].packed();
            renumber.clear();
            for (e, a) in atom.iter_mut().enumerate() {
                let next = renumber.len() as u32;
                *a = *renumber.entry((*a, bits::test(packed, e))).or_insert(next);
            }
        }
        let mut groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
        for v in bits::ones(cand) {
            let mut key: Vec<u32> = bits::ones(self.g.vertices()[v].packed()).map(|e| atom[e]).collect();
            key.sort_unstable();
            groups.entry(key).or_default().push(v);
        }
        groups.into_values().collect()
    }

    fn task(&self, root: &[usize], v: usize, cand: Vec<u64>, common: &[u64], bound: usize) -> Task {
        let mut clique = root.to_vec();
        clique.push(v);
        let mut common = common.to_vec();
        bits::and_assign(&mut common, self.g.vertices()[v].packed());
        Task { clique, cand, common, bound }
    }

    /// Continues from a clique whose last vertex was just added.
    fn dispatch(&self, c: &mut Vec<usize>, cand: Vec<u64>, common: Vec<u64>, nodes: &mut u64) {
        match self.kind {
            Kind::Any => {
                self.inc.offer(c);
                if !bits::is_zero(&cand) {
                    self.expand(c, cand, nodes);
                }
            }
            Kind::Forcing => {
                if bits::is_zero(&common) {
                    self.inc.offer(c);
                    if !bits::is_zero(&cand) {
                        self.expand(c, cand, nodes);
                    }
                } else {
                    self.force(c, cand, common, nodes);
                }
            }
            Kind::Filter => {
                if bits::is_zero(&common) {
                    self.inc.offer(c);
                }
                // an element shared by the clique and every candidate
                // survives any extension
                let doomed = !bits::is_zero(&common) && self.pick_forced(&cand, &common).is_none();
                if !bits::is_zero(&cand) && !doomed {
                    self.filter(c, cand, common, nodes);
                }
            }
        }
    }

    /// Maximum clique extension; every extension is acceptable.
    fn expand(&self, c: &mut Vec<usize>, mut cand: Vec<u64>, nodes: &mut u64) {
        let sym = self.kind == Kind::Forcing;
        self.expand_in(c, &mut cand, sym, nodes);
    }

    /// With `sym`, `cand` is a union of orbits of the clique's stabilizer,
    /// and each branched vertex takes its whole orbit out of later branches.
    /// From depth [`ORBIT_DEPTH`] on the orbits are mostly singletons and plain
    /// branching takes over.
    fn expand_in(&self, c: &mut Vec<usize>, cand: &mut [u64], sym: bool, nodes: &mut u64) {
        *nodes += 1;
        let sym = sym && c.len() < ORBIT_DEPTH;
        let orbit_of: HashMap<usize, Vec<usize>> = if sym {
            let mut m = HashMap::new();
            for orbit in self.orbits(c, cand) {
                for &v in &orbit {
                    m.insert(v, orbit.clone());
                }
            }
            m
        } else {
            HashMap::new()
        };
        let (order, colors) = color_sort(self.g, cand);
        for idx in (0..order.len()).rev() {
            if c.len() + colors[idx] <= self.inc.best() {
                return;
            }
            let v = order[idx];
            if !bits::test(cand, v) {
                continue;
            }
            c.push(v);
            let mut nc = cand.to_vec();
            bits::and_assign(&mut nc, self.g.row(v));
            if bits::is_zero(&nc) {
                self.inc.offer(c);
            } else {
                self.expand_in(c, &mut nc, sym, nodes);
            }
            c.pop();
            match orbit_of.get(&v) {
                Some(orbit) => orbit.iter().for_each(|&u| bits::clear(cand, u)),
                None => bits::clear(cand, v),
            }
        }
    }

    /// Common element of the clique with the fewest candidate avoiders, or
    /// `None` when some common element has no avoider left (the clique can
    /// then never become non-trivial).
    fn pick_forced(&self, cand: &[u64], common: &[u64]) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        let mut scratch = vec![0u64; self.g.words()];
        for x in bits::ones(common) {
            scratch.copy_from_slice(cand);
            bits::and_not_assign(&mut scratch, self.g.containing(x));
            let n = bits::count(&scratch);
            if n == 0 {
                return None;
            }
            if best.is_none_or(|(_, m)| n < m) {
                best = Some((x, n));
            }
        }
        best.map(|(x, _)| x)
    }

    /// Non-empty common intersection: any non-trivial extension contains a
    /// candidate avoiding the chosen common element, so branch over those.
    fn force(&self, c: &mut Vec<usize>, mut cand: Vec<u64>, common: Vec<u64>, nodes: &mut u64) {
        *nodes += 1;
        if c.len() + bits::count(&cand) <= self.inc.best() {
            return;
        }
        let Some(x) = self.pick_forced(&cand, &common) else {
            return;
        };
        if c.len() + color_bound(self.g, &cand) <= self.inc.best() {
            return;
        }
        // Candidates are a union of orbits of the clique's stabilizer, so one
        // avoider per orbit is enough, and a finished orbit is dropped from
        // later branches.
        for orbit in self.orbits(c, &cand) {
            let Some(&u) = orbit.iter().find(|&&v| !bits::test(self.g.containing(x), v)) else {
                continue;
            };
            let mut nc = cand.clone();
            bits::and_assign(&mut nc, self.g.row(u));
            if c.len() + 1 + bits::count(&nc) > self.inc.best() {
                let mut ncommon = common.clone();
                bits::and_assign(&mut ncommon, self.g.vertices()[u].packed());
                c.push(u);
                self.dispatch(c, nc, ncommon, nodes);
                c.pop();
            }
            for v in orbit {
                bits::clear(&mut cand, v);
            }
        }
    }

    fn filter(&self, c: &mut Vec<usize>, mut cand: Vec<u64>, common: Vec<u64>, nodes: &mut u64) {
        *nodes += 1;
        let (order, colors) = color_sort(self.g, &cand);
        for idx in (0..order.len()).rev() {
            if c.len() + colors[idx] <= self.inc.best() {
                return;
            }
            let v = order[idx];
            let mut nc = cand.clone();
            bits::and_assign(&mut nc, self.g.row(v));
            let mut ncommon = common.clone();
            bits::and_assign(&mut ncommon, self.g.vertices()[v].packed());
            c.push(v);
            self.dispatch(c, nc, ncommon, nodes);
            c.pop();
            bits::clear(&mut cand, v);
        }
    }
}

/// Greedy sequential coloring of the candidate set. Returns the vertices in
/// nondecreasing color order with their colors; `colors[i]` bounds the
/// clique size within `order[..=i]`.
fn color_sort(g: &IntersectionGraph, cand: &[u64]) -> (Vec<usize>, Vec<usize>) {
    let mut uncolored = cand.to_vec();
    let mut order = Vec::with_capacity(bits::count(cand));
    let mut colors = Vec::with_capacity(order.capacity());
    let mut q = vec![0u64; cand.len()];
    let mut color = 0;
    while !bits::is_zero(&uncolored) {
        color += 1;
        q.copy_from_slice(&uncolored);
        let mut seeded = false;
        while let Some(v) = bits::first(&q) {
            bits::clear(&mut uncolored, v);
            bits::clear(&mut q, v);
            bits::and_not_assign(&mut q, g.row(v));
            order.push(v);
            colors.push(color);
            // the class opener's partner is disjoint from it, so it fits
            if !seeded {
                seeded = true;
                if let Some(w) = g.partner(v).filter(|&w| bits::test(&q, w)) {
                    bits::clear(&mut uncolored, w);
                    bits::clear(&mut q, w);
                    bits::and_not_assign(&mut q, g.row(w));
                    order.push(w);
                    colors.push(color);
                }
            }
        }
    }
    (order, colors)
}

fn color_bound(g: &IntersectionGraph, cand: &[u64]) -> usize {
    color_sort(g, cand).1.last().copied().unwrap_or(0)
}
