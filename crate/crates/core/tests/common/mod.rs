//! Reference computations shared by the integration tests. Nothing here
//! calls the library's counting or search code; families are only built
//! through the public constructors so they can be fed back in.

#![allow(dead_code)]

use mpfam::{Family, MultiPartSet, PartStructure};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn ps(n: &[i64], k: &[i64]) -> PartStructure {
    PartStructure::new(n, k).unwrap()
}

/// Pascal's triangle in u128, rows `0..=n`.
pub fn pascal(n: usize) -> Vec<Vec<u128>> {
    let mut rows = vec![vec![1u128]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![1u128; i + 1];
        for j in 1..i {
            row[j] = prev[j - 1] + prev[j];
        }
        rows.push(row);
    }
    rows
}

/// `C(n, k)` from Pascal's triangle, zero outside `0 <= k <= n`.
pub fn choose(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    pascal(n as usize)[n as usize][k as usize]
}

/// Every `k`-subset of `[n]` as a sorted list, by recursion on the largest
/// element.
pub fn subsets(n: u32, k: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n);
        out.push(s);
    }
    out
}

/// The layer as raw value lists, built as a cartesian product of
/// [`subsets`].
pub fn layer_lists(ps: &PartStructure) -> Vec<Vec<Vec<u32>>> {
    let mut out: Vec<Vec<Vec<u32>>> = vec![vec![]];
    for (&n, &k) in ps.ns().iter().zip(ps.ks()) {
        let choices = subsets(n, k);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c.clone());
                    p
                })
            })
            .collect();
    }
    out
}

pub fn lists_meet(a: &[Vec<u32>], b: &[Vec<u32>]) -> bool {
    a.iter().zip(b).any(|(x, y)| x.iter().any(|v| y.contains(v)))
}

pub fn lists_of(f: &Family) -> Vec<Vec<Vec<u32>>> {
    f.iter().map(|m| m.parts().to_vec()).collect()
}

/// Brute-force class: `(intersecting, has a common element)`.
pub fn brute_class(sets: &[Vec<Vec<u32>>]) -> (bool, bool) {
    let intersecting = sets.iter().all(|a| sets.iter().all(|b| lists_meet(a, b)));
    let common = match sets.first() {
        None => false,
        Some(first) => first.iter().enumerate().any(|(s, vals)| {
            vals.iter().any(|v| sets.iter().all(|m| m[s].contains(v)))
        }),
    };
    (intersecting, common)
}

/// Structures with `p <= max_p`, `n_s <= max_n`, `1 <= k_s <= n_s`, and a
/// layer no larger than `max_layer`.
pub fn small_structures(max_p: usize, max_n: i64, max_layer: u128) -> Vec<PartStructure> {
    let mut out = Vec::new();
    let mut pairs = Vec::new();
    for n in 1..=max_n {
        for k in 1..=n {
            pairs.push((n, k));
        }
    }
    fn rec(
        pairs: &[(i64, i64)],
        cur: &mut Vec<(i64, i64)>,
        max_p: usize,
        max_layer: u128,
        out: &mut Vec<PartStructure>,
    ) {
        if !cur.is_empty() {
            let size: u128 = cur.iter().map(|&(n, k)| choose(n, k)).product();
            if size > max_layer {
                return;
            }
            let n: Vec<i64> = cur.iter().map(|p| p.0).collect();
            let k: Vec<i64> = cur.iter().map(|p| p.1).collect();
            out.push(ps(&n, &k));
        }
        if cur.len() == max_p {
            return;
        }
        for &pair in pairs {
            cur.push(pair);
            rec(pairs, cur, max_p, max_layer, out);
            cur.pop();
        }
    }
    rec(&pairs, &mut Vec::new(), max_p, max_layer, &mut out);
    out
}

pub fn layer(ps: &PartStructure) -> Vec<MultiPartSet> {
    layer_lists(ps).into_iter().map(|l| MultiPartSet::new(ps, l).unwrap()).collect()
}

/// A uniformly random subfamily where each set is kept with probability
/// `density`.
pub fn random_family<R: Rng>(rng: &mut R, ps: &PartStructure, density: f64) -> Family {
    let members: Vec<MultiPartSet> = layer(ps).into_iter().filter(|_| rng.gen_bool(density)).collect();
    Family::new(ps, members).unwrap()
}

/// Random maximal-ish intersecting family: scan the layer in random order
/// and keep each set meeting everything kept so far, stopping after `cap`
/// members.
pub fn random_intersecting<R: Rng>(rng: &mut R, ps: &PartStructure, cap: usize) -> Family {
    let mut all = layer(ps);
    all.shuffle(rng);
    let mut kept: Vec<MultiPartSet> = Vec::new();
    for f in all {
        if kept.len() >= cap {
            break;
        }
        if kept.iter().all(|g| lists_meet(g.parts(), f.parts())) {
            kept.push(f);
        }
    }
    Family::new(ps, kept).unwrap()
}

/// Value sums over all members, computed from the value lists.
pub fn order_of(f: &Family) -> u128 {
    f.iter().flat_map(|m| m.parts().iter().flatten()).map(|&v| v as u128).sum()
}

/// `n^(p-1) - (n-1)^(p-1) + n - 1` in machine integers.
pub fn k1_formula(n: u128, p: u32) -> u128 {
    n.pow(p - 1) - (n - 1).pow(p - 1) + n - 1
}
