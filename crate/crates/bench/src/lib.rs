//! Fixtures shared by the benchmarks.

use mpfam::constructions::f_hm_t_s;
use mpfam::formulas::m_max;
use mpfam::{Family, PartStructure};

pub fn structure(n: &[i64], k: &[i64]) -> PartStructure {
    PartStructure::new(n, k).expect("benchmark instances are valid")
}

/// The largest construction with every part's values reversed: non-trivial
/// and about as far from shifted as a relabelling gets.
pub fn reversed_construction(ps: &PartStructure) -> Family {
    let best = m_max(ps).expect("benchmark instances admit a construction");
    let fam = f_hm_t_s(ps, &best.argmax[0], false)
        .and_then(|c| c.into_family())
        .expect("benchmark constructions are small");
    let reversal: Vec<Vec<u32>> = ps.ns().iter().map(|&n| (1..=n).rev().collect()).collect();
    fam.relabel(&reversal).expect("reversal is a permutation")
}
