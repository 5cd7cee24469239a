//! The compression operator `S_t^{i,j}`, shiftedness, fixpoint closures and
//! projections onto the first `2 k_s` elements of each part.
//!
//! Closures sweep shifts in a fixed order (`t`, then `i`, then `j`, all
//! ascending) so runs are reproducible. Which fixpoint is reached depends on
//! that order; its shiftedness does not.

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::bits;
use crate::error::{Error, Result};
use crate::family::{Family, FamilyClass, MultiPartSet, PartStructure, PartialSet};

/// The shift `S_t^{i,j}`: replace `j` by `i` in part `t` (parts from 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ShiftIndex {
    pub t: usize,
    pub i: u32,
    pub j: u32,
}

impl ShiftIndex {
    pub fn new(ps: &PartStructure, t: usize, i: u32, j: u32) -> Result<Self> {
        let err = |reason| Error::InvalidShiftIndex { t, i, j, reason };
        if t == 0 || t > ps.parts() {
            return Err(err("no such part"));
        }
        if i == 0 || i >= j {
            return Err(err("need 1 <= i < j"));
        }
        if j > ps.ns()[t - 1] {
            return Err(err("j exceeds the part size"));
        }
        Ok(Self { t, i, j })
    }

    /// Every shift of `ps` in sweep order.
    pub fn all(ps: &PartStructure) -> Vec<ShiftIndex> {
        let mut out = Vec::new();
        for t in 1..=ps.parts() {
            let n = ps.ns()[t - 1];
            for i in 1..=n {
                for j in (i + 1)..=n {
                    out.push(ShiftIndex { t, i, j });
                }
            }
        }
        out
    }

    fn in_parts(ps: &PartStructure, parts: &[usize]) -> Vec<ShiftIndex> {
        Self::all(ps).into_iter().filter(|x| parts.contains(&x.t)).collect()
    }
}

impl fmt::Display for ShiftIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{}^{{{},{}}}", self.t, self.i, self.j)
    }
}

/// The shifted set, or `None` when the shift leaves `f` unchanged.
fn shift_raw(ps: &PartStructure, idx: ShiftIndex, f: &MultiPartSet) -> Option<MultiPartSet> {
    let s = idx.t - 1;
    let part = f.part(s);
    if part.binary_search(&idx.i).is_ok() || part.binary_search(&idx.j).is_err() {
        return None;
    }
    let mut parts = f.parts().to_vec();
    let p = &mut parts[s];
    p.retain(|&v| v != idx.j);
    let pos = p.partition_point(|&v| v < idx.i);
    p.insert(pos, idx.i);
    Some(MultiPartSet::from_parts_unchecked(ps, parts))
}

fn check_family(ps: &PartStructure, fam: &Family) -> Result<()> {
    if fam.structure() != ps {
        return Err(Error::StructureMismatch(format!(
            "family is over {}, expected {ps}",
            fam.structure()
        )));
    }
    Ok(())
}

fn check_index(ps: &PartStructure, idx: ShiftIndex) -> Result<()> {
    ShiftIndex::new(ps, idx.t, idx.i, idx.j).map(|_| ())
}

pub fn shift_set(ps: &PartStructure, idx: ShiftIndex, f: &MultiPartSet) -> Result<MultiPartSet> {
    check_index(ps, idx)?;
    ps.check_member(f)?;
    Ok(shift_raw(ps, idx, f).unwrap_or_else(|| f.clone()))
}

/// `{S(F) : F ∈ ℱ} ∪ {F : F, S(F) ∈ ℱ}`: shift every member unless its image
/// is already present.
pub fn shift_family(ps: &PartStructure, idx: ShiftIndex, fam: &Family) -> Result<Family> {
    check_index(ps, idx)?;
    check_family(ps, fam)?;
    Ok(shift_unchecked(ps, idx, fam).unwrap_or_else(|| fam.clone()))
}

/// `None` when the shift fixes the family.
fn shift_unchecked(ps: &PartStructure, idx: ShiftIndex, fam: &Family) -> Option<Family> {
    let mut changed = false;
    let members: Vec<MultiPartSet> = fam
        .iter()
        .map(|f| match shift_raw(ps, idx, f) {
            Some(g) if !fam.contains(&g) => {
                changed = true;
                g
            }
            _ => f.clone(),
        })
        .collect();
    if !changed {
        return None;
    }
    let out = Family::from_unsorted(ps.clone(), members);
    debug_assert_eq!(out.len(), fam.len());
    Some(out)
}

fn moves(ps: &PartStructure, idx: ShiftIndex, fam: &Family) -> bool {
    fam.iter()
        .any(|f| shift_raw(ps, idx, f).is_some_and(|g| !fam.contains(&g)))
}

/// True iff every shift in the requested parts (default: all) fixes `fam`.
pub fn is_shifted(ps: &PartStructure, fam: &Family, parts: Option<&[usize]>) -> bool {
    if check_family(ps, fam).is_err() {
        return false;
    }
    let all: Vec<usize> = (1..=ps.parts()).collect();
    let parts = parts.unwrap_or(&all);
    // A family is t-shifted iff every image S(F) that differs from F is
    // itself a member.
    fam.iter().all(|f| {
        parts.iter().all(|&t| {
            if t == 0 || t > ps.parts() {
                return true;
            }
            let vals = f.part(t - 1);
            vals.iter().all(|&j| {
                (1..j)
                    .filter(|i| vals.binary_search(i).is_err())
                    .all(|i| {
                        let g = shift_raw(ps, ShiftIndex { t, i, j }, f).expect("i absent, j present");
                        fam.contains(&g)
                    })
            })
        })
    })
}

/// Repeats sweeps until a full sweep changes nothing.
pub fn shifted_closure(ps: &PartStructure, fam: &Family) -> Result<Family> {
    check_family(ps, fam)?;
    let shifts = ShiftIndex::all(ps);
    let mut cur = fam.clone();
    loop {
        let mut changed = false;
        for &idx in &shifts {
            if let Some(next) = shift_unchecked(ps, idx, &cur) {
                cur = next;
                changed = true;
            }
        }
        if !changed {
            return Ok(cur);
        }
    }
}

/// Sum of all element values over all members. Every effective shift lowers
/// it, which bounds the length of any closure.
pub fn family_order(fam: &Family) -> BigUint {
    let total: u128 = fam
        .iter()
        .map(|f| f.parts().iter().flatten().map(|&v| v as u128).sum::<u128>())
        .sum();
    BigUint::from(total)
}

/// Outcome of [`stabilize_nontrivial`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QReport {
    pub family: Family,
    /// Parts in which the family is shifted.
    pub q: Vec<usize>,
    /// For each part outside `q`, the least `(i, j)` whose shift makes the
    /// family trivially intersecting.
    pub witnesses: Vec<ShiftIndex>,
    /// Number of shifts applied.
    pub steps: usize,
}

fn has_common_element(fam: &Family) -> bool {
    let mut it = fam.iter();
    let Some(first) = it.next() else { return false };
    let mut acc = first.packed().to_vec();
    for f in it {
        bits::and_assign(&mut acc, f.packed());
    }
    !bits::is_zero(&acc)
}

/// Applies, in sweep order, the first shift whose result is still
/// non-trivially intersecting and differs from the current family, until no
/// such shift exists.
pub fn stabilize_nontrivial(ps: &PartStructure, fam: &Family) -> Result<QReport> {
    check_family(ps, fam)?;
    if fam.classify() != FamilyClass::Nontrivial {
        return Err(Error::NotNontrivial);
    }
    let shifts = ShiftIndex::all(ps);
    let mut cur = fam.clone();
    let mut steps = 0;
    'outer: loop {
        for &idx in &shifts {
            if let Some(next) = shift_unchecked(ps, idx, &cur) {
                // shifts preserve intersection, so only the common element matters
                if !has_common_element(&next) {
                    cur = next;
                    steps += 1;
                    continue 'outer;
                }
            }
        }
        break;
    }
    let mut q = Vec::new();
    let mut witnesses = Vec::new();
    for t in 1..=ps.parts() {
        let in_part = ShiftIndex::in_parts(ps, &[t]);
        match in_part.into_iter().find(|&idx| moves(ps, idx, &cur)) {
            None => q.push(t),
            Some(idx) => witnesses.push(idx),
        }
    }
    Ok(QReport { family: cur, q, witnesses, steps })
}

/// `P(F)`: `F_s ∩ [2 k_s]` in every part.
pub fn project(ps: &PartStructure, f: &MultiPartSet) -> PartialSet {
    let parts = f
        .parts()
        .iter()
        .zip(ps.ks())
        .map(|(vals, &k)| vals.iter().copied().filter(|&v| v <= 2 * k).collect())
        .collect();
    PartialSet::from_parts_unchecked(ps, parts)
}

/// `{P(F) : F ∈ ℱ}` with set semantics, in colex order.
pub fn project_family(ps: &PartStructure, fam: &Family) -> Vec<PartialSet> {
    let mut out: Vec<PartialSet> = fam.iter().map(|f| project(ps, f)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// True iff `P(F) ∩ P(G) ≠ ∅` for all `F, G ∈ ℱ`, including `F = G`; a
/// member with an empty projection therefore fails.
pub fn check_projection_lemma(ps: &PartStructure, fam: &Family) -> bool {
    let proj = project_family(ps, fam);
    proj.iter()
        .enumerate()
        .all(|(a, pa)| proj[a..].iter().all(|pb| pa.meets(pb)))
}
