//! Explicit (near-)extremal families.
//!
//! Every construction is a membership rule over the layer. Layers under the
//! cap are materialized into a [`Family`]; larger ones come back as a
//! [`LazyFamily`] that answers membership queries and streams counts.
//!
//! Witness placement is canonical: element 1 is the star centre, `{2..k_t+1}`
//! the avoiding block in part `t`, and `[k_s]` the block in every other part
//! involved. Other placements are obtained with [`Family::relabel`].

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{Element, Family, MultiPartSet, PartStructure};
use crate::layer::{filter_layer, LayerIter, DEFAULT_LAYER_CAP};

/// A part `t` together with a set `S ⊆ [p] \ {t}` (parts numbered from 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TSPair {
    t: usize,
    s: Vec<usize>,
}

impl TSPair {
    pub fn new(ps: &PartStructure, t: usize, s: &[usize]) -> Result<Self> {
        let mut s = s.to_vec();
        s.sort_unstable();
        s.dedup();
        let ts = Self { t, s };
        ts.validate(ps)?;
        Ok(ts)
    }

    /// No validation; `s` must already be sorted.
    pub fn new_unchecked(t: usize, s: Vec<usize>) -> Self {
        Self { t, s }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn s(&self) -> &[usize] {
        &self.s
    }

    pub fn validate(&self, ps: &PartStructure) -> Result<()> {
        let p = ps.parts();
        if self.t == 0 || self.t > p {
            return Err(Error::StructureMismatch(format!("t={} outside 1..={p}", self.t)));
        }
        if self.s.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::StructureMismatch(format!("S={:?} is not a sorted set", self.s)));
        }
        for &r in &self.s {
            if r == 0 || r > p || r == self.t {
                return Err(Error::StructureMismatch(format!(
                    "S={:?} must be a subset of [p]\\{{t}} for p={p}, t={}",
                    self.s, self.t
                )));
            }
        }
        Ok(())
    }

    /// True for `S = ∅` with `k_t = 1`, and for `S = {r}` with `k_t = k_r = 1`.
    pub fn is_excluded(&self, ps: &PartStructure) -> bool {
        let k = ps.ks();
        let kt = k[self.t - 1];
        match self.s.as_slice() {
            [] => kt == 1,
            [r] => kt == 1 && k[r - 1] == 1,
            _ => false,
        }
    }

    /// The block `{2..k_t+1}` must fit inside part `t` when `k_t > 1`.
    pub fn fits(&self, ps: &PartStructure) -> bool {
        let (n, k) = (ps.ns()[self.t - 1], ps.ks()[self.t - 1]);
        k == 1 || k < n
    }

    pub(crate) fn mask(&self, ps: &PartStructure) -> Vec<bool> {
        let mut m = vec![false; ps.parts()];
        for &r in &self.s {
            m[r - 1] = true;
        }
        m
    }
}

impl fmt::Display for TSPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.s.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        write!(f, "(t={}, S={{{body}}})", self.t)
    }
}

/// A sequence `l` in `L_t`: `0 <= l_s <= k_s`, `sum l_s >= 2`, `l_t = 0` when
/// `k_t = 1`, and `l_t = k_t` when `sum l_s > 2` and `k_t > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LVector {
    t: usize,
    ell: Vec<u32>,
}

impl LVector {
    pub fn new(ps: &PartStructure, t: usize, ell: Vec<u32>) -> Result<Self> {
        let v = Self { t, ell };
        v.validate(ps)?;
        Ok(v)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn values(&self) -> &[u32] {
        &self.ell
    }

    pub fn validate(&self, ps: &PartStructure) -> Result<()> {
        let p = ps.parts();
        if self.t == 0 || self.t > p {
            return Err(Error::StructureMismatch(format!("t={} outside 1..={p}", self.t)));
        }
        if self.ell.len() != p {
            return Err(Error::LengthMismatch { expected: p, got: self.ell.len() });
        }
        let k = ps.ks();
        let t = self.t - 1;
        let sum: u32 = self.ell.iter().sum();
        let in_lt = self.ell.iter().zip(k).all(|(l, k)| l <= k)
            && sum >= 2
            && (k[t] > 1 || self.ell[t] == 0)
            && (sum <= 2 || k[t] == 1 || self.ell[t] == k[t]);
        if !in_lt {
            return Err(Error::NotInLt(self.ell.clone()));
        }
        if self.ell[t] >= ps.ns()[t] {
            return Err(Error::OutOfRange(format!(
                "block {{2..{}}} does not fit in part {} of size {}",
                self.ell[t] + 1,
                self.t,
                ps.ns()[t]
            )));
        }
        Ok(())
    }

    /// `l(S)`: `k_s` on `S`, `k_t` on `t` when `k_t > 1`, zero elsewhere.
    pub fn from_pair(ps: &PartStructure, ts: &TSPair) -> Result<Self> {
        ts.validate(ps)?;
        let k = ps.ks();
        let mut ell = vec![0u32; ps.parts()];
        for &r in ts.s() {
            ell[r - 1] = k[r - 1];
        }
        if k[ts.t() - 1] > 1 {
            ell[ts.t() - 1] = k[ts.t() - 1];
        }
        Self::new(ps, ts.t(), ell)
    }

    /// Every member of `L_t` whose block fits, in lexicographic order.
    pub fn enumerate(ps: &PartStructure, t: usize) -> Vec<LVector> {
        let k = ps.ks();
        let mut out = Vec::new();
        let mut cur = vec![0u32; ps.parts()];
        loop {
            if let Ok(v) = LVector::new(ps, t, cur.clone()) {
                out.push(v);
            }
            // odometer, last coordinate fastest
            let mut i = cur.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < k[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// The witness set `Y_l`: `{2..l_t+1}` in part `t`, `[l_s]` elsewhere.
    pub fn witness(&self) -> Vec<Vec<u32>> {
        self.ell
            .iter()
            .enumerate()
            .map(|(s, &l)| if s + 1 == self.t { (2..=l + 1).collect() } else { (1..=l).collect() })
            .collect()
    }
}

impl fmt::Display for LVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.ell.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        write!(f, "(t={}, l=({body}))", self.t)
    }
}

/// Membership rule of a construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// All sets with `1 ∈ F_t`.
    Star { t: usize },
    /// Single-part Hilton–Milner family.
    HiltonMilner { k: u32 },
    /// `F^HM_{t,S}`, straight from its two-branch definition.
    HmTS(TSPair),
    /// `F_{t,l}`: `1 ∈ F_t` and `F ∩ Y_l ≠ ∅`, or `Y_l ⊆ F`.
    TEll(LVector),
    /// All sets containing at least two of the three witnesses.
    Triangle([Element; 3]),
}

fn is_prefix_block(vals: &[u32], lo: u32, hi: u32) -> bool {
    vals.len() == (hi + 1 - lo) as usize && vals.iter().zip(lo..=hi).all(|(&a, b)| a == b)
}

fn meets_range(vals: &[u32], lo: u32, hi: u32) -> bool {
    vals.iter().any(|&v| v >= lo && v <= hi)
}

impl Rule {
    pub fn contains(&self, ps: &PartStructure, f: &MultiPartSet) -> bool {
        match self {
            Rule::Star { t } => f.part(t - 1).first() == Some(&1),
            Rule::HiltonMilner { k } => {
                let v = f.part(0);
                is_prefix_block(v, 2, k + 1) || (v.first() == Some(&1) && meets_range(v, 2, k + 1))
            }
            Rule::HmTS(ts) => {
                let k = ps.ks();
                let t = ts.t() - 1;
                let ft = f.part(t);
                let s_full = ts.s().iter().all(|&r| is_prefix_block(f.part(r - 1), 1, k[r - 1]));
                let s_meets = ts.s().iter().any(|&r| meets_range(f.part(r - 1), 1, k[r - 1]));
                if k[t] > 1 {
                    (is_prefix_block(ft, 2, k[t] + 1) && s_full)
                        || (ft.first() == Some(&1) && (meets_range(ft, 2, k[t] + 1) || s_meets))
                } else {
                    s_full || (ft == [1] && s_meets)
                }
            }
            Rule::TEll(ell) => {
                let y = ell.witness();
                let has_y_all = y.iter().enumerate().all(|(s, ys)| {
                    ys.iter().all(|v| f.part(s).binary_search(v).is_ok())
                });
                let meets_y = y.iter().enumerate().any(|(s, ys)| {
                    ys.iter().any(|v| f.part(s).binary_search(v).is_ok())
                });
                has_y_all || (f.part(ell.t() - 1).first() == Some(&1) && meets_y)
            }
            Rule::Triangle(w) => w.iter().filter(|&&e| f.contains(e)).count() >= 2,
        }
    }
}

/// A construction too large to materialize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LazyFamily {
    ps: PartStructure,
    rule: Rule,
}

impl LazyFamily {
    pub fn new(ps: &PartStructure, rule: Rule) -> Self {
        Self { ps: ps.clone(), rule }
    }

    pub fn structure(&self) -> &PartStructure {
        &self.ps
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn contains(&self, f: &MultiPartSet) -> bool {
        self.ps.check_member(f).is_ok() && self.rule.contains(&self.ps, f)
    }

    /// Streams the whole layer; cost is linear in the layer size.
    pub fn count(&self) -> BigUint {
        let mut n = 0u64;
        for f in LayerIter::uncapped(&self.ps) {
            if self.rule.contains(&self.ps, &f) {
                n += 1;
            }
        }
        BigUint::from(n)
    }

    pub fn materialize(&self, cap: u64) -> Result<Family> {
        filter_layer(&self.ps, cap, |f| self.rule.contains(&self.ps, f))
    }
}

/// Result of a constructor: a concrete family, or a lazy view above the cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constructed {
    Materialized(Family),
    Lazy(LazyFamily),
}

impl Constructed {
    /// Materializes when the layer has at most `cap` members.
    pub fn build(ps: &PartStructure, rule: Rule, cap: u64) -> Result<Self> {
        let lazy = LazyFamily::new(ps, rule);
        match ps.layer_size_u64() {
            Some(size) if size <= cap => Ok(Constructed::Materialized(lazy.materialize(cap)?)),
            _ => Ok(Constructed::Lazy(lazy)),
        }
    }

    pub fn family(&self) -> Option<&Family> {
        match self {
            Constructed::Materialized(f) => Some(f),
            Constructed::Lazy(_) => None,
        }
    }

    pub fn into_family(self) -> Result<Family> {
        match self {
            Constructed::Materialized(f) => Ok(f),
            Constructed::Lazy(l) => Err(Error::LayerTooLarge {
                size: l.ps.layer_size().to_string(),
                cap: DEFAULT_LAYER_CAP,
            }),
        }
    }

    pub fn contains(&self, f: &MultiPartSet) -> bool {
        match self {
            Constructed::Materialized(fam) => fam.contains(f),
            Constructed::Lazy(l) => l.contains(f),
        }
    }

    pub fn count(&self) -> BigUint {
        match self {
            Constructed::Materialized(f) => BigUint::from(f.len()),
            Constructed::Lazy(l) => l.count(),
        }
    }
}

/// The star at element 1 of part `t`: the extremal intersecting product family.
pub fn frankl_product(ps: &PartStructure, t: usize) -> Result<Constructed> {
    if t == 0 || t > ps.parts() {
        return Err(Error::StructureMismatch(format!("t={t} outside 1..={}", ps.parts())));
    }
    Constructed::build(ps, Rule::Star { t }, DEFAULT_LAYER_CAP)
}

/// `{2..k+1}` together with every `k`-set containing 1 that meets it.
pub fn hilton_milner_family(n: i64, k: i64) -> Result<Constructed> {
    let ps = PartStructure::new(&[n], &[k])?;
    if k >= n {
        return Err(Error::OutOfRange(format!(
            "the block {{2..{}}} does not fit in [{n}]",
            k + 1
        )));
    }
    Constructed::build(&ps, Rule::HiltonMilner { k: k as u32 }, DEFAULT_LAYER_CAP)
}

/// `F^HM_{t,S}`. Excluded pairs are refused unless `allow_trivial` is set.
pub fn f_hm_t_s(ps: &PartStructure, ts: &TSPair, allow_trivial: bool) -> Result<Constructed> {
    ts.validate(ps)?;
    if ts.is_excluded(ps) && !allow_trivial {
        return Err(Error::ExcludedPair { t: ts.t(), s: ts.s().to_vec() });
    }
    if !ts.fits(ps) {
        return Err(Error::OutOfRange(format!("k_t = n_t for {ts}: no room for {{2..k_t+1}}")));
    }
    Constructed::build(ps, Rule::HmTS(ts.clone()), DEFAULT_LAYER_CAP)
}

pub fn f_t_ell(ps: &PartStructure, ell: &LVector) -> Result<Constructed> {
    ell.validate(ps)?;
    Constructed::build(ps, Rule::TEll(ell.clone()), DEFAULT_LAYER_CAP)
}

/// All layer members containing at least two of `x`, `y`, `z`.
pub fn triangle_family(ps: &PartStructure, x: Element, y: Element, z: Element) -> Result<Constructed> {
    let w = [x, y, z];
    for e in w {
        ps.check_element(e).map_err(|e| Error::InfeasibleWitnesses(e.to_string()))?;
    }
    if x == y || x == z || y == z {
        return Err(Error::InfeasibleWitnesses("witnesses must be pairwise distinct".into()));
    }
    for s in 1..=ps.parts() {
        let here = w.iter().filter(|e| e.part == s).count();
        if here >= 2 && ps.ks()[s - 1] < 2 {
            return Err(Error::InfeasibleWitnesses(format!(
                "{here} witnesses in part {s} but k_{s} = {}",
                ps.ks()[s - 1]
            )));
        }
    }
    Constructed::build(ps, Rule::Triangle(w), DEFAULT_LAYER_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilyClass;

    fn ps(n: &[i64], k: &[i64]) -> PartStructure {
        PartStructure::new(n, k).unwrap()
    }

    fn lists(f: &Family) -> Vec<Vec<Vec<u32>>> {
        f.iter().map(|m| m.parts().to_vec()).collect()
    }

    #[test]
    fn frankl_examples() {
        let f = frankl_product(&ps(&[5, 5], &[2, 2]), 1).unwrap().into_family().unwrap();
        assert_eq!(f.len(), 40);
        assert_eq!(f.classify(), FamilyClass::Trivial);
        let g = frankl_product(&ps(&[4], &[2]), 1).unwrap().into_family().unwrap();
        assert_eq!(g.len(), 3);
        assert!(frankl_product(&ps(&[4], &[2]), 2).is_err());
    }

    #[test]
    fn hilton_milner_examples() {
        let f = hilton_milner_family(5, 2).unwrap().into_family().unwrap();
        assert_eq!(lists(&f), vec![vec![vec![1, 2]], vec![vec![1, 3]], vec![vec![2, 3]]]);
        assert_eq!(f.classify(), FamilyClass::Nontrivial);
        let g = hilton_milner_family(7, 3).unwrap().into_family().unwrap();
        assert_eq!(g.len(), 13);
        assert_eq!(g.classify(), FamilyClass::Nontrivial);
        assert!(hilton_milner_family(3, 3).is_err());
    }

    #[test]
    fn hm_ts_examples() {
        let p = ps(&[5, 5], &[2, 2]);
        let f = f_hm_t_s(&p, &TSPair::new(&p, 1, &[2]).unwrap(), false).unwrap().into_family().unwrap();
        assert_eq!(f.len(), 35);
        assert_eq!(f.classify(), FamilyClass::Nontrivial);

        let q = ps(&[3, 3, 3], &[1, 1, 1]);
        let g = f_hm_t_s(&q, &TSPair::new(&q, 1, &[2, 3]).unwrap(), false).unwrap().into_family().unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g.classify(), FamilyClass::Nontrivial);

        let r = ps(&[5, 5], &[1, 1]);
        let ex = TSPair::new(&r, 1, &[]).unwrap();
        assert_eq!(f_hm_t_s(&r, &ex, false), Err(Error::ExcludedPair { t: 1, s: vec![] }));
        assert!(f_hm_t_s(&r, &ex, true).is_ok());
        let star = f_hm_t_s(&r, &TSPair::new(&r, 1, &[2]).unwrap(), true).unwrap().into_family().unwrap();
        assert_eq!(star.classify(), FamilyClass::Trivial);
    }

    #[test]
    fn t_ell_examples() {
        let p = ps(&[5, 5], &[2, 2]);
        let a = f_t_ell(&p, &LVector::new(&p, 1, vec![2, 2]).unwrap()).unwrap().into_family().unwrap();
        let b = f_hm_t_s(&p, &TSPair::new(&p, 1, &[2]).unwrap(), false).unwrap().into_family().unwrap();
        assert_eq!(a, b);
        let c = f_t_ell(&p, &LVector::new(&p, 1, vec![2, 1]).unwrap()).unwrap().into_family().unwrap();
        assert_eq!(c.len(), 32);
        assert!(matches!(LVector::new(&p, 1, vec![1, 0]), Err(Error::NotInLt(_))));
    }

    #[test]
    fn lt_membership_rules() {
        let p = ps(&[6, 6, 6], &[2, 1, 2]);
        // l_t = 0 required when k_t = 1
        assert!(LVector::new(&p, 2, vec![1, 1, 0]).is_err());
        assert!(LVector::new(&p, 2, vec![1, 0, 1]).is_ok());
        // l_t = k_t required once the sum exceeds 2
        assert!(LVector::new(&p, 1, vec![1, 1, 1]).is_err());
        assert!(LVector::new(&p, 1, vec![2, 1, 0]).is_ok());
        assert!(LVector::new(&p, 1, vec![1, 1, 0]).is_ok());
        for v in LVector::enumerate(&p, 1) {
            v.validate(&p).unwrap();
        }
        assert_eq!(LVector::enumerate(&p, 2).iter().filter(|v| v.values()[1] != 0).count(), 0);
    }

    #[test]
    fn ell_of_s() {
        let p = ps(&[5, 5, 5], &[2, 1, 2]);
        let ts = TSPair::new(&p, 2, &[3]).unwrap();
        assert_eq!(LVector::from_pair(&p, &ts).unwrap().values(), &[0, 0, 2]);
        let ts = TSPair::new(&p, 1, &[]).unwrap();
        assert_eq!(LVector::from_pair(&p, &ts).unwrap().values(), &[2, 0, 0]);
        let q = ps(&[5, 5], &[1, 1]);
        assert!(LVector::from_pair(&q, &TSPair::new(&q, 1, &[2]).unwrap()).is_err());
    }

    #[test]
    fn triangle_examples() {
        let p = ps(&[4, 3, 3], &[2, 1, 1]);
        let f = triangle_family(&p, Element::new(1, 1), Element::new(2, 1), Element::new(3, 1))
            .unwrap()
            .into_family()
            .unwrap();
        assert_eq!(f.len(), 18);
        assert_eq!(f.classify(), FamilyClass::Nontrivial);

        let q = ps(&[4, 3], &[2, 1]);
        let g = triangle_family(&q, Element::new(1, 1), Element::new(1, 2), Element::new(2, 1))
            .unwrap()
            .into_family()
            .unwrap();
        assert_eq!(g.len(), 7);

        let r = ps(&[5], &[2]);
        let h = triangle_family(&r, Element::new(1, 1), Element::new(1, 2), Element::new(1, 3))
            .unwrap()
            .into_family()
            .unwrap();
        assert_eq!(lists(&h), vec![vec![vec![1, 2]], vec![vec![1, 3]], vec![vec![2, 3]]]);

        let bad = triangle_family(&q, Element::new(2, 1), Element::new(2, 2), Element::new(1, 1));
        assert!(matches!(bad, Err(Error::InfeasibleWitnesses(_))));
        let dup = triangle_family(&r, Element::new(1, 1), Element::new(1, 1), Element::new(1, 3));
        assert!(matches!(dup, Err(Error::InfeasibleWitnesses(_))));
        let out = triangle_family(&r, Element::new(1, 1), Element::new(1, 9), Element::new(1, 3));
        assert!(matches!(out, Err(Error::InfeasibleWitnesses(_))));
    }

    #[test]
    fn lazy_view_above_cap() {
        let p = ps(&[6, 6], &[2, 2]);
        let ts = TSPair::new(&p, 1, &[2]).unwrap();
        let c = Constructed::build(&p, Rule::HmTS(ts.clone()), 100).unwrap();
        let Constructed::Lazy(lazy) = &c else { panic!("expected a lazy view") };
        let full = f_hm_t_s(&p, &ts, false).unwrap().into_family().unwrap();
        assert_eq!(c.count(), BigUint::from(full.len()));
        for f in LayerIter::uncapped(&p) {
            assert_eq!(lazy.contains(&f), full.contains(&f));
        }
        assert!(c.clone().into_family().is_err());
        assert_eq!(lazy.materialize(1000).unwrap(), full);
    }
}
