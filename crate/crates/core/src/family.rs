//! Ground-set model: part structures, multi-part sets, partial sets and
//! families, together with the intersection predicates.
//!
//! The ground set is the disjoint union of `p` parts `[n_1], ..., [n_p]`.
//! Element `(s, v)` is packed at bit `n_1 + ... + n_{s-1} + v - 1`, so the
//! integer order of the packed words is colexicographic order on sets. Parts
//! and values are numbered from 1; slices such as [`PartStructure::ns`] are
//! indexed from 0.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};
use crate::formulas::binomial_u;

/// Instance parameters: part sizes `n_s` and uniformities `k_s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartStructure {
    n: Vec<u32>,
    k: Vec<u32>,
    offsets: Vec<usize>,
    ground: usize,
}

impl PartStructure {
    pub fn new(n: &[i64], k: &[i64]) -> Result<Self> {
        if n.is_empty() {
            return Err(Error::LengthMismatch { expected: 1, got: 0 });
        }
        if n.len() != k.len() {
            return Err(Error::LengthMismatch { expected: n.len(), got: k.len() });
        }
        let mut nn = Vec::with_capacity(n.len());
        let mut kk = Vec::with_capacity(n.len());
        for (s, (&ns, &ks)) in n.iter().zip(k).enumerate() {
            let part = s + 1;
            if ns < 1 {
                return Err(Error::ZeroOrNegative { part, what: "n", value: ns });
            }
            if ks < 1 {
                return Err(Error::ZeroOrNegative { part, what: "k", value: ks });
            }
            let ns = u32::try_from(ns).map_err(|_| Error::OutOfRange(format!("n={ns}")))?;
            let ks = u32::try_from(ks).map_err(|_| Error::OutOfRange(format!("k={ks}")))?;
            if ks > ns {
                return Err(Error::UniformityTooLarge { part, n: ns, k: ks });
            }
            nn.push(ns);
            kk.push(ks);
        }
        let mut offsets = Vec::with_capacity(nn.len());
        let mut acc = 0usize;
        for &ns in &nn {
            offsets.push(acc);
            acc += ns as usize;
        }
        Ok(Self { n: nn, k: kk, offsets, ground: acc })
    }

    /// Same as [`PartStructure::new`] but checks both vectors against an
    /// explicit part count.
    pub fn with_parts(p: usize, n: &[i64], k: &[i64]) -> Result<Self> {
        if p == 0 {
            return Err(Error::ZeroOrNegative { part: 0, what: "p", value: 0 });
        }
        for v in [n, k] {
            if v.len() != p {
                return Err(Error::LengthMismatch { expected: p, got: v.len() });
            }
        }
        Self::new(n, k)
    }

    pub fn parts(&self) -> usize {
        self.n.len()
    }

    pub fn ns(&self) -> &[u32] {
        &self.n
    }

    pub fn ks(&self) -> &[u32] {
        &self.k
    }

    /// Size of the ground set, `sum n_s`.
    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub(crate) fn words(&self) -> usize {
        bits::words_for(self.ground)
    }

    /// True iff `k_s <= n_s / 2` for every part.
    pub fn ekr_regime(&self) -> bool {
        self.n.iter().zip(&self.k).all(|(&n, &k)| 2 * k <= n)
    }

    /// Number of members of the layer, `prod C(n_s, k_s)`.
    pub fn layer_size(&self) -> BigUint {
        self.n
            .iter()
            .zip(&self.k)
            .map(|(&n, &k)| binomial_u(n as u64, k as u64))
            .product()
    }

    /// Layer size as a machine integer, `None` on overflow.
    pub fn layer_size_u64(&self) -> Option<u64> {
        u64::try_from(self.layer_size()).ok()
    }

    pub(crate) fn check_element(&self, e: Element) -> Result<()> {
        if e.part == 0 || e.part > self.parts() {
            return Err(Error::OutOfRange(format!("element {e}: no such part")));
        }
        if e.value == 0 || e.value > self.n[e.part - 1] {
            return Err(Error::OutOfRange(format!("element {e}: value outside part")));
        }
        Ok(())
    }

    pub(crate) fn bit_of(&self, e: Element) -> usize {
        self.offsets[e.part - 1] + e.value as usize - 1
    }

    pub(crate) fn element_of_bit(&self, bit: usize) -> Element {
        let s = self.offsets.partition_point(|&o| o <= bit) - 1;
        Element { part: s + 1, value: (bit - self.offsets[s] + 1) as u32 }
    }

    fn pack(&self, parts: &[Vec<u32>]) -> Vec<u64> {
        let mut w = vec![0u64; self.words()];
        for (s, vals) in parts.iter().enumerate() {
            for &v in vals {
                bits::set(&mut w, self.bit_of(Element { part: s + 1, value: v }));
            }
        }
        w
    }

    fn validate_parts(&self, parts: &[Vec<u32>], exact: bool) -> Result<()> {
        if parts.len() != self.parts() {
            return Err(Error::StructureMismatch(format!(
                "set has {} parts, structure has {}",
                parts.len(),
                self.parts()
            )));
        }
        for (s, vals) in parts.iter().enumerate() {
            let (n, k) = (self.n[s], self.k[s]);
            let size = vals.len() as u32;
            if exact && size != k {
                return Err(Error::InvalidSet(format!(
                    "part {} has {size} elements, expected {k}",
                    s + 1
                )));
            }
            if size > k {
                return Err(Error::InvalidSet(format!(
                    "part {} has {size} elements, more than k={k}",
                    s + 1
                )));
            }
            if vals.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidSet(format!(
                    "part {} is not strictly increasing",
                    s + 1
                )));
            }
            if vals.iter().any(|&v| v == 0 || v > n) {
                return Err(Error::InvalidSet(format!(
                    "part {} has a value outside 1..={n}",
                    s + 1
                )));
            }
        }
        Ok(())
    }

    /// Checks that `set` was built for a structure with the same shape.
    pub fn check_member(&self, set: &MultiPartSet) -> Result<()> {
        if set.bits.len() != self.words() {
            return Err(Error::StructureMismatch("packed width differs".into()));
        }
        self.validate_parts(&set.parts, true)?;
        if set.bits != self.pack(&set.parts) {
            return Err(Error::StructureMismatch("packed encoding differs".into()));
        }
        Ok(())
    }

    pub fn check_partial(&self, set: &PartialSet) -> Result<()> {
        if set.bits.len() != self.words() {
            return Err(Error::StructureMismatch("packed width differs".into()));
        }
        self.validate_parts(&set.parts, false)?;
        if set.bits != self.pack(&set.parts) {
            return Err(Error::StructureMismatch("packed encoding differs".into()));
        }
        Ok(())
    }
}

impl fmt::Display for PartStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        write!(f, "n=({}) k=({})", join(&self.n), join(&self.k))
    }
}

/// A ground-set element: value `value` in part `part` (both from 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    pub part: usize,
    pub value: u32,
}

impl Element {
    pub fn new(part: usize, value: u32) -> Self {
        Self { part, value }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.part, self.value)
    }
}

/// A member of the layer `prod C([n_s], k_s)`.
///
/// Equality, hashing and ordering use the packed encoding only; ordering is
/// colexicographic.
#[derive(Debug, Clone)]
pub struct MultiPartSet {
    parts: Vec<Vec<u32>>,
    bits: Vec<u64>,
}

/// A tuple of subsets `Z_s` with `|Z_s| <= k_s`, such as a projection.
#[derive(Debug, Clone)]
pub struct PartialSet {
    parts: Vec<Vec<u32>>,
    bits: Vec<u64>,
}

macro_rules! packed_common {
    ($ty:ident) => {
        impl $ty {
            /// Sorted values of part `s` (0-based).
            pub fn part(&self, s: usize) -> &[u32] {
                &self.parts[s]
            }

            pub fn parts(&self) -> &[Vec<u32>] {
                &self.parts
            }

            /// Packed words, least significant first.
            pub fn packed(&self) -> &[u64] {
                &self.bits
            }

            /// Total number of elements across all parts.
            pub fn len(&self) -> usize {
                self.parts.iter().map(Vec::len).sum()
            }

            pub fn is_empty(&self) -> bool {
                self.len() == 0
            }

            pub fn contains(&self, e: Element) -> bool {
                e.part >= 1
                    && e.part <= self.parts.len()
                    && self.parts[e.part - 1].binary_search(&e.value).is_ok()
            }

            pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
                self.parts
                    .iter()
                    .enumerate()
                    .flat_map(|(s, v)| v.iter().map(move |&x| Element::new(s + 1, x)))
            }
        }

        impl PartialEq for $ty {
            fn eq(&self, other: &Self) -> bool {
                self.bits == other.bits
            }
        }

        impl Eq for $ty {}

        impl Hash for $ty {
            fn hash<H: Hasher>(&self, state: &mut H) {
                self.bits.hash(state);
            }
        }

        impl PartialOrd for $ty {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }

        impl Ord for $ty {
            fn cmp(&self, other: &Self) -> Ordering {
                bits::colex_cmp(&self.bits, &other.bits)
                    .then_with(|| self.bits.len().cmp(&other.bits.len()))
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                for (s, vals) in self.parts.iter().enumerate() {
                    if s > 0 {
                        f.write_str("|")?;
                    }
                    let body = vals.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                    write!(f, "{{{body}}}")?;
                }
                Ok(())
            }
        }
    };
}

packed_common!(MultiPartSet);
packed_common!(PartialSet);

impl MultiPartSet {
    /// Builds a layer member from per-part value lists. Lists must be
    /// strictly increasing with exactly `k_s` values in part `s`.
    pub fn new(ps: &PartStructure, parts: Vec<Vec<u32>>) -> Result<Self> {
        ps.validate_parts(&parts, true)?;
        let bits = ps.pack(&parts);
        Ok(Self { parts, bits })
    }

    pub(crate) fn from_parts_unchecked(ps: &PartStructure, parts: Vec<Vec<u32>>) -> Self {
        let bits = ps.pack(&parts);
        Self { parts, bits }
    }

    /// True iff the two sets meet in at least one part.
    pub fn intersects(&self, other: &Self) -> Result<bool> {
        self.same_shape(other)?;
        Ok(self.meets(other))
    }

    #[inline]
    pub(crate) fn meets(&self, other: &Self) -> bool {
        bits::meets(&self.bits, &other.bits)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        let sizes = |s: &Self| s.parts.iter().map(Vec::len).collect::<Vec<_>>();
        if self.bits.len() != other.bits.len() || sizes(self) != sizes(other) {
            return Err(Error::StructureMismatch(format!(
                "cannot compare {self} with {other}"
            )));
        }
        Ok(())
    }

    /// True iff `z` is contained in this set.
    pub fn includes(&self, z: &PartialSet) -> bool {
        self.bits.len() == z.bits.len()
            && self.bits.iter().zip(&z.bits).all(|(a, b)| b & !a == 0)
    }

    pub fn as_partial(&self) -> PartialSet {
        PartialSet { parts: self.parts.clone(), bits: self.bits.clone() }
    }
}

impl PartialSet {
    pub fn new(ps: &PartStructure, parts: Vec<Vec<u32>>) -> Result<Self> {
        ps.validate_parts(&parts, false)?;
        let bits = ps.pack(&parts);
        Ok(Self { parts, bits })
    }

    /// The empty partial set over `ps`.
    pub fn empty(ps: &PartStructure) -> Self {
        Self { parts: vec![Vec::new(); ps.parts()], bits: vec![0; ps.words()] }
    }

    pub(crate) fn from_parts_unchecked(ps: &PartStructure, parts: Vec<Vec<u32>>) -> Self {
        let bits = ps.pack(&parts);
        Self { parts, bits }
    }

    pub fn meets(&self, other: &Self) -> bool {
        bits::meets(&self.bits, &other.bits)
    }
}

/// Total intersection of a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommonElements {
    /// The family has no members.
    EmptyFamily,
    Elements(Vec<Element>),
}

impl CommonElements {
    pub fn is_nonempty_set(&self) -> bool {
        matches!(self, CommonElements::Elements(v) if !v.is_empty())
    }
}

/// Intersection class of a family. The empty family gets its own class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyClass {
    Empty,
    NotIntersecting,
    Trivial,
    Nontrivial,
}

impl FamilyClass {
    pub fn is_intersecting(self) -> bool {
        matches!(self, FamilyClass::Trivial | FamilyClass::Nontrivial)
    }
}

impl fmt::Display for FamilyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyClass::Empty => "empty",
            FamilyClass::NotIntersecting => "not_intersecting",
            FamilyClass::Trivial => "trivial",
            FamilyClass::Nontrivial => "nontrivial",
        })
    }
}

/// A deduplicated collection of layer members, kept in colex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    ps: PartStructure,
    members: Vec<MultiPartSet>,
}

impl Family {
    pub fn new<I>(ps: &PartStructure, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = MultiPartSet>,
    {
        let mut members = Vec::new();
        for set in sets {
            ps.check_member(&set)?;
            members.push(set);
        }
        Ok(Self::from_unsorted(ps.clone(), members))
    }

    /// Builds a family from raw per-part value lists.
    pub fn from_lists(ps: &PartStructure, sets: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        let members = sets
            .into_iter()
            .map(|parts| MultiPartSet::new(ps, parts))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_unsorted(ps.clone(), members))
    }

    pub fn empty(ps: &PartStructure) -> Self {
        Self { ps: ps.clone(), members: Vec::new() }
    }

    pub(crate) fn from_unsorted(ps: PartStructure, mut members: Vec<MultiPartSet>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self { ps, members }
    }

    pub(crate) fn from_sorted_unchecked(ps: PartStructure, members: Vec<MultiPartSet>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self { ps, members }
    }

    pub fn structure(&self) -> &PartStructure {
        &self.ps
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[MultiPartSet] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MultiPartSet> {
        self.members.iter()
    }

    pub fn contains(&self, set: &MultiPartSet) -> bool {
        self.members.binary_search(set).is_ok()
    }

    /// Intersection of all members.
    pub fn common_elements(&self) -> CommonElements {
        let Some(first) = self.members.first() else {
            return CommonElements::EmptyFamily;
        };
        let mut acc = first.bits.clone();
        for m in &self.members[1..] {
            bits::and_assign(&mut acc, &m.bits);
        }
        CommonElements::Elements(bits::ones(&acc).map(|b| self.ps.element_of_bit(b)).collect())
    }

    fn has_common_element(&self) -> bool {
        let Some(first) = self.members.first() else {
            return false;
        };
        let mut acc = first.bits.clone();
        for m in &self.members[1..] {
            bits::and_assign(&mut acc, &m.bits);
            if bits::is_zero(&acc) {
                return false;
            }
        }
        true
    }

    /// True iff every pair of members intersects (vacuously true when empty).
    pub fn is_intersecting(&self) -> bool {
        self.first_disjoint_pair().is_none()
    }

    /// Indices of the first disjoint pair in scan order, if any.
    pub fn first_disjoint_pair(&self) -> Option<(usize, usize)> {
        let m = &self.members;
        (0..m.len()).find_map(|a| ((a + 1)..m.len()).find(|&b| !m[a].meets(&m[b])).map(|b| (a, b)))
    }

    pub fn classify(&self) -> FamilyClass {
        if self.members.is_empty() {
            FamilyClass::Empty
        } else if !self.is_intersecting() {
            FamilyClass::NotIntersecting
        } else if self.has_common_element() {
            FamilyClass::Trivial
        } else {
            FamilyClass::Nontrivial
        }
    }

    /// Applies a per-part relabelling of the ground set. `perms[s][v - 1]`
    /// is the image of value `v` in part `s + 1`.
    pub fn relabel(&self, perms: &[Vec<u32>]) -> Result<Family> {
        if perms.len() != self.ps.parts() {
            return Err(Error::LengthMismatch { expected: self.ps.parts(), got: perms.len() });
        }
        for (s, perm) in perms.iter().enumerate() {
            let n = self.ps.ns()[s];
            let mut seen = vec![false; n as usize];
            if perm.len() != n as usize {
                return Err(Error::BadParameters(format!("part {} permutation has wrong length", s + 1)));
            }
            for &v in perm {
                if v == 0 || v > n || std::mem::replace(&mut seen[v as usize - 1], true) {
                    return Err(Error::BadParameters(format!("part {} is not a permutation", s + 1)));
                }
            }
        }
        let members = self
            .members
            .iter()
            .map(|m| {
                let parts = m
                    .parts
                    .iter()
                    .zip(perms)
                    .map(|(vals, perm)| {
                        let mut out: Vec<u32> = vals.iter().map(|&v| perm[v as usize - 1]).collect();
                        out.sort_unstable();
                        out
                    })
                    .collect();
                MultiPartSet::from_parts_unchecked(&self.ps, parts)
            })
            .collect();
        Ok(Family::from_unsorted(self.ps.clone(), members))
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = &'a MultiPartSet;
    type IntoIter = std::slice::Iter<'a, MultiPartSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}
