//! Streaming enumeration of the layer `prod C([n_s], k_s)` and superset counts.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::family::{Family, MultiPartSet, PartStructure, PartialSet};
use crate::formulas::binomial_u;

/// Largest layer [`enumerate_layer`] will stream by default.
pub const DEFAULT_LAYER_CAP: u64 = 10_000_000;

/// Colex-order iterator over layer members. Part 1 varies fastest, so the
/// sequence is increasing in the packed encoding.
#[derive(Debug, Clone)]
pub struct LayerIter {
    ps: PartStructure,
    current: Option<Vec<Vec<u32>>>,
}

impl LayerIter {
    /// Iterator with no size cap; only use for streaming counts.
    pub fn uncapped(ps: &PartStructure) -> Self {
        let first = ps.ks().iter().map(|&k| (1..=k).collect()).collect();
        Self { ps: ps.clone(), current: Some(first) }
    }
}

/// Advances a strictly increasing `k`-subset of `[n]` to its colex successor.
/// Returns false (and resets to `[k]`) on wrap-around.
fn colex_next(c: &mut [u32], n: u32) -> bool {
    let k = c.len();
    for i in 0..k {
        let limit = if i + 1 < k { c[i + 1] } else { n + 1 };
        if c[i] + 1 < limit {
            c[i] += 1;
            for (j, x) in c.iter_mut().enumerate().take(i) {
                *x = j as u32 + 1;
            }
            return true;
        }
    }
    for (j, x) in c.iter_mut().enumerate() {
        *x = j as u32 + 1;
    }
    false
}

impl Iterator for LayerIter {
    type Item = MultiPartSet;

    fn next(&mut self) -> Option<MultiPartSet> {
        let cur = self.current.as_mut()?;
        let out = MultiPartSet::from_parts_unchecked(&self.ps, cur.clone());
        let mut advanced = false;
        for (s, part) in cur.iter_mut().enumerate() {
            if colex_next(part, self.ps.ns()[s]) {
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.current = None;
        }
        Some(out)
    }
}

/// Streams every layer member once, in canonical order, refusing layers
/// above [`DEFAULT_LAYER_CAP`].
pub fn enumerate_layer(ps: &PartStructure) -> Result<LayerIter> {
    enumerate_layer_capped(ps, DEFAULT_LAYER_CAP)
}

pub fn enumerate_layer_capped(ps: &PartStructure, cap: u64) -> Result<LayerIter> {
    let size = ps.layer_size();
    if size > BigUint::from(cap) {
        return Err(Error::LayerTooLarge { size: size.to_string(), cap });
    }
    Ok(LayerIter::uncapped(ps))
}

/// All layer members satisfying `pred`, materialized under the default cap.
pub fn filter_layer<F>(ps: &PartStructure, cap: u64, mut pred: F) -> Result<Family>
where
    F: FnMut(&MultiPartSet) -> bool,
{
    let members = enumerate_layer_capped(ps, cap)?.filter(|m| pred(m)).collect();
    Ok(Family::from_sorted_unchecked(ps.clone(), members))
}

/// Exact number of layer members that include `z`: `prod C(n_s - z_s, k_s - z_s)`.
pub fn count_supersets(ps: &PartStructure, z: &PartialSet) -> Result<BigUint> {
    ps.check_partial(z)?;
    Ok(ps
        .ns()
        .iter()
        .zip(ps.ks())
        .enumerate()
        .map(|(s, (&n, &k))| {
            let zs = z.part(s).len() as u64;
            binomial_u(n as u64 - zs, k as u64 - zs)
        })
        .product())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(n: &[i64], k: &[i64]) -> PartStructure {
        PartStructure::new(n, k).unwrap()
    }

    #[test]
    fn layer_counts() {
        assert_eq!(enumerate_layer(&ps(&[4], &[2])).unwrap().count(), 6);
        assert_eq!(enumerate_layer(&ps(&[5, 5], &[2, 2])).unwrap().count(), 100);
        assert_eq!(enumerate_layer(&ps(&[3, 3, 3], &[1, 1, 1])).unwrap().count(), 27);
        assert_eq!(enumerate_layer(&ps(&[3], &[3])).unwrap().count(), 1);
    }

    #[test]
    fn layer_is_strictly_increasing_and_valid() {
        let p = ps(&[5, 3, 4], &[2, 1, 3]);
        let all: Vec<_> = enumerate_layer(&p).unwrap().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for m in &all {
            p.check_member(m).unwrap();
        }
    }

    #[test]
    fn single_part_colex_order() {
        let all: Vec<_> = enumerate_layer(&ps(&[4], &[2]))
            .unwrap()
            .map(|m| m.part(0).to_vec())
            .collect();
        assert_eq!(
            all,
            vec![vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 4], vec![2, 4], vec![3, 4]]
        );
    }

    #[test]
    fn layer_cap() {
        let p = ps(&[30, 30], &[10, 10]);
        assert!(matches!(enumerate_layer(&p), Err(Error::LayerTooLarge { .. })));
        assert!(enumerate_layer_capped(&ps(&[5, 5], &[2, 2]), 99).is_err());
        assert!(enumerate_layer_capped(&ps(&[5, 5], &[2, 2]), 100).is_ok());
    }

    #[test]
    fn superset_counts() {
        let p = ps(&[5, 5], &[2, 2]);
        let z = PartialSet::new(&p, vec![vec![1], vec![]]).unwrap();
        assert_eq!(count_supersets(&p, &z).unwrap(), BigUint::from(40u32));
        assert_eq!(count_supersets(&p, &PartialSet::empty(&p)).unwrap(), BigUint::from(100u32));
        let full = PartialSet::new(&p, vec![vec![1, 2], vec![1, 2]]).unwrap();
        assert_eq!(count_supersets(&p, &full).unwrap(), BigUint::from(1u32));
        let other = ps(&[5], &[2]);
        assert!(count_supersets(&other, &z).is_err());
    }
}
