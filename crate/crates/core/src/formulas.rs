//! Exact evaluation of the size formulas and bounds for (non-)trivially
//! intersecting multi-part families, plus the finite numeric checks used to
//! compare candidate extremal families.
//!
//! Everything here is integer or rational arithmetic; no value passes
//! through floating point.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::constructions::{LVector, TSPair};
use crate::error::{Error, Result};
use crate::family::PartStructure;

pub type BigCount = BigUint;
pub type Rational = BigRational;

/// `C(n, k)` for non-negative `n`; zero when `k > n`.
pub fn binomial_u(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> Result<BigCount> {
    if n < 0 {
        return Err(Error::NegativeN(n));
    }
    if k < 0 {
        return Ok(BigUint::zero());
    }
    Ok(binomial_u(n as u64, k as u64))
}

/// Number of `k`-subsets of a range of `max(m, 0)` elements.
///
/// The formulas below subtract counts of sets avoiding a block of elements;
/// when the block covers the whole part the remaining range is empty.
fn choose_clamped(m: i64, k: i64) -> BigUint {
    if k < 0 {
        return BigUint::zero();
    }
    binomial_u(m.max(0) as u64, k as u64)
}

fn to_count(v: BigInt) -> BigUint {
    v.to_biguint().expect("size formulas are non-negative")
}

/// Largest non-trivially intersecting family in `C([n], k)`:
/// `C(n-1, k-1) - C(n-k-1, k-1) + 1`.
pub fn m_hm(n: i64, k: i64) -> Result<BigCount> {
    if k < 1 || k > n {
        return Err(Error::OutOfRange(format!("m_hm needs 1 <= k <= n, got n={n}, k={k}")));
    }
    let v = BigInt::from(choose_clamped(n - 1, k - 1)) - BigInt::from(choose_clamped(n - k - 1, k - 1))
        + 1;
    Ok(to_count(v))
}

/// Size of the two-part family built from `{2..k1+1} | [k2]` and the sets
/// containing 1 in part 1 that meet it.
pub fn m_alt(n1: i64, n2: i64, k1: i64, k2: i64) -> Result<BigCount> {
    for (n, k) in [(n1, k1), (n2, k2)] {
        if k < 1 || k > n {
            return Err(Error::OutOfRange(format!("need 1 <= k <= n, got n={n}, k={k}")));
        }
    }
    let v = BigInt::from(choose_clamped(n1 - 1, k1 - 1) * choose_clamped(n2, k2))
        - BigInt::from(choose_clamped(n1 - k1 - 1, k1 - 1) * choose_clamped(n2 - k2, k2))
        + 1;
    Ok(to_count(v))
}

/// The better of the two product families `HM(n1,k1) x C([n2],k2)` and
/// `C([n1],k1) x HM(n2,k2)`.
pub fn product_hm(n1: i64, n2: i64, k1: i64, k2: i64) -> Result<BigCount> {
    let a = m_hm(n1, k1)? * binomial(n2, k2)?;
    let b = binomial(n1, k1)? * m_hm(n2, k2)?;
    Ok(a.max(b))
}

fn nk(ps: &PartStructure, s: usize) -> (i64, i64) {
    (ps.ns()[s] as i64, ps.ks()[s] as i64)
}

/// Exact size of `F^HM_{t,S}`, for both the `k_t > 1` and `k_t = 1` branches.
/// Excluded pairs are allowed; the value is still defined.
pub fn m_hm_t_s(ps: &PartStructure, ts: &TSPair) -> Result<BigCount> {
    ts.validate(ps)?;
    if !ts.fits(ps) {
        return Err(Error::OutOfRange(format!("k_t = n_t for {ts}: no room for {{2..k_t+1}}")));
    }
    let t = ts.t() - 1;
    let in_s = ts.mask(ps);
    let (nt, kt) = nk(ps, t);
    let mut s_full = BigUint::one();
    let mut s_avoid = BigUint::one();
    let mut rest = BigUint::one();
    for (s, &inside) in in_s.iter().enumerate() {
        if s == t {
            continue;
        }
        let (n, k) = nk(ps, s);
        if inside {
            s_full *= choose_clamped(n, k);
            s_avoid *= choose_clamped(n - k, k);
        } else {
            rest *= choose_clamped(n, k);
        }
    }
    let head = if kt > 1 {
        BigInt::from(choose_clamped(nt - 1, kt - 1) * s_full)
            - BigInt::from(choose_clamped(nt - kt - 1, kt - 1) * s_avoid)
            + 1
    } else {
        BigInt::from(s_full) - BigInt::from(s_avoid) + (nt - 1)
    };
    Ok(to_count(head) * rest)
}

/// Exact size of `F_{t,l}` by the three-term count
/// `|Y ⊆ F, 1 ∉ F_t| + |1 ∈ F_t| - |1 ∈ F_t, F ∩ Y = ∅|`.
pub fn m_t_ell(ps: &PartStructure, ell: &LVector) -> Result<BigCount> {
    ell.validate(ps)?;
    let t = ell.t() - 1;
    let l = ell.values();
    let (nt, kt) = nk(ps, t);
    let lt = l[t] as i64;
    let mut contains_y = choose_clamped(nt - lt - 1, kt - lt);
    let mut star = choose_clamped(nt - 1, kt - 1);
    let mut star_avoiding_y = choose_clamped(nt - lt - 1, kt - 1);
    for (s, &ls) in l.iter().enumerate() {
        if s == t {
            continue;
        }
        let (n, k) = nk(ps, s);
        let ls = ls as i64;
        contains_y *= choose_clamped(n - ls, k - ls);
        star *= choose_clamped(n, k);
        star_avoiding_y *= choose_clamped(n - ls, k);
    }
    Ok(to_count(BigInt::from(contains_y) + BigInt::from(star) - BigInt::from(star_avoiding_y)))
}

/// Every `(t, S)` with `S ⊆ [p] \ {t}`, in canonical order: `t` ascending,
/// then `S` by ascending bitmask.
pub fn all_ts_pairs(ps: &PartStructure) -> Vec<TSPair> {
    let p = ps.parts();
    let mut out = Vec::new();
    for t in 1..=p {
        for mask in 0u64..(1u64 << (p - 1)) {
            // expand the (p-1)-bit mask over the parts other than t
            let mut s = Vec::new();
            let mut bit = 0;
            for part in 1..=p {
                if part == t {
                    continue;
                }
                if mask >> bit & 1 == 1 {
                    s.push(part);
                }
                bit += 1;
            }
            out.push(TSPair::new_unchecked(t, s));
        }
    }
    out.sort_by_key(|ts| (ts.t(), ts.s().iter().map(|&x| 1u64 << (x - 1)).sum::<u64>()));
    out
}

/// Pairs that are not excluded for `ps` and whose block `{2..k_t+1}` fits.
pub fn admissible_ts_pairs(ps: &PartStructure) -> Vec<TSPair> {
    all_ts_pairs(ps)
        .into_iter()
        .filter(|ts| !ts.is_excluded(ps) && ts.fits(ps))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxValue {
    pub value: BigCount,
    /// Every admissible pair attaining the maximum, in canonical order.
    pub argmax: Vec<TSPair>,
}

/// Maximum of `m_hm_t_s` over admissible pairs, with all maximizers.
pub fn m_max(ps: &PartStructure) -> Result<MaxValue> {
    let mut best: Option<MaxValue> = None;
    for ts in admissible_ts_pairs(ps) {
        let v = m_hm_t_s(ps, &ts)?;
        match &mut best {
            Some(b) if v < b.value => {}
            Some(b) if v == b.value => b.argmax.push(ts),
            _ => best = Some(MaxValue { value: v, argmax: vec![ts] }),
        }
    }
    best.ok_or(Error::NoAdmissiblePair)
}

/// Largest intersecting family: `max_t C(n_t-1, k_t-1) prod_{s != t} C(n_s, k_s)`.
/// Outside the EKR regime the expression is still returned, with a warning.
pub fn frankl_bound(ps: &PartStructure) -> BigCount {
    if !ps.ekr_regime() {
        log::warn!("frankl_bound: {ps} is outside the regime k_s <= n_s/2; value is not a bound there");
    }
    let factors: Vec<(BigUint, BigUint)> = ps
        .ns()
        .iter()
        .zip(ps.ks())
        .map(|(&n, &k)| (binomial_u(n as u64, k as u64), binomial_u(n as u64 - 1, k as u64 - 1)))
        .collect();
    (0..ps.parts())
        .map(|t| {
            factors
                .iter()
                .enumerate()
                .map(|(s, (full, star))| if s == t { star } else { full })
                .product::<BigUint>()
        })
        .max()
        .expect("at least one part")
}

/// `n^(p-1) - (n-1)^(p-1) + n - 1`, the largest non-trivially intersecting
/// family in `C([n],1)^p` for `p >= 3`.
pub fn k1_closed_form(n: u64, p: u32) -> BigCount {
    let n_big = BigUint::from(n);
    let a = num_traits::pow(n_big.clone(), (p - 1) as usize);
    let b = num_traits::pow(BigUint::from(n - 1), (p - 1) as usize);
    a - b + n_big - 1u32
}

fn g_value(y: u64, b: u64, d: u64, gamma: &BigRational) -> BigRational {
    BigRational::from_integer(binomial_u(y, b).into())
        - gamma * BigRational::from_integer(binomial_u(y, b + d).into())
}

/// Checks that `g(y) = C(y, b) - gamma C(y, b + d)` on `y = 0..=y_max` never
/// increases after a strict decrease.
pub fn is_unimodal_g(b: i64, d: i64, gamma: &BigRational, y_max: i64) -> Result<bool> {
    if b < 1 || d < 0 || !gamma.is_positive() || y_max < b + d {
        return Err(Error::BadParameters(format!(
            "need b >= 1, d >= 0, gamma > 0, y_max >= b + d; got b={b}, d={d}, gamma={gamma}, y_max={y_max}"
        )));
    }
    let (b, d) = (b as u64, d as u64);
    let mut prev = g_value(0, b, d, gamma);
    let mut decreased = false;
    for y in 1..=y_max as u64 {
        let cur = g_value(y, b, d, gamma);
        if cur < prev {
            decreased = true;
        } else if cur > prev && decreased {
            return Ok(false);
        }
        prev = cur;
    }
    Ok(true)
}

/// `(k1^2 + k2^2 + k1 k3 + k2 k3) / (2 k1 + 2 k2 + 2 k3)`.
pub fn case2_f(k1: i64, k2: i64, k3: i64) -> Result<Rational> {
    if k1 < 1 || k2 < 1 || k3 < 1 {
        return Err(Error::BadParameters(format!("case2_f needs positive arguments, got ({k1},{k2},{k3})")));
    }
    let num = k1 * k1 + k2 * k2 + k1 * k3 + k2 * k3;
    let den = 2 * (k1 + k2 + k3);
    Ok(BigRational::new(num.into(), den.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(n: &[i64], k: &[i64]) -> PartStructure {
        PartStructure::new(n, k).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    /// Independent oracle: Pascal's rule, row by row.
    fn pascal(n: usize) -> Vec<Vec<BigUint>> {
        let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![BigUint::one(); i + 1];
            for j in 1..i {
                row[j] = &prev[j - 1] + &prev[j];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn binomial_matches_pascal() {
        let rows = pascal(120);
        for (n, row) in rows.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                assert_eq!(&binomial(n as i64, k as i64).unwrap(), v, "C({n},{k})");
            }
            assert_eq!(binomial(n as i64, n as i64 + 1).unwrap(), BigUint::zero());
        }
        // frozen from the Pascal oracle above
        assert_eq!(rows[50][25], big(126_410_606_437_752));
        assert_eq!(binomial(50, 25).unwrap(), big(126_410_606_437_752));
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(5, 2).unwrap(), big(10));
        assert_eq!(binomial(4, 7).unwrap(), big(0));
        assert_eq!(binomial(4, -1).unwrap(), big(0));
        assert_eq!(binomial(-1, 0), Err(Error::NegativeN(-1)));
        assert!(binomial(1000, 500).unwrap() > BigUint::from(u128::MAX));
    }

    #[test]
    fn hilton_milner_values() {
        assert_eq!(m_hm(5, 2).unwrap(), big(3));
        assert_eq!(m_hm(7, 3).unwrap(), big(13));
        assert_eq!(m_hm(6, 2).unwrap(), big(3));
        assert!(m_hm(3, 4).is_err());
        assert!(m_hm(3, 0).is_err());
    }

    #[test]
    fn hm_ts_examples() {
        let p = ps(&[5, 5], &[2, 2]);
        assert_eq!(m_hm_t_s(&p, &TSPair::new(&p, 1, &[2]).unwrap()).unwrap(), big(35));
        assert_eq!(m_hm_t_s(&p, &TSPair::new(&p, 1, &[]).unwrap()).unwrap(), big(30));
        let q = ps(&[3, 3, 3], &[1, 1, 1]);
        assert_eq!(m_hm_t_s(&q, &TSPair::new(&q, 1, &[2, 3]).unwrap()).unwrap(), big(7));
        let r = ps(&[3, 3], &[1, 1]);
        assert!(m_hm_t_s(&r, &TSPair::new_unchecked(3, vec![])).is_err());
    }

    #[test]
    fn m_alt_is_the_t1_s2_case() {
        for n1 in 4..9 {
            for n2 in 4..9 {
                for k1 in 2..=n1 / 2 {
                    for k2 in 1..=n2 / 2 {
                        let p = ps(&[n1, n2], &[k1, k2]);
                        let ts = TSPair::new(&p, 1, &[2]).unwrap();
                        assert_eq!(m_alt(n1, n2, k1, k2).unwrap(), m_hm_t_s(&p, &ts).unwrap());
                    }
                }
            }
        }
        assert_eq!(product_hm(5, 5, 2, 2).unwrap(), big(30));
    }

    #[test]
    fn t_ell_examples() {
        let p = ps(&[5, 5], &[2, 2]);
        assert_eq!(m_t_ell(&p, &LVector::new(&p, 1, vec![2, 2]).unwrap()).unwrap(), big(35));
        assert_eq!(m_t_ell(&p, &LVector::new(&p, 1, vec![2, 1]).unwrap()).unwrap(), big(32));
        assert!(matches!(LVector::new(&p, 1, vec![1, 0]), Err(Error::NotInLt(_))));
    }

    #[test]
    fn m_max_examples() {
        let p = ps(&[5, 5], &[2, 2]);
        let m = m_max(&p).unwrap();
        assert_eq!(m.value, big(35));
        assert_eq!(
            m.argmax,
            vec![TSPair::new_unchecked(1, vec![2]), TSPair::new_unchecked(2, vec![1])]
        );

        let q = ps(&[3, 3, 3], &[1, 1, 1]);
        let m = m_max(&q).unwrap();
        assert_eq!(m.value, big(7));
        assert_eq!(
            m.argmax,
            vec![
                TSPair::new_unchecked(1, vec![2, 3]),
                TSPair::new_unchecked(2, vec![1, 3]),
                TSPair::new_unchecked(3, vec![1, 2]),
            ]
        );
        assert_eq!(m_max(&ps(&[4, 4], &[1, 1])), Err(Error::NoAdmissiblePair));
        assert_eq!(m_max(&ps(&[4], &[1])), Err(Error::NoAdmissiblePair));
    }

    #[test]
    fn frankl_examples() {
        assert_eq!(frankl_bound(&ps(&[5, 5], &[2, 2])), big(40));
        assert_eq!(frankl_bound(&ps(&[4, 6], &[2, 2])), big(45));
        assert_eq!(frankl_bound(&ps(&[3, 3, 3], &[1, 1, 1])), big(9));
    }

    #[test]
    fn unimodality_examples() {
        let one = BigRational::one();
        let half = BigRational::new(1.into(), 2.into());
        assert!(is_unimodal_g(1, 1, &one, 10).unwrap());
        assert!(is_unimodal_g(2, 1, &half, 20).unwrap());
        assert!(is_unimodal_g(1, 0, &one, 10).unwrap());
        assert!(is_unimodal_g(0, 1, &one, 10).is_err());
        assert!(is_unimodal_g(1, 1, &BigRational::zero(), 10).is_err());
        assert!(is_unimodal_g(2, 2, &one, 3).is_err());
    }

    #[test]
    fn g_sequence_direct_values() {
        let one = BigRational::one();
        let seq: Vec<_> = (0..6).map(|y| g_value(y, 1, 1, &one)).collect();
        let ints: Vec<BigRational> = [0, 1, 1, 0, -2, -5]
            .iter()
            .map(|&v: &i64| BigRational::from_integer(v.into()))
            .collect();
        assert_eq!(seq, ints);
    }

    #[test]
    fn case2_examples() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(case2_f(2, 2, 2).unwrap(), r(4, 3));
        assert_eq!(case2_f(1, 2, 2).unwrap(), r(11, 10));
        assert_eq!(case2_f(1, 1, 5).unwrap(), r(6, 7));
        assert!(case2_f(0, 1, 1).is_err());
    }

    #[test]
    fn k1_closed_form_values() {
        let vals: Vec<_> = (2..=4).map(|n| k1_closed_form(n, 3)).collect();
        assert_eq!(vals, vec![big(4), big(7), big(10)]);
        assert_eq!(k1_closed_form(2, 4), big(8));
        assert_eq!(k1_closed_form(3, 4), big(21));
    }
}
