//! Surjections `[n] ↠ [k]`, the `◇` algebra they span, descents and the
//! logarithm of the identity series.

mod descent;
mod element;
mod log;

pub use descent::{d_subset, d_subseteq, descent_count, descent_set, iota, Composition};
pub use element::{diamond, diamond_with, DiamondStrategy, GradedJson, SurjElement, SurjTermJson};
pub use log::{
    apply_element, apply_surjection, exp_element, identity_series, log_identity_closed_form,
    log_identity_series, log_identity_subset_form, strichartz_restriction, superset_coefficient_sum,
};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A surjection stored as its value sequence `(f(1), ..., f(n))`.
///
/// The empty sequence is the unit, the unique surjection `[0] ↠ [0]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Surjection(Vec<u32>);

impl Surjection {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let k = values.iter().copied().max().unwrap_or(0) as usize;
        if values.contains(&0) {
            return Err(Error::InvalidSurjection { values, reason: "values must be positive".into() });
        }
        let mut hit = vec![false; k];
        for &v in &values {
            hit[v as usize - 1] = true;
        }
        if let Some(missing) = hit.iter().position(|h| !h) {
            let reason = format!("value {} is not attained", missing + 1);
            return Err(Error::InvalidSurjection { values, reason });
        }
        Ok(Surjection(values))
    }

    pub(crate) fn new_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Surjection::new(values.clone()).is_ok(), "{values:?}");
        Surjection(values)
    }

    pub fn unit() -> Self {
        Surjection(Vec::new())
    }

    /// The identity map `p_n` of `[n]`.
    pub fn identity(n: usize) -> Self {
        Surjection((1..=n as u32).collect())
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    /// `n`, the size of the domain.
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// `k`, the size of the image.
    pub fn rank(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_bijection(&self) -> bool {
        self.rank() == self.arity()
    }

    /// Largest fibre size `max_i |f^{-1}(i)|`.
    pub fn max_fiber(&self) -> usize {
        let mut counts = vec![0usize; self.rank()];
        for &v in &self.0 {
            counts[v as usize - 1] += 1;
        }
        counts.into_iter().max().unwrap_or(0)
    }

    /// `"212"` when every value is a digit, `"(1,2,10)"` otherwise.
    pub fn to_text(&self) -> String {
        if self.0.iter().all(|&v| v <= 9) {
            self.0.iter().map(|v| v.to_string()).collect()
        } else {
            let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
            format!("({})", parts.join(","))
        }
    }
}

/// Grade (arity) first, then lexicographic on values.
impl Ord for Surjection {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Surjection {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Surjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Surjection {
    type Err = Error;

    /// Accepts `212`, `(212)` and `(1,2,10)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s);
        let values: Vec<u32> = if inner.contains(',') {
            inner
                .split(',')
                .enumerate()
                .map(|(i, p)| {
                    p.trim().parse().map_err(|_| Error::Parse { pos: i, msg: format!("bad value {p:?}") })
                })
                .collect::<Result<_>>()?
        } else {
            inner
                .chars()
                .enumerate()
                .map(|(i, c)| {
                    c.to_digit(10).ok_or(Error::Parse { pos: i, msg: format!("bad digit {c:?}") })
                })
                .collect::<Result<_>>()?
        };
        Surjection::new(values)
    }
}

/// Replaces each value by its rank among the distinct values, e.g.
/// `35731 ↦ 23421`.
pub fn pack(word: &[u32]) -> Surjection {
    let mut distinct: Vec<u32> = word.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    Surjection(
        word.iter()
            .map(|v| distinct.binary_search(v).expect("present") as u32 + 1)
            .collect(),
    )
}

/// All surjections `[n] ↠ [k]` in lexicographic order.
pub fn enumerate_surjections(n: usize, k: usize) -> Result<Vec<Surjection>> {
    enumerate_surjections_bounded(n, k, n)
}

/// Surjections `[n] ↠ [k]` whose fibres have at most `max_fiber` elements,
/// in lexicographic order.
pub fn enumerate_surjections_bounded(n: usize, k: usize, max_fiber: usize) -> Result<Vec<Surjection>> {
    if k == 0 || k > n {
        return Err(Error::InvalidSurjectionRange { n, k });
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut counts = vec![0usize; k];
    fill(n, k, max_fiber, &mut current, &mut counts, &mut out);
    Ok(out)
}

fn fill(
    n: usize,
    k: usize,
    max_fiber: usize,
    current: &mut Vec<u32>,
    counts: &mut [usize],
    out: &mut Vec<Surjection>,
) {
    let missing = counts.iter().filter(|&&c| c == 0).count();
    let remaining = n - current.len();
    if missing > remaining {
        return;
    }
    if remaining == 0 {
        out.push(Surjection(current.clone()));
        return;
    }
    for v in 0..k {
        if counts[v] == max_fiber {
            continue;
        }
        counts[v] += 1;
        current.push(v as u32 + 1);
        fill(n, k, max_fiber, current, counts, out);
        current.pop();
        counts[v] -= 1;
    }
}

/// `Sj_n`: every surjection out of `[n]`, lexicographic. `Sj_0` is the unit.
pub fn all_surjections(n: usize) -> Vec<Surjection> {
    if n == 0 {
        return vec![Surjection::unit()];
    }
    let mut out: Vec<Surjection> = (1..=n)
        .flat_map(|k| enumerate_surjections(n, k).expect("valid range"))
        .collect();
    out.sort();
    out
}

/// An ordered partition `A_1 ⨿ ... ⨿ A_k` of `[n]`, blocks kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedSetPartition {
    blocks: Vec<Vec<usize>>,
}

impl OrderedSetPartition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidParameter("ordered partition with an empty block".into()));
            }
            b.sort_unstable();
            for &p in b.iter() {
                if p == 0 || p > n || seen[p - 1] {
                    return Err(Error::InvalidParameter(format!(
                        "blocks {blocks:?} do not partition [{n}]"
                    )));
                }
                seen[p - 1] = true;
            }
        }
        Ok(OrderedSetPartition { blocks })
    }

    /// `f^{-1}(1) ⨿ ... ⨿ f^{-1}(k)`.
    pub fn from_surjection(f: &Surjection) -> Self {
        let mut blocks = vec![Vec::new(); f.rank()];
        for (pos, &v) in f.values().iter().enumerate() {
            blocks[v as usize - 1].push(pos + 1);
        }
        OrderedSetPartition { blocks }
    }

    /// The surjection sending every position to the index of its block.
    pub fn to_surjection(&self) -> Surjection {
        let mut values = vec![0u32; self.size()];
        for (i, b) in self.blocks.iter().enumerate() {
            for &p in b {
                values[p - 1] = i as u32 + 1;
            }
        }
        Surjection(values)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u32]) -> Surjection {
        Surjection::new(v.to_vec()).unwrap()
    }

    #[test]
    fn packing() {
        assert_eq!(pack(&[3, 5, 7, 3, 1]), s(&[2, 3, 4, 2, 1]));
        assert_eq!(pack(&[1, 2, 3]), s(&[1, 2, 3]));
        assert_eq!(pack(&[7, 7, 2]), s(&[2, 2, 1]));
        assert_eq!(pack(&[]), Surjection::unit());
    }

    #[test]
    fn validation() {
        assert!(Surjection::new(vec![1, 3]).is_err());
        assert!(Surjection::new(vec![0, 1]).is_err());
        assert!(Surjection::new(vec![]).unwrap().is_unit());
        assert_eq!(s(&[2, 1, 2]).rank(), 2);
        assert_eq!(s(&[2, 1, 2]).max_fiber(), 2);
    }

    #[test]
    fn enumeration_counts() {
        // Fubini numbers
        let sizes: Vec<usize> = (0..=5).map(|n| all_surjections(n).len()).collect();
        assert_eq!(sizes, vec![1, 1, 3, 13, 75, 541]);
        for n in 1..=5usize {
            let perms = enumerate_surjections(n, n).unwrap().len();
            assert_eq!(perms, (1..=n).product::<usize>());
        }
        assert_eq!(enumerate_surjections_bounded(3, 2, 2).unwrap().len(), 6);
        assert_eq!(enumerate_surjections_bounded(4, 2, 2).unwrap().len(), 6);
    }

    #[test]
    fn enumeration_rejects_bad_ranges() {
        assert!(enumerate_surjections(3, 0).is_err());
        assert!(enumerate_surjections(2, 3).is_err());
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all = enumerate_surjections(3, 2).unwrap();
        let texts: Vec<String> = all.iter().map(Surjection::to_text).collect();
        assert_eq!(texts, ["112", "121", "122", "211", "212", "221"]);
    }

    #[test]
    fn text_forms() {
        assert_eq!(s(&[2, 1, 2]).to_string(), "212");
        assert_eq!("(212)".parse::<Surjection>().unwrap(), s(&[2, 1, 2]));
        let big = s(&(1..=10).rev().collect::<Vec<u32>>());
        assert_eq!(big.to_text(), "(10,9,8,7,6,5,4,3,2,1)");
        assert_eq!(big.to_text().parse::<Surjection>().unwrap(), big);
        assert!("13".parse::<Surjection>().is_err());
    }

    #[test]
    fn ordered_partitions() {
        let f = s(&[2, 1, 2]);
        let p = OrderedSetPartition::from_surjection(&f);
        assert_eq!(p.blocks(), &[vec![2], vec![1, 3]]);
        assert_eq!(p.to_surjection(), f);
        assert!(OrderedSetPartition::new(vec![vec![1], vec![1]]).is_err());
        assert!(OrderedSetPartition::new(vec![vec![1], vec![]]).is_err());
        assert!(OrderedSetPartition::new(vec![vec![3], vec![1]]).is_err());
    }
}
