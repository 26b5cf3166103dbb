//! Descent statistics and the embedding of noncommutative symmetric
//! functions into `Sj`.

use super::{all_surjections, Surjection, SurjElement};
use crate::error::{Error, Result};

/// Positions `i < n` (1-based) with `f(i) >= f(i+1)`. Equal neighbours count.
pub fn descent_set(f: &Surjection) -> Vec<usize> {
    f.values()
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] >= w[1])
        .map(|(i, _)| i + 1)
        .collect()
}

pub fn descent_count(f: &Surjection) -> usize {
    f.values().windows(2).filter(|w| w[0] >= w[1]).count()
}

pub(super) fn check_subset(n: usize, set: &[usize]) -> Result<()> {
    let ok = set.windows(2).all(|w| w[0] < w[1]) && set.iter().all(|&i| i >= 1 && i < n);
    if !ok {
        return Err(Error::InvalidDescentSet { n, set: set.to_vec() });
    }
    Ok(())
}

/// `D_I^n`: sum of the surjections of arity `n` whose descent set is exactly
/// `set` (strictly increasing positions in `[n-1]`).
pub fn d_subset(n: usize, set: &[usize]) -> Result<SurjElement> {
    check_subset(n, set)?;
    Ok(SurjElement::sum_of(
        all_surjections(n).into_iter().filter(|f| descent_set(f) == set),
    ))
}

/// `D_{⊆I}^n`: sum of the surjections of arity `n` whose descents all lie in
/// `set`.
pub fn d_subseteq(n: usize, set: &[usize]) -> Result<SurjElement> {
    check_subset(n, set)?;
    Ok(SurjElement::sum_of(
        all_surjections(n)
            .into_iter()
            .filter(|f| descent_set(f).iter().all(|d| set.contains(d))),
    ))
}

/// A composition `(n_1, ..., n_k)`, indexing the basis `1_{n_1} ∗ ... ∗ 1_{n_k}`
/// of the noncommutative symmetric functions. The empty composition is the unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidParameter(format!("composition {parts:?} has a zero part")));
        }
        Ok(Composition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// The product `1_{n̄} ∗ 1_{m̄} = 1_{n̄ m̄}`.
    pub fn concat(&self, other: &Composition) -> Composition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Composition(parts)
    }

    /// Partial sums `n_1, n_1 + n_2, ..., n_1 + ... + n_{k-1}`.
    pub fn descent_positions(&self) -> Vec<usize> {
        let mut acc = 0;
        let mut out = Vec::new();
        for &p in self.0.iter().take(self.0.len().saturating_sub(1)) {
            acc += p;
            out.push(acc);
        }
        out
    }

    /// Every composition of `n`, in lexicographic order.
    pub fn all_of(n: usize) -> Vec<Composition> {
        if n == 0 {
            return vec![Composition(Vec::new())];
        }
        let mut out = Vec::new();
        for first in 1..=n {
            for rest in Composition::all_of(n - first) {
                let mut parts = vec![first];
                parts.extend(rest.0);
                out.push(Composition(parts));
            }
        }
        out
    }
}

/// `ι(1_{n̄}) = D_{⊆{n_1, n_1+n_2, ...}}` in grade `n_1 + ... + n_k`.
pub fn iota(c: &Composition) -> Result<SurjElement> {
    if c.parts().is_empty() {
        return Ok(SurjElement::one());
    }
    d_subseteq(c.size(), &c.descent_positions())
}
