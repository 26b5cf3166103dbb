use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{all_surjections, pack, Surjection};
use crate::coeff::{format_coeff, Coeff, CoeffJson};
use crate::error::{Error, Result};
use crate::limits::check_weight;
use crate::qshuffle::quasi_shuffle_surjections;

/// A finite linear combination of surjections; an element of `(Sj, ◇)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SurjElement {
    terms: BTreeMap<Surjection, Coeff>,
}

impl SurjElement {
    pub fn zero() -> Self {
        SurjElement::default()
    }

    /// The unit surjection of arity 0.
    pub fn one() -> Self {
        SurjElement::from_surjection(Surjection::unit())
    }

    pub fn from_surjection(f: Surjection) -> Self {
        SurjElement::monomial(f, Coeff::one())
    }

    pub fn monomial(f: Surjection, c: Coeff) -> Self {
        let mut e = SurjElement::zero();
        e.add_term(f, c);
        e
    }

    /// Sum with coefficient one of the given surjections.
    pub fn sum_of(fs: impl IntoIterator<Item = Surjection>) -> Self {
        let mut e = SurjElement::zero();
        for f in fs {
            e.add_term(f, Coeff::one());
        }
        e
    }

    pub fn add_term(&mut self, f: Surjection, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(f) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &SurjElement, s: &Coeff) {
        if s.is_zero() {
            return;
        }
        for (f, c) in &other.terms {
            self.add_term(f.clone(), c * s);
        }
    }

    pub fn add(&self, other: &SurjElement) -> SurjElement {
        let mut e = self.clone();
        e.add_assign_scaled(other, &Coeff::one());
        e
    }

    pub fn sub(&self, other: &SurjElement) -> SurjElement {
        let mut e = self.clone();
        e.add_assign_scaled(other, &-Coeff::one());
        e
    }

    pub fn scale(&self, s: &Coeff) -> SurjElement {
        let mut e = SurjElement::zero();
        e.add_assign_scaled(self, s);
        e
    }

    pub fn coeff(&self, f: &Surjection) -> Coeff {
        self.terms.get(f).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Surjection, Coeff> {
        self.terms.iter()
    }

    pub fn filter(&self, mut keep: impl FnMut(&Surjection) -> bool) -> SurjElement {
        SurjElement {
            terms: self
                .terms
                .iter()
                .filter(|(f, _)| keep(f))
                .map(|(f, c)| (f.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous component of arity `n`.
    pub fn grade(&self, n: usize) -> SurjElement {
        self.filter(|f| f.arity() == n)
    }

    pub fn truncate(&self, max_grade: usize) -> SurjElement {
        self.filter(|f| f.arity() <= max_grade)
    }

    pub fn max_grade(&self) -> usize {
        self.terms.keys().map(Surjection::arity).max().unwrap_or(0)
    }

    /// Grades carrying at least one term, ascending.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(Surjection::arity).collect();
        g.dedup();
        g
    }

    /// Bilinear `◇` product.
    pub fn diamond(&self, other: &SurjElement) -> Result<SurjElement> {
        check_weight(self.max_grade() + other.max_grade())?;
        Ok(self.diamond_truncated(other, usize::MAX))
    }

    /// `◇` product keeping only the terms of grade at most `max_grade`.
    pub fn diamond_truncated(&self, other: &SurjElement, max_grade: usize) -> SurjElement {
        let mut out = SurjElement::zero();
        for (f, cf) in &self.terms {
            for (g, cg) in &other.terms {
                if f.arity() + g.arity() > max_grade {
                    continue;
                }
                let c = cf * cg;
                for h in merge_products(f, g) {
                    out.add_term(h, c.clone());
                }
            }
        }
        out
    }

    /// One object `{ "grade": n, "terms": [...] }` per nonzero grade.
    pub fn to_graded_json(&self) -> Vec<GradedJson> {
        self.grades()
            .into_iter()
            .map(|n| GradedJson {
                grade: n,
                terms: self
                    .terms
                    .iter()
                    .filter(|(f, _)| f.arity() == n)
                    .map(|(f, c)| SurjTermJson { f: f.values().to_vec(), coeff: CoeffJson::from(c) })
                    .collect(),
            })
            .collect()
    }

    pub fn from_graded_json(parts: &[GradedJson]) -> Result<SurjElement> {
        let mut e = SurjElement::zero();
        for part in parts {
            for t in &part.terms {
                let f = Surjection::new(t.f.clone())?;
                if f.arity() != part.grade {
                    return Err(Error::ArityMismatch { expected: part.grade, found: f.arity() });
                }
                if e.terms.contains_key(&f) {
                    return Err(Error::Format(format!("duplicate surjection {f}")));
                }
                e.add_term(f, Coeff::try_from(&t.coeff)?);
            }
        }
        Ok(e)
    }

    /// Text form in the `1/3 (123) - 1/6 (213) + ...` notation.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (f, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push(' ');
                out.push_str(sign);
                out.push(' ');
            }
            let abs = c.abs();
            if !abs.is_one() {
                out.push_str(&format_coeff(&abs));
                out.push(' ');
            }
            let t = f.to_text();
            if t.starts_with('(') {
                out.push_str(&t);
            } else {
                out.push('(');
                out.push_str(&t);
                out.push(')');
            }
        }
        out
    }
}

impl fmt::Display for SurjElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> IntoIterator for &'a SurjElement {
    type Item = (&'a Surjection, &'a Coeff);
    type IntoIter = btree_map::Iter<'a, Surjection, Coeff>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjTermJson {
    pub f: Vec<u32>,
    pub coeff: CoeffJson,
}

/// `{ "grade": n, "terms": [ { "f": [2,1,2], "coeff": {"num":"-1","den":"6"} } ] }`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedJson {
    pub grade: usize,
    pub terms: Vec<SurjTermJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiamondStrategy {
    /// Direct enumeration of order-preserving merges of the two patterns.
    #[default]
    Merge,
    /// Filter all of `Sj_{n+m}` by the packing conditions. Test oracle.
    BruteForce,
}

/// `f ◇ g`: the sum of all `h` with `pack(h|first n) = f` and
/// `pack(h|last m) = g`.
pub fn diamond(f: &Surjection, g: &Surjection) -> Result<SurjElement> {
    diamond_with(f, g, DiamondStrategy::Merge)
}

pub fn diamond_with(f: &Surjection, g: &Surjection, strategy: DiamondStrategy) -> Result<SurjElement> {
    check_weight(f.arity() + g.arity())?;
    Ok(match strategy {
        DiamondStrategy::Merge => SurjElement::sum_of(merge_products(f, g)),
        DiamondStrategy::BruteForce => SurjElement::sum_of(
            all_surjections(f.arity() + g.arity()).into_iter().filter(|h| {
                let (left, right) = h.values().split_at(f.arity());
                pack(left) == *f && pack(right) == *g
            }),
        ),
    })
}

/// An `h` in `f ◇ g` is fixed by where the value sets of `f` and `g` land in
/// `[K]`: a pair of increasing injections `[k] → [K]`, `[l] → [K]` that jointly
/// cover `[K]`. These are exactly the quasi-shuffle surjections of `(k, l)`.
fn merge_products<'a>(f: &'a Surjection, g: &'a Surjection) -> impl Iterator<Item = Surjection> + 'a {
    let (k, l) = (f.rank(), g.rank());
    quasi_shuffle_surjections(k, l).into_iter().map(move |merge| {
        let values = f
            .values()
            .iter()
            .map(|&v| merge[v as usize - 1])
            .chain(g.values().iter().map(|&v| merge[k + v as usize - 1]))
            .collect();
        Surjection::new_unchecked(values)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::int;

    fn s(v: &[u32]) -> Surjection {
        Surjection::new(v.to_vec()).unwrap()
    }

    #[test]
    fn smallest_product() {
        let p = diamond(&s(&[1]), &s(&[1])).unwrap();
        assert_eq!(p, SurjElement::sum_of([s(&[1, 2]), s(&[2, 1]), s(&[1, 1])]));
    }

    #[test]
    fn two_by_two_has_thirteen_terms() {
        let p = diamond(&s(&[1, 2]), &s(&[1, 2])).unwrap();
        assert_eq!(p.len(), 13);
        assert_eq!(p, diamond_with(&s(&[1, 2]), &s(&[1, 2]), DiamondStrategy::BruteForce).unwrap());
    }

    #[test]
    fn unit_is_neutral() {
        let f = SurjElement::from_surjection(s(&[2, 1, 2]));
        assert_eq!(SurjElement::one().diamond(&f).unwrap(), f);
        assert_eq!(f.diamond(&SurjElement::one()).unwrap(), f);
    }

    #[test]
    fn small_associativity_instance() {
        let x = SurjElement::from_surjection(s(&[1]));
        let left = x.diamond(&x).unwrap().diamond(&x).unwrap();
        let right = x.diamond(&x.diamond(&x).unwrap()).unwrap();
        assert_eq!(left, right);
        assert_eq!(left.len(), 13);
    }

    #[test]
    fn product_is_not_commutative() {
        let a = SurjElement::from_surjection(s(&[1, 2]));
        let b = SurjElement::from_surjection(s(&[1]));
        assert_ne!(a.diamond(&b).unwrap(), b.diamond(&a).unwrap());
    }

    #[test]
    fn merge_matches_brute_force() {
        for n in 0..=3 {
            for m in 0..=3 {
                for f in all_surjections(n) {
                    for g in all_surjections(m) {
                        assert_eq!(
                            diamond(&f, &g).unwrap(),
                            diamond_with(&f, &g, DiamondStrategy::BruteForce).unwrap(),
                            "{f} ◇ {g}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn text_and_json() {
        let mut e = SurjElement::zero();
        e.add_term(s(&[1, 2]), crate::coeff::rat(1, 2));
        e.add_term(s(&[2, 1]), crate::coeff::rat(-1, 2));
        e.add_term(s(&[1, 1]), crate::coeff::rat(-1, 2));
        assert_eq!(e.to_text(), "-1/2 (11) + 1/2 (12) - 1/2 (21)");
        let j = serde_json::to_string(&e.to_graded_json()).unwrap();
        assert!(j.starts_with(r#"[{"grade":2,"terms":[{"f":[1,1],"coeff":{"num":"-1","den":"2"}}"#));
        let parts: Vec<GradedJson> = serde_json::from_str(&j).unwrap();
        assert_eq!(SurjElement::from_graded_json(&parts).unwrap(), e);
        assert_eq!(SurjElement::monomial(s(&[1]), int(2)).to_text(), "2 (1)");
    }
}
