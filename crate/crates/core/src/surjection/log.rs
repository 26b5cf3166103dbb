//! The logarithm of the identity series `I = Σ_{n≥0} p_n` in `(Sj, ◇)`, its
//! exponential inverse, and the action of surjections on words.
//!
//! Three independent routes compute `log(I)` through a given grade:
//!
//! * [`log_identity_series`]: `Σ_k (-1)^{k-1}/k (I - 1)^{◇k}`;
//! * [`log_identity_subset_form`]: `Σ_n Σ_{I ⊆ [n-1]} (-1)^{|I|}/(|I|+1) D_{⊆I}^n`;
//! * [`log_identity_closed_form`]: every `f` of arity `n` weighted by
//!   `(-1)^{d(f)} / (n C(n-1, d(f)))`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::descent::{d_subseteq, descent_count};
use super::{all_surjections, Surjection, SurjElement};
use crate::coeff::{descent_coefficient, factorial};
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::limits::check_grade;
use crate::qshuffle::apply_values;
use crate::word::BracketWord;

fn check_order(max_grade: usize) -> Result<()> {
    if max_grade == 0 {
        return Err(Error::InvalidParameter("maximal grade must be at least 1".into()));
    }
    check_grade(max_grade)
}

/// `p_1 + ... + p_N`, the identity series without its unit.
pub fn identity_series(max_grade: usize) -> SurjElement {
    SurjElement::sum_of((1..=max_grade).map(Surjection::identity))
}

/// `log(1 + x) = Σ_k (-1)^{k-1}/k x^{◇k}` with `x = p_1 + ... + p_N`,
/// truncated at grade `N`.
pub fn log_identity_series(max_grade: usize) -> Result<SurjElement> {
    check_order(max_grade)?;
    let x = identity_series(max_grade);
    let mut power = x.clone();
    let mut out = SurjElement::zero();
    for k in 1..=max_grade {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out.add_assign_scaled(&power, &BigRational::new(BigInt::from(sign), BigInt::from(k)));
        if k < max_grade {
            power = power.diamond_truncated(&x, max_grade);
        }
    }
    Ok(out)
}

/// `Σ_{n≤N} Σ_f (-1)^{d(f)} / (n C(n-1, d(f))) f`.
pub fn log_identity_closed_form(max_grade: usize) -> Result<SurjElement> {
    check_order(max_grade)?;
    let mut out = SurjElement::zero();
    for n in 1..=max_grade {
        for f in all_surjections(n) {
            let c = descent_coefficient(n, descent_count(&f));
            out.add_term(f, c);
        }
    }
    Ok(out)
}

/// `Σ_{n≤N} Σ_{I⊆[n-1]} (-1)^{|I|}/(|I|+1) D_{⊆I}^n`.
pub fn log_identity_subset_form(max_grade: usize) -> Result<SurjElement> {
    check_order(max_grade)?;
    let mut out = SurjElement::zero();
    for n in 1..=max_grade {
        for mask in 0u32..(1 << (n - 1)) {
            let set: Vec<usize> = (0..n - 1).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
            let size = set.len() as i64;
            let sign = if size % 2 == 0 { 1 } else { -1 };
            let c = BigRational::new(BigInt::from(sign), BigInt::from(size + 1));
            out.add_assign_scaled(&d_subseteq(n, &set)?, &c);
        }
    }
    Ok(out)
}

/// `exp(e) = Σ_k e^{◇k}/k!` truncated at grade `N`; `e` must have no grade-0
/// term.
pub fn exp_element(e: &SurjElement, max_grade: usize) -> Result<SurjElement> {
    check_grade(max_grade)?;
    if !e.grade(0).is_zero() {
        return Err(Error::ConstantTerm);
    }
    let e = e.truncate(max_grade);
    let mut out = SurjElement::one();
    let mut power = SurjElement::one();
    // every term of e^k has grade >= k
    for k in 1..=max_grade {
        power = power.diamond_truncated(&e, max_grade);
        if power.is_zero() {
            break;
        }
        let inv = BigRational::new(BigInt::one(), factorial(k as u64));
        out.add_assign_scaled(&power, &inv);
    }
    Ok(out)
}

/// The bijection part of the closed-form logarithm: the coefficients of the
/// operator-product form of the classical continuous BCH series.
pub fn strichartz_restriction(max_grade: usize) -> Result<SurjElement> {
    Ok(log_identity_closed_form(max_grade)?.filter(Surjection::is_bijection))
}

/// `f(w)`: block `i` of the result is the bracket of the blocks of `w` sitting
/// at the positions of `f^{-1}(i)`. For singleton-block words this is the
/// usual action `f(a_1 ... a_n) = (∗_{j ∈ f^{-1}(1)} a_j) ... (∗_{j ∈ f^{-1}(k)} a_j)`.
pub fn apply_surjection(f: &Surjection, w: &BracketWord) -> Result<BracketWord> {
    if f.arity() != w.len() {
        return Err(Error::ArityMismatch { expected: f.arity(), found: w.len() });
    }
    Ok(apply_values(f.values(), w.blocks()))
}

/// Linear extension of [`apply_surjection`]; every term must have arity
/// `w.len()`.
pub fn apply_element(e: &SurjElement, w: &BracketWord) -> Result<Expansion> {
    let mut out = Expansion::zero();
    for (f, c) in e {
        out.add_term(apply_surjection(f, w)?, c.clone());
    }
    Ok(out)
}

/// `Σ_{set ⊆ J ⊆ [n-1]} (-1)^{|J|}/(|J|+1)`: the coefficient that the subset
/// form assigns to a surjection with descent set `set`.
pub fn superset_coefficient_sum(n: usize, set: &[usize]) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidParameter("arity must be at least 1".into()));
    }
    super::descent::check_subset(n, set)?;
    let free: Vec<usize> = (1..n).filter(|i| !set.contains(i)).collect();
    let mut sum = BigRational::from_integer(BigInt::from(0));
    for mask in 0u64..(1u64 << free.len()) {
        let size = set.len() + mask.count_ones() as usize;
        let sign = if size.is_multiple_of(2) { 1 } else { -1 };
        sum += BigRational::new(BigInt::from(sign), BigInt::from(size + 1));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};

    fn s(v: &[u32]) -> Surjection {
        Surjection::new(v.to_vec()).unwrap()
    }

    #[test]
    fn low_grades_of_the_series_log() {
        let log = log_identity_series(3).unwrap();
        assert_eq!(log.grade(1), SurjElement::from_surjection(s(&[1])));
        let mut g2 = SurjElement::zero();
        g2.add_term(s(&[1, 2]), rat(1, 2));
        g2.add_term(s(&[2, 1]), rat(-1, 2));
        g2.add_term(s(&[1, 1]), rat(-1, 2));
        assert_eq!(log.grade(2), g2);
        assert_eq!(log.coeff(&s(&[2, 2, 1])), rat(1, 3));
    }

    #[test]
    fn grade_three_matches_printed_list() {
        let log = log_identity_closed_form(3).unwrap();
        let third = [("123", rat(1, 3))]
            .into_iter()
            .chain(["213", "312", "112", "212", "132", "231", "122", "121"].map(|t| (t, rat(-1, 6))))
            .chain(["321", "211", "111", "221"].map(|t| (t, rat(1, 3))));
        let mut expected = SurjElement::zero();
        for (t, c) in third {
            expected.add_term(t.parse().unwrap(), c);
        }
        assert_eq!(log.grade(3), expected);
        assert_eq!(log.coeff(&s(&[2, 1, 2])), rat(-1, 6));
    }

    #[test]
    fn identity_coefficient_is_one_over_n() {
        let log = log_identity_closed_form(5).unwrap();
        for n in 1..=5 {
            assert_eq!(log.coeff(&Surjection::identity(n)), rat(1, n as i64));
        }
    }

    #[test]
    fn exp_of_zero_is_unit() {
        assert_eq!(exp_element(&SurjElement::zero(), 4).unwrap(), SurjElement::one());
        assert_eq!(exp_element(&SurjElement::one(), 4), Err(Error::ConstantTerm));
    }

    #[test]
    fn exp_of_grade_one_input() {
        let c = rat(2, 3);
        let e = exp_element(&SurjElement::monomial(s(&[1]), c.clone()), 2).unwrap();
        let mut expected = SurjElement::one();
        expected.add_term(s(&[1]), c.clone());
        for f in [s(&[1, 2]), s(&[2, 1]), s(&[1, 1])] {
            expected.add_term(f, &c * &c / int(2));
        }
        assert_eq!(e, expected);
    }

    #[test]
    fn exp_inverts_log() {
        let log = log_identity_closed_form(4).unwrap();
        let mut expected = identity_series(4);
        expected.add_term(Surjection::unit(), int(1));
        assert_eq!(exp_element(&log, 4).unwrap(), expected);
    }

    #[test]
    fn strichartz_low_orders() {
        let st = strichartz_restriction(3).unwrap();
        assert_eq!(st.grade(1), SurjElement::from_surjection(s(&[1])));
        let mut g2 = SurjElement::zero();
        g2.add_term(s(&[1, 2]), rat(1, 2));
        g2.add_term(s(&[2, 1]), rat(-1, 2));
        assert_eq!(st.grade(2), g2);
        assert_eq!(st.coeff(&s(&[3, 2, 1])), rat(1, 3));
        assert_eq!(st.grade(3).len(), 6);
    }

    #[test]
    fn caps_and_orders_are_checked() {
        assert!(log_identity_series(0).is_err());
        assert!(matches!(log_identity_closed_form(7), Err(Error::GradeCapExceeded { .. })));
        assert!(matches!(exp_element(&SurjElement::zero(), 7), Err(Error::GradeCapExceeded { .. })));
    }

    #[test]
    fn superset_sums_match_closed_form() {
        assert_eq!(superset_coefficient_sum(3, &[]).unwrap(), rat(1, 3));
        assert_eq!(superset_coefficient_sum(3, &[1]).unwrap(), rat(-1, 6));
        assert_eq!(superset_coefficient_sum(3, &[1, 2]).unwrap(), rat(1, 3));
        assert!(superset_coefficient_sum(3, &[3]).is_err());
    }

    #[test]
    fn surjection_action() {
        let w = BracketWord::from_letters(&[1, 2, 3, 4]).unwrap();
        assert_eq!(
            apply_surjection(&s(&[1, 2, 1, 2]), &w).unwrap(),
            BracketWord::from_blocks(&[&[1, 3], &[2, 4]]).unwrap()
        );
        assert_eq!(apply_surjection(&Surjection::identity(4), &w).unwrap(), w);
        assert_eq!(
            apply_surjection(&s(&[1, 2]), &w),
            Err(Error::ArityMismatch { expected: 2, found: 4 })
        );
    }
}
