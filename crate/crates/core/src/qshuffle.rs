//! The quasi-shuffle product on bracket words.
//!
//! With `u = u' a` and `v = v' b` (last blocks `a`, `b`):
//!
//! ```text
//! u ↑ v = (u' ⨝ v) a
//! u ↓ v = (u ⨝ v') b
//! u • v = (u' ⨝ v') (a ⋆ b)
//! u ⨝ v = u ↑ v + u ↓ v + u • v,     1 ⨝ u = u ⨝ 1 = u
//! ```
//!
//! The same product is a sum over surjections `f: [n+m] ↠ [k]` that are
//! increasing on the first `n` and on the last `m` positions, applied to the
//! concatenated word. Both routes are implemented; they must agree exactly.

use num_traits::One;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::limits::check_weight;
use crate::word::{Block, BracketWord};

/// `u ⨝ v` by the half-shuffle recursion.
pub fn qsh(u: &BracketWord, v: &BracketWord) -> Result<Expansion> {
    check_weight(u.weight() + v.weight())?;
    let mut out = Expansion::zero();
    let mut suffix = Vec::new();
    recurse(u.blocks(), v.blocks(), &mut suffix, &mut out);
    Ok(out)
}

/// Builds every word of `u ⨝ v` right to left; `suffix` holds the blocks
/// already placed, in reverse order.
fn recurse(u: &[Block], v: &[Block], suffix: &mut Vec<Block>, out: &mut Expansion) {
    if u.is_empty() || v.is_empty() {
        let rest = if u.is_empty() { v } else { u };
        let mut blocks = Vec::with_capacity(rest.len() + suffix.len());
        blocks.extend_from_slice(rest);
        blocks.extend(suffix.iter().rev().cloned());
        out.add_term(BracketWord::new(blocks), Coeff::one());
        return;
    }
    let (u_init, a) = (&u[..u.len() - 1], &u[u.len() - 1]);
    let (v_init, b) = (&v[..v.len() - 1], &v[v.len() - 1]);

    suffix.push(a.clone());
    recurse(u_init, v, suffix, out);
    suffix.pop();

    suffix.push(b.clone());
    recurse(u, v_init, suffix, out);
    suffix.pop();

    suffix.push(a.product(b));
    recurse(u_init, v_init, suffix, out);
    suffix.pop();
}

/// Bilinear extension of [`qsh`].
pub fn qsh_expansions(x: &Expansion, y: &Expansion) -> Result<Expansion> {
    check_weight(x.max_weight() + y.max_weight())?;
    let mut out = Expansion::zero();
    for (u, cu) in x {
        for (v, cv) in y {
            out.add_assign_scaled(&qsh(u, v)?, &(cu * cv));
        }
    }
    Ok(out)
}

/// Like [`qsh_expansions`] but drops every product whose weight exceeds
/// `max_weight` before computing it.
pub fn qsh_expansions_truncated(x: &Expansion, y: &Expansion, max_weight: usize) -> Result<Expansion> {
    let mut out = Expansion::zero();
    for (u, cu) in x {
        for (v, cv) in y {
            if u.weight() + v.weight() <= max_weight {
                out.add_assign_scaled(&qsh(u, v)?, &(cu * cv));
            }
        }
    }
    Ok(out)
}

fn split_last(w: &BracketWord) -> Result<(BracketWord, &Block)> {
    match w.last() {
        Some(last) => Ok((w.init(), last)),
        None => Err(Error::EmptyOperand),
    }
}

fn append(e: &Expansion, block: &Block) -> Expansion {
    e.map_words(|w| Some(w.with_last(block.clone())))
}

/// `u ↑ v = (u' ⨝ v) a`: the last block of `u` is integrated last.
pub fn half_up(u: &BracketWord, v: &BracketWord) -> Result<Expansion> {
    let (u_init, a) = split_last(u)?;
    if v.is_empty() {
        return Err(Error::EmptyOperand);
    }
    Ok(append(&qsh(&u_init, v)?, a))
}

/// `u ↓ v = (u ⨝ v') b`: the last block of `v` is integrated last.
pub fn half_down(u: &BracketWord, v: &BracketWord) -> Result<Expansion> {
    let (v_init, b) = split_last(v)?;
    if u.is_empty() {
        return Err(Error::EmptyOperand);
    }
    Ok(append(&qsh(u, &v_init)?, b))
}

/// `u • v = (u' ⨝ v') (a ⋆ b)`.
pub fn bullet(u: &BracketWord, v: &BracketWord) -> Result<Expansion> {
    let (u_init, a) = split_last(u)?;
    let (v_init, b) = split_last(v)?;
    Ok(append(&qsh(&u_init, &v_init)?, &a.product(b)))
}

/// All value sequences `(f(1), ..., f(n+m))` of surjections onto `[k]`,
/// `max(n, m) <= k <= n + m`, strictly increasing on the first `n` and on the
/// last `m` positions. Ordered by `k`, then by the image sets.
pub fn quasi_shuffle_surjections(n: usize, m: usize) -> Vec<Vec<u32>> {
    assert!(n + m < 32, "quasi-shuffle surjections limited to n + m < 32");
    let mut out = Vec::new();
    if n + m == 0 {
        out.push(Vec::new());
        return out;
    }
    for k in n.max(m)..=n + m {
        let full: u32 = (1u32 << k) - 1;
        let firsts = masks_with_popcount(k, n);
        let seconds = masks_with_popcount(k, m);
        for &a in &firsts {
            for &b in &seconds {
                if a | b != full {
                    continue;
                }
                let mut values = Vec::with_capacity(n + m);
                values.extend(bits(a));
                values.extend(bits(b));
                out.push(values);
            }
        }
    }
    out
}

fn masks_with_popcount(k: usize, ones: usize) -> Vec<u32> {
    (0u32..(1u32 << k)).filter(|m| m.count_ones() as usize == ones).collect()
}

/// 1-based positions of the set bits, ascending.
fn bits(mask: u32) -> impl Iterator<Item = u32> {
    (0..32).filter(move |i| mask & (1 << i) != 0).map(|i| i + 1)
}

/// `f(w)`: block `i` of the result is the bracket of the blocks of `w` at the
/// positions in `f^{-1}(i)`. `values` must be a surjection onto `[k]`.
pub(crate) fn apply_values(values: &[u32], w: &[Block]) -> BracketWord {
    debug_assert_eq!(values.len(), w.len());
    let k = values.iter().copied().max().unwrap_or(0) as usize;
    let mut blocks: Vec<Option<Block>> = vec![None; k];
    for (pos, &v) in values.iter().enumerate() {
        let slot = &mut blocks[v as usize - 1];
        *slot = Some(match slot.take() {
            None => w[pos].clone(),
            Some(b) => b.product(&w[pos]),
        });
    }
    BracketWord::new(blocks.into_iter().map(|b| b.expect("surjective")).collect())
}

/// `u ⨝ v` as the sum of `f(uv)` over the admissible surjections.
pub fn qsh_via_surjections(u: &BracketWord, v: &BracketWord) -> Result<Expansion> {
    check_weight(u.weight() + v.weight())?;
    let uv = u.concat(v);
    let mut out = Expansion::zero();
    for f in quasi_shuffle_surjections(u.len(), v.len()) {
        out.add_term(apply_values(&f, uv.blocks()), Coeff::one());
    }
    Ok(out)
}

/// Drops every term containing a bracket block, leaving the shuffle part.
pub fn shuffle_projection(e: &Expansion) -> Expansion {
    e.filter(BracketWord::has_singleton_blocks)
}

/// The classical shuffle product through the first-letter recursion
/// `au ш bv = a(u ш bv) + b(au ш v)`.
pub fn shuffle(u: &BracketWord, v: &BracketWord) -> Result<Expansion> {
    check_weight(u.weight() + v.weight())?;
    let mut out = Expansion::zero();
    let mut prefix = Vec::new();
    shuffle_rec(u.blocks(), v.blocks(), &mut prefix, &mut out);
    Ok(out)
}

fn shuffle_rec(u: &[Block], v: &[Block], prefix: &mut Vec<Block>, out: &mut Expansion) {
    if u.is_empty() || v.is_empty() {
        let mut blocks = prefix.clone();
        blocks.extend_from_slice(if u.is_empty() { v } else { u });
        out.add_term(BracketWord::new(blocks), Coeff::one());
        return;
    }
    prefix.push(u[0].clone());
    shuffle_rec(&u[1..], v, prefix, out);
    prefix.pop();
    prefix.push(v[0].clone());
    shuffle_rec(u, &v[1..], prefix, out);
    prefix.pop();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::int;

    fn w(blocks: &[&[u32]]) -> BracketWord {
        BracketWord::from_blocks(blocks).unwrap()
    }

    fn sum(words: &[BracketWord]) -> Expansion {
        Expansion::from_terms(words.iter().map(|x| (x.clone(), int(1))))
    }

    // a1 a2 b1 b2 = letters 1 2 3 4
    fn printed_two_by_two() -> Expansion {
        sum(&[
            w(&[&[3], &[4], &[1], &[2]]),
            w(&[&[1], &[3], &[4], &[2]]),
            w(&[&[3], &[1], &[4], &[2]]),
            w(&[&[1], &[2], &[3], &[4]]),
            w(&[&[3], &[1], &[2], &[4]]),
            w(&[&[1], &[3], &[2], &[4]]),
            w(&[&[3], &[1, 4], &[2]]),
            w(&[&[1, 3], &[4], &[2]]),
            w(&[&[1], &[2, 3], &[4]]),
            w(&[&[1, 3], &[2], &[4]]),
            w(&[&[1], &[3], &[2, 4]]),
            w(&[&[3], &[1], &[2, 4]]),
            w(&[&[1, 3], &[2, 4]]),
        ])
    }

    #[test]
    fn two_by_two_product_matches_printed_sum() {
        let u = w(&[&[1], &[2]]);
        let v = w(&[&[3], &[4]]);
        let p = qsh(&u, &v).unwrap();
        assert_eq!(p.len(), 13);
        assert_eq!(p, printed_two_by_two());
        assert_eq!(qsh_via_surjections(&u, &v).unwrap(), p);
    }

    #[test]
    fn two_by_one_product() {
        let p = qsh(&w(&[&[1], &[2]]), &w(&[&[3]])).unwrap();
        let expected = sum(&[
            w(&[&[1], &[2], &[3]]),
            w(&[&[1], &[3], &[2]]),
            w(&[&[3], &[1], &[2]]),
            w(&[&[1, 3], &[2]]),
            w(&[&[1], &[2, 3]]),
        ]);
        assert_eq!(p, expected);
    }

    #[test]
    fn unit_word_is_neutral() {
        let u = w(&[&[1, 2], &[3]]);
        let e = BracketWord::empty();
        assert_eq!(qsh(&e, &u).unwrap(), Expansion::from_word(u.clone()));
        assert_eq!(qsh(&u, &e).unwrap(), Expansion::from_word(u.clone()));
        assert_eq!(qsh(&e, &e).unwrap(), Expansion::one());
        assert_eq!(qsh_via_surjections(&e, &u).unwrap(), Expansion::from_word(u));
    }

    #[test]
    fn half_shuffles_on_letters() {
        let a = w(&[&[1]]);
        let b = w(&[&[2]]);
        assert_eq!(half_up(&a, &b).unwrap(), Expansion::from_word(w(&[&[2], &[1]])));
        assert_eq!(half_down(&a, &b).unwrap(), Expansion::from_word(w(&[&[1], &[2]])));
        assert_eq!(bullet(&a, &b).unwrap(), Expansion::from_word(w(&[&[1, 2]])));
        let ab = w(&[&[1], &[2]]);
        let c = w(&[&[3]]);
        assert_eq!(half_down(&ab, &c).unwrap(), Expansion::from_word(w(&[&[1], &[2], &[3]])));
    }

    #[test]
    fn half_shuffles_reject_unit() {
        let a = w(&[&[1]]);
        let e = BracketWord::empty();
        assert_eq!(half_up(&e, &a), Err(Error::EmptyOperand));
        assert_eq!(half_up(&a, &e), Err(Error::EmptyOperand));
        assert_eq!(half_down(&a, &e), Err(Error::EmptyOperand));
        assert_eq!(half_down(&e, &a), Err(Error::EmptyOperand));
        assert_eq!(bullet(&e, &a), Err(Error::EmptyOperand));
    }

    #[test]
    fn surjections_of_lengths_one_one() {
        assert_eq!(
            quasi_shuffle_surjections(1, 1),
            vec![vec![1, 1], vec![1, 2], vec![2, 1]]
        );
    }

    #[test]
    fn surjection_acts_by_bracketing_fibres() {
        let word = w(&[&[1], &[2], &[3], &[4]]);
        assert_eq!(apply_values(&[1, 2, 1, 2], word.blocks()), w(&[&[1, 3], &[2, 4]]));
    }

    #[test]
    fn shuffle_projection_keeps_shuffles() {
        let u = w(&[&[1], &[2]]);
        let v = w(&[&[3], &[4]]);
        let proj = shuffle_projection(&qsh(&u, &v).unwrap());
        assert_eq!(proj.len(), 6);
        assert_eq!(proj, shuffle(&u, &v).unwrap());
        assert!(shuffle_projection(&Expansion::from_word(w(&[&[1, 2]]))).is_zero());
        assert_eq!(shuffle(&u, &w(&[&[3]])).unwrap().len(), 3);
    }

    #[test]
    fn weight_cap_is_enforced() {
        let u = BracketWord::from_letters(&[1, 2, 3, 4, 5]).unwrap();
        let v = BracketWord::from_letters(&[1, 2, 3, 4]).unwrap();
        assert!(matches!(qsh(&u, &v), Err(Error::WeightCapExceeded { weight: 9, .. })));
        assert!(qsh_via_surjections(&u, &v).is_err());
    }

    #[test]
    fn repeated_letters_collect_multiplicities() {
        // (1) ⨝ (1) = 2 (1)(1) + ([1,1])
        let a = w(&[&[1]]);
        let p = qsh(&a, &a).unwrap();
        assert_eq!(p.coeff(&w(&[&[1], &[1]])), int(2));
        assert_eq!(p.coeff(&w(&[&[1, 1]])), int(1));
        assert_eq!(p.len(), 2);
    }
}
