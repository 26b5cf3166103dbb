//! Iterated integrals of a matrix of semimartingales `M = (M^{i,j})`.
//!
//! The solution of `dX = X dM`, `X_0 = Id`, is `X = Σ_n ∫M^n` where the
//! `(a,b)` entry of `∫M^n` is the sum over contraction indices of
//! `∫ M^{a,c_1} M^{c_1,c_2} ... M^{c_{n-1},b}`. Entries are expansions over
//! pair letters: `M^{i,j}` is the letter `(i-1)·dim + j`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff::{format_coeff, int, is_negative, Coeff};
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::limits::check_grade;
use crate::qshuffle::qsh_expansions_truncated;
use crate::surjection::{apply_element, log_identity_closed_form, SurjElement};
use crate::word::{Block, BracketWord, Letter};

/// The letter standing for `M^{i,j}` (1-based indices).
pub fn pair_letter(dim: usize, i: usize, j: usize) -> Result<Letter> {
    if i == 0 || j == 0 || i > dim || j > dim {
        return Err(Error::InvalidParameter(format!("entry ({i},{j}) outside a {dim}x{dim} matrix")));
    }
    Letter::new(((i - 1) * dim + j) as u32)
}

/// Inverse of [`pair_letter`].
pub fn decode_pair_letter(dim: usize, l: Letter) -> Result<(usize, usize)> {
    let id = l.id() as usize;
    if dim == 0 || id > dim * dim {
        return Err(Error::InvalidLetter(l.id()));
    }
    Ok(((id - 1) / dim + 1, (id - 1) % dim + 1))
}

/// A square matrix whose entries are expansions over pair letters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixExpansion {
    pub dim: usize,
    pub entries: Vec<Vec<Expansion>>,
}

impl MatrixExpansion {
    pub fn zero(dim: usize) -> Self {
        MatrixExpansion { dim, entries: vec![vec![Expansion::zero(); dim]; dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = MatrixExpansion::zero(dim);
        for i in 0..dim {
            m.entries[i][i] = Expansion::one();
        }
        m
    }

    /// Entry `(i, j)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &Expansion {
        &self.entries[i - 1][j - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Expansion::is_zero)
    }

    /// Checks squareness and that every letter is a pair letter.
    pub fn validate(&self) -> Result<()> {
        if self.entries.len() != self.dim || self.entries.iter().any(|r| r.len() != self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, found: self.entries.len() });
        }
        for e in self.entries.iter().flatten() {
            for w in e.words() {
                for b in w.blocks() {
                    for &l in b.letters() {
                        decode_pair_letter(self.dim, l)?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &MatrixExpansion) -> MatrixExpansion {
        self.zip(other, Expansion::add)
    }

    pub fn sub(&self, other: &MatrixExpansion) -> MatrixExpansion {
        self.zip(other, Expansion::sub)
    }

    pub fn scale(&self, c: &Coeff) -> MatrixExpansion {
        self.map(|e| e.scale(c))
    }

    /// Keeps the terms of weight at most `weight`.
    pub fn truncate(&self, weight: usize) -> MatrixExpansion {
        self.map(|e| e.truncate(weight))
    }

    /// Keeps the terms of weight exactly `weight`.
    pub fn homogeneous(&self, weight: usize) -> MatrixExpansion {
        self.map(|e| e.homogeneous(weight))
    }

    /// `(XY)_{ab} = Σ_c X_{ac} ⨝ Y_{cb}`, dropping every term heavier than
    /// `max_weight`.
    pub fn mul_truncated(&self, other: &MatrixExpansion, max_weight: usize) -> Result<MatrixExpansion> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut out = MatrixExpansion::zero(self.dim);
        for a in 0..self.dim {
            for b in 0..self.dim {
                let mut acc = Expansion::zero();
                for c in 0..self.dim {
                    let p = qsh_expansions_truncated(&self.entries[a][c], &other.entries[c][b], max_weight)?;
                    acc = acc.add(&p);
                }
                out.entries[a][b] = acc;
            }
        }
        Ok(out)
    }

    /// One line per nonzero entry: `(1,2): I_{M11 M12} + ...`.
    pub fn to_text(&self) -> String {
        let mut lines = Vec::new();
        for (a, row) in self.entries.iter().enumerate() {
            for (b, e) in row.iter().enumerate() {
                if !e.is_zero() {
                    lines.push(format!("({},{}): {}", a + 1, b + 1, entry_text(self.dim, e)));
                }
            }
        }
        if lines.is_empty() {
            return "0".into();
        }
        lines.join("\n")
    }

    fn map(&self, f: impl Fn(&Expansion) -> Expansion) -> MatrixExpansion {
        MatrixExpansion {
            dim: self.dim,
            entries: self.entries.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    fn zip(&self, other: &MatrixExpansion, f: impl Fn(&Expansion, &Expansion) -> Expansion) -> MatrixExpansion {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        MatrixExpansion {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(r, s)| r.iter().zip(s).map(|(x, y)| f(x, y)).collect())
                .collect(),
        }
    }
}

impl fmt::Display for MatrixExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn letter_text(dim: usize, l: Letter) -> String {
    match decode_pair_letter(dim, l) {
        Ok((i, j)) if dim <= 9 => format!("M{i}{j}"),
        Ok((i, j)) => format!("M({i},{j})"),
        Err(_) => format!("?{}", l.id()),
    }
}

/// `I_{M12 [M11,M22]}` style rendering of a pair-letter word.
pub fn pair_word_symbol(dim: usize, w: &BracketWord) -> String {
    let parts: Vec<String> = w
        .blocks()
        .iter()
        .map(|b| {
            let names: Vec<String> = b.letters().iter().map(|&l| letter_text(dim, l)).collect();
            if names.len() == 1 {
                names[0].clone()
            } else {
                format!("[{}]", names.join(","))
            }
        })
        .collect();
    format!("I_{{{}}}", parts.join(" "))
}

fn entry_text(dim: usize, e: &Expansion) -> String {
    let mut out = String::new();
    for (i, (w, c)) in e.iter().enumerate() {
        let neg = is_negative(c);
        let abs = c.abs();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if w.is_empty() {
            out.push_str(&format_coeff(&abs));
            continue;
        }
        if !abs.is_one() {
            out.push_str(&format_coeff(&abs));
            out.push(' ');
        }
        out.push_str(&pair_word_symbol(dim, w));
    }
    out
}

/// Every word `M^{a,c_1} M^{c_1,c_2} ... M^{c_{n-1},b}` (singleton blocks),
/// in lexicographic order of the contraction indices.
pub fn contraction_words(dim: usize, n: usize, a: usize, b: usize) -> Result<Vec<BracketWord>> {
    pair_letter(dim, a, b)?;
    if n == 0 {
        return Ok(if a == b { vec![BracketWord::empty()] } else { Vec::new() });
    }
    let mut out = Vec::new();
    let mut path = vec![a];
    contract(dim, n, b, &mut path, &mut out)?;
    Ok(out)
}

fn contract(dim: usize, n: usize, b: usize, path: &mut Vec<usize>, out: &mut Vec<BracketWord>) -> Result<()> {
    if path.len() == n {
        let mut ends = path.clone();
        ends.push(b);
        let blocks = ends
            .windows(2)
            .map(|p| pair_letter(dim, p[0], p[1]).map(Block::singleton))
            .collect::<Result<Vec<_>>>()?;
        out.push(BracketWord::new(blocks));
        return Ok(());
    }
    for c in 1..=dim {
        path.push(c);
        contract(dim, n, b, path, out)?;
        path.pop();
    }
    Ok(())
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidParameter("matrix dimension must be at least 1".into()));
    }
    Ok(())
}

/// `Σ_{n ≤ order} ∫M^n`, the truncated solution of `dX = X dM`.
pub fn matrix_ito_taylor(dim: usize, order: usize) -> Result<MatrixExpansion> {
    check_dim(dim)?;
    check_grade(order)?;
    let mut m = MatrixExpansion::zero(dim);
    for a in 1..=dim {
        for b in 1..=dim {
            let mut e = Expansion::zero();
            for n in 0..=order {
                for w in contraction_words(dim, n, a, b)? {
                    e.add_term(w, Coeff::one());
                }
            }
            m.entries[a - 1][b - 1] = e;
        }
    }
    Ok(m)
}

/// `log X = Σ_n Σ_f (-1)^{d(f)} / (n C(n-1, d(f))) f(∫M^n)` through `order`.
pub fn matrix_log(dim: usize, order: usize) -> Result<MatrixExpansion> {
    check_dim(dim)?;
    check_grade(order)?;
    let mut m = MatrixExpansion::zero(dim);
    if order == 0 {
        return Ok(m);
    }
    let log = log_identity_closed_form(order)?;
    let grades: Vec<SurjElement> = (0..=order).map(|n| log.grade(n)).collect();
    for a in 1..=dim {
        for b in 1..=dim {
            let mut e = Expansion::zero();
            for (n, part) in grades.iter().enumerate().skip(1) {
                for w in contraction_words(dim, n, a, b)? {
                    e = e.add(&apply_element(part, &w)?);
                }
            }
            m.entries[a - 1][b - 1] = e;
        }
    }
    Ok(m)
}

/// `Id + Σ_{k ≤ order} L^k / k!` with entry products computed by the
/// quasi-shuffle, truncated at weight `order`. `L` must have no unit-word
/// term.
pub fn matrix_exp(l: &MatrixExpansion, order: usize) -> Result<MatrixExpansion> {
    check_grade(order)?;
    l.validate()?;
    let unit = BracketWord::empty();
    if l.entries.iter().flatten().any(|e| !e.coeff(&unit).is_zero()) {
        return Err(Error::ConstantTerm);
    }
    let l = l.truncate(order);
    let mut out = MatrixExpansion::identity(l.dim);
    let mut power = MatrixExpansion::identity(l.dim);
    let mut fact = Coeff::one();
    for k in 1..=order {
        power = power.mul_truncated(&l, order)?;
        if power.is_zero() {
            break;
        }
        fact *= int(k as i64);
        out = out.add(&power.scale(&fact.recip()));
    }
    Ok(out)
}
