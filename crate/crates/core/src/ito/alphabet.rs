use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::word::{Block, BracketWord, Letter};

/// Drivers `X^1, ..., X^N`, optionally followed by their quadratic variations
/// `X^{N+i} = [X^i, X^i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DriverAlphabet {
    pub n_primary: usize,
    /// Continuous drivers: every bracket of three or more drivers vanishes.
    pub continuous: bool,
    /// `[X^i, X^j] = 0` for distinct primary drivers.
    pub cross_brackets_vanish: bool,
    /// Letters `N+1..2N` stand for the quadratic variations.
    pub paired_qv: bool,
}

impl DriverAlphabet {
    /// Continuous drivers with vanishing cross brackets and quadratic
    /// variation letters.
    pub fn standard(n_primary: usize) -> Result<Self> {
        DriverAlphabet::new(n_primary, true, true, true)
    }

    /// Arbitrary semimartingales: no bracket is assumed to vanish.
    pub fn general(n_primary: usize) -> Result<Self> {
        DriverAlphabet::new(n_primary, false, false, false)
    }

    pub fn new(n_primary: usize, continuous: bool, cross_brackets_vanish: bool, paired_qv: bool) -> Result<Self> {
        if n_primary == 0 {
            return Err(Error::InvalidParameter("at least one driver is required".into()));
        }
        Ok(DriverAlphabet { n_primary, continuous, cross_brackets_vanish, paired_qv })
    }

    /// Every letter the flow expansion sums over.
    pub fn letters(&self) -> Vec<u32> {
        let top = if self.paired_qv { 2 * self.n_primary } else { self.n_primary };
        (1..=top as u32).collect()
    }

    fn is_qv(&self, l: Letter) -> bool {
        self.paired_qv && l.id() as usize > self.n_primary
    }

    /// Number of primary drivers hidden in a block once quadratic-variation
    /// letters are expanded (`[X^{N+i}, Y] = [[X^i, X^i], Y]`).
    fn expanded_size(&self, b: &Block) -> usize {
        b.letters().iter().map(|&l| if self.is_qv(l) { 2 } else { 1 }).sum()
    }

    /// `None` when the block vanishes, otherwise its rewritten form.
    fn reduce_block(&self, b: &Block) -> Option<Block> {
        if self.continuous && self.expanded_size(b) >= 3 {
            return None;
        }
        if let [x, y] = b.letters() {
            if self.cross_brackets_vanish
                && x != y
                && x.id() as usize <= self.n_primary
                && y.id() as usize <= self.n_primary
            {
                return None;
            }
            if self.paired_qv && x == y && x.id() as usize <= self.n_primary {
                let qv = Letter::new(x.id() + self.n_primary as u32).expect("positive");
                return Some(Block::singleton(qv));
            }
        }
        Some(b.clone())
    }

    fn reduce_word(&self, w: &BracketWord) -> Option<BracketWord> {
        w.blocks()
            .iter()
            .map(|b| self.reduce_block(b))
            .collect::<Option<Vec<_>>>()
            .map(BracketWord::new)
    }
}

/// Deletes the terms that vanish under the alphabet's standing assumptions
/// and rewrites `[X^i, X^i]` to the quadratic-variation letter `N+i`.
pub fn apply_vanishing_rules(e: &Expansion, alphabet: &DriverAlphabet) -> Expansion {
    e.map_words(|w| alphabet.reduce_word(w))
}
