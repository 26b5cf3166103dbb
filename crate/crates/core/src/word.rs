//! Letters, bracket blocks and bracket words.
//!
//! A [`BracketWord`] `(b_1)(b_2)...(b_n)` stands for the iterated integral
//! `∫(...(∫ dX^{b_1})_- ...)_- dX^{b_n}` where each block `b_i` is an iterated
//! square bracket of drivers. Brackets are commutative and associative, so a
//! block is a multiset of letters, stored sorted.
//!
//! Two text grammars are supported:
//!
//! * the *literal* grammar used on command lines: blocks separated by `.`,
//!   bracket blocks written `[a,b,...]`, letters as positive integers, e.g.
//!   `[1,3].2`. The empty string is the unit word.
//! * the *compact* grammar used inside `I_{...}`: every digit is a letter,
//!   multi-digit letters are parenthesized, e.g. `[1,3]2` or `1(12)`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Letter(u32);

impl Letter {
    pub fn new(id: u32) -> Result<Self> {
        if id == 0 {
            return Err(Error::InvalidLetter(id));
        }
        Ok(Letter(id))
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for Letter {
    type Error = Error;
    fn try_from(id: u32) -> Result<Self> {
        Letter::new(id)
    }
}

impl From<Letter> for u32 {
    fn from(l: Letter) -> u32 {
        l.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A nonempty multiset of letters, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block(Vec<Letter>);

impl Block {
    pub fn new(mut letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyBlock);
        }
        letters.sort_unstable();
        Ok(Block(letters))
    }

    pub fn from_ids(ids: &[u32]) -> Result<Self> {
        Block::new(ids.iter().map(|&i| Letter::new(i)).collect::<Result<_>>()?)
    }

    pub fn singleton(letter: Letter) -> Self {
        Block(vec![letter])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn is_singleton(&self) -> bool {
        self.0.len() == 1
    }

    pub fn ids(&self) -> Vec<u32> {
        self.0.iter().map(|l| l.0).collect()
    }

    /// The bracket `a ⋆ b`: multiset union.
    pub fn product(&self, other: &Block) -> Block {
        let mut letters = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                letters.push(self.0[i]);
                i += 1;
            } else {
                letters.push(other.0[j]);
                j += 1;
            }
        }
        letters.extend_from_slice(&self.0[i..]);
        letters.extend_from_slice(&other.0[j..]);
        Block(letters)
    }

    fn write_compact(&self, out: &mut String) {
        if self.is_singleton() {
            write_compact_letter(self.0[0], out);
        } else {
            out.push('[');
            for (i, l) in self.0.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_compact_letter(*l, out);
            }
            out.push(']');
        }
    }

    fn write_literal(&self, out: &mut String) {
        if self.is_singleton() {
            out.push_str(&self.0[0].to_string());
        } else {
            let ids: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
            out.push('[');
            out.push_str(&ids.join(","));
            out.push(']');
        }
    }
}

/// `a ⋆ b` on blocks.
pub fn block_product(a: &Block, b: &Block) -> Block {
    a.product(b)
}

fn write_compact_letter(l: Letter, out: &mut String) {
    if l.0 <= 9 {
        out.push(char::from(b'0' + l.0 as u8));
    } else {
        out.push('(');
        out.push_str(&l.0.to_string());
        out.push(')');
    }
}

/// A finite sequence of blocks; the empty sequence is the unit word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BracketWord(Vec<Block>);

impl BracketWord {
    pub fn empty() -> Self {
        BracketWord(Vec::new())
    }

    pub fn new(blocks: Vec<Block>) -> Self {
        BracketWord(blocks)
    }

    /// Word of singleton blocks, one per letter id.
    pub fn from_letters(ids: &[u32]) -> Result<Self> {
        Ok(BracketWord(
            ids.iter()
                .map(|&i| Letter::new(i).map(Block::singleton))
                .collect::<Result<_>>()?,
        ))
    }

    /// Word from nested id lists, e.g. `[[1], [2, 3]]`.
    pub fn from_blocks(blocks: &[&[u32]]) -> Result<Self> {
        Ok(BracketWord(
            blocks.iter().map(|b| Block::from_ids(b)).collect::<Result<_>>()?,
        ))
    }

    pub fn blocks(&self) -> &[Block] {
        &self.0
    }

    pub fn into_blocks(self) -> Vec<Block> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of letters, counted with multiplicity.
    pub fn weight(&self) -> usize {
        self.0.iter().map(Block::size).sum()
    }

    pub fn has_singleton_blocks(&self) -> bool {
        self.0.iter().all(Block::is_singleton)
    }

    pub fn last(&self) -> Option<&Block> {
        self.0.last()
    }

    /// The word without its last block.
    pub fn init(&self) -> BracketWord {
        let n = self.0.len().saturating_sub(1);
        BracketWord(self.0[..n].to_vec())
    }

    pub fn push(&mut self, block: Block) {
        self.0.push(block);
    }

    pub fn with_last(&self, block: Block) -> BracketWord {
        let mut w = self.clone();
        w.0.push(block);
        w
    }

    pub fn concat(&self, other: &BracketWord) -> BracketWord {
        let mut blocks = self.0.clone();
        blocks.extend_from_slice(&other.0);
        BracketWord(blocks)
    }

    /// Renders with the command-line grammar (`[1,3].2`).
    pub fn to_literal(&self) -> String {
        let mut out = String::new();
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                out.push('.');
            }
            b.write_literal(&mut out);
        }
        out
    }

    /// Renders with the compact grammar (`[1,3]2`).
    pub fn to_compact(&self) -> String {
        let mut out = String::new();
        for b in &self.0 {
            b.write_compact(&mut out);
        }
        out
    }

    /// Parses the command-line grammar.
    pub fn parse_literal(s: &str) -> Result<Self> {
        LiteralParser { src: s.as_bytes(), pos: 0 }.word()
    }

    /// Parses the compact grammar.
    pub fn parse_compact(s: &str) -> Result<Self> {
        CompactParser { src: s.as_bytes(), pos: 0, offset: 0 }.word()
    }

    pub(crate) fn parse_compact_at(s: &str, offset: usize) -> Result<Self> {
        CompactParser { src: s.as_bytes(), pos: 0, offset }.word()
    }
}

/// Length first (number of blocks), then blockwise lexicographic.
impl Ord for BracketWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for BracketWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BracketWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact())
    }
}

impl Serialize for BracketWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks: Vec<Vec<u32>> = self.0.iter().map(Block::ids).collect();
        blocks.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BracketWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks: Vec<Vec<u32>> = Vec::deserialize(d)?;
        let blocks = blocks
            .iter()
            .map(|b| Block::from_ids(b))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(BracketWord(blocks))
    }
}

struct LiteralParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl LiteralParser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn word(mut self) -> Result<BracketWord> {
        let mut blocks = Vec::new();
        if self.src.iter().all(u8::is_ascii_whitespace) {
            return Ok(BracketWord::empty());
        }
        loop {
            blocks.push(self.block()?);
            match self.peek() {
                None => break,
                Some(b'.') => self.pos += 1,
                // adjacency across a bracket needs no separator: `[1,3]2`, `1[2,3]`
                Some(b'[') => {}
                Some(c) if c.is_ascii_digit() && self.src[self.pos - 1] == b']' => {}
                Some(c) => return self.err(format!("unexpected character {:?}", c as char)),
            }
        }
        Ok(BracketWord(blocks))
    }

    fn block(&mut self) -> Result<Block> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let mut letters = vec![self.letter()?];
                loop {
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            letters.push(self.letter()?);
                        }
                        Some(b']') => {
                            self.pos += 1;
                            break;
                        }
                        Some(c) => return self.err(format!("expected ',' or ']', found {:?}", c as char)),
                        None => return self.err("unterminated bracket"),
                    }
                }
                Block::new(letters)
            }
            Some(c) if c.is_ascii_digit() => Ok(Block::singleton(self.letter()?)),
            Some(c) => self.err(format!("expected a letter or '[', found {:?}", c as char)),
            None => self.err("expected a block"),
        }
    }

    fn letter(&mut self) -> Result<Letter> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a positive integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let id: u32 = match text.parse() {
            Ok(id) => id,
            Err(_) => {
                self.pos = start;
                return self.err("letter out of range");
            }
        };
        if id == 0 {
            self.pos = start;
            return self.err("letters must be positive");
        }
        Ok(Letter(id))
    }
}

struct CompactParser<'a> {
    src: &'a [u8],
    pos: usize,
    offset: usize,
}

impl CompactParser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset + self.pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn word(mut self) -> Result<BracketWord> {
        let mut blocks = Vec::new();
        while let Some(c) = self.peek() {
            if c == b'[' {
                self.pos += 1;
                let mut letters = Vec::new();
                loop {
                    match self.peek() {
                        Some(b']') => {
                            self.pos += 1;
                            break;
                        }
                        Some(b',') => self.pos += 1,
                        Some(_) => letters.push(self.letter()?),
                        None => return self.err("unterminated bracket"),
                    }
                }
                if letters.is_empty() {
                    return self.err("empty bracket");
                }
                blocks.push(Block::new(letters)?);
            } else {
                blocks.push(Block::singleton(self.letter()?));
            }
        }
        Ok(BracketWord(blocks))
    }

    fn letter(&mut self) -> Result<Letter> {
        match self.peek() {
            Some(c @ b'1'..=b'9') => {
                self.pos += 1;
                Ok(Letter((c - b'0') as u32))
            }
            Some(b'(') => {
                self.pos += 1;
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                let id: u32 = text.parse().or_else(|_| self.err("bad letter"))?;
                if id == 0 {
                    return self.err("letters must be positive");
                }
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(Letter(id))
            }
            Some(c) => self.err(format!("unexpected character {:?}", c as char)),
            None => self.err("expected a letter"),
        }
    }
}

/// Every block of `size` letters drawn from `1..=letters`.
pub fn blocks_of_size(letters: u32, size: usize) -> Vec<Block> {
    fn rec(letters: u32, size: usize, min: u32, cur: &mut Vec<Letter>, out: &mut Vec<Block>) {
        if cur.len() == size {
            out.push(Block(cur.clone()));
            return;
        }
        for id in min..=letters {
            cur.push(Letter(id));
            rec(letters, size, id, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if size > 0 {
        rec(letters, size, 1, &mut Vec::new(), &mut out);
    }
    out
}

/// Every bracket word of the given weight over `1..=letters`, sorted.
pub fn bracket_words(letters: u32, weight: usize) -> Vec<BracketWord> {
    let mut by_weight: Vec<Vec<BracketWord>> = vec![vec![BracketWord::empty()]];
    for w in 1..=weight {
        let mut words = Vec::new();
        for s in 1..=w {
            for prefix in &by_weight[w - s] {
                for b in blocks_of_size(letters, s) {
                    words.push(prefix.with_last(b));
                }
            }
        }
        by_weight.push(words);
    }
    let mut out = by_weight.swap_remove(weight);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(ids: &[u32]) -> Block {
        Block::from_ids(ids).unwrap()
    }

    #[test]
    fn block_product_is_multiset_union() {
        assert_eq!(block_product(&b(&[1]), &b(&[2])), b(&[1, 2]));
        assert_eq!(block_product(&b(&[1, 2]), &b(&[3])), b(&[1, 2, 3]));
        assert_eq!(block_product(&b(&[1]), &b(&[1])), b(&[1, 1]));
        assert_eq!(block_product(&b(&[3, 1]), &b(&[2])), block_product(&b(&[2]), &b(&[1, 3])));
    }

    #[test]
    fn rejects_invalid_letters_and_blocks() {
        assert_eq!(Letter::new(0), Err(Error::InvalidLetter(0)));
        assert_eq!(Block::new(vec![]), Err(Error::EmptyBlock));
    }

    #[test]
    fn literal_grammar() {
        let w = BracketWord::parse_literal("[1,3].2").unwrap();
        assert_eq!(w, BracketWord::from_blocks(&[&[1, 3], &[2]]).unwrap());
        assert_eq!(BracketWord::parse_literal("[3,1]2").unwrap(), w);
        assert_eq!(BracketWord::parse_literal("").unwrap(), BracketWord::empty());
        assert_eq!(
            BracketWord::parse_literal("1[2,3]").unwrap(),
            BracketWord::from_blocks(&[&[1], &[2, 3]]).unwrap()
        );
        assert_eq!(
            BracketWord::parse_literal("12.3").unwrap(),
            BracketWord::from_letters(&[12, 3]).unwrap()
        );
        assert_eq!(w.to_literal(), "[1,3].2");
    }

    #[test]
    fn literal_errors_carry_positions() {
        match BracketWord::parse_literal("1.[2,x]") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(BracketWord::parse_literal("1..2"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(BracketWord::parse_literal("0"), Err(Error::Parse { pos: 0, .. })));
        assert!(BracketWord::parse_literal("[1,2").is_err());
    }

    #[test]
    fn compact_grammar() {
        let w = BracketWord::from_blocks(&[&[2], &[1, 3]]).unwrap();
        assert_eq!(w.to_compact(), "2[1,3]");
        assert_eq!(BracketWord::parse_compact("2[13]").unwrap(), w);
        assert_eq!(BracketWord::parse_compact("2[1,3]").unwrap(), w);
        let big = BracketWord::from_blocks(&[&[12], &[1, 10]]).unwrap();
        assert_eq!(big.to_compact(), "(12)[1,(10)]");
        assert_eq!(BracketWord::parse_compact(&big.to_compact()).unwrap(), big);
    }

    #[test]
    fn ordering_is_length_then_lexicographic() {
        let short = BracketWord::from_letters(&[5]).unwrap();
        let long = BracketWord::from_letters(&[1, 1]).unwrap();
        assert!(short < long);
        let a = BracketWord::from_blocks(&[&[1], &[2]]).unwrap();
        let c = BracketWord::from_blocks(&[&[1, 1], &[2]]).unwrap();
        let d = BracketWord::from_blocks(&[&[2], &[1]]).unwrap();
        assert!(a < c && c < d);
    }

    #[test]
    fn weight_counts_multiplicity() {
        let w = BracketWord::from_blocks(&[&[1, 1], &[2], &[3, 4, 4]]).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.weight(), 6);
    }

    #[test]
    fn word_enumeration_counts() {
        let counts: Vec<usize> = (0..=4).map(|w| bracket_words(3, w).len()).collect();
        assert_eq!(counts, vec![1, 3, 15, 73, 354]);
        assert_eq!(blocks_of_size(3, 2).len(), 6);
        assert!(bracket_words(2, 3).iter().all(|w| w.weight() == 3));
    }
}
