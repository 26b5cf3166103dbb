//! Finite formal sums of bracket words with exact rational coefficients.

use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff::{format_coeff, is_negative, parse_coeff, Coeff, CoeffJson};
use crate::error::{Error, Result};
use crate::word::BracketWord;

/// A linear combination of bracket words. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expansion {
    terms: BTreeMap<BracketWord, Coeff>,
}

impl Expansion {
    pub fn zero() -> Self {
        Expansion::default()
    }

    /// The unit word with coefficient one.
    pub fn one() -> Self {
        Expansion::from_word(BracketWord::empty())
    }

    pub fn from_word(word: BracketWord) -> Self {
        Expansion::monomial(word, Coeff::one())
    }

    pub fn monomial(word: BracketWord, coeff: Coeff) -> Self {
        let mut e = Expansion::zero();
        e.add_term(word, coeff);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BracketWord, Coeff)>) -> Self {
        let mut e = Expansion::zero();
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
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

    pub fn coeff(&self, word: &BracketWord) -> Coeff {
        self.terms.get(word).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, BracketWord, Coeff> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &BracketWord> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, word: BracketWord, coeff: Coeff) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Expansion, scale: &Coeff) {
        if scale.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * scale);
        }
    }

    pub fn add(&self, other: &Expansion) -> Expansion {
        let mut e = self.clone();
        e.add_assign_scaled(other, &Coeff::one());
        e
    }

    pub fn sub(&self, other: &Expansion) -> Expansion {
        let mut e = self.clone();
        e.add_assign_scaled(other, &-Coeff::one());
        e
    }

    pub fn scale(&self, s: &Coeff) -> Expansion {
        let mut e = Expansion::zero();
        e.add_assign_scaled(self, s);
        e
    }

    /// Keeps the terms for which `keep` holds.
    pub fn filter(&self, mut keep: impl FnMut(&BracketWord) -> bool) -> Expansion {
        Expansion {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Rewrites each word; coefficients of words mapped to `None` are dropped.
    pub fn map_words(&self, mut f: impl FnMut(&BracketWord) -> Option<BracketWord>) -> Expansion {
        let mut e = Expansion::zero();
        for (w, c) in &self.terms {
            if let Some(w2) = f(w) {
                e.add_term(w2, c.clone());
            }
        }
        e
    }

    /// Terms of weight exactly `weight`.
    pub fn homogeneous(&self, weight: usize) -> Expansion {
        self.filter(|w| w.weight() == weight)
    }

    /// Terms of weight at most `weight`.
    pub fn truncate(&self, weight: usize) -> Expansion {
        self.filter(|w| w.weight() <= weight)
    }

    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(BracketWord::weight).max().unwrap_or(0)
    }

    /// The canonical text form, e.g. `1/2 I_{12} - 1/2 I_{[1,2]}`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = is_negative(c);
            let abs = c.abs();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if w.is_empty() {
                // the unit word is written as its bare coefficient
                out.push_str(&format_coeff(&abs));
                continue;
            }
            if !abs.is_one() {
                out.push_str(&format_coeff(&abs));
                out.push(' ');
            }
            out.push_str(&integral_symbol(w));
        }
        out
    }

    /// Parses the output of [`Expansion::to_text`].
    pub fn parse_text(s: &str) -> Result<Expansion> {
        TextParser { src: s, pos: 0 }.expansion()
    }

    pub fn to_json(&self) -> ExpansionJson {
        ExpansionJson {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermJson { word: w.clone(), coeff: CoeffJson::from(c) })
                .collect(),
        }
    }

    pub fn from_json(j: &ExpansionJson) -> Result<Expansion> {
        let mut e = Expansion::zero();
        for t in &j.terms {
            if e.terms.contains_key(&t.word) {
                return Err(Error::Format(format!("duplicate word {}", t.word)));
            }
            e.add_term(t.word.clone(), Coeff::try_from(&t.coeff)?);
        }
        Ok(e)
    }
}

/// `I_1` for a single small letter, `I_{...}` otherwise.
pub fn integral_symbol(w: &BracketWord) -> String {
    let body = w.to_compact();
    if body.len() == 1 {
        format!("I_{body}")
    } else {
        format!("I_{{{body}}}")
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> IntoIterator for &'a Expansion {
    type Item = (&'a BracketWord, &'a Coeff);
    type IntoIter = btree_map::Iter<'a, BracketWord, Coeff>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: BracketWord,
    pub coeff: CoeffJson,
}

/// `{ "terms": [ { "word": [[1],[2,3]], "coeff": { "num": "-1", "den": "6" } } ] }`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionJson {
    pub terms: Vec<TermJson>,
}

impl Serialize for Expansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Expansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ExpansionJson::deserialize(d)?;
        Expansion::from_json(&j).map_err(serde::de::Error::custom)
    }
}

struct TextParser<'a> {
    src: &'a str,
    pos: usize,
}

impl TextParser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn expansion(mut self) -> Result<Expansion> {
        self.skip_ws();
        if self.rest().trim() == "0" {
            return Ok(Expansion::zero());
        }
        let mut e = Expansion::zero();
        let mut first = true;
        loop {
            self.skip_ws();
            if self.rest().is_empty() {
                if first {
                    return self.err("empty expansion");
                }
                break;
            }
            let mut negative = false;
            if self.rest().starts_with('-') {
                negative = true;
                self.pos += 1;
            } else if self.rest().starts_with('+') {
                if first {
                    return self.err("leading '+'");
                }
                self.pos += 1;
            } else if !first {
                return self.err("expected '+' or '-'");
            }
            self.skip_ws();
            let coeff = self.coefficient()?;
            self.skip_ws();
            let bare = coeff.is_some() && (self.rest().is_empty() || self.rest().starts_with(['+', '-']));
            let word = if bare { BracketWord::empty() } else { self.integral()? };
            let coeff = coeff.unwrap_or_else(Coeff::one);
            let coeff = if negative { -coeff } else { coeff };
            if e.terms.contains_key(&word) {
                return self.err(format!("duplicate word {word}"));
            }
            e.add_term(word, coeff);
            first = false;
        }
        Ok(e)
    }

    fn coefficient(&mut self) -> Result<Option<Coeff>> {
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_digit() || c == '/'))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Ok(None);
        }
        let text = &self.rest()[..len];
        match parse_coeff(text) {
            Some(c) if !c.is_zero() => {
                self.pos += len;
                Ok(Some(c))
            }
            _ => self.err(format!("bad coefficient {text:?}")),
        }
    }

    fn integral(&mut self) -> Result<BracketWord> {
        if !self.rest().starts_with("I_") {
            return self.err("expected 'I_'");
        }
        self.pos += 2;
        if self.rest().starts_with('{') {
            let close = match self.rest().find('}') {
                Some(i) => i,
                None => return self.err("unterminated '{'"),
            };
            let body = &self.rest()[1..close];
            let w = BracketWord::parse_compact_at(body, self.pos + 1)?;
            self.pos += close + 1;
            Ok(w)
        } else {
            let c = self.rest().chars().next();
            match c {
                Some(c @ '1'..='9') => {
                    self.pos += 1;
                    BracketWord::from_letters(&[c as u32 - '0' as u32])
                }
                _ => self.err("expected a letter or '{'"),
            }
        }
    }
}
