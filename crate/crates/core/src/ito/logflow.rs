//! Templates of the logarithm of the Itô flow map.
//!
//! For a surjection `f ∈ Sj_{n,k}` the logarithm contains
//!
//! ```text
//! (-1)^{d(f)} / (n C(n-1, d(f))) Σ_{i_1..i_n} V_{i_1} ... V_{i_n} I^{i_1..i_n}_{A(f)}
//! ```
//!
//! with `A(f) = f^{-1}(1) ⨿ ... ⨿ f^{-1}(k)`. A [`LogTerm`] keeps the driver
//! word symbolic; [`instantiate_all`] expands it over a concrete alphabet.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::alphabet::{apply_vanishing_rules, DriverAlphabet};
use crate::coeff::{descent_coefficient, format_coeff, Coeff, CoeffJson};
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::limits::check_grade;
use crate::surjection::{
    descent_count, enumerate_surjections_bounded, OrderedSetPartition, Surjection,
};
use crate::word::{Block, BracketWord, Letter};

/// One template `coeff · Σ V_{i_1} ... V_{i_n} I_{partition}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogTerm {
    pub partition: OrderedSetPartition,
    pub coeff: Coeff,
}

impl LogTerm {
    pub fn n(&self) -> usize {
        self.partition.size()
    }

    /// The surjection sending each position to the index of its block.
    pub fn surjection(&self) -> Surjection {
        self.partition.to_surjection()
    }

    /// The bracket word obtained by substituting `drivers[p-1]` for position
    /// `p` of the template.
    pub fn instantiate(&self, drivers: &[Letter]) -> Result<BracketWord> {
        if drivers.len() != self.n() {
            return Err(Error::ArityMismatch { expected: self.n(), found: drivers.len() });
        }
        let blocks = self
            .partition
            .blocks()
            .iter()
            .map(|b| Block::new(b.iter().map(|&p| drivers[p - 1]).collect()))
            .collect::<Result<Vec<_>>>()?;
        Ok(BracketWord::new(blocks))
    }

    pub fn to_json(&self) -> LogTermJson {
        LogTermJson {
            n: self.n(),
            partition: self.partition.blocks().to_vec(),
            coeff: CoeffJson::from(&self.coeff),
        }
    }

    pub fn from_json(j: &LogTermJson) -> Result<LogTerm> {
        let partition = OrderedSetPartition::new(j.partition.clone())?;
        if partition.size() != j.n {
            return Err(Error::ArityMismatch { expected: j.n, found: partition.size() });
        }
        Ok(LogTerm { partition, coeff: Coeff::try_from(&j.coeff)? })
    }
}

/// `{ "n": 3, "partition": [[2],[1,3]], "coeff": {"num":"-1","den":"6"} }`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogTermJson {
    pub n: usize,
    pub partition: Vec<Vec<usize>>,
    pub coeff: CoeffJson,
}

const NAMES: [&str; 8] = ["i", "j", "k", "l", "m", "p", "q", "r"];

fn index_name(pos: usize) -> String {
    match NAMES.get(pos - 1) {
        Some(n) => n.to_string(),
        None => format!("(i{pos})"),
    }
}

/// `I_{j[i,k]}` for the partition `{2} ⨿ {1,3}`.
pub fn template_symbol(p: &OrderedSetPartition) -> String {
    let mut body = String::new();
    for b in p.blocks() {
        if b.len() == 1 {
            body.push_str(&index_name(b[0]));
        } else {
            let names: Vec<String> = b.iter().map(|&q| index_name(q)).collect();
            body.push('[');
            body.push_str(&names.join(","));
            body.push(']');
        }
    }
    if body.chars().count() == 1 {
        format!("I_{body}")
    } else {
        format!("I_{{{body}}}")
    }
}

fn operator_word(n: usize) -> String {
    (1..=n).map(|p| format!("V_{}", index_name(p))).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for LogTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_negative() {
            f.write_str("-")?;
        }
        let abs = self.coeff.abs();
        if !abs.is_one() {
            write!(f, "{} ", format_coeff(&abs))?;
        }
        write!(f, "{} {}", operator_word(self.n()), template_symbol(&self.partition))
    }
}

/// All templates through `order`. With `alphabet.continuous`, only
/// surjections whose fibres have at most two elements are kept.
///
/// Within each `n` the templates are ordered by descent count, then by
/// decreasing number of blocks, then lexicographically.
pub fn log_flow_terms(alphabet: &DriverAlphabet, order: usize) -> Result<Vec<LogTerm>> {
    check_grade(order)?;
    let mut out = Vec::new();
    for n in 1..=order {
        let max_fiber = if alphabet.continuous { 2 } else { n };
        let mut fs: Vec<Surjection> = Vec::new();
        for k in 1..=n {
            fs.extend(enumerate_surjections_bounded(n, k, max_fiber)?);
        }
        fs.sort_by(|a, b| {
            descent_count(a)
                .cmp(&descent_count(b))
                .then(b.rank().cmp(&a.rank()))
                .then(a.values().cmp(b.values()))
        });
        for f in fs {
            let coeff = descent_coefficient(n, descent_count(&f));
            out.push(LogTerm { partition: OrderedSetPartition::from_surjection(&f), coeff });
        }
    }
    Ok(out)
}

/// Groups templates by `n`: `V_i V_j (1/2 I_{ij} - 1/2 I_{ji} - 1/2 I_{[i,j]})`,
/// one line per `n`. A lone unit-coefficient template is printed bare.
pub fn format_log_flow(terms: &[LogTerm]) -> String {
    let mut by_n: BTreeMap<usize, Vec<&LogTerm>> = BTreeMap::new();
    for t in terms {
        by_n.entry(t.n()).or_default().push(t);
    }
    let mut lines = Vec::new();
    for (n, ts) in by_n {
        if let [t] = ts.as_slice() {
            if t.coeff.is_one() {
                lines.push(format!("{} {}", operator_word(n), template_symbol(&t.partition)));
                continue;
            }
        }
        let mut body = String::new();
        for (i, t) in ts.iter().enumerate() {
            let neg = t.coeff.is_negative();
            match (i, neg) {
                (0, true) => body.push('-'),
                (0, false) => {}
                (_, true) => body.push_str(" - "),
                (_, false) => body.push_str(" + "),
            }
            let abs = t.coeff.abs();
            if !abs.is_one() {
                body.push_str(&format_coeff(&abs));
                body.push(' ');
            }
            body.push_str(&template_symbol(&t.partition));
        }
        lines.push(format!("{} ({})", operator_word(n), body));
    }
    lines.join("\n")
}

/// Expands the templates over every driver word of the alphabet, applies the
/// vanishing rules, and collects the result by operator word `(i_1..i_n)`.
/// Operator words whose expansion vanishes are omitted.
pub fn instantiate_all(terms: &[LogTerm], alphabet: &DriverAlphabet) -> Result<BTreeMap<Vec<u32>, Expansion>> {
    let letters = alphabet.letters();
    let mut out: BTreeMap<Vec<u32>, Expansion> = BTreeMap::new();
    let max_n = terms.iter().map(LogTerm::n).max().unwrap_or(0);
    for n in 1..=max_n {
        let templates: Vec<&LogTerm> = terms.iter().filter(|t| t.n() == n).collect();
        for word in driver_words(&letters, n) {
            let drivers: Vec<Letter> = word.iter().map(|&i| Letter::new(i)).collect::<Result<_>>()?;
            let mut e = Expansion::zero();
            for t in &templates {
                e.add_term(t.instantiate(&drivers)?, t.coeff.clone());
            }
            let e = apply_vanishing_rules(&e, alphabet);
            if !e.is_zero() {
                out.insert(word, e);
            }
        }
    }
    Ok(out)
}

fn driver_words(letters: &[u32], n: usize) -> Vec<Vec<u32>> {
    let mut words = vec![Vec::new()];
    for _ in 0..n {
        words = words
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |&l| {
                    let mut w2 = w.clone();
                    w2.push(l);
                    w2
                })
            })
            .collect();
    }
    words
}
